import { ApiError, CompensationWire, GatewayApi } from "../api";
import { clear, el, errorPanel, textInput } from "../dom";

// Employee setup and effective-dated changes. Compensation is sent as the
// typed text plus kind/currency; the server parses and formats money.

function compensationFields(prefix: string): {
  wrapper: HTMLElement;
  read: () => CompensationWire | null;
} {
  const kind = el("select", { id: `${prefix}-kind` });
  for (const option of ["hourly", "monthly", "annual"]) {
    kind.append(el("option", { value: option }, [option]));
  }
  const amount = textInput(`${prefix}-amount`, "amount, e.g. 2500.00");
  const currency = textInput(`${prefix}-currency`, "currency", "NGN");
  const wrapper = el("div", { class: "comp-fields" }, [kind, amount, currency]);
  return {
    wrapper,
    read: () => {
      if (amount.value.trim() === "") return null;
      return {
        kind: kind.value as CompensationWire["kind"],
        text: amount.value.trim(),
        currency: currency.value.trim() || "NGN",
      };
    },
  };
}

export function mountEmployeesView(container: HTMLElement, api: GatewayApi): void {
  clear(container);

  const createId = textInput("emp-create-id", "employee id");
  const createName = textInput("emp-create-name", "full name");
  const createComp = compensationFields("emp-create");
  const createButton = el("button", { id: "emp-create-submit" }, ["Create employee"]);
  const createOut = el("div", { class: "result", id: "emp-create-result" });

  createButton.addEventListener("click", () => {
    void (async () => {
      clear(createOut);
      const compensation = createComp.read();
      if (!compensation) {
        createOut.append(errorPanel("BadRequest", "compensation amount is required"));
        return;
      }
      try {
        const employee = await api.createEmployee({
          id: createId.value.trim(),
          name: createName.value.trim(),
          compensation,
        });
        createOut.append(
          el("div", { class: "panel ok" }, [
            `created ${employee.id} · ${employee.compensation.display ?? ""} · version ${employee.version}`,
          ]),
        );
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        createOut.append(errorPanel(apiErr.code, apiErr.message));
      }
    })();
  });

  const lookupId = textInput("emp-lookup-id", "employee id");
  const lookupButton = el("button", { id: "emp-lookup-submit" }, ["Look up"]);
  const lookupOut = el("div", { class: "result", id: "emp-lookup-result" });

  lookupButton.addEventListener("click", () => {
    void (async () => {
      clear(lookupOut);
      try {
        const employee = await api.getEmployee(lookupId.value.trim());
        lookupOut.append(
          el("div", { class: "panel detail" }, [
            el("div", {}, [`${employee.id} — ${employee.name}`]),
            el("div", { "data-field": "compensation" }, [employee.compensation.display ?? ""]),
            el("div", {}, [`status ${employee.status} · version ${employee.version} · ${employee.changes.length} change(s)`]),
          ]),
        );
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        lookupOut.append(errorPanel(apiErr.code, apiErr.message));
      }
    })();
  });

  const changeId = textInput("emp-change-id", "employee id");
  const changeVersion = el("input", { id: "emp-change-version", type: "number", placeholder: "base version" });
  const changeEffective = textInput("emp-change-effective", "effective period YYYY-MM");
  const changeDescription = textInput("emp-change-description", "description");
  const changeComp = compensationFields("emp-change");
  const changeStatus = el("select", { id: "emp-change-status" });
  for (const option of ["", "active", "terminated"]) {
    changeStatus.append(el("option", { value: option }, [option === "" ? "(keep status)" : option]));
  }
  const changeButton = el("button", { id: "emp-change-submit" }, ["Apply change"]);
  const changeOut = el("div", { class: "result", id: "emp-change-result" });

  changeButton.addEventListener("click", () => {
    void (async () => {
      clear(changeOut);
      try {
        const change = {
          base_version: Number(changeVersion.value),
          effective_period: changeEffective.value.trim(),
          description: changeDescription.value.trim(),
          ...(changeComp.read() ? { compensation: changeComp.read()! } : {}),
          ...(changeStatus.value ? { status: changeStatus.value as "active" | "terminated" } : {}),
        };
        const employee = await api.changeEmployee(changeId.value.trim(), change);
        changeOut.append(
          el("div", { class: "panel ok" }, [
            `${employee.id} now version ${employee.version} · ${employee.compensation.display ?? ""}`,
          ]),
        );
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        changeOut.append(errorPanel(apiErr.code, apiErr.message));
      }
    })();
  });

  container.append(
    el("section", { class: "card" }, [el("h2", {}, ["New employee"]), createId, createName, createComp.wrapper, createButton, createOut]),
    el("section", { class: "card" }, [el("h2", {}, ["Look up"]), lookupId, lookupButton, lookupOut]),
    el("section", { class: "card" }, [
      el("h2", {}, ["Employee change"]),
      changeId,
      changeVersion,
      changeEffective,
      changeDescription,
      changeComp.wrapper,
      changeStatus,
      changeButton,
      changeOut,
    ]),
  );
}
