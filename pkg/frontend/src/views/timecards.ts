import { ApiError, GatewayApi } from "../api";
import { clear, el, errorPanel, textInput } from "../dom";

// Hours are typed as text ("45.00") and converted to the wire's integer
// quarter-hour count. This is hours encoding, not money: money never gets
// computed on the client.
export function hoursToQuarterHours(text: string): number {
  const match = /^(\d+)(?:\.(\d{1,2}))?$/.exec(text.trim());
  if (!match) {
    throw new Error(`hours must look like 45.00, got ${text.trim() || "(empty)"}`);
  }
  const whole = Number(match[1]);
  const fraction = Number((match[2] ?? "0").padEnd(2, "0"));
  if (fraction % 25 !== 0) {
    throw new Error("hours must be in quarter-hour steps (.00, .25, .50, .75)");
  }
  return whole * 4 + fraction / 25;
}

export function mountTimecardsView(container: HTMLElement, api: GatewayApi): void {
  clear(container);

  const employee = textInput("tc-employee", "employee id");
  const period = textInput("tc-period", "period YYYY-MM");
  const hours = textInput("tc-hours", "hours, e.g. 45.00");
  const approved = el("input", { id: "tc-approved", type: "checkbox" });
  approved.checked = true;
  const submit = el("button", { id: "tc-submit" }, ["Submit time card"]);
  const out = el("div", { class: "result", id: "tc-result" });

  submit.addEventListener("click", () => {
    void (async () => {
      clear(out);
      let quarterHours: number;
      try {
        quarterHours = hoursToQuarterHours(hours.value);
      } catch (err) {
        out.append(errorPanel("BadRequest", err instanceof Error ? err.message : String(err)));
        return;
      }
      try {
        const card = await api.submitTimecard({
          employee_id: employee.value.trim(),
          period: period.value.trim(),
          quarter_hours: quarterHours,
          approved: approved.checked,
        });
        out.append(
          el("div", { class: "panel ok" }, [
            `stored: ${card.employee_id} ${card.period} · ${card.quarter_hours} quarter-hours · ` +
              `approved=${card.approved} verified=${card.verified}`,
          ]),
        );
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        out.append(errorPanel(apiErr.code, apiErr.message));
      }
    })();
  });

  container.append(
    el("section", { class: "card" }, [
      el("h2", {}, ["Submit time card"]),
      employee,
      period,
      hours,
      el("label", { class: "checkbox" }, [approved, " approved"]),
      submit,
      out,
    ]),
  );
}
