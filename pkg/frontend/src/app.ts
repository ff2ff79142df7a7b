import { ApiError, GatewayApi, Session } from "./api";
import { clear, el, errorPanel, textInput } from "./dom";
import { mountEmployeesView } from "./views/employees";
import { mountPayrollView } from "./views/payroll";
import { mountTimecardsView } from "./views/timecards";
import { mountTrafficView } from "./views/traffic";

type Role = "admin" | "employee";

interface Connected {
  api: GatewayApi;
  role: Role;
}

// Admin may see everything; an employee token only gets the payroll section
// (own statements and history). The traffic panel is admin-only.
const SECTIONS: { key: string; label: string; adminOnly: boolean }[] = [
  { key: "employees", label: "Employees", adminOnly: true },
  { key: "timecards", label: "Time Cards", adminOnly: true },
  { key: "payroll", label: "Payroll", adminOnly: false },
  { key: "traffic", label: "Traffic", adminOnly: true },
];

async function connect(session: Session, fetchFn?: ConstructorParameters<typeof GatewayApi>[1]): Promise<Connected> {
  const api = fetchFn ? new GatewayApi(session, fetchFn) : new GatewayApi(session);
  await api.health();
  try {
    await api.getMetrics();
    return { api, role: "admin" };
  } catch (err) {
    if (err instanceof ApiError && err.code === "Forbidden") {
      return { api, role: "employee" };
    }
    throw err;
  }
}

export function mountApp(
  root: HTMLElement,
  fetchFn?: ConstructorParameters<typeof GatewayApi>[1],
): void {
  clear(root);

  const banner = el("div", { id: "banner" });
  const main = el("main", { id: "main" });
  const nav = el("nav", { id: "nav" });
  const loginOut = el("div", { class: "result", id: "login-result" });

  const urlInput = textInput("login-url", "gateway URL", "http://127.0.0.1:8088");
  const tokenInput = el("input", { id: "login-token", type: "password", placeholder: "bearer token" });
  const connectButton = el("button", { id: "login-connect" }, ["Connect"]);
  const loginCard = el("section", { class: "card login" }, [
    el("h2", {}, ["Payroll console"]),
    urlInput,
    tokenInput,
    connectButton,
    loginOut,
  ]);

  connectButton.addEventListener("click", () => {
    void (async () => {
      clear(loginOut);
      try {
        const session: Session = { baseUrl: urlInput.value.trim().replace(/\/$/, ""), token: tokenInput.value };
        const { api, role } = await connect(session, fetchFn);
        loginCard.remove();
        showConsole(api, role);
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        loginOut.append(errorPanel(apiErr.code, apiErr.message));
      }
    })();
  });

  function showConsole(api: GatewayApi, role: Role): void {
    clear(nav);
    const visible = SECTIONS.filter((section) => !section.adminOnly || role === "admin");
    for (const section of visible) {
      const button = el("button", { "data-section": section.key }, [section.label]);
      button.addEventListener("click", () => show(section.key));
      nav.append(button);
    }
    nav.append(el("span", { class: "role" }, [`signed in as ${role}`]));

    function show(key: string): void {
      clear(main);
      clear(banner);
      if (key === "employees") mountEmployeesView(main, api);
      else if (key === "timecards") mountTimecardsView(main, api);
      else if (key === "payroll") mountPayrollView(main, api, banner);
      else if (key === "traffic") mountTrafficView(main, api);
    }

    show(visible[0].key);
  }

  root.append(banner, nav, loginCard, main);
}

declare global {
  interface Window {
    paycloudConsoleMounted?: boolean;
  }
}

if (typeof document !== "undefined" && document.getElementById("app") && !window.paycloudConsoleMounted) {
  window.paycloudConsoleMounted = true;
  mountApp(document.getElementById("app")!);
}
