import { HistoryEntry, StatementPayload } from "../api";
import { el } from "../dom";

// Renders the earning-statement table. Every money and hours string comes
// verbatim from the server payload; nothing is recomputed here.

function sectionTable(headers: string[], rows: string[][], cssClass: string): HTMLElement {
  const table = el("table", { class: cssClass });
  table.append(el("thead", {}, [el("tr", {}, headers.map((h) => el("th", {}, [h])))]));
  table.append(
    el(
      "tbody",
      {},
      rows.map((cells) => el("tr", {}, cells.map((cell) => el("td", {}, [cell])))),
    ),
  );
  return table;
}

export function renderStatementView(payload: StatementPayload, cacheMarker: string): HTMLElement {
  const root = el("div", { class: "statement" });
  root.append(
    el("div", { class: "statement-head" }, [
      el("h3", {}, ["Employee Earning"]),
      el("span", { class: "meta" }, [`${payload.employee_id} · ${payload.period}`]),
      el("span", { class: "freshness", "data-cache": cacheMarker }, [`cache ${cacheMarker}`]),
    ]),
  );

  root.append(
    sectionTable(
      ["Description", "Rate", "Hours", "Current"],
      payload.earnings.map((line) => [line.description, line.rate, line.hours ?? "", line.current]),
      "earnings",
    ),
  );
  root.append(
    el("div", { class: "totals gross" }, [
      el("span", {}, ["Gross Earnings"]),
      el("strong", { "data-field": "gross" }, [payload.gross]),
    ]),
  );

  if (payload.withheld.length > 0) {
    root.append(el("h4", {}, ["Employee Taxes Withheld"]));
    root.append(
      sectionTable(
        ["Employee Taxes", "Current"],
        payload.withheld.map((line) => [line.label, line.current]),
        "withheld",
      ),
    );
  }
  if (payload.employer.length > 0) {
    root.append(el("h4", {}, ["Employer Taxes"]));
    root.append(
      sectionTable(
        ["Company Taxes", "Current"],
        payload.employer.map((line) => [line.label, line.current]),
        "employer",
      ),
    );
  }

  root.append(el("h4", { class: "contrib" }, ["Employee Contributions"]));
  root.append(
    el("div", { class: "totals net" }, [
      el("span", {}, ["Net Pay"]),
      el("strong", { "data-field": "net" }, [payload.net]),
    ]),
  );
  return root;
}

export function renderHistoryTable(entries: HistoryEntry[]): HTMLElement {
  if (entries.length === 0) {
    return el("div", { class: "panel empty" }, ["no statements in this range"]);
  }
  return sectionTable(
    ["Period", "Gross", "Net"],
    entries.map((entry) => [entry.period, entry.gross, entry.net]),
    "history",
  );
}
