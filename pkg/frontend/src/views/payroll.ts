import { ApiError, GatewayApi, JobRecord } from "../api";
import { clear, el, emptyPanel, errorPanel, textInput } from "../dom";
import { JobPoller } from "../poll";
import { renderHistoryTable, renderStatementView } from "./statement";

export interface PayrollViewHandles {
  activePoller: () => JobPoller | null;
}

export function mountPayrollView(
  container: HTMLElement,
  api: GatewayApi,
  banner: HTMLElement,
): PayrollViewHandles {
  clear(container);
  let poller: JobPoller | null = null;

  // run trigger + job watch
  const period = textInput("run-period", "period YYYY-MM");
  const ruleset = textInput("run-ruleset", "ruleset", "FIG2-NG");
  const supersedes = textInput("run-supersedes", "supersedes run id (optional)");
  const trigger = el("button", { id: "run-trigger" }, ["Run payroll"]);
  const jobBadge = el("div", { class: "badge", id: "run-badge", "data-state": "idle" }, ["idle"]);
  const runOut = el("div", { class: "result", id: "run-result" });

  trigger.addEventListener("click", () => {
    void (async () => {
      clear(runOut);
      clear(banner);
      poller?.stop();
      try {
        const submission = await api.triggerRun(
          period.value.trim(),
          ruleset.value.trim() || "FIG2-NG",
          supersedes.value.trim() || undefined,
        );
        jobBadge.dataset.state = "queued";
        jobBadge.textContent = `job ${submission.job_id}: queued`;
        poller = new JobPoller(api, submission.job_id, {
          onStatus: (job: JobRecord) => {
            jobBadge.dataset.state = job.status;
            jobBadge.textContent = `job ${job.job_id}: ${job.status} (attempt ${job.attempts})`;
          },
          onTerminal: (job: JobRecord) => {
            if (job.status === "done") {
              jobBadge.dataset.state = "done";
              jobBadge.textContent = `job ${job.job_id}: done`;
              runOut.append(
                el("div", { class: "panel ok" }, [`run ${submission.run_id} appended to the ledger`]),
              );
            } else {
              jobBadge.dataset.state = "failed";
              jobBadge.textContent =
                `job ${job.job_id}: failed after ${job.attempts} attempt(s)` +
                (job.error ? ` — ${job.error}` : "");
            }
          },
          onError: (code: string, message: string) => {
            runOut.append(errorPanel(code, message));
          },
          onBanner: (message: string) => {
            clear(banner);
            banner.append(el("div", { class: "banner error" }, [message]));
          },
        });
        poller.start();
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        jobBadge.dataset.state = "idle";
        runOut.append(errorPanel(apiErr.code, apiErr.message));
      }
    })();
  });

  // statement viewer
  const stmtEmployee = textInput("stmt-employee", "employee id");
  const stmtPeriod = textInput("stmt-period", "period YYYY-MM");
  const stmtButton = el("button", { id: "stmt-view" }, ["View statement"]);
  const stmtOut = el("div", { class: "result", id: "stmt-result" });

  stmtButton.addEventListener("click", () => {
    void (async () => {
      clear(stmtOut);
      try {
        const { statement, cache } = await api.getStatement(
          stmtEmployee.value.trim(),
          stmtPeriod.value.trim(),
        );
        stmtOut.append(renderStatementView(statement, cache));
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        if (apiErr.code === "NotFound") {
          stmtOut.append(emptyPanel("no statement for that employee and period"));
        } else {
          stmtOut.append(errorPanel(apiErr.code, apiErr.message));
        }
      }
    })();
  });

  // history
  const histEmployee = textInput("hist-employee", "employee id");
  const histFrom = textInput("hist-from", "from YYYY-MM");
  const histTo = textInput("hist-to", "to YYYY-MM");
  const histButton = el("button", { id: "hist-view" }, ["View history"]);
  const histOut = el("div", { class: "result", id: "hist-result" });

  histButton.addEventListener("click", () => {
    void (async () => {
      clear(histOut);
      try {
        const entries = await api.getHistory(
          histEmployee.value.trim(),
          histFrom.value.trim(),
          histTo.value.trim(),
        );
        histOut.append(renderHistoryTable(entries));
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        histOut.append(errorPanel(apiErr.code, apiErr.message));
      }
    })();
  });

  container.append(
    el("section", { class: "card" }, [
      el("h2", {}, ["Trigger payroll run"]),
      period,
      ruleset,
      supersedes,
      trigger,
      jobBadge,
      runOut,
    ]),
    el("section", { class: "card" }, [el("h2", {}, ["Earning statement"]), stmtEmployee, stmtPeriod, stmtButton, stmtOut]),
    el("section", { class: "card" }, [el("h2", {}, ["History"]), histEmployee, histFrom, histTo, histButton, histOut]),
  );

  return { activePoller: () => poller };
}
