import { ApiError, GatewayApi } from "../api";
import { clear, el, errorPanel } from "../dom";

export const TRAFFIC_VERSIONS = ["v1", "v2"] as const;

export function validateWeights(values: Record<string, string>): {
  weights?: Record<string, number>;
  problem?: string;
} {
  const weights: Record<string, number> = {};
  for (const [label, raw] of Object.entries(values)) {
    const value = Number(raw);
    if (!Number.isInteger(value) || value < 0) {
      return { problem: `weight for ${label} must be a non-negative integer` };
    }
    weights[label] = value;
  }
  if (Object.values(weights).every((w) => w === 0)) {
    return { problem: "at least one version needs a positive weight" };
  }
  return { weights };
}

export function mountTrafficView(container: HTMLElement, api: GatewayApi): void {
  clear(container);

  const inputs: Record<string, HTMLInputElement> = {};
  const sliderRow = el("div", { class: "weights" });
  for (const version of TRAFFIC_VERSIONS) {
    const input = el("input", {
      id: `traffic-${version}`,
      type: "number",
      min: "0",
      step: "1",
    });
    input.value = version === "v1" ? "100" : "0";
    inputs[version] = input;
    sliderRow.append(el("label", { class: "weight" }, [`${version} `, input]));
  }

  const inlineError = el("div", { class: "inline-error", id: "traffic-error" });
  const apply = el("button", { id: "traffic-apply" }, ["Apply weights"]);
  const applied = el("div", { class: "result", id: "traffic-result" });

  apply.addEventListener("click", () => {
    void (async () => {
      clear(inlineError);
      clear(applied);
      const values = Object.fromEntries(
        Object.entries(inputs).map(([label, input]) => [label, input.value]),
      );
      const { weights, problem } = validateWeights(values);
      if (problem) {
        inlineError.textContent = problem;
        return;
      }
      try {
        const result = await api.setTraffic(weights!);
        applied.append(
          el("div", { class: "panel ok" }, [
            "applied: " +
              Object.entries(result.weights)
                .sort()
                .map(([label, weight]) => `${label}=${weight}`)
                .join(", "),
          ]),
        );
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        inlineError.textContent = `${apiErr.code}: ${apiErr.message}`;
      }
    })();
  });

  const metricsOut = el("div", { class: "result", id: "traffic-metrics" });
  const refresh = el("button", { id: "traffic-refresh" }, ["Refresh metrics"]);
  refresh.addEventListener("click", () => {
    void (async () => {
      clear(metricsOut);
      try {
        const metrics = await api.getMetrics();
        const byVersion = Object.entries(metrics.requests.by_version)
          .sort()
          .map(([version, count]) => `${version}: ${count}`)
          .join(" · ");
        metricsOut.append(
          el("div", { class: "panel detail" }, [
            el("div", { "data-field": "by-version" }, [byVersion || "(no requests yet)"]),
            el("div", {}, [
              `queue depth ${metrics.queue.depth} · workers ${metrics.queue.workers} · ` +
                `done ${metrics.queue.jobs_done} · failed ${metrics.queue.jobs_failed}`,
            ]),
            el("div", {}, [`cache hits ${metrics.cache.hits} · misses ${metrics.cache.misses}`]),
          ]),
        );
      } catch (err) {
        const apiErr = err instanceof ApiError ? err : new ApiError("Error", String(err), 0);
        metricsOut.append(errorPanel(apiErr.code, apiErr.message));
      }
    })();
  });

  container.append(
    el("section", { class: "card" }, [
      el("h2", {}, ["Version traffic"]),
      sliderRow,
      inlineError,
      apply,
      applied,
      refresh,
      metricsOut,
    ]),
  );
}
