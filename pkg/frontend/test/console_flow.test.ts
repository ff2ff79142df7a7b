// The whole operating loop against the fixture server: create the employee,
// submit the 45-hour time card, trigger a run, poll it to done, and read the
// statement back with every money value exactly as served.
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { mountApp } from "../src/app";
import { FixtureServer } from "./fixture_server";
import fixtures from "./fixtures/gateway_fixtures.json";

function q<T extends Element>(selector: string): T {
  const node = document.querySelector(selector);
  if (!node) throw new Error(`missing element: ${selector}`);
  return node as T;
}

function setValue(selector: string, value: string): void {
  q<HTMLInputElement>(selector).value = value;
}

function click(selector: string): void {
  q<HTMLButtonElement>(selector).click();
}

async function settle(): Promise<void> {
  await vi.advanceTimersByTimeAsync(0);
}

describe("console flow", () => {
  let server: FixtureServer;

  beforeEach(() => {
    vi.useFakeTimers();
    server = new FixtureServer();
    document.body.innerHTML = '<div id="app"></div>';
    mountApp(q<HTMLElement>("#app"), server.fetch);
  });

  afterEach(() => {
    vi.useRealTimers();
  });

  async function login(token = "admintok"): Promise<void> {
    setValue("#login-url", "");
    setValue("#login-token", token);
    click("#login-connect");
    await settle();
  }

  it("runs the full payroll loop and shows the served statement verbatim", async () => {
    await login();
    expect(document.querySelector("#nav .role")?.textContent).toContain("admin");

    // 1. create the employee
    setValue("#emp-create-id", "e1");
    setValue("#emp-create-name", "Adaeze Obi");
    q<HTMLSelectElement>("#emp-create-kind").value = "hourly";
    setValue("#emp-create-amount", "2500.00");
    click("#emp-create-submit");
    await settle();
    expect(q("#emp-create-result").textContent).toContain("created e1");
    expect(q("#emp-create-result").textContent).toContain("2500.00 NGN per hour");

    // 2. submit the 45-hour time card
    click('[data-section="timecards"]');
    setValue("#tc-employee", "e1");
    setValue("#tc-period", "2021-06");
    setValue("#tc-hours", "45.00");
    click("#tc-submit");
    await settle();
    expect(q("#tc-result").textContent).toContain("180 quarter-hours");
    expect(server.timecards).toEqual([
      { employee_id: "e1", period: "2021-06", quarter_hours: 180, approved: true },
    ]);

    // 3. trigger the run and poll it to done
    click('[data-section="payroll"]');
    setValue("#run-period", "2021-06");
    click("#run-trigger");
    await settle(); // trigger + first poll: queued
    expect(q("#run-badge").getAttribute("data-state")).toBe("queued");
    await vi.advanceTimersByTimeAsync(1000); // running
    expect(q("#run-badge").getAttribute("data-state")).toBe("running");
    await vi.advanceTimersByTimeAsync(2000); // done
    expect(q("#run-badge").getAttribute("data-state")).toBe("done");
    expect(q("#run-result").textContent).toContain(fixtures.run_submission.run_id);

    // 4. the statement view shows exactly the server-provided values
    setValue("#stmt-employee", "e1");
    setValue("#stmt-period", "2021-06");
    click("#stmt-view");
    await settle();
    const earnings = Array.from(document.querySelectorAll("#stmt-result table.earnings tbody td")).map(
      (node) => node.textContent,
    );
    expect(earnings).toEqual(["Regular pay", "2500.00", "45.00", "112500.00"]);
    expect(q('#stmt-result [data-field="gross"]').textContent).toBe("112500.00");
    const withheld = Array.from(document.querySelectorAll("#stmt-result table.withheld tbody td")).map(
      (node) => node.textContent,
    );
    expect(withheld).toEqual([
      "Federal Income Tax",
      "11250.00",
      "Fees & Tolls",
      "250.00",
      "State Income Tax",
      "250.00",
    ]);
    const employer = Array.from(document.querySelectorAll("#stmt-result table.employer tbody td")).map(
      (node) => node.textContent,
    );
    expect(employer).toEqual(["Medicare", "400.00", "Insurance", "300.00"]);
    expect(q('#stmt-result [data-field="net"]').textContent).toBe("100750.00");
    expect(q("#stmt-result .freshness").getAttribute("data-cache")).toBe("MISS");

    // 5. a second view is served from cache and labelled so
    click("#stmt-view");
    await settle();
    expect(q("#stmt-result .freshness").getAttribute("data-cache")).toBe("HIT");

    // 6. history lists the same period with the same strings
    setValue("#hist-employee", "e1");
    setValue("#hist-from", "2021-01");
    setValue("#hist-to", "2021-12");
    click("#hist-view");
    await settle();
    const history = Array.from(document.querySelectorAll("#hist-result tbody td")).map(
      (node) => node.textContent,
    );
    expect(history).toEqual(["2021-06", "112500.00", "100750.00"]);
  });

  it("shows an empty-state panel when no statement exists", async () => {
    await login();
    click('[data-section="payroll"]');
    setValue("#stmt-employee", "e1");
    setValue("#stmt-period", "2021-06"); // no run triggered yet
    click("#stmt-view");
    await settle();
    expect(q("#stmt-result .panel.empty").textContent).toContain("no statement");
  });

  it("shows a forbidden panel when an employee reads another's statement", async () => {
    await login("e1tok");
    expect(document.querySelector("#nav .role")?.textContent).toContain("employee");
    setValue("#stmt-employee", "e2");
    setValue("#stmt-period", "2021-06");
    click("#stmt-view");
    await settle();
    const panel = q("#stmt-result .panel.error");
    expect(panel.getAttribute("data-code")).toBe("Forbidden");
  });

  it("hides admin sections from employee tokens", async () => {
    await login("e1tok");
    const sections = Array.from(document.querySelectorAll("#nav button[data-section]")).map((b) =>
      b.getAttribute("data-section"),
    );
    expect(sections).toEqual(["payroll"]);
  });

  it("rejects a bad token at login", async () => {
    await login("wrong");
    const panel = q("#login-result .panel.error");
    expect(panel.getAttribute("data-code")).toBe("Unauthenticated");
  });

  it("reports a failed run with its error code", async () => {
    server = new FixtureServer({ jobStates: ["queued", "failed"] });
    document.body.innerHTML = '<div id="app"></div>';
    mountApp(q<HTMLElement>("#app"), server.fetch);
    await login();
    server.runTriggered = true;
    click('[data-section="payroll"]');
    setValue("#run-period", "2021-06");
    click("#run-trigger");
    await settle();
    await vi.advanceTimersByTimeAsync(1000);
    expect(q("#run-badge").getAttribute("data-state")).toBe("failed");
  });

  it("banners after five consecutive network failures while polling", async () => {
    await login();
    click('[data-section="payroll"]');
    setValue("#run-period", "2021-06");
    click("#run-trigger");
    await settle();
    server.remainingFailures = 6; // network drops mid-poll
    for (const step of [1000, 2000, 4000, 5000, 5000]) {
      await vi.advanceTimersByTimeAsync(step);
    }
    expect(q("#banner").textContent).toContain("retrying");
    await vi.advanceTimersByTimeAsync(5000); // sixth failure
    await vi.advanceTimersByTimeAsync(5000); // network back: running
    expect(q("#run-badge").getAttribute("data-state")).toBe("running");
    await vi.advanceTimersByTimeAsync(5000); // done
    expect(q("#run-badge").getAttribute("data-state")).toBe("done");
  });
});
