// Typed client for the payroll gateway. Every money value arrives as a
// preformatted string and is passed through untouched; this module never
// computes with money.

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface Session {
  baseUrl: string;
  token: string;
}

export interface CompensationWire {
  kind: "hourly" | "monthly" | "annual";
  amount?: number;
  text?: string;
  currency: string;
  display?: string;
}

export interface EmployeeRecord {
  id: string;
  name: string;
  compensation: CompensationWire;
  status: string;
  version: number;
  changes: unknown[];
}

export interface EmployeeChangeRequest {
  base_version: number;
  effective_period: string;
  description: string;
  compensation?: CompensationWire;
  status?: "active" | "terminated";
}

export interface TimecardRecord {
  employee_id: string;
  period: string;
  quarter_hours: number;
  approved: boolean;
  verified: boolean;
}

export interface RunSubmission {
  job_id: string;
  run_id: string;
}

export type JobState = "queued" | "running" | "done" | "failed";

export interface JobRecord {
  job_id: string;
  status: JobState;
  attempts: number;
  error: string | null;
}

export interface EarningLineView {
  description: string;
  rate: string;
  hours: string | null;
  current: string;
}

export interface MoneyLineView {
  label: string;
  current: string;
}

export interface StatementPayload {
  employee_id: string;
  period: string;
  run_id: string;
  earnings: EarningLineView[];
  gross: string;
  withheld: MoneyLineView[];
  employer: MoneyLineView[];
  net: string;
  currency: string;
  text: string;
}

export interface HistoryEntry {
  period: string;
  gross: string;
  net: string;
  withheld: MoneyLineView[];
  currency: string;
}

export interface Metrics {
  queue: { depth: number; workers: number; jobs_done: number; jobs_failed: number };
  cache: { hits: number; misses: number; entries: number };
  requests: { total: number; by_version: Record<string, number> };
}

export class GatewayApi {
  constructor(
    private session: Session,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<{ data: T; headers: Headers }> {
    let resp: Response;
    try {
      resp = await this.fetchFn(this.session.baseUrl + path, {
        method,
        headers: {
          Authorization: `Bearer ${this.session.token}`,
          ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
        },
        body: body !== undefined ? JSON.stringify(body) : undefined,
      });
    } catch (err) {
      throw new ApiError("NetworkError", `cannot reach gateway: ${String(err)}`, 0);
    }
    if (!resp.ok) {
      let code = `HTTP${resp.status}`;
      let message = resp.statusText;
      try {
        const payload = (await resp.json()) as { code?: string; message?: string };
        code = payload.code ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body; keep the HTTP status
      }
      throw new ApiError(code, message, resp.status);
    }
    return { data: (await resp.json()) as T, headers: resp.headers };
  }

  async health(): Promise<{ status: string }> {
    return (await this.request<{ status: string }>("GET", "/healthz")).data;
  }

  async createEmployee(record: {
    id: string;
    name: string;
    compensation: CompensationWire;
  }): Promise<EmployeeRecord> {
    return (await this.request<EmployeeRecord>("POST", "/v1/employees", record)).data;
  }

  async getEmployee(id: string): Promise<EmployeeRecord> {
    return (await this.request<EmployeeRecord>("GET", `/v1/employees/${encodeURIComponent(id)}`)).data;
  }

  async changeEmployee(id: string, change: EmployeeChangeRequest): Promise<EmployeeRecord> {
    return (
      await this.request<EmployeeRecord>("PATCH", `/v1/employees/${encodeURIComponent(id)}`, change)
    ).data;
  }

  async submitTimecard(record: {
    employee_id: string;
    period: string;
    quarter_hours: number;
    approved: boolean;
  }): Promise<TimecardRecord> {
    return (await this.request<TimecardRecord>("POST", "/v1/timecards", record)).data;
  }

  async triggerRun(period: string, rulesetId: string, supersedes?: string): Promise<RunSubmission> {
    const body: Record<string, string> = { period, ruleset_id: rulesetId };
    if (supersedes) body.supersedes = supersedes;
    return (await this.request<RunSubmission>("POST", "/v1/payroll/runs", body)).data;
  }

  async jobStatus(jobId: string): Promise<JobRecord> {
    return (await this.request<JobRecord>("GET", `/v1/jobs/${encodeURIComponent(jobId)}`)).data;
  }

  async getStatement(
    employeeId: string,
    period: string,
  ): Promise<{ statement: StatementPayload; cache: string }> {
    const { data, headers } = await this.request<StatementPayload>(
      "GET",
      `/v1/employees/${encodeURIComponent(employeeId)}/statements/${encodeURIComponent(period)}`,
    );
    return { statement: data, cache: headers.get("X-Cache") ?? "-" };
  }

  async getHistory(employeeId: string, from: string, to: string): Promise<HistoryEntry[]> {
    const query = `from=${encodeURIComponent(from)}&to=${encodeURIComponent(to)}`;
    return (
      await this.request<HistoryEntry[]>(
        "GET",
        `/v1/employees/${encodeURIComponent(employeeId)}/history?${query}`,
      )
    ).data;
  }

  async setTraffic(weights: Record<string, number>): Promise<{ weights: Record<string, number> }> {
    return (
      await this.request<{ weights: Record<string, number> }>("PUT", "/v1/admin/traffic", { weights })
    ).data;
  }

  async getMetrics(): Promise<Metrics> {
    return (await this.request<Metrics>("GET", "/v1/metrics")).data;
  }
}
