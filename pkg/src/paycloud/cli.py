"""Administrator command line: server launcher, gateway client, benchmark.

Remote subcommands talk JSON over HTTP to a running gateway; ``serve`` starts
the whole stack; ``bench`` runs locally. Every output-producing subcommand
takes ``--json`` for machine-readable output.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import threading
import time
from pathlib import Path
from typing import Optional

from paycloud.bench import run_bench, render_report_figure, write_report_csv
from paycloud.money import parse_money
from paycloud.core.model import parse_quarter_hours

DEFAULT_URL = "http://127.0.0.1:8088"
ENV_URL = "PAYCLOUD_URL"
ENV_TOKEN = "PAYCLOUD_TOKEN"


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class GatewayClient:
    """Minimal JSON client over any requests-compatible session."""

    def __init__(self, session, base_url: str, token: Optional[str]):
        self._session = session
        self._base_url = base_url.rstrip("/")
        self._token = token

    def request(self, method: str, path: str, body: Optional[dict] = None, params: Optional[dict] = None):
        headers = {}
        if self._token:
            headers["Authorization"] = f"Bearer {self._token}"
        try:
            resp = self._session.request(
                method, self._base_url + path, json=body, params=params, headers=headers
            )
        except Exception as exc:
            raise CliError("ConnectionError", f"cannot reach gateway: {exc}") from exc
        if resp.status_code >= 400:
            try:
                payload = resp.json()
                raise CliError(payload["code"], payload.get("message", ""))
            except (ValueError, KeyError):
                raise CliError(f"HTTP{resp.status_code}", resp.text[:200]) from None
        return resp.json() if resp.content else None


def _emit(args, payload, human: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _compensation_from_args(args) -> Optional[dict]:
    chosen = [
        (kind, value)
        for kind, value in (
            ("hourly", args.hourly_rate),
            ("monthly", args.monthly_salary),
            ("annual", args.annual_contract),
        )
        if value is not None
    ]
    if not chosen:
        return None
    if len(chosen) > 1:
        raise CliError("BadRequest", "give exactly one of --hourly-rate/--monthly-salary/--annual-contract")
    kind, value = chosen[0]
    try:
        money = parse_money(value, args.currency)
    except ValueError as exc:
        raise CliError("BadRequest", str(exc)) from exc
    return {"kind": kind, "amount": money.amount, "currency": money.currency}


def cmd_employee_create(args, client: GatewayClient) -> int:
    compensation = _compensation_from_args(args)
    if compensation is None:
        raise CliError("BadRequest", "compensation required (e.g. --hourly-rate 2500.00)")
    body = client.request(
        "POST", "/v1/employees", {"id": args.id, "name": args.name, "compensation": compensation}
    )
    _emit(args, body, f"created employee {body['id']} (version {body['version']})")
    return 0


def cmd_employee_get(args, client: GatewayClient) -> int:
    body = client.request("GET", f"/v1/employees/{args.id}")
    comp = body["compensation"]
    display = comp.get("display", f"{comp['amount']} minor units {comp['currency']}")
    human = (
        f"{body['id']}  {body['name']}  status={body['status']}  version={body['version']}\n"
        f"  compensation: {display}\n"
        f"  changes: {len(body['changes'])}"
    )
    _emit(args, body, human)
    return 0


def cmd_employee_change(args, client: GatewayClient) -> int:
    payload: dict = {
        "base_version": args.base_version,
        "effective_period": args.effective,
        "description": args.description,
    }
    compensation = _compensation_from_args(args)
    if compensation is not None:
        payload["compensation"] = compensation
    if args.status is not None:
        payload["status"] = args.status
    body = client.request("PATCH", f"/v1/employees/{args.id}", payload)
    _emit(args, body, f"employee {body['id']} now version {body['version']}")
    return 0


def cmd_timecard_submit(args, client: GatewayClient) -> int:
    try:
        quarter_hours = parse_quarter_hours(args.hours)
    except ValueError as exc:
        raise CliError("BadRequest", str(exc)) from exc
    body = client.request(
        "POST",
        "/v1/timecards",
        {
            "employee_id": args.employee,
            "period": args.period,
            "quarter_hours": quarter_hours,
            "approved": not args.unapproved,
        },
    )
    _emit(
        args,
        body,
        f"time card stored: {body['employee_id']} {body['period']} "
        f"{body['quarter_hours']} quarter-hours approved={body['approved']}",
    )
    return 0


def _wait_for_job(client: GatewayClient, job_id: str, timeout: float) -> dict:
    deadline = time.monotonic() + timeout
    delay = 0.05
    while True:
        body = client.request("GET", f"/v1/jobs/{job_id}")
        if body["status"] in ("done", "failed"):
            return body
        if time.monotonic() >= deadline:
            raise CliError("Timeout", f"job {job_id} still {body['status']} after {timeout}s")
        time.sleep(delay)
        delay = min(delay * 2, 1.0)


def cmd_payroll_run(args, client: GatewayClient) -> int:
    payload = {"period": args.period, "ruleset_id": args.ruleset}
    if args.supersedes:
        payload["supersedes"] = args.supersedes
    submitted = client.request("POST", "/v1/payroll/runs", payload)
    if args.no_wait:
        _emit(args, submitted, f"queued job {submitted['job_id']} (run {submitted['run_id']})")
        return 0
    job = _wait_for_job(client, submitted["job_id"], args.timeout)
    result = {**submitted, **job}
    if job["status"] == "failed":
        if getattr(args, "json", False):
            print(json.dumps(result, sort_keys=True))
        print(f"error [{job['error']}]: payroll run failed after {job['attempts']} attempt(s)", file=sys.stderr)
        return 1
    _emit(args, result, f"run {submitted['run_id']} done (job {submitted['job_id']}, {job['attempts']} attempt(s))")
    return 0


def cmd_job_status(args, client: GatewayClient) -> int:
    body = client.request("GET", f"/v1/jobs/{args.id}")
    human = f"job {body['job_id']}: {body['status']} (attempts {body['attempts']})"
    if body.get("error"):
        human += f" error={body['error']}"
    _emit(args, body, human)
    return 0


def cmd_statement_get(args, client: GatewayClient) -> int:
    body = client.request("GET", f"/v1/employees/{args.employee}/statements/{args.period}")
    _emit(args, body, body["text"].rstrip("\n"))
    return 0


def cmd_history(args, client: GatewayClient) -> int:
    body = client.request(
        "GET",
        f"/v1/employees/{args.employee}/history",
        params={"from": getattr(args, "from"), "to": args.to},
    )
    lines = [f"{item['period']}  gross {item['gross']}  net {item['net']}" for item in body]
    _emit(args, body, "\n".join(lines) if lines else "(no statements in range)")
    return 0


def cmd_traffic_set(args, client: GatewayClient) -> int:
    weights = {}
    for part in args.weights.split(","):
        label, sep, value = part.strip().partition("=")
        if not sep:
            raise CliError("BadRequest", f"bad weights entry {part!r} (want label=integer)")
        try:
            weights[label] = int(value)
        except ValueError:
            raise CliError("BadRequest", f"bad weight for {label!r}: {value!r}") from None
    body = client.request("PUT", "/v1/admin/traffic", {"weights": weights})
    _emit(args, body, "applied weights: " + ", ".join(f"{k}={v}" for k, v in sorted(body["weights"].items())))
    return 0


def cmd_bench(args, client=None) -> int:
    worker_counts = [int(w) for w in args.workers.split(",")]
    reports = [
        run_bench(
            employees_count=args.employees,
            workers=w,
            seed=args.seed,
            shard_size=args.shard_size,
            use_processes=not args.no_processes,
        )
        for w in worker_counts
    ]
    if args.report_dir is not None:
        report_dir = Path(args.report_dir)
        write_report_csv(reports, report_dir / "bench.csv")
        render_report_figure(reports, report_dir / "bench.png")

    if args.json:
        print(json.dumps([r.as_dict() for r in reports], sort_keys=True))
    else:
        for r in reports:
            print(
                f"employees={r.employees} workers={r.workers} wall_ms={r.wall_ms:.1f} "
                f"throughput={r.throughput:.1f}/s digest={r.ledger_digest[:16]}"
            )
        if len(reports) > 1:
            digests = {r.ledger_digest for r in reports}
            print("content digests identical across worker counts" if len(digests) == 1
                  else "WARNING: digests differ across worker counts")
        if args.report_dir is not None:
            print(f"report written to {args.report_dir}/bench.csv and bench.png")
    return 0


def cmd_serve(args, client=None) -> int:
    import uvicorn

    from paycloud.cache import TTLCache
    from paycloud.config import load_config
    from paycloud.gateway.app import Gateway, create_app
    from paycloud.gateway.auth import TokenTable
    from paycloud.gateway.service import PayrollService
    from paycloud.queue import Autoscaler, JobQueue, ScalingPolicy, WorkerPool
    from paycloud.store import LedgerStore

    cfg = load_config(Path(args.config) if args.config else None)
    store = LedgerStore(cfg.store_dir)
    cache = TTLCache(capacity=cfg.cache_capacity, default_ttl=cfg.cache_ttl)
    queue = JobQueue(capacity=cfg.queue_capacity)
    service = PayrollService(store=store, cache=cache, queue=queue, rulesets=cfg.rulesets)
    pool = WorkerPool(queue, service.handlers(), workers=cfg.scale_min)
    gateway = Gateway(
        service=service,
        tokens=TokenTable.from_specs(cfg.tokens),
        weights=cfg.weights,
        log_path=cfg.resolved_log_file(),
        pool=pool,
    )
    app = create_app(gateway)

    policy = ScalingPolicy(
        min_workers=cfg.scale_min,
        max_workers=cfg.scale_max,
        high_watermark=cfg.scale_high_watermark,
        low_watermark=cfg.scale_low_watermark,
        cooldown_ticks=cfg.scale_cooldown_ticks,
    )
    scaler = Autoscaler(policy)
    stop = threading.Event()

    def autoscale_loop():
        while not stop.wait(cfg.autoscale_interval):
            pool.set_workers(scaler.tick(queue.depth, pool.workers))

    scaler_thread = threading.Thread(target=autoscale_loop, daemon=True)
    scaler_thread.start()
    print(f"serving on http://{cfg.listen_addr} (store: {cfg.store_dir})")
    try:
        uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
    finally:
        stop.set()
        pool.stop()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paycloud", description="Cloud-style payroll platform")
    parser.add_argument("--url", default=None, help=f"gateway base URL (env {ENV_URL})")
    parser.add_argument("--token", default=None, help=f"bearer token (env {ENV_TOKEN})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the gateway, queue, and workers")
    p.add_argument("--config", default=None, help="path to the key = value config file")
    p.set_defaults(func=cmd_serve, needs_client=False)

    employee = sub.add_parser("employee", help="employee setup and changes").add_subparsers(
        dest="subcommand", required=True
    )

    p = employee.add_parser("create")
    p.add_argument("--id", required=True)
    p.add_argument("--name", required=True)
    _add_compensation_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_employee_create, needs_client=True)

    p = employee.add_parser("get")
    p.add_argument("--id", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_employee_get, needs_client=True)

    p = employee.add_parser("change")
    p.add_argument("--id", required=True)
    p.add_argument("--base-version", type=int, required=True)
    p.add_argument("--effective", required=True, help="YYYY-MM the change takes effect")
    p.add_argument("--description", default="")
    _add_compensation_flags(p)
    p.add_argument("--status", choices=["active", "terminated"], default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_employee_change, needs_client=True)

    timecard = sub.add_parser("timecard", help="time card submission").add_subparsers(
        dest="subcommand", required=True
    )
    p = timecard.add_parser("submit")
    p.add_argument("--employee", required=True)
    p.add_argument("--period", required=True)
    p.add_argument("--hours", required=True, help="hours worked, e.g. 45.00 (quarter-hour steps)")
    p.add_argument("--unapproved", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_timecard_submit, needs_client=True)

    payroll = sub.add_parser("payroll", help="payroll runs").add_subparsers(dest="subcommand", required=True)
    p = payroll.add_parser("run")
    p.add_argument("--period", required=True)
    p.add_argument("--ruleset", default="FIG2-NG")
    p.add_argument("--supersedes", default=None, help="run_id being corrected")
    p.add_argument("--no-wait", action="store_true")
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_payroll_run, needs_client=True)

    job = sub.add_parser("job", help="job status").add_subparsers(dest="subcommand", required=True)
    p = job.add_parser("status")
    p.add_argument("--id", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_job_status, needs_client=True)

    statement = sub.add_parser("statement", help="earning statements").add_subparsers(
        dest="subcommand", required=True
    )
    p = statement.add_parser("get")
    p.add_argument("--employee", required=True)
    p.add_argument("--period", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_statement_get, needs_client=True)

    p = sub.add_parser("history", help="statement history for an employee")
    p.add_argument("--employee", required=True)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_history, needs_client=True)

    traffic = sub.add_parser("traffic", help="version traffic weights").add_subparsers(
        dest="subcommand", required=True
    )
    p = traffic.add_parser("set")
    p.add_argument("--weights", required=True, help="e.g. v1=70,v2=30")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_traffic_set, needs_client=True)

    p = sub.add_parser("bench", help="payroll throughput benchmark (local)")
    p.add_argument("--employees", type=int, required=True)
    p.add_argument("--workers", default="1", help="comma-separated worker counts, e.g. 1,4")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--shard-size", type=int, default=500)
    p.add_argument("--no-processes", action="store_true", help="compute in worker threads only")
    p.add_argument("--report-dir", default=None, help="write bench.csv and bench.png here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench, needs_client=False)

    return parser


def _add_compensation_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hourly-rate", default=None, help="rate per hour, e.g. 2500.00")
    p.add_argument("--monthly-salary", default=None, help="amount per month, e.g. 50000.00")
    p.add_argument("--annual-contract", default=None, help="amount per year, e.g. 100000.00")
    p.add_argument("--currency", default="NGN")


def main(argv: Optional[list[str]] = None, session=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.needs_client:
            if session is None:
                import requests

                session = requests.Session()
                base_url = args.url or os.environ.get(ENV_URL, DEFAULT_URL)
            else:
                base_url = args.url or ""
            token = args.token or os.environ.get(ENV_TOKEN)
            client = GatewayClient(session, base_url, token)
            return args.func(args, client)
        return args.func(args)
    except CliError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
