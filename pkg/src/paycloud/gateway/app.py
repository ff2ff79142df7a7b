"""The HTTP gateway: one front door for every platform operation.

Each request is authenticated (bearer token), routed to an app version by
the sticky weighted router, served, and logged as exactly one line-delimited
record. Statement and history reads go through the shared cache; responses
carry ``X-App-Version`` and, where applicable, ``X-Cache``.

The registered app versions differ only in statement render format: v2
appends a trailing checksum line, making traffic splits externally
observable.
"""
from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, Request, Response

from paycloud.core.model import (
    Compensation,
    EmployeeStatus,
    ModelError,
    PayPeriod,
    compensation_from_dict,
    employee_to_dict,
    format_quarter_hours,
)
from paycloud.core.statement import (
    EarningStatement,
    StatementError,
    StatementParseError,
    render_statement,
    render_statement_with_checksum,
    run_to_dict,
)
from paycloud.gateway.auth import Forbidden, TokenTable, Unauthenticated
from paycloud.gateway.routing import InvalidWeights, NoVersions, VersionRouter, validate_weights
from paycloud.gateway.service import PayrollService, VerificationFailed
from paycloud.money import Money, MoneyFormatError, format_money, parse_money
from paycloud.queue import JobNotFound, QueueFull, WorkerPool
from paycloud.store import (
    CorruptStore,
    DuplicateTimeCard,
    NotFound,
    RunExists,
    VersionConflict,
)

VERSION_RENDERERS: dict[str, Callable[[EarningStatement], str]] = {
    "v1": render_statement,
    "v2": render_statement_with_checksum,
}

DEFAULT_WEIGHTS = {"v1": 100, "v2": 0}


class BadRequest(ValueError):
    code = "BadRequest"


_STATUS_BY_CODE = {
    "Unauthenticated": 401,
    "Forbidden": 403,
    "NotFound": 404,
    "VersionConflict": 409,
    "RunExists": 409,
    "DuplicateTimeCard": 409,
    "QueueFull": 429,
}


def _status_for(exc: Exception) -> int:
    code = getattr(exc, "code", None)
    return _STATUS_BY_CODE.get(code, 400)


def canonical_json(payload) -> bytes:
    """Deterministic bytes: cached and uncached responses must be identical."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _json_response(payload, status_code: int = 200, headers: Optional[dict] = None) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
        headers=headers or {},
    )


def error_response(exc: Exception, status_code: Optional[int] = None) -> Response:
    code = getattr(exc, "code", type(exc).__name__)
    return _json_response(
        {"code": code, "message": str(exc)},
        status_code=_status_for(exc) if status_code is None else status_code,
    )


class RequestLog:
    """One line-delimited record per request, plus per-version counters."""

    def __init__(self, path: Optional[Path]):
        self._path = path
        self._lock = threading.Lock()
        self.by_version: dict[str, int] = {}
        self.total = 0
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)

    def record(self, role: str, method: str, path: str, status: int, version: str, cache: str) -> None:
        entry = {
            "ts": datetime.now(timezone.utc).isoformat(),
            "role": role,
            "method": method,
            "path": path,
            "status": status,
            "version": version,
            "cache": cache,
        }
        with self._lock:
            self.total += 1
            self.by_version[version] = self.by_version.get(version, 0) + 1
            if self._path is not None:
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry, sort_keys=True) + "\n")


class Gateway:
    """Bundles the service, router, tokens, log, and optional worker pool."""

    def __init__(
        self,
        service: PayrollService,
        tokens: TokenTable,
        weights: Optional[dict[str, int]] = None,
        log_path: Optional[Path] = None,
        pool: Optional[WorkerPool] = None,
    ):
        self.service = service
        self.tokens = tokens
        self.router = VersionRouter(weights or dict(DEFAULT_WEIGHTS))
        self.log = RequestLog(log_path)
        self.pool = pool

    def set_traffic(self, weights: dict) -> dict[str, int]:
        clean = validate_weights(weights)
        unknown = set(clean) - set(VERSION_RENDERERS)
        if unknown:
            raise InvalidWeights(f"unknown versions: {sorted(unknown)}")
        return self.router.set_traffic(clean)

    def metrics(self) -> dict:
        queue_metrics = self.service.queue.metrics()
        queue_metrics["workers"] = self.pool.workers if self.pool is not None else 0
        return {
            "queue": queue_metrics,
            "cache": self.service.cache.counters(),
            "requests": {"total": self.log.total, "by_version": dict(self.log.by_version)},
        }


def _need(data: dict, key: str):
    if not isinstance(data, dict) or key not in data:
        raise BadRequest(f"missing field: {key}")
    return data[key]


_COMP_UNITS = {"hourly": "hour", "monthly": "month", "annual": "year"}


def employee_payload(emp) -> dict:
    """Employee record plus a server-formatted compensation display string."""
    data = employee_to_dict(emp)
    comp = data["compensation"]
    amount = format_money(Money(comp["amount"], comp["currency"]))
    comp["display"] = f"{amount} {comp['currency']} per {_COMP_UNITS[comp['kind']]}"
    return data


def _parse_period(text) -> PayPeriod:
    if not isinstance(text, str):
        raise BadRequest(f"period must be a YYYY-MM string, got {text!r}")
    return PayPeriod.parse(text)


def statement_payload(stmt: EarningStatement, run_id: str, version: str) -> dict:
    """Display-ready statement: every money string is preformatted server-side."""
    render = VERSION_RENDERERS[version]
    return {
        "employee_id": stmt.employee_id,
        "period": str(stmt.period),
        "run_id": run_id,
        "earnings": [
            {
                "description": e.description,
                "rate": format_money(e.rate),
                "hours": None if e.quarter_hours is None else format_quarter_hours(e.quarter_hours),
                "current": format_money(e.current),
            }
            for e in stmt.earnings
        ],
        "gross": format_money(stmt.gross),
        "withheld": [{"label": w.label, "current": format_money(w.current)} for w in stmt.withheld],
        "employer": [{"label": w.label, "current": format_money(w.current)} for w in stmt.employer],
        "net": format_money(stmt.net),
        "currency": stmt.gross.currency,
        "text": render(stmt),
    }


def history_payload(statements: list[EarningStatement]) -> list[dict]:
    return [
        {
            "period": str(s.period),
            "gross": format_money(s.gross),
            "net": format_money(s.net),
            "withheld": [{"label": w.label, "current": format_money(w.current)} for w in s.withheld],
            "currency": s.gross.currency,
        }
        for s in statements
    ]


HANDLED_ERRORS = (
    Unauthenticated,
    Forbidden,
    NotFound,
    JobNotFound,
    VersionConflict,
    RunExists,
    DuplicateTimeCard,
    QueueFull,
    InvalidWeights,
    NoVersions,
    VerificationFailed,
    ModelError,
    StatementError,
    StatementParseError,
    MoneyFormatError,
    BadRequest,
    CorruptStore,
    ValueError,
)


def create_app(gateway: Gateway) -> FastAPI:
    app = FastAPI(title="paycloud gateway", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.gateway = gateway
    service = gateway.service

    def principal_of(request: Request):
        return request.state.principal

    @app.middleware("http")
    async def front_door(request: Request, call_next):
        token = None
        authorization = request.headers.get("Authorization", "")
        if authorization.startswith("Bearer "):
            token = authorization[len("Bearer "):]
        client_id = request.headers.get("X-Client-Id") or token or "anonymous"
        version = gateway.router.route(client_id)
        request.state.version = version
        request.state.cache_marker = "-"
        request.state.role = "-"
        request.state.principal = None

        response: Optional[Response] = None
        if request.url.path != "/healthz":
            try:
                principal = gateway.tokens.authenticate(token)
                request.state.principal = principal
                request.state.role = principal.role
            except Unauthenticated as exc:
                response = error_response(exc)

        if response is None:
            try:
                response = await call_next(request)
            except HANDLED_ERRORS as exc:  # type: ignore[misc]
                response = error_response(exc)
            except Exception as exc:  # noqa: BLE001 - last-resort 500 with a log record
                response = error_response(exc, status_code=500)

        response.headers["X-App-Version"] = version
        gateway.log.record(
            role=request.state.role,
            method=request.method,
            path=request.url.path,
            status=response.status_code,
            version=version,
            cache=request.state.cache_marker,
        )
        return response

    @app.get("/healthz")
    def healthz():
        return _json_response({"status": "ok"})

    @app.post("/v1/employees")
    async def create_employee(request: Request):
        principal_of(request).require_admin()
        data = await _read_json(request)
        emp = service.create_employee(
            employee_id=_need(data, "id"),
            name=_need(data, "name"),
            compensation=_parse_compensation(_need(data, "compensation")),
        )
        return _json_response(employee_payload(emp), status_code=201)

    @app.get("/v1/employees/{employee_id}")
    def get_employee(employee_id: str, request: Request):
        principal_of(request).require_admin()
        return _json_response(employee_payload(service.store.get_employee(employee_id)))

    @app.patch("/v1/employees/{employee_id}")
    async def change_employee(employee_id: str, request: Request):
        principal_of(request).require_admin()
        data = await _read_json(request)
        new_comp = data.get("compensation")
        new_status = data.get("status")
        emp = service.change_employee(
            employee_id=employee_id,
            base_version=int(_need(data, "base_version")),
            effective_period=_parse_period(_need(data, "effective_period")),
            description=data.get("description", ""),
            new_compensation=None if new_comp is None else _parse_compensation(new_comp),
            new_status=None if new_status is None else EmployeeStatus(new_status),
        )
        return _json_response(employee_payload(emp))

    @app.post("/v1/timecards")
    async def submit_timecard(request: Request):
        principal_of(request).require_admin()
        data = await _read_json(request)
        card = service.submit_timecard(
            employee_id=_need(data, "employee_id"),
            period=_parse_period(_need(data, "period")),
            quarter_hours=int(_need(data, "quarter_hours")),
            approved=bool(data.get("approved", False)),
        )
        return _json_response(
            {
                "employee_id": card.employee_id,
                "period": str(card.period),
                "quarter_hours": card.quarter_hours,
                "approved": card.approved,
                "verified": card.verified,
            },
            status_code=201,
        )

    @app.post("/v1/payroll/runs")
    async def trigger_run(request: Request):
        principal_of(request).require_admin()
        data = await _read_json(request)
        job_id, run_id = service.submit_payroll_run(
            period=_parse_period(_need(data, "period")),
            ruleset_id=data.get("ruleset_id", "FIG2-NG"),
            supersedes=data.get("supersedes"),
        )
        return _json_response({"job_id": job_id, "run_id": run_id}, status_code=202)

    @app.get("/v1/jobs/{job_id}")
    def job_status(job_id: str, request: Request):
        principal_of(request).require_admin()
        job = service.queue.poll_status(job_id)
        return _json_response(
            {"job_id": job.job_id, "status": job.status.value, "attempts": job.attempts, "error": job.error}
        )

    @app.get("/v1/payroll/runs/{run_id}")
    def get_run(run_id: str, request: Request):
        principal_of(request).require_admin()
        return _json_response(run_to_dict(service.store.get_run(run_id)))

    @app.get("/v1/employees/{employee_id}/statements/{period}")
    def get_statement(employee_id: str, period: str, request: Request):
        principal_of(request).require_employee_access(employee_id)
        pay_period = _parse_period(period)
        version = request.state.version
        key = f"stmt/{pay_period}/{employee_id}/{version}"
        body = service.cache.get(key)
        if body is None:
            stmt, run = service.get_statement(employee_id, pay_period)
            body = canonical_json(statement_payload(stmt, run.run_id, version))
            service.cache.put(key, body)
            marker = "MISS"
        else:
            marker = "HIT"
        request.state.cache_marker = marker
        return Response(content=body, media_type="application/json", headers={"X-Cache": marker})

    @app.get("/v1/employees/{employee_id}/history")
    def get_history(employee_id: str, request: Request):
        principal_of(request).require_employee_access(employee_id)
        params = request.query_params
        period_from = _parse_period(params.get("from"))
        period_to = _parse_period(params.get("to"))
        key = f"hist/{employee_id}/{period_from}/{period_to}"
        body = service.cache.get(key)
        if body is None:
            statements = service.get_history(employee_id, period_from, period_to)
            body = canonical_json(history_payload(statements))
            service.cache.put(key, body)
            marker = "MISS"
        else:
            marker = "HIT"
        request.state.cache_marker = marker
        return Response(content=body, media_type="application/json", headers={"X-Cache": marker})

    @app.put("/v1/admin/traffic")
    async def set_traffic(request: Request):
        principal_of(request).require_admin()
        data = await _read_json(request)
        applied = gateway.set_traffic(_need(data, "weights"))
        return _json_response({"weights": applied})

    @app.get("/v1/metrics")
    def metrics(request: Request):
        principal_of(request).require_admin()
        return _json_response(gateway.metrics())

    return app


async def _read_json(request: Request) -> dict:
    try:
        data = await request.json()
    except Exception as exc:
        raise BadRequest(f"body is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise BadRequest("body must be a JSON object")
    return data


def _parse_compensation(data) -> Compensation:
    """Accepts {"kind", "amount": <int minor units>} or {"kind", "text": "2500.00"}.

    The text form lets thin clients pass user input through without doing
    money arithmetic themselves.
    """
    if not isinstance(data, dict):
        raise BadRequest("compensation must be an object")
    if "text" in data and "amount" not in data:
        money = parse_money(str(data["text"]), data.get("currency", "NGN"))
        data = {"kind": data.get("kind"), "amount": money.amount, "currency": money.currency}
    try:
        return compensation_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise BadRequest(f"bad compensation: {exc}") from exc
