"""Static bearer-token authentication and role checks.

Tokens map to principals at startup; there is no issuance endpoint. An admin
may do anything; an employee principal may only read their own statements
and history.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

ROLE_ADMIN = "admin"
ROLE_EMPLOYEE = "employee"


class AuthError(Exception):
    @property
    def code(self) -> str:
        return type(self).__name__


class Unauthenticated(AuthError):
    pass


class Forbidden(AuthError):
    pass


@dataclass(frozen=True)
class Principal:
    role: str
    employee_id: Optional[str] = None

    def require_admin(self) -> None:
        if self.role != ROLE_ADMIN:
            raise Forbidden("admin role required")

    def require_employee_access(self, employee_id: str) -> None:
        if self.role == ROLE_ADMIN:
            return
        if self.role == ROLE_EMPLOYEE and self.employee_id == employee_id:
            return
        raise Forbidden(f"no access to employee {employee_id}")


def parse_principal_spec(spec: str) -> Principal:
    """Parse a config-side principal: ``admin`` or ``employee:<id>``."""
    if spec == ROLE_ADMIN:
        return Principal(role=ROLE_ADMIN)
    role, sep, employee_id = spec.partition(":")
    if role == ROLE_EMPLOYEE and sep and employee_id:
        return Principal(role=ROLE_EMPLOYEE, employee_id=employee_id)
    raise ValueError(f"bad principal spec: {spec!r}")


class TokenTable:
    def __init__(self, tokens: dict[str, Principal]):
        self._tokens = dict(tokens)

    @classmethod
    def from_specs(cls, specs: dict[str, str]) -> "TokenTable":
        return cls({token: parse_principal_spec(spec) for token, spec in specs.items()})

    def authenticate(self, token: Optional[str]) -> Principal:
        if token is None:
            raise Unauthenticated("missing bearer token")
        principal = self._tokens.get(token)
        if principal is None:
            raise Unauthenticated("unknown token")
        return principal
