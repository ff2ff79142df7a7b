"""HTTP front end: version traffic splitting, auth, read-through caching, logging."""

from paycloud.gateway.auth import Forbidden, Principal, TokenTable, Unauthenticated
from paycloud.gateway.routing import InvalidWeights, NoVersions, VersionRouter, route
from paycloud.gateway.service import PayrollService, VerificationFailed

__all__ = [
    "Forbidden",
    "InvalidWeights",
    "NoVersions",
    "PayrollService",
    "Principal",
    "TokenTable",
    "Unauthenticated",
    "VerificationFailed",
    "VersionRouter",
    "route",
]
