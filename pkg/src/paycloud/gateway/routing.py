"""Weighted version routing with sticky client assignment.

A client lands on the version under the point a stable hash of its client id
picks in the cumulative weight space: the same client id under the same
weights always routes identically, and across many distinct clients the
shares converge to the weight proportions.
"""
from __future__ import annotations

import hashlib
import threading


class RoutingError(Exception):
    @property
    def code(self) -> str:
        return type(self).__name__


class NoVersions(RoutingError):
    pass


class InvalidWeights(RoutingError):
    pass


def validate_weights(weights: dict) -> dict[str, int]:
    if not isinstance(weights, dict) or not weights:
        raise InvalidWeights("weights must be a non-empty mapping")
    clean: dict[str, int] = {}
    for label, weight in weights.items():
        if not isinstance(label, str) or not label:
            raise InvalidWeights(f"bad version label: {label!r}")
        if isinstance(weight, bool) or not isinstance(weight, int):
            raise InvalidWeights(f"weight for {label!r} must be an integer")
        if weight < 0:
            raise InvalidWeights(f"weight for {label!r} must be >= 0")
        clean[label] = weight
    if sum(clean.values()) == 0:
        raise InvalidWeights("at least one weight must be positive")
    return clean


def _hash_point(client_id: str, total: int) -> int:
    digest = hashlib.sha256(client_id.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % total


def route(client_id: str, weights: dict[str, int]) -> str:
    """Pick a version label for a client; sticky for fixed weights."""
    total = sum(weights.values())
    if total <= 0:
        raise NoVersions("all weights are zero")
    point = _hash_point(client_id, total)
    for label in sorted(weights):
        point -= weights[label]
        if point < 0:
            return label
    raise AssertionError("unreachable: point always falls inside the weight space")


class VersionRouter:
    """Holds the active weights behind an atomically swapped snapshot."""

    def __init__(self, weights: dict[str, int]):
        self._lock = threading.Lock()
        self._weights = validate_weights(weights)

    @property
    def weights(self) -> dict[str, int]:
        with self._lock:
            return dict(self._weights)

    def set_traffic(self, weights: dict) -> dict[str, int]:
        clean = validate_weights(weights)
        with self._lock:
            self._weights = clean
        return dict(clean)

    def route(self, client_id: str) -> str:
        with self._lock:
            snapshot = self._weights
        return route(client_id, snapshot)
