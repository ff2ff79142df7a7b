"""Server configuration: a flat key = value file plus environment overrides.

Example::

    store_dir = ./paycloud-data
    listen_addr = 127.0.0.1:8088
    cache_capacity = 1024
    cache_ttl = 300
    queue_capacity = 10000
    scale_min = 1
    scale_max = 4
    scale_high_watermark = 10
    scale_low_watermark = 2
    scale_cooldown_ticks = 5
    autoscale_interval = 1.0
    weights = v1=100,v2=0
    token.admintok = admin
    token.e1tok = employee:e1
    ruleset.CUSTOM.1 = withheld|percent|1000|Income Tax
    ruleset.CUSTOM.2 = employer|flat|40000|Medicare

Scalar keys may be overridden with ``PAYCLOUD_<KEY>`` environment variables
(e.g. ``PAYCLOUD_STORE_DIR``). Token and ruleset entries come only from the
file.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from paycloud.core.model import FlatAmount, PayRule, Payer, PercentOfGross, RuleSet
from paycloud.core.rulesets import builtin_rulesets
from paycloud.money import Money

ENV_PREFIX = "PAYCLOUD_"

_SCALAR_KEYS = (
    "store_dir",
    "listen_addr",
    "log_file",
    "cache_capacity",
    "cache_ttl",
    "queue_capacity",
    "scale_min",
    "scale_max",
    "scale_high_watermark",
    "scale_low_watermark",
    "scale_cooldown_ticks",
    "autoscale_interval",
    "weights",
)


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    store_dir: Path = Path("./paycloud-data")
    listen_addr: str = "127.0.0.1:8088"
    log_file: Optional[Path] = None
    cache_capacity: int = 1024
    cache_ttl: float = 300.0
    queue_capacity: int = 10_000
    scale_min: int = 1
    scale_max: int = field(default_factory=lambda: os.cpu_count() or 1)
    scale_high_watermark: int = 10
    scale_low_watermark: int = 2
    scale_cooldown_ticks: int = 5
    autoscale_interval: float = 1.0
    weights: dict[str, int] = field(default_factory=lambda: {"v1": 100, "v2": 0})
    tokens: dict[str, str] = field(default_factory=dict)
    rulesets: dict[str, RuleSet] = field(default_factory=builtin_rulesets)

    @property
    def host(self) -> str:
        return self.listen_addr.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_addr.rsplit(":", 1)[1])

    def resolved_log_file(self) -> Path:
        return self.log_file if self.log_file is not None else self.store_dir / "requests.log"


def _parse_weights(text: str) -> dict[str, int]:
    weights = {}
    for part in text.split(","):
        label, sep, value = part.strip().partition("=")
        if not sep or not label:
            raise ConfigError(f"bad weights entry: {part!r} (want label=integer)")
        try:
            weights[label] = int(value)
        except ValueError as exc:
            raise ConfigError(f"bad weight for {label!r}: {value!r}") from exc
    return weights


def _parse_rule(ruleset_id: str, index: int, text: str) -> PayRule:
    parts = text.split("|")
    if len(parts) != 4:
        raise ConfigError(f"ruleset {ruleset_id} rule {index}: want payer|basis|value|label, got {text!r}")
    payer_s, basis_s, value_s, label = parts
    payer = {"withheld": Payer.EMPLOYEE_WITHHELD, "employer": Payer.EMPLOYER_TAX}.get(payer_s)
    if payer is None:
        raise ConfigError(f"ruleset {ruleset_id} rule {index}: payer must be withheld|employer")
    try:
        value = int(value_s)
    except ValueError as exc:
        raise ConfigError(f"ruleset {ruleset_id} rule {index}: bad value {value_s!r}") from exc
    if basis_s == "percent":
        basis = PercentOfGross(value)
    elif basis_s == "flat":
        basis = FlatAmount(Money(value))
    else:
        raise ConfigError(f"ruleset {ruleset_id} rule {index}: basis must be percent|flat")
    return PayRule(id=f"rule-{index}", label=label, payer=payer, basis=basis)


def _read_pairs(path: Path) -> list[tuple[str, str]]:
    pairs = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        pairs.append((key.strip(), value.strip()))
    return pairs


def load_config(path: Optional[Path] = None, env: Mapping[str, str] = os.environ) -> Config:
    scalars: dict[str, str] = {}
    tokens: dict[str, str] = {}
    rule_lines: dict[str, list[tuple[int, str]]] = {}

    if path is not None:
        for key, value in _read_pairs(Path(path)):
            if key.startswith("token."):
                tokens[key[len("token."):]] = value
            elif key.startswith("ruleset."):
                _, ruleset_id, index_s = key.split(".", 2)
                try:
                    index = int(index_s)
                except ValueError as exc:
                    raise ConfigError(f"bad ruleset key {key!r}") from exc
                rule_lines.setdefault(ruleset_id, []).append((index, value))
            elif key in _SCALAR_KEYS:
                scalars[key] = value
            else:
                raise ConfigError(f"unknown config key: {key}")

    for key in _SCALAR_KEYS:
        env_value = env.get(ENV_PREFIX + key.upper())
        if env_value is not None:
            scalars[key] = env_value

    cfg = Config(tokens=tokens)
    try:
        if "store_dir" in scalars:
            cfg.store_dir = Path(scalars["store_dir"])
        if "listen_addr" in scalars:
            cfg.listen_addr = scalars["listen_addr"]
        if "log_file" in scalars:
            cfg.log_file = Path(scalars["log_file"])
        for key in ("cache_capacity", "queue_capacity", "scale_min", "scale_max",
                    "scale_high_watermark", "scale_low_watermark", "scale_cooldown_ticks"):
            if key in scalars:
                setattr(cfg, key, int(scalars[key]))
        for key in ("cache_ttl", "autoscale_interval"):
            if key in scalars:
                setattr(cfg, key, float(scalars[key]))
        if "weights" in scalars:
            cfg.weights = _parse_weights(scalars["weights"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    for ruleset_id, lines in rule_lines.items():
        rules = tuple(_parse_rule(ruleset_id, i, text) for i, text in sorted(lines))
        cfg.rulesets[ruleset_id] = RuleSet(id=ruleset_id, rules=rules)

    return cfg
