from pathlib import Path

import pytest

from paycloud.config import ConfigError, load_config
from paycloud.core.model import FlatAmount, Payer, PercentOfGross


def write(tmp_path, text) -> Path:
    path = tmp_path / "paycloud.conf"
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults_without_file():
    cfg = load_config(None, env={})
    assert cfg.listen_addr == "127.0.0.1:8088"
    assert cfg.cache_capacity == 1024
    assert cfg.cache_ttl == 300.0
    assert cfg.weights == {"v1": 100, "v2": 0}
    assert "FIG2-NG" in cfg.rulesets
    assert cfg.port == 8088


def test_file_values(tmp_path):
    path = write(
        tmp_path,
        """
        # demo config
        store_dir = /tmp/payroll-data
        listen_addr = 0.0.0.0:9000
        cache_capacity = 64
        cache_ttl = 10.5
        scale_min = 2
        scale_max = 8
        weights = v1=70,v2=30
        token.admintok = admin
        token.worker1 = employee:e1
        """,
    )
    cfg = load_config(path, env={})
    assert cfg.store_dir == Path("/tmp/payroll-data")
    assert cfg.host == "0.0.0.0"
    assert cfg.port == 9000
    assert cfg.cache_capacity == 64
    assert cfg.cache_ttl == 10.5
    assert cfg.scale_min == 2 and cfg.scale_max == 8
    assert cfg.weights == {"v1": 70, "v2": 30}
    assert cfg.tokens == {"admintok": "admin", "worker1": "employee:e1"}


def test_env_overrides_file(tmp_path):
    path = write(tmp_path, "cache_capacity = 64\n")
    cfg = load_config(path, env={"PAYCLOUD_CACHE_CAPACITY": "256", "PAYCLOUD_LISTEN_ADDR": "127.0.0.1:7000"})
    assert cfg.cache_capacity == 256
    assert cfg.port == 7000


def test_custom_ruleset(tmp_path):
    path = write(
        tmp_path,
        """
        ruleset.CUSTOM.2 = employer|flat|40000|Medicare
        ruleset.CUSTOM.1 = withheld|percent|1000|Income Tax
        """,
    )
    cfg = load_config(path, env={})
    ruleset = cfg.rulesets["CUSTOM"]
    assert [r.label for r in ruleset.rules] == ["Income Tax", "Medicare"]  # ordered by index
    assert ruleset.rules[0].payer is Payer.EMPLOYEE_WITHHELD
    assert isinstance(ruleset.rules[0].basis, PercentOfGross)
    assert isinstance(ruleset.rules[1].basis, FlatAmount)
    assert "FIG2-NG" in cfg.rulesets  # builtins remain


@pytest.mark.parametrize(
    "text",
    [
        "mystery_key = 1\n",
        "cache_capacity = lots\n",
        "weights = v1\n",
        "ruleset.X.1 = withheld|percent|abc|Tax\n",
        "ruleset.X.1 = withheld|sideways|10|Tax\n",
        "ruleset.X.one = withheld|percent|10|Tax\n",
        "just a line\n",
    ],
)
def test_bad_config_rejected(tmp_path, text):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, text), env={})
