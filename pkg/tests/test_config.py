import json
from fractions import Fraction

import pytest

from tseq.config import RunConfig, load_config
from tseq.errors import InvalidSpec


def test_defaults(monkeypatch):
    monkeypatch.delenv("TSEQ_CONFIG", raising=False)
    cfg = load_config()
    assert cfg == RunConfig()
    assert cfg.tol(3) is None


def test_file_then_overrides(tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"budget": 50, "horizon": 7, "tolerance": ["1/3", "1/9"]}))
    monkeypatch.setenv("TSEQ_CONFIG", str(path))
    cfg = load_config(budget=None, cap=99)
    assert (cfg.budget, cfg.cap, cfg.horizon) == (50, 99, 7)
    assert cfg.tol(1) == Fraction(1, 3)
    assert cfg.tol(5) == Fraction(1, 9)
    assert load_config(str(path), budget=8).budget == 8


def test_validation(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"budgett": 5}))
    with pytest.raises(InvalidSpec):
        load_config(str(bad))
    bad.write_text("[1, 2]")
    with pytest.raises(InvalidSpec):
        load_config(str(bad))
    for kw in ({"budget": 0}, {"cap": -1}, {"format": "xml"}, {"tolerance": ("0",)}):
        with pytest.raises(InvalidSpec):
            RunConfig(**kw)


def test_json_round_trip():
    cfg = RunConfig(budget=10, tolerance=("1/27",))
    data = json.loads(json.dumps(cfg.to_json()))
    data["tolerance"] = tuple(data["tolerance"])
    assert RunConfig(**data) == cfg
