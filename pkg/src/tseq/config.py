"""Run configuration: a flat JSON file named by $TSEQ_CONFIG, overridden by flags."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction

from .errors import InvalidSpec
from .windows import DEFAULT_BUDGET, DEFAULT_CAP

ENV_VAR = "TSEQ_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    budget: int = DEFAULT_BUDGET
    cap: int = DEFAULT_CAP
    horizon: int = 12
    tolerance: tuple[str, ...] = ()  # empty: p^-j schedule
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.budget < 1 or self.cap < 1 or self.horizon < 1:
            raise InvalidSpec("budget, cap and horizon must be positive")
        if self.format not in ("json", "table"):
            raise InvalidSpec(f"unknown output format {self.format!r}")
        for t in self.tolerance:
            if Fraction(t) <= 0:
                raise InvalidSpec("tolerances must be positive")

    def tol(self, j: int) -> Fraction | None:
        """The j-th configured tolerance (1-based), or None for the default."""
        if not self.tolerance:
            return None
        return Fraction(self.tolerance[min(j, len(self.tolerance)) - 1])

    def to_json(self) -> dict:
        return asdict(self)


def load_config(path: str | None = None, **overrides) -> RunConfig:
    """Read the config file (explicit path, else $TSEQ_CONFIG) and apply overrides.

    Overrides whose value is None are ignored, so argparse namespaces can be
    passed through unchanged.
    """
    data: dict = {}
    path = path or os.environ.get(ENV_VAR)
    if path:
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise InvalidSpec("config file must hold a single JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise InvalidSpec(f"unknown config keys: {sorted(unknown)}")
    if "tolerance" in data:
        data["tolerance"] = tuple(str(t) for t in data["tolerance"])
    cfg = RunConfig(**data)
    return replace(cfg, **{k: v for k, v in overrides.items() if k in known and v is not None})
