"""Windowed enumeration of A(l, m) and the sufficient-condition checkers.

A(l, m) is the set of signed combinations m_1 a_{k_1} + ... + m_h a_{k_h}
with m <= k_1 < ... < k_h, every m_i nonzero and sum |m_i| <= l. It is
infinite, so every routine here works on an explicit index window [m, K]
and says so in its result. Limit statements are only semidecidable from
finite data; results are reported as Verdicts:

* Proven(certificate): a finite fact that settles the claim.
* EvidenceUpToHorizon(horizon, envelope): consistent with the claim as
  far as the data goes; never a proof of the limit statement.
* Refuted(witness): a certificate that the claim (or the hypothesis of
  the checked sufficient condition) fails.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Sequence

from .errors import BudgetExceeded, NotIncreasing
from .group_core import Factored, generated_subgroup, lcm_all, order_mod_subgroup

DEFAULT_BUDGET = 10**7
DEFAULT_CAP = 10**6

__all__ = [
    "DEFAULT_BUDGET",
    "DEFAULT_CAP",
    "SequenceHandle",
    "Window",
    "CombWitness",
    "Verdict",
    "Proven",
    "EvidenceUpToHorizon",
    "Refuted",
    "Member",
    "NotInWindow",
    "Holds",
    "Violation",
    "count_combinations",
    "iter_Alm",
    "enum_Alm",
    "member_Alm",
    "zp_scan",
    "cond_i_values",
    "cond_ii_tuples",
    "cond_ii_inf",
    "cond_iii_tuples",
    "cond_iii_inf",
    "cond_iv_check",
    "cor24_check",
    "gap_verdict",
    "growth_flag",
]


class SequenceHandle:
    """A deterministic rule k -> a_k (k >= 1) in a fixed ambient group.

    `period` is the number of terms per round of the construction (2 for
    an interleaving of two sequences). Horizons given in rounds are
    converted with `terms_in`.
    """

    def __init__(
        self,
        ctx,
        rule: Callable[[int], Any],
        name: str = "",
        params: dict | None = None,
        period: int = 1,
        contains_e_tail: bool = False,
        length: int | None = None,
    ):
        self.ctx = ctx
        self._rule = rule
        self.name = name
        self.params = dict(params or {})
        self.period = period
        self.contains_e_tail = contains_e_tail
        self.length = length
        self._cache: dict[int, Any] = {}

    @classmethod
    def from_list(cls, ctx, elements: Sequence, name: str = "explicit") -> "SequenceHandle":
        elements = tuple(elements)
        return cls(ctx, lambda k: elements[k - 1], name=name, length=len(elements))

    def __call__(self, k: int):
        if k < 1 or (self.length is not None and k > self.length):
            raise IndexError(f"term {k} outside {self.name or 'sequence'}")
        try:
            return self._cache[k]
        except KeyError:
            val = self._cache[k] = self._rule(k)
            return val

    def terms(self, start: int, stop: int) -> list:
        """a_start, ..., a_stop inclusive."""
        return [self(k) for k in range(start, stop + 1)]

    def terms_in(self, rounds: int) -> int:
        return rounds * self.period

    def __repr__(self) -> str:
        return f"SequenceHandle({self.name!r}, {self.params!r})"


@dataclass(frozen=True)
class Window:
    m: int
    K: int

    def __post_init__(self):
        if self.m < 1 or self.K < self.m:
            raise ValueError(f"bad window [{self.m}, {self.K}]")

    @property
    def width(self) -> int:
        return self.K - self.m + 1

    def indices(self) -> range:
        return range(self.m, self.K + 1)

    def __str__(self) -> str:
        return f"[{self.m},{self.K}]"


@dataclass(frozen=True)
class CombWitness:
    indices: tuple[int, ...]
    coeffs: tuple[int, ...]
    element: Any

    def weight(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def evaluate(self, seq: SequenceHandle):
        total = seq.ctx.zero()
        for k, c in zip(self.indices, self.coeffs):
            total = total + seq(k) * c
        return total

    def is_sound(self, seq: SequenceHandle, l: int, window: Window | None = None) -> bool:
        """Re-check every defining constraint and the stored element."""
        if not self.indices or len(self.indices) != len(self.coeffs):
            return False
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            return False
        if any(c == 0 for c in self.coeffs) or self.weight() > l:
            return False
        if window is not None and not (window.m <= self.indices[0] and self.indices[-1] <= window.K):
            return False
        return self.evaluate(seq) == self.element

    def __str__(self) -> str:
        return " + ".join(f"{c}*a_{k}" for k, c in zip(self.indices, self.coeffs))

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "coeffs": list(self.coeffs),
            "element": _element_json(self.element),
        }


def _element_json(x):
    return x.to_json() if hasattr(x, "to_json") else x


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


class Verdict:
    kind: str = ""
    condition: str = ""

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Proven(Verdict):
    certificate: Any
    condition: str = ""
    kind = "Proven"

    def to_json(self) -> dict:
        return {"verdict": self.kind, "condition": self.condition, "certificate": _jsonish(self.certificate)}


@dataclass(frozen=True)
class EvidenceUpToHorizon(Verdict):
    horizon: Any
    envelope: tuple = ()
    condition: str = ""
    flag: str | None = None
    kind = "EvidenceUpToHorizon"

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "condition": self.condition,
            "horizon": _jsonish(self.horizon),
            "envelope": _jsonish(self.envelope),
            "flag": self.flag,
        }


@dataclass(frozen=True)
class Refuted(Verdict):
    witness: Any
    condition: str = ""
    kind = "Refuted"

    def to_json(self) -> dict:
        return {"verdict": self.kind, "condition": self.condition, "witness": _jsonish(self.witness)}


def _jsonish(x):
    from fractions import Fraction

    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, Factored):
        return x.value
    if isinstance(x, dict):
        return {str(k): _jsonish(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonish(v) for v in x]
    if isinstance(x, Window):
        return [x.m, x.K]
    if isinstance(x, (int, str, float, bool)) or x is None:
        return x
    return str(x)


@dataclass(frozen=True)
class Member:
    witness: CombWitness
    found = True


@dataclass(frozen=True)
class NotInWindow:
    window: Window
    found = False


@dataclass(frozen=True)
class Holds:
    window: Window
    l: int
    n: int
    holds = True


@dataclass(frozen=True)
class Violation:
    element: Any
    witness: CombWitness
    holds = False


# ---------------------------------------------------------------------------
# enumeration of A(l, m)
# ---------------------------------------------------------------------------


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Compositions of `total` into `parts` positive parts, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _coefficient_vectors(l: int, h: int) -> list[tuple[int, ...]]:
    out = []
    for weight in range(h, l + 1):
        for mags in _compositions(weight, h):
            for signs in itertools.product((-1, 1), repeat=h):
                out.append(tuple(s * m for s, m in zip(signs, mags)))
    return out


def count_combinations(width: int, l: int) -> int:
    """Number of (index set, coefficient vector) pairs in a window of `width`."""
    return sum(math.comb(width, h) * math.comb(l, h) * 2**h for h in range(1, min(l, width) + 1))


def _check_budget(w: Window, l: int, budget: int) -> None:
    n = count_combinations(w.width, l)
    if n > budget:
        raise BudgetExceeded(f"{n} combinations in window {w} at l={l} exceed budget {budget}")


def iter_Alm(seq: SequenceHandle, l: int, w: Window, budget: int = DEFAULT_BUDGET):
    """Yield (element, CombWitness) for every combination in the window.

    Order: number of terms h ascending, then index sets lexicographically,
    then coefficient weight, magnitudes and signs. Elements may repeat.
    """
    if l < 1:
        raise ValueError("l must be positive")
    _check_budget(w, l, budget)
    for h in range(1, min(l, w.width) + 1):
        vectors = _coefficient_vectors(l, h)
        for idx in itertools.combinations(w.indices(), h):
            terms = [seq(k) for k in idx]
            for coeffs in vectors:
                total = terms[0] * coeffs[0]
                for t, c in zip(terms[1:], coeffs[1:]):
                    total = total + t * c
                yield total, CombWitness(idx, coeffs, total)


def enum_Alm(seq: SequenceHandle, l: int, w: Window, budget: int = DEFAULT_BUDGET) -> dict:
    """The elements of A(l, w.m) reachable with indices <= w.K.

    Returns a dict element -> first witness found.
    """
    out: dict = {}
    for elem, wit in iter_Alm(seq, l, w, budget):
        out.setdefault(elem, wit)
    return out


def member_Alm(g, seq: SequenceHandle, l: int, w: Window, budget: int = DEFAULT_BUDGET):
    for elem, wit in iter_Alm(seq, l, w, budget):
        if elem == g:
            return Member(wit)
    return NotInWindow(w)


def zp_scan(g, seq: SequenceHandle, l: int, m_range: Iterable[int], window_width: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Look for an m whose window [m, m + width - 1] avoids g.

    A sequence is a T-sequence iff every nonzero g escapes A(l, m) for
    some m. Escaping a finite window is only evidence; membership at every
    tested m is recorded as a refutation candidate with one witness per m.
    """
    if g.is_zero:
        raise ValueError("g must be nonzero")
    m_values = list(m_range)
    witnesses = []
    escaped = []
    for m in m_values:
        res = member_Alm(g, seq, l, Window(m, m + window_width - 1), budget)
        if res.found:
            witnesses.append((m, res.witness))
        else:
            escaped.append(m)
    cond = "zp_escape"
    if not escaped:
        return Refuted(tuple(witnesses), condition=cond)
    return EvidenceUpToHorizon(
        horizon={"m_max": max(m_values), "window_width": window_width, "l": l},
        envelope=tuple(escaped),
        condition=cond,
        flag="escaped" if len(escaped) == len(m_values) else "escaped_partially",
    )


# ---------------------------------------------------------------------------
# order conditions
# ---------------------------------------------------------------------------


def _as_factored(orders) -> list[Factored]:
    return [Factored.of(t) for t in orders]


def cond_i_values(orders) -> list[int]:
    """t_k / gcd(t_k, lcm(t_1, ..., t_{k-1})) for every k."""
    ts = _as_factored(orders)
    if not ts:
        raise ValueError("orders must be nonempty")
    out = []
    running = Factored()
    for t in ts:
        out.append((t / t.gcd(running)).value)
        running = running.lcm(t)
    return out


def _pair_ratios(ts: Sequence[Factored]) -> list[Factored]:
    out = []
    for i, t in enumerate(ts):
        others = lcm_all(ts[:i] + ts[i + 1 :])
        out.append(t / t.gcd(others))
    return out


def cond_ii_tuples(orders, l: int, w: Window, budget: int = DEFAULT_BUDGET) -> Iterator[tuple[tuple[int, ...], list[int]]]:
    ts = _as_factored(orders)
    if w.K > len(ts):
        raise ValueError(f"window {w} exceeds the {len(ts)} given orders")
    if math.comb(w.width, l) > budget:
        raise BudgetExceeded(f"{math.comb(w.width, l)} tuples exceed budget {budget}")
    for idx in itertools.combinations(w.indices(), l):
        yield idx, [r.value for r in _pair_ratios([ts[k - 1] for k in idx])]


def cond_ii_inf(orders, l: int, w: Window, budget: int = DEFAULT_BUDGET) -> int:
    """min over l-tuples in the window of max_i t_{k_i}/gcd(t_{k_i}, lcm(rest))."""
    vals = [max(r) for _, r in cond_ii_tuples(orders, l, w, budget)]
    if not vals:
        raise ValueError(f"window {w} admits no {l}-tuple")
    return min(vals)


def cond_iii_tuples(seq: SequenceHandle, l: int, w: Window, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET):
    """Yield (tuple, [o(a_{k_i} + <a_{k_j} : j != i>) for each i])."""
    if math.comb(w.width, l) > budget:
        raise BudgetExceeded(f"{math.comb(w.width, l)} tuples exceed budget {budget}")
    zero = seq.ctx.zero()
    for idx in itertools.combinations(w.indices(), l):
        terms = [seq(k) for k in idx]
        quot = []
        for i, a in enumerate(terms):
            H = generated_subgroup(terms[:i] + terms[i + 1 :], cap=cap, zero=zero)
            quot.append(order_mod_subgroup(a, H))
        yield idx, quot


def cond_iii_inf(seq: SequenceHandle, l: int, w: Window, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET) -> int:
    vals = [max(q) for _, q in cond_iii_tuples(seq, l, w, cap, budget)]
    if not vals:
        raise ValueError(f"window {w} admits no {l}-tuple")
    return min(vals)


def cond_iv_check(seq: SequenceHandle, l: int, n: int, w: Window, budget: int = DEFAULT_BUDGET):
    """Holds iff no nonzero element of A[n] occurs in the windowed A(l, w.m).

    The reported violation is the first one met in enumeration order.
    """
    if n == 1:
        return Holds(w, l, n)
    for elem, wit in iter_Alm(seq, l, w, budget):
        if not elem.is_zero and (elem * n).is_zero:
            return Violation(elem, wit)
    return Holds(w, l, n)


# ---------------------------------------------------------------------------
# corollary-style checks on order sequences
# ---------------------------------------------------------------------------


def growth_flag(values: Sequence) -> str:
    """'divergent' if the late tail minimum exceeds the mid tail minimum.

    The tail minimum over the last quarter is compared with the minimum
    over the preceding quarter; a bound that recurs in the last quarter
    means no growth was observed.
    """
    h = len(values)
    if h < 2:
        return "insufficient"
    q = max(1, h // 4)
    late = min(values[h - q :])
    mid_part = values[h // 2 : h - q] or values[: h - q]
    return "divergent" if late > min(mid_part) else "bounded"


def cor24_check(orders) -> dict[str, Verdict]:
    ts = _as_factored(orders)
    report: dict[str, Verdict] = {}

    clash = None
    table = []
    for i, j in itertools.combinations(range(len(ts)), 2):
        g = ts[i].gcd(ts[j]).value
        table.append((i + 1, j + 1, g))
        if g != 1 and clash is None:
            clash = (i + 1, j + 1, g)
    if clash is None:
        report["coprime"] = Proven({"prefix": len(ts), "gcd_table": table}, condition="coprime_orders")
    else:
        report["coprime"] = Refuted({"pair": clash[:2], "gcd": clash[2]}, condition="coprime_orders")

    bad = next((k for k in range(len(ts) - 1) if not ts[k].divides(ts[k + 1])), None)
    if bad is not None:
        report["divisibility_ratio"] = Refuted(
            {"k": bad + 1, "t_k": ts[bad].value, "t_k+1": ts[bad + 1].value}, condition="divisible_ratio"
        )
    else:
        ratios = tuple((ts[k + 1] / ts[k]).value for k in range(len(ts) - 1))
        report["divisibility_ratio"] = EvidenceUpToHorizon(
            horizon=len(ts), envelope=ratios, condition="divisible_ratio", flag=growth_flag(ratios)
        )
    return report


def gap_verdict(exponents: Sequence[int], horizon: int | None = None) -> Verdict:
    """Evidence about n_{k+1} - n_k -> oo for orders p^{n_k}.

    Growing gaps make a_k a T-sequence; for shifted sequences -x + e_{n_k}
    bounded gaps rule it out, so a bounded gap that recurs through the
    whole horizon is flagged as BoundedGapPersists(d).
    """
    ns = list(exponents[:horizon] if horizon else exponents)
    if any(a >= b for a, b in zip(ns, ns[1:])):
        raise NotIncreasing("exponents must be strictly increasing")
    gaps = [b - a for a, b in zip(ns, ns[1:])]
    envelope = tuple(min(gaps[j:]) for j in range(len(gaps)))
    flag = growth_flag(gaps)
    if flag == "bounded":
        q = max(1, len(gaps) // 4)
        flag = f"BoundedGapPersists({min(gaps[len(gaps) - q:])})"
    return EvidenceUpToHorizon(horizon=len(ns), envelope=envelope, condition="gap_growth", flag=flag)
