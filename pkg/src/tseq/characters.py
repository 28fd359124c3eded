"""Characters of Z(p^oo) and of direct sums, continuity reports, and
common kernels.

A character of Z(p^oo) is a p-adic integer sum(alpha_n p^n) acting by
e_n -> (alpha_0 + ... + alpha_{n-1} p^{n-1}) / p^n. Only the first N
digits are stored, which determines the character on the elements of
order at most p^N. All values are exact rationals on the circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from . import _lattice
from .errors import CapExceeded, GapTooSmall, TruncationTooShort
from .group_core import (
    CircleRational,
    DirectSumContext,
    DirectSumElement,
    PruferElement,
    PruferGroup,
    SubgroupTable,
    circle,
    ds_make,
    generated_subgroup,
    is_prime,
    p_valuation,
    torsion_elements,
)
from .windows import DEFAULT_CAP, EvidenceUpToHorizon, Refuted, SequenceHandle, Verdict

__all__ = [
    "TruncatedPAdic",
    "DsCharacter",
    "ConvergenceReport",
    "eval_char",
    "r_block",
    "continuity_report",
    "ds_continuity",
    "default_checkpoints",
    "tolerance_schedule",
    "classify_mchi1",
    "complete_blocks",
    "build_faithful_witness",
    "witness_free_positions",
    "radical_from_kernels",
]


@dataclass(frozen=True)
class TruncatedPAdic:
    """Digits alpha_0 .. alpha_{N-1} of a p-adic integer, base p."""

    p: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if not self.digits:
            raise ValueError("need at least one digit")
        if any(not (0 <= d < self.p) for d in self.digits):
            raise ValueError("digits must lie in [0, p-1]")

    @classmethod
    def from_int(cls, p: int, m: int, N: int) -> "TruncatedPAdic":
        """The truncation of m * chi_1 (m may be negative)."""
        m %= p**N
        digits = []
        for _ in range(N):
            m, d = divmod(m, p)
            digits.append(d)
        return cls(p, tuple(digits))

    @classmethod
    def chi1(cls, p: int, N: int) -> "TruncatedPAdic":
        """The embedding of Z(p^oo) into T."""
        return cls.from_int(p, 1, N)

    @property
    def N(self) -> int:
        return len(self.digits)

    @cached_property
    def int_value(self) -> int:
        out = 0
        for d in reversed(self.digits):
            out = out * self.p + d
        return out

    def value_mod(self, exp: int) -> int:
        """alpha_0 + alpha_1 p + ... + alpha_{exp-1} p^{exp-1}."""
        if exp > self.N:
            raise TruncationTooShort(f"need {exp} digits, have {self.N}")
        return self.int_value % self.p**exp

    def __call__(self, y: PruferElement) -> CircleRational:
        return eval_char(self, y)

    def __mul__(self, m: int) -> "TruncatedPAdic":
        return TruncatedPAdic.from_int(self.p, self.int_value * m, self.N)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"p": self.p, "digits": list(self.digits)}


def eval_char(chi: TruncatedPAdic, y: PruferElement) -> CircleRational:
    if y.p != chi.p:
        raise ValueError("character and element use different primes")
    if y.is_zero:
        return circle(0)
    return circle(Fraction(y.num * chi.value_mod(y.exp), chi.p**y.exp))


def r_block(chi: TruncatedPAdic, n_k: int, n_next: int) -> CircleRational:
    """Block value (sum_{l=n_k}^{n_next-1} alpha_l p^{l-n_k}) / p^{n_next-n_k}."""
    if not (0 <= n_k < n_next):
        raise ValueError("need 0 <= n_k < n_next")
    if n_next > chi.N:
        raise TruncationTooShort(f"block ends at {n_next}, have {chi.N} digits")
    p = chi.p
    num = 0
    for d in reversed(chi.digits[n_k:n_next]):
        num = num * p + d
    return circle(Fraction(num, p ** (n_next - n_k)))


@dataclass(frozen=True)
class DsCharacter:
    """sum(alpha_i g_i) -> sum(c_i alpha_i / n_i) mod 1, finitely supported."""

    ctx: DirectSumContext
    coeffs: tuple[tuple[int, int], ...]

    @classmethod
    def make(cls, ctx: DirectSumContext, coeffs: Mapping[int, int]) -> "DsCharacter":
        out = []
        for i in sorted(coeffs):
            c = coeffs[i] % ctx.order_at(i)
            if c:
                out.append((i, c))
        return cls(ctx, tuple(out))

    @classmethod
    def chi_j(cls, ctx: DirectSumContext, j: int) -> "DsCharacter":
        """The coordinate character alpha_j / n_j."""
        return cls.make(ctx, {j: 1})

    @property
    def support(self) -> frozenset:
        return frozenset(i for i, _ in self.coeffs)

    def __call__(self, y: DirectSumElement) -> CircleRational:
        total = Fraction(0)
        ys = y.as_dict()
        for i, c in self.coeffs:
            a = ys.get(i)
            if a:
                total += Fraction(c * a, self.ctx.order_at(i))
        return circle(total)

    def to_json(self) -> dict:
        return {"orders": self.ctx.rule, "coeffs": {str(i): c for i, c in self.coeffs}}


# ---------------------------------------------------------------------------
# continuity reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    """Exact tail suprema of ||chi(a_k)|| up to a finite horizon."""

    horizon_terms: int
    checkpoints: tuple[tuple[int, Fraction, int], ...]  # (start term, sup, argmax)
    tol: Fraction
    verdict: Verdict

    @property
    def sups(self) -> tuple[Fraction, ...]:
        return tuple(s for _, s, _ in self.checkpoints)

    @property
    def tends_to_zero(self) -> bool:
        return self.verdict.kind == "EvidenceUpToHorizon"

    def to_json(self) -> dict:
        return {
            "horizon_terms": self.horizon_terms,
            "tol": f"{self.tol.numerator}/{self.tol.denominator}",
            "checkpoints": [
                {"from": k, "sup": f"{s.numerator}/{s.denominator}", "argmax": j} for k, s, j in self.checkpoints
            ],
            **self.verdict.to_json(),
        }


def tolerance_schedule(base: int, length: int = 8) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, base**j) for j in range(1, length + 1))


def default_checkpoints(horizon: int) -> tuple[int, ...]:
    return tuple(sorted({max(1, horizon // 4), max(1, horizon // 2), max(1, 3 * horizon // 4)}))


def continuity_report(
    chi: Callable,
    seq: SequenceHandle,
    horizon: int,
    checkpoints: Sequence[int] | None = None,
    tol: Fraction | None = None,
) -> ConvergenceReport:
    """Tail suprema of ||chi(a_k)|| at each checkpoint.

    `horizon` and `checkpoints` count rounds of the sequence (one term per
    round, or one pair per round for interleavings). The verdict says
    "tending to 0" when the last tail supremum is at most `tol`, and
    Refuted with the worst term of that tail otherwise. Without `tol` the
    schedule p^-j (j = number of checkpoints) is used, with base 3 for
    direct sums.
    """
    checkpoints = tuple(checkpoints) if checkpoints else default_checkpoints(horizon)
    if tol is None:
        base = seq.ctx.p if isinstance(seq.ctx, PruferGroup) else 3
        tol = tolerance_schedule(base)[min(len(checkpoints), 8) - 1]
    tol = Fraction(tol)
    T = seq.terms_in(horizon)
    norms = [chi(seq(k)).norm() for k in range(1, T + 1)]
    # suffix maxima with argmax, exact
    best = [(Fraction(-1), 0)] * (T + 2)
    for k in range(T, 0, -1):
        best[k] = max(best[k + 1], (norms[k - 1], k), key=lambda t: t[0])
    rows = []
    for c in checkpoints:
        start = (c - 1) * seq.period + 1
        if start > T:
            raise ValueError(f"checkpoint {c} beyond horizon {horizon}")
        sup, arg = best[start]
        rows.append((start, sup, arg))
    last_start, last_sup, last_arg = rows[-1]
    cond = "character_continuity"
    if last_sup <= tol:
        verdict: Verdict = EvidenceUpToHorizon(
            horizon=T, envelope=tuple(s for _, s, _ in rows), condition=cond, flag="tending_to_0"
        )
    else:
        verdict = Refuted({"k": last_arg, "norm": last_sup, "tail_from": last_start}, condition=cond)
    return ConvergenceReport(T, tuple(rows), tol, verdict)


ds_continuity = continuity_report


def classify_mchi1(
    seq: SequenceHandle,
    modulus: int,
    horizon: int,
    tol: Fraction,
    truncation: int | None = None,
    checkpoints: Sequence[int] | None = None,
) -> frozenset:
    """Residues m mod p^M for which m*chi_1 looks continuous along seq.

    Only the family {m * chi_1} is searched. That family contains every
    continuous character when seq has a tail of e_n, which is recorded on
    the handle as `contains_e_tail`; otherwise the result is partial.
    """
    p = seq.ctx.p
    M = p_valuation(modulus, p)
    if p**M != modulus:
        raise ValueError(f"modulus {modulus} is not a power of {p}")
    T = seq.terms_in(horizon)
    if truncation is None:
        truncation = max([seq(k).exp for k in range(1, T + 1)] + [M, 1])
    out = set()
    for m in range(modulus):
        chi = TruncatedPAdic.from_int(p, m, truncation)
        if continuity_report(chi, seq, horizon, checkpoints, tol).tends_to_zero:
            out.add(m)
    return frozenset(out)


# ---------------------------------------------------------------------------
# faithful witnesses for shifted sequences
# ---------------------------------------------------------------------------


def _exponent_list(exponents, N: int) -> list[int]:
    if callable(exponents):
        out, k = [], 1
        while True:
            n = exponents(k)
            out.append(n)
            if n > N:
                return out
            k += 1
    return list(exponents)


def complete_blocks(exponents, N: int) -> list[tuple[int, int]]:
    """Blocks [n_k, n_{k+1}) that end within the first N digits."""
    ns = _exponent_list(exponents, N)
    return [(a, b) for a, b in zip(ns, ns[1:]) if b <= N]


def build_faithful_witness(
    x: PruferElement, exponents, N: int, free_digits: Mapping[int, int] | None = None
) -> TruncatedPAdic:
    """A character chi with chi(x) = x, chi(e_1) != 0 and r_block = x on
    every complete block, so chi(-x + e_{n_k}) -> 0.

    Digits 0 .. n_0-1 (o(x) = p^n_0) are 1, 0, ..., 0; the top n_0 digits
    of each block hold the base-p digits of x's numerator; every other
    position is free (default 0, override with `free_digits`).
    """
    if x.is_zero:
        raise ValueError("x must be nonzero")
    p, n0 = x.p, x.exp
    if N < n0:
        raise TruncationTooShort(f"need at least {n0} digits")
    digits = [0] * N
    fixed = set(range(n0))
    digits[0] = 1
    x_digits = [(x.num // p**j) % p for j in range(n0)]
    for a, b in complete_blocks(exponents, N):
        if b - a <= n0:
            raise GapTooSmall(f"gap {b - a} at [{a},{b}) does not exceed {n0}")
        if a < n0:
            raise GapTooSmall(f"block [{a},{b}) overlaps the first {n0} digits")
        for j, d in enumerate(x_digits):
            pos = b - n0 + j
            digits[pos] = d
            fixed.add(pos)
    for pos, d in (free_digits or {}).items():
        if pos in fixed:
            raise ValueError(f"digit {pos} is constrained")
        digits[pos] = d
    return TruncatedPAdic(p, tuple(digits))


def witness_free_positions(x: PruferElement, exponents, N: int) -> int:
    """log_p of the number of distinct witnesses at truncation N."""
    return N - x.exp - x.exp * len(complete_blocks(exponents, N))


# ---------------------------------------------------------------------------
# common kernels
# ---------------------------------------------------------------------------


def radical_from_kernels(family: Iterable, truncation, cap: int = DEFAULT_CAP) -> SubgroupTable:
    """Elements of the truncated group killed by every character in `family`.

    `truncation` is either an explicit SubgroupTable (filtered directly)
    or an integer depth: A[p^depth] for Prüfer characters, the first
    `depth` summands for direct-sum characters.
    """
    family = list(family)
    if isinstance(truncation, SubgroupTable):
        kept = frozenset(y for y in truncation.elements if all(chi(y).is_zero for chi in family))
        return SubgroupTable(kept)
    depth = int(truncation)
    if family and isinstance(family[0], TruncatedPAdic):
        return _prufer_common_kernel(family, depth, cap)
    if family and isinstance(family[0], DsCharacter):
        return _ds_common_kernel(family, depth, cap)
    raise ValueError("an empty family needs an explicit SubgroupTable truncation")


def _prufer_common_kernel(family: list[TruncatedPAdic], E: int, cap: int) -> SubgroupTable:
    p = family[0].p
    # chi(e_E) = u / p^E, so ker chi on A[p^E] is A[p^min(v_p(u), E)]
    v = E
    for chi in family:
        u = chi.value_mod(E)
        v = min(v, p_valuation(u, p) if u else E)
    if p**v > cap:
        raise CapExceeded(f"kernel of order {p}^{v} exceeds cap {cap}")
    return SubgroupTable(torsion_elements(PruferGroup(p), p**v), (PruferGroup(p).e(v),))


def _ds_common_kernel(family: list[DsCharacter], M: int, cap: int) -> SubgroupTable:
    ctx = family[0].ctx
    moduli = [ctx.order_at(i) for i in range(1, M + 1)]
    N = math.lcm(*moduli)
    basis = _lattice.triangular_basis([[int(i == j) for j in range(M)] for i in range(M)], moduli)
    for chi in family:
        if any(i > M for i in chi.support):
            raise ValueError(f"character support {sorted(chi.support)} exceeds depth {M}")
        scale = {i: c * (N // ctx.order_at(i)) for i, c in chi.coeffs}
        values = [sum(scale.get(i + 1, 0) * b[i] for i in range(M)) for b in basis]
        gens = _lattice.kernel_of_form(basis, values, N)
        basis = _lattice.triangular_basis(gens, moduli)
    size = _lattice.index_in_ambient(basis, moduli)
    if size > cap:
        raise CapExceeded(f"kernel of size {size} exceeds cap {cap}")
    gens = tuple(ds_make(ctx, {i + 1: c for i, c in enumerate(b)}) for b in basis)
    return generated_subgroup(gens, cap=cap, zero=ctx.zero())
