"""Canonical coefficient forms in Z(p^oo) for odd p.

Every y in Z(p^oo) can be written as a finite sum sum(s_n * e_n) with
e_n = 1/p^n. Such a sum is canonical when every |s_n| <= (p-1)/2; for odd
p the canonical sum is unique, so its support and the support size are
invariants of y. The order bounds below are stated in terms of those
supports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotPrime, PEqualsTwo
from .group_core import PruferElement, is_prime, prufer_make

__all__ = [
    "CoeffRep",
    "CanonicalRep",
    "balanced_residue",
    "canonicalize",
    "eval_coeffs",
    "base_p_expansion",
    "canonical_form",
    "canonical_support",
    "ceil_log",
    "sum_of_disjoint",
    "sum_order_exponent",
    "gap_hypothesis_holds",
    "gapped_sum_order_exponent",
    "multiple_sum_order_exponent",
]


@dataclass(frozen=True)
class CoeffRep:
    """A formal sum sum(sigma * e_n) over distinct indices n >= 1."""

    p: int
    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        seen = set()
        for n, _ in self.terms:
            if n < 1:
                raise ValueError(f"index {n} must be >= 1")
            if n in seen:
                raise ValueError(f"index {n} repeated")
            seen.add(n)

    @classmethod
    def from_pairs(cls, p: int, pairs: Iterable[Sequence[int]]) -> "CoeffRep":
        return cls(p, tuple((int(n), int(s)) for n, s in pairs))

    @classmethod
    def from_json(cls, data: dict) -> "CoeffRep":
        return cls.from_pairs(int(data["p"]), data["terms"])

    def coeffs(self) -> dict[int, int]:
        return dict(self.terms)

    def weight(self) -> int:
        return sum(abs(s) for _, s in self.terms)

    def to_json(self) -> dict:
        return {"p": self.p, "terms": [[n, s] for n, s in self.terms]}


@dataclass(frozen=True)
class CanonicalRep(CoeffRep):
    """A CoeffRep whose coefficients are certified canonical.

    Terms are sorted by index and contain no zero coefficients.
    """

    def __post_init__(self):
        super().__post_init__()
        if self.p == 2:
            raise PEqualsTwo("canonical forms need an odd prime")
        half = (self.p - 1) // 2
        indices = [n for n, _ in self.terms]
        if indices != sorted(indices):
            raise ValueError("canonical terms must be sorted by index")
        for n, s in self.terms:
            if s == 0 or abs(s) > half:
                raise ValueError(f"coefficient {s} at e_{n} is not canonical")

    @property
    def support(self) -> frozenset:
        return frozenset(n for n, _ in self.terms)

    @property
    def lam(self) -> int:
        return len(self.terms)


def balanced_residue(s: int, p: int) -> tuple[int, int]:
    """Split s = r + q*p with |r| <= (p-1)/2 (p odd)."""
    r = s % p
    if r > p // 2:
        r -= p
    return r, (s - r) // p


def canonicalize(rep: CoeffRep) -> CanonicalRep:
    """Carry coefficients downward until every |sigma_n| <= (p-1)/2.

    The highest index is reduced first; its quotient k is added to the
    coefficient of the next index down (p*e_n = e_{n-1}). Carries into
    index 0 vanish since e_0 = 0. The total weight never increases.
    """
    p = rep.p
    if p == 2:
        raise PEqualsTwo("canonical forms need an odd prime")
    coeffs = rep.coeffs()
    out = []
    carry = 0
    for n in range(max(coeffs, default=0), 0, -1):
        r, carry = balanced_residue(coeffs.get(n, 0) + carry, p)
        if r:
            out.append((n, r))
    return CanonicalRep(p, tuple(sorted(out)))


def eval_coeffs(rep: CoeffRep) -> PruferElement:
    if not rep.terms:
        return prufer_make(rep.p, 0, 0)
    top = max(n for n, _ in rep.terms)
    num = sum(s * rep.p ** (top - n) for n, s in rep.terms)
    return prufer_make(rep.p, num, top)


def base_p_expansion(y: PruferElement) -> CoeffRep:
    """Ordinary base-p digits of y as a CoeffRep: num/p^exp = sum d_j e_{exp-j}."""
    terms = []
    num, j = y.num, 0
    while num:
        num, d = divmod(num, y.p)
        if d:
            terms.append((y.exp - j, d))
        j += 1
    return CoeffRep(y.p, tuple(sorted(terms)))


def canonical_form(y: PruferElement) -> CanonicalRep:
    if y.p == 2:
        raise PEqualsTwo("canonical forms need an odd prime")
    return canonicalize(base_p_expansion(y))


def canonical_support(y: PruferElement) -> tuple[frozenset, int]:
    """Support of the canonical form of y and its size."""
    c = canonical_form(y)
    return c.support, c.lam


def ceil_log(m: int, p: int) -> int:
    """Smallest l >= 0 with p^l >= |m|."""
    m = abs(m)
    if m == 0:
        raise ValueError("log of 0")
    l, power = 0, 1
    while power < m:
        power *= p
        l += 1
    return l


def sum_of_disjoint(y1: PruferElement, y2: PruferElement) -> bool:
    """True when the canonical supports of y1 and y2 are disjoint."""
    return not (canonical_support(y1)[0] & canonical_support(y2)[0])


def sum_order_exponent(y: PruferElement, z: PruferElement) -> int:
    """Exponent k with o(y+z) >= p^k whenever lambda(y) > lambda(z).

    k is the (g - lambda(z))-th smallest index in the canonical support
    of y, g = lambda(y).
    """
    sy, g = canonical_support(y)
    _, lz = canonical_support(z)
    if g <= lz:
        raise ValueError("needs lambda(y) > lambda(z)")
    ks = sorted(sy)
    return ks[g - lz - 1]


def gap_hypothesis_holds(nus: Sequence[int], ns: Sequence[int], p: int) -> bool:
    """n_{i-1} < n_i - l_i for all i, with n_0 = 0 and l_i = ceil(log_p |nu_i|)."""
    prev = 0
    for nu, n in zip(nus, ns):
        if nu == 0 or not (prev < n - ceil_log(nu, p)):
            return False
        prev = n
    return True


def gapped_sum_order_exponent(nus: Sequence[int], ns: Sequence[int], lam_z: int, p: int) -> int:
    """Lower-bound exponent n_{f-lam_z} - l_{f-lam_z} for o(y + z)."""
    f = len(ns)
    i = f - lam_z - 1
    return ns[i] - ceil_log(nus[i], p)


def multiple_sum_order_exponent(ns: Sequence[int], l: int) -> int:
    """Lower-bound exponent n_{f-l} - l for o(mu*y + z), y = sum e_{n_i}."""
    return ns[len(ns) - l - 1] - l
