"""Exact arithmetic in the Prüfer group, in direct sums of cyclic groups,
and on the circle T = R/Z.

Every value here is immutable. Prüfer elements are stored as a reduced
fraction num/p^exp in [0, 1); direct-sum elements as a sorted tuple of
nonzero (index, residue) pairs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Union

from .errors import CapExceeded, ContextMismatch, InvalidSpec, NotPrime

__all__ = [
    "Prime",
    "is_prime",
    "Factored",
    "factorize",
    "PruferGroup",
    "PruferElement",
    "prufer_make",
    "CircleRational",
    "circle",
    "DirectSumContext",
    "DirectSumElement",
    "ds_make",
    "add",
    "neg",
    "scalar_mul",
    "order",
    "torsion_elements",
    "SubgroupTable",
    "generated_subgroup",
    "order_mod_subgroup",
    "ds_support",
    "p_valuation",
    "format_fraction",
]


# ---------------------------------------------------------------------------
# primes and factored integers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1024)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Prime(int):
    """An int certified prime at construction (trial division)."""

    def __new__(cls, value: int):
        value = int(value)
        if not is_prime(value):
            raise NotPrime(f"{value} is not prime")
        return super().__new__(cls, value)


def p_valuation(n: int, p: int) -> int:
    """Exponent of p in n; n must be nonzero."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Factored:
    """A positive integer carried as a prime -> exponent multiset.

    gcd, lcm and exact division act on exponents only, so orders such as
    p^((n-1)^3) never have to be multiplied out until `value` is asked for.
    """

    __slots__ = ("_exps",)

    def __init__(self, exps: Mapping[int, int] | None = None):
        self._exps = {q: e for q, e in (exps or {}).items() if e > 0}

    @classmethod
    def of(cls, n: Union[int, "Factored", Mapping[int, int]]) -> "Factored":
        if isinstance(n, Factored):
            return n
        if isinstance(n, Mapping):
            return cls(n)
        return cls(factorize(int(n)))

    @property
    def exps(self) -> dict[int, int]:
        return dict(self._exps)

    @property
    def value(self) -> int:
        out = 1
        for q, e in self._exps.items():
            out *= q**e
        return out

    def __int__(self) -> int:
        return self.value

    def gcd(self, other: "Factored") -> "Factored":
        return Factored({q: min(e, other._exps.get(q, 0)) for q, e in self._exps.items()})

    def lcm(self, other: "Factored") -> "Factored":
        exps = dict(self._exps)
        for q, e in other._exps.items():
            exps[q] = max(exps.get(q, 0), e)
        return Factored(exps)

    def __truediv__(self, other: "Factored") -> "Factored":
        for q, e in other._exps.items():
            if self._exps.get(q, 0) < e:
                raise ValueError("division is not exact")
        return Factored({q: e - other._exps.get(q, 0) for q, e in self._exps.items()})

    def divides(self, other: "Factored") -> bool:
        return all(other._exps.get(q, 0) >= e for q, e in self._exps.items())

    def coprime(self, other: "Factored") -> bool:
        return not (self._exps.keys() & other._exps.keys())

    def __eq__(self, other) -> bool:
        if isinstance(other, Factored):
            return self._exps == other._exps
        if isinstance(other, int):
            return other > 0 and self._exps == factorize(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._exps.items()))

    def __repr__(self) -> str:
        if not self._exps:
            return "Factored(1)"
        parts = [f"{q}^{e}" if e > 1 else str(q) for q, e in sorted(self._exps.items())]
        return "Factored(" + "*".join(parts) + ")"


def lcm_all(values: Iterable[Factored]) -> Factored:
    out = Factored()
    for v in values:
        out = out.lcm(v)
    return out


# ---------------------------------------------------------------------------
# the circle T = R/Z
# ---------------------------------------------------------------------------


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class CircleRational:
    """A rational point of T, stored as its representative in [0, 1)."""

    value: Fraction

    def __post_init__(self):
        if not (0 <= self.value < 1):
            raise ValueError(f"{self.value} is not in [0, 1)")

    def norm(self) -> Fraction:
        """Distance to the nearest integer, in [0, 1/2]."""
        return min(self.value, 1 - self.value)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other: "CircleRational") -> "CircleRational":
        return circle(self.value + other.value)

    def __neg__(self) -> "CircleRational":
        return circle(-self.value)

    def __sub__(self, other: "CircleRational") -> "CircleRational":
        return circle(self.value - other.value)

    def __mul__(self, m: int) -> "CircleRational":
        return circle(self.value * m)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_fraction(self.value)


def circle(q) -> CircleRational:
    """Reduce a rational mod 1."""
    q = Fraction(q)
    return CircleRational(q - math.floor(q))


# ---------------------------------------------------------------------------
# Prüfer group Z(p^oo)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PruferGroup:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")

    def zero(self) -> "PruferElement":
        return PruferElement(self.p, 0, 0)

    def e(self, n: int) -> "PruferElement":
        """The element 1/p^n (e_0 is zero)."""
        return prufer_make(self.p, 1, n)

    def element(self, num: int, exp: int) -> "PruferElement":
        return prufer_make(self.p, num, exp)

    def describe(self) -> str:
        return f"Z({self.p}^oo)"


@dataclass(frozen=True, order=False)
class PruferElement:
    """num / p^exp mod 1, normalized so that p does not divide num."""

    p: int
    num: int
    exp: int

    def __post_init__(self):
        if self.exp < 0:
            raise ValueError("exp must be non-negative")
        if self.num == 0:
            if self.exp != 0:
                raise ValueError("zero is stored as 0/p^0")
        elif not (0 < self.num < self.p**self.exp) or self.num % self.p == 0:
            raise ValueError(f"{self.num}/{self.p}^{self.exp} is not normalized")

    @property
    def ctx(self) -> PruferGroup:
        return PruferGroup(self.p)

    @property
    def is_zero(self) -> bool:
        return self.num == 0

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.p**self.exp)

    def order(self) -> int:
        return self.p**self.exp

    def __add__(self, other: "PruferElement") -> "PruferElement":
        if not isinstance(other, PruferElement):
            return NotImplemented
        if other.p != self.p:
            raise ContextMismatch(f"Z({self.p}^oo) vs Z({other.p}^oo)")
        if self.exp >= other.exp:
            e = self.exp
            num = self.num + other.num * self.p ** (e - other.exp)
        else:
            e = other.exp
            num = other.num + self.num * self.p ** (e - self.exp)
        return prufer_make(self.p, num, e)

    def __neg__(self) -> "PruferElement":
        return prufer_make(self.p, -self.num, self.exp)

    def __sub__(self, other: "PruferElement") -> "PruferElement":
        return self + (-other)

    def __mul__(self, m: int) -> "PruferElement":
        if not isinstance(m, int):
            return NotImplemented
        return prufer_make(self.p, m * self.num, self.exp)

    __rmul__ = __mul__

    def sort_key(self):
        return (self.exp, self.num)

    def __str__(self) -> str:
        return f"{self.num}/{self.p ** self.exp}"

    def to_json(self) -> dict:
        return {"prufer": {"p": self.p, "num": self.num, "exp": self.exp}}


def prufer_make(p: int, num: int, exp: int) -> PruferElement:
    """Normalized representative of num/p^exp mod 1."""
    if exp < 0:
        raise ValueError("exp must be non-negative")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    num %= p**exp
    while exp > 0 and num % p == 0:
        num //= p
        exp -= 1
    if num == 0:
        exp = 0
    return PruferElement(p, num, exp)


# ---------------------------------------------------------------------------
# direct sums of cyclic groups
# ---------------------------------------------------------------------------


def _parse_orders_rule(rule: str) -> tuple[Callable[[int], int], int | None]:
    kind, _, arg = rule.partition(":")
    try:
        if kind == "const":
            n = int(arg)
            return (lambda i: n), None
        if kind == "pow":
            b = int(arg)
            return (lambda i: b**i), None
        if kind == "list":
            vals = tuple(int(v) for v in arg.split(",") if v.strip())
            return (lambda i: vals[i - 1]), len(vals)
    except ValueError as exc:
        raise InvalidSpec(f"bad orders rule {rule!r}") from exc
    raise InvalidSpec(f"unknown orders rule {rule!r}")


@dataclass(frozen=True)
class DirectSumContext:
    """The group (+)_i Z/n_i, i = 1, 2, ...

    `rule` is "const:n" (all orders n), "pow:b" (n_i = b^i) or
    "list:n1,n2,..." (a finite sum).
    """

    rule: str
    _order_fn: Callable[[int], int] = field(init=False, repr=False, compare=False)
    length: int | None = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fn, length = _parse_orders_rule(self.rule)
        object.__setattr__(self, "_order_fn", fn)
        object.__setattr__(self, "length", length)
        for i in range(1, (length or 8) + 1):
            if fn(i) < 2:
                raise InvalidSpec(f"order n_{i} = {fn(i)} must exceed 1")

    def order_at(self, i: int) -> int:
        if i < 1 or (self.length is not None and i > self.length):
            raise IndexError(f"coordinate {i} outside {self.rule}")
        return self._order_fn(i)

    @property
    def case(self) -> str | None:
        """'a' for constant orders, 'b' for strictly increasing orders."""
        kind = self.rule.partition(":")[0]
        if kind == "const":
            return "a"
        if kind == "pow":
            return "b"
        n = [self.order_at(i) for i in range(1, self.length + 1)]
        if all(x == y for x, y in zip(n, n[1:])):
            return "a"
        if all(x < y for x, y in zip(n, n[1:])):
            return "b"
        return None

    def zero(self) -> "DirectSumElement":
        return DirectSumElement(self, ())

    def g(self, i: int) -> "DirectSumElement":
        """The chosen generator of the i-th summand."""
        return ds_make(self, {i: 1})

    def element(self, coords: Mapping[int, int]) -> "DirectSumElement":
        return ds_make(self, coords)

    def describe(self) -> str:
        return f"(+) Z/n_i [{self.rule}]"


@dataclass(frozen=True)
class DirectSumElement:
    ctx: DirectSumContext
    coords: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev = 0
        for i, r in self.coords:
            if i <= prev:
                raise ValueError("coordinates must be sorted and distinct")
            if not (0 < r < self.ctx.order_at(i)):
                raise ValueError(f"residue {r} at {i} not reduced")
            prev = i

    @property
    def is_zero(self) -> bool:
        return not self.coords

    def coord(self, i: int) -> int:
        for j, r in self.coords:
            if j == i:
                return r
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.coords)

    def order(self) -> int:
        out = 1
        for i, r in self.coords:
            n = self.ctx.order_at(i)
            out = math.lcm(out, n // math.gcd(r, n))
        return out

    def _check(self, other):
        if not isinstance(other, DirectSumElement):
            return False
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx.rule} vs {other.ctx.rule}")
        return True

    def __add__(self, other: "DirectSumElement") -> "DirectSumElement":
        if not self._check(other):
            return NotImplemented
        merged = dict(self.coords)
        for i, r in other.coords:
            merged[i] = merged.get(i, 0) + r
        return ds_make(self.ctx, merged)

    def __neg__(self) -> "DirectSumElement":
        return ds_make(self.ctx, {i: -r for i, r in self.coords})

    def __sub__(self, other: "DirectSumElement") -> "DirectSumElement":
        return self + (-other)

    def __mul__(self, m: int) -> "DirectSumElement":
        if not isinstance(m, int):
            return NotImplemented
        return ds_make(self.ctx, {i: m * r for i, r in self.coords})

    __rmul__ = __mul__

    def sort_key(self):
        return (len(self.coords), tuple(reversed(self.coords)))

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        return " + ".join(f"{r}g_{i}" if r != 1 else f"g_{i}" for i, r in self.coords)

    def to_json(self) -> dict:
        return {"dsum": {"orders": self.ctx.rule, "coords": {str(i): r for i, r in self.coords}}}


def ds_make(ctx: DirectSumContext, coords: Mapping[int, int]) -> DirectSumElement:
    out = []
    for i in sorted(coords):
        r = coords[i] % ctx.order_at(i)
        if r:
            out.append((i, r))
    return DirectSumElement(ctx, tuple(out))


# ---------------------------------------------------------------------------
# generic ambient operations
# ---------------------------------------------------------------------------

Element = Union[PruferElement, DirectSumElement]
Context = Union[PruferGroup, DirectSumContext]


def add(a: Element, b: Element) -> Element:
    if type(a) is not type(b):
        raise ContextMismatch("elements of different ambient kinds")
    return a + b


def scalar_mul(m: int, a: Element) -> Element:
    return a * m


def neg(a: Element) -> Element:
    return a * -1


def order(a: Element) -> int:
    """Least t >= 1 with t*a = 0."""
    return a.order()


def torsion_elements(ctx: Context, n: int, depth: int | None = None) -> frozenset:
    """The subgroup A[n] = {a : n a = 0}.

    Direct sums need a truncation `depth`; the answer is then exact on
    the first `depth` summands.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if isinstance(ctx, PruferGroup):
        v = p_valuation(n, ctx.p)
        return frozenset(prufer_make(ctx.p, k, v) for k in range(ctx.p**v))
    if depth is None:
        if ctx.length is None:
            raise ValueError("direct sums need a truncation depth")
        depth = ctx.length
    per_coord = []
    for i in range(1, depth + 1):
        ni = ctx.order_at(i)
        step = ni // math.gcd(n, ni)
        per_coord.append((i, range(0, ni, step)))
    out = [{}]
    for i, residues in per_coord:
        out = [{**c, i: r} if r else c for c in out for r in residues]
    return frozenset(ds_make(ctx, c) for c in out)


@dataclass(frozen=True)
class SubgroupTable:
    elements: frozenset
    generators: tuple = ()

    def __contains__(self, a) -> bool:
        return a in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements, key=lambda a: a.sort_key()))

    def is_subgroup(self) -> bool:
        els = self.elements
        if not els:
            return False
        zero = next(iter(els)) * 0
        if zero not in els:
            return False
        return all((a + b) in els for a in els for b in els) and all(-a in els for a in els)


def generated_subgroup(gens: Iterable[Element], cap: int = 10**6, zero: Element | None = None) -> SubgroupTable:
    """Closure of `gens` under the group law.

    Raises CapExceeded once the closure has more than `cap` elements.
    An empty generator list needs an explicit `zero`.
    """
    gens = tuple(gens)
    if zero is None:
        if not gens:
            raise ValueError("empty generator list needs an explicit zero")
        zero = gens[0] * 0
    if isinstance(zero, PruferElement):
        # subgroups of Z(p^oo) are the A[p^k]
        k = max((g.exp for g in gens), default=0)
        if zero.p**k > cap:
            raise CapExceeded(f"subgroup of order {zero.p}^{k} exceeds cap {cap}")
        return SubgroupTable(torsion_elements(PruferGroup(zero.p), zero.p**k), gens)
    seen = {zero}
    queue = deque([zero])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = a + g
            if b not in seen:
                seen.add(b)
                if len(seen) > cap:
                    raise CapExceeded(f"closure exceeds cap {cap}")
                queue.append(b)
    return SubgroupTable(frozenset(seen), gens)


def order_mod_subgroup(a: Element, H: SubgroupTable) -> int:
    """Least t >= 1 with t*a in H."""
    if isinstance(a, PruferElement) and len(H) > 0:
        # every finite subgroup of Z(p^oo) is some A[p^k]
        k = p_valuation(len(H), a.p)
        return a.p ** max(0, a.exp - k)
    t, x = 1, a
    while x not in H:
        x = x + a
        t += 1
    return t


def ds_support(x: DirectSumElement) -> tuple[frozenset, int]:
    idx = frozenset(i for i, _ in x.coords)
    return idx, len(idx)
