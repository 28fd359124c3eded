"""Constructors for the named sequences.

Sequence specs are dicts such as ``{"kind": "thm410_d", "p": 3, "x": "1/3"}``
or the short string form ``"thm410_d:p=3,x=1/3"``. Kinds:

e          e_k = 1/p^k
ex12       -e_1 + e_k (not a T-sequence)
shifted    -x + e_{n_k} for a strictly increasing exponent rule n_k
thm410_b   -x + e_{k^3-k^2} + ... + e_{k^3-k} + e_{k^3}
thm410_d   b_1, e_1, b_2, e_2, ...
prop33_a   j*g_i for i > i_0, 1 <= j < n_i, row by row
prop33_b   -x + g_{s+1} + ... + g_{s+r} on fresh blocks of length r = 1, 2, ...
prop33_d   a_1, b_1, a_2, b_2, ...
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Callable

from .errors import ContextMismatch, InvalidSpec, RepeatedTerms
from .group_core import (
    DirectSumContext,
    DirectSumElement,
    PruferElement,
    PruferGroup,
    ds_make,
    ds_support,
    is_prime,
    p_valuation,
    prufer_make,
)
from .windows import SequenceHandle

__all__ = [
    "KINDS",
    "GALLERY",
    "parse_spec",
    "parse_prufer",
    "parse_ds_element",
    "exponent_rule",
    "make_sequence",
    "interleave",
    "find_repetition",
    "prop33_blocks",
    "thm410_b_indices",
]

GALLERY = {
    "e": {"p": "odd or even prime"},
    "ex12": {"p": "prime"},
    "shifted": {"p": "prime", "x": "nonzero element, e.g. 1/3", "n": "exponent rule: square | cube | fib | 2k | 3k+1 | k^4 | 1;4;9;..."},
    "thm410_b": {"p": "odd prime", "x": "nonzero element"},
    "thm410_d": {"p": "odd prime", "x": "nonzero element"},
    "prop33_a": {"orders": "const:n | pow:b | list:n1,n2,...", "x": "nonzero element as {index: residue}"},
    "prop33_b": {"orders": "as prop33_a", "x": "as prop33_a"},
    "prop33_d": {"orders": "as prop33_a", "x": "as prop33_a"},
}
KINDS = tuple(GALLERY)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def parse_spec(spec) -> dict:
    """Accept a dict, a JSON object string, or the short "kind:k=v,..." form."""
    if isinstance(spec, dict):
        return dict(spec)
    spec = spec.strip()
    if spec.startswith("{"):
        return json.loads(spec)
    kind, _, rest = spec.partition(":")
    out: dict = {"kind": kind}
    # values may themselves contain ':' (orders=const:3) but not ','
    for part in filter(None, re.split(r",(?=[a-z_]+=)", rest)):
        key, eq, val = part.partition("=")
        if not eq:
            raise InvalidSpec(f"bad spec fragment {part!r}")
        out[key] = int(val) if re.fullmatch(r"-?\d+", val) and key == "p" else val
    return out


def parse_prufer(x, p: int) -> PruferElement:
    """'1/9', a Fraction, or {"num":.., "exp":..} as an element of Z(p^oo)."""
    if isinstance(x, PruferElement):
        return x
    if isinstance(x, dict):
        if "prufer" in x:
            x = x["prufer"]
        return prufer_make(p, int(x["num"]), int(x["exp"]))
    q = Fraction(x)
    den = q.denominator
    v = p_valuation(den, p)
    if p**v != den:
        raise InvalidSpec(f"{x} is not in Z({p}^oo)")
    return prufer_make(p, q.numerator, v)


def parse_ds_element(x, ctx: DirectSumContext) -> DirectSumElement:
    """{index: residue}, "1:1;3:2", or a bare index meaning g_index."""
    if isinstance(x, DirectSumElement):
        return x
    if isinstance(x, dict):
        if "dsum" in x:
            x = x["dsum"]["coords"]
        return ds_make(ctx, {int(i): int(r) for i, r in x.items()})
    if isinstance(x, int):
        return ctx.g(x)
    s = str(x).strip()
    if re.fullmatch(r"\d+", s):
        return ctx.g(int(s))
    coords = {}
    for part in s.split(";"):
        i, _, r = part.partition(":")
        coords[int(i)] = int(r)
    return ds_make(ctx, coords)


def _fib(k: int) -> int:
    a, b = 1, 2
    for _ in range(k - 1):
        a, b = b, a + b
    return a


def _rule_length(rule) -> int | None:
    if isinstance(rule, (list, tuple)):
        return len(rule)
    s = str(rule)
    if ";" in s or re.fullmatch(r"\s*\d+\s*", s):
        return len(s.split(";"))
    return None


def exponent_rule(rule) -> Callable[[int], int]:
    """Exponent rules k -> n_k for shifted sequences."""
    if callable(rule):
        return rule
    if isinstance(rule, (list, tuple)):
        vals = tuple(int(v) for v in rule)
        return lambda k: vals[k - 1]
    s = str(rule).strip().replace(" ", "")
    named = {"square": "k^2", "cube": "k^3"}
    s = named.get(s, s)
    if s == "fib":
        return _fib
    m = re.fullmatch(r"k\^(\d+)", s)
    if m:
        e = int(m.group(1))
        return lambda k: k**e
    m = re.fullmatch(r"(\d*)k([+-]\d+)?", s)
    if m:
        a = int(m.group(1) or 1)
        b = int(m.group(2) or 0)
        return lambda k: a * k + b
    if ";" in s or re.fullmatch(r"\d+", s):
        vals = tuple(int(v) for v in s.split(";"))
        return lambda k: vals[k - 1]
    raise InvalidSpec(f"unknown exponent rule {rule!r}")


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------


def find_repetition(seq: SequenceHandle, horizon: int) -> tuple[int, int] | None:
    seen: dict = {}
    for k in range(1, horizon + 1):
        a = seq(k)
        if a in seen:
            return seen[a], k
        seen[a] = k
    return None


def interleave(s1: SequenceHandle, s2: SequenceHandle, check_horizon: int | None = None, name: str = "") -> SequenceHandle:
    """d_{2k-1} = s1_k, d_{2k} = s2_k.

    With `check_horizon`, the first that many terms must be pairwise
    distinct, otherwise RepeatedTerms is raised.
    """
    if s1.ctx != s2.ctx:
        raise ContextMismatch("interleaved sequences must share an ambient group")

    def rule(k: int):
        q, r = divmod(k + 1, 2)
        return s1(q) if r == 0 else s2(q)

    d = SequenceHandle(
        s1.ctx,
        rule,
        name=name or f"interleave({s1.name},{s2.name})",
        params={"first": s1.params, "second": s2.params},
        period=s1.period + s2.period,
        contains_e_tail=s1.contains_e_tail or s2.contains_e_tail,
    )
    if check_horizon:
        rep = find_repetition(d, check_horizon)
        if rep:
            raise RepeatedTerms(rep[0], rep[1], d(rep[1]))
    return d


# ---------------------------------------------------------------------------
# Prüfer constructions
# ---------------------------------------------------------------------------


def thm410_b_indices(n: int) -> list[int]:
    """n^3 - n^2, n^3 - n^2 + n, ..., n^3 - n, n^3 (n + 1 indices, step n)."""
    return [n**3 - j * n for j in range(n, -1, -1)]


def _require_prime(spec: dict) -> int:
    try:
        p = int(spec["p"])
    except (KeyError, ValueError) as exc:
        raise InvalidSpec("spec needs an integer p") from exc
    if not is_prime(p):
        raise InvalidSpec(f"{p} is not prime")
    return p


def _nonzero_x(spec: dict, p: int) -> PruferElement:
    if "x" not in spec:
        raise InvalidSpec("spec needs x")
    x = parse_prufer(spec["x"], p)
    if x.is_zero:
        raise InvalidSpec("x must be nonzero")
    return x


def _e_sequence(p: int) -> SequenceHandle:
    G = PruferGroup(p)
    return SequenceHandle(G, G.e, name="e", params={"kind": "e", "p": p}, contains_e_tail=True)


def _thm410_b(p: int, x: PruferElement) -> SequenceHandle:
    G = PruferGroup(p)

    def rule(n: int):
        total = -x
        for i in thm410_b_indices(n):
            total = total + G.e(i)
        return total

    return SequenceHandle(G, rule, name="thm410_b", params={"kind": "thm410_b", "p": p, "x": str(x)})


# ---------------------------------------------------------------------------
# direct-sum constructions
# ---------------------------------------------------------------------------


def prop33_blocks(ctx: DirectSumContext, x: DirectSumElement):
    """The a, b and alternating d sequences built from x.

    i_0 is the largest index in the support of x. a_k runs through
    j*g_i for i = i_0+1, i_0+2, ... and 1 <= j < n_i; b_k is -x plus the
    sum of the k generators following the first k(k-1)/2 after i_0.
    """
    if x.is_zero:
        raise InvalidSpec("x must be nonzero")
    if x.ctx != ctx:
        raise ContextMismatch("x lives in another direct sum")
    i0 = max(ds_support(x)[0])
    params = {"orders": ctx.rule, "x": {str(i): r for i, r in x.coords}}

    rows: list[tuple[int, int]] = []

    def a_rule(k: int):
        while len(rows) < k:
            if rows:
                i, j = rows[-1]
                if j + 1 < ctx.order_at(i):
                    rows.append((i, j + 1))
                    continue
                rows.append((i + 1, 1))
            else:
                rows.append((i0 + 1, 1))
        i, j = rows[k - 1]
        return ds_make(ctx, {i: j})

    def b_rule(k: int):
        s = i0 + k * (k - 1) // 2
        return -x + ds_make(ctx, {s + t: 1 for t in range(1, k + 1)})

    a = SequenceHandle(ctx, a_rule, name="prop33_a", params={"kind": "prop33_a", **params})
    b = SequenceHandle(ctx, b_rule, name="prop33_b", params={"kind": "prop33_b", **params})
    d = interleave(a, b, name="prop33_d")
    d.params = {"kind": "prop33_d", **params}
    d.i0 = i0
    return a, b, d


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def make_sequence(spec) -> SequenceHandle:
    spec = parse_spec(spec)
    kind = spec.get("kind")
    if kind == "e":
        return _e_sequence(_require_prime(spec))
    if kind == "ex12":
        p = _require_prime(spec)
        G = PruferGroup(p)
        return SequenceHandle(G, lambda n: G.e(n) - G.e(1), name="ex12", params={"kind": "ex12", "p": p})
    if kind == "shifted":
        p = _require_prime(spec)
        x = _nonzero_x(spec, p)
        rule_spec = spec.get("n", "square")
        nk, length = exponent_rule(rule_spec), _rule_length(rule_spec)
        prefix = [nk(k) for k in range(1, (length or 64) + 1)]
        if prefix[0] < 1 or any(a >= b for a, b in zip(prefix, prefix[1:])):
            raise InvalidSpec("exponents n_k must be positive and strictly increasing")
        G = PruferGroup(p)
        h = SequenceHandle(
            G,
            lambda k: G.e(nk(k)) - x,
            name="shifted",
            params={"kind": "shifted", "p": p, "x": str(x), "n": str(rule_spec)},
            length=length,
        )
        h.exponents = nk
        h.x = x
        return h
    if kind in ("thm410_b", "thm410_d"):
        p = _require_prime(spec)
        if p == 2:
            raise InvalidSpec("the construction needs an odd prime")
        x = _nonzero_x(spec, p)
        b = _thm410_b(p, x)
        if kind == "thm410_b":
            b.x = x
            return b
        d = interleave(b, _e_sequence(p), name="thm410_d")
        d.params = {"kind": "thm410_d", "p": p, "x": str(x)}
        d.x = x
        return d
    if kind in ("prop33_a", "prop33_b", "prop33_d"):
        if "orders" not in spec or "x" not in spec:
            raise InvalidSpec("prop33 specs need orders and x")
        try:
            ctx = DirectSumContext(str(spec["orders"]))
            x = parse_ds_element(spec["x"], ctx)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, InvalidSpec):
                raise
            raise InvalidSpec(f"bad orders or x: {exc}") from exc
        a, b, d = prop33_blocks(ctx, x)
        out = {"prop33_a": a, "prop33_b": b, "prop33_d": d}[kind]
        out.x = x
        return out
    raise InvalidSpec(f"unknown sequence kind {kind!r}")
