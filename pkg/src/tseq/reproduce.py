"""The acceptance criteria as runnable checks.

Each criterion is a function `(seed) -> (passed, certificate)`; the
certificate is a JSON-ready dict with enough detail to audit the result.
`run_criterion` adds timing and the time limit.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .canonical import (
    CoeffRep,
    canonical_support,
    canonicalize,
    eval_coeffs,
    gap_hypothesis_holds,
    gapped_sum_order_exponent,
    multiple_sum_order_exponent,
    sum_order_exponent,
)
from .characters import (
    DsCharacter,
    TruncatedPAdic,
    build_faithful_witness,
    complete_blocks,
    continuity_report,
    classify_mchi1,
    eval_char,
    r_block,
    radical_from_kernels,
)
from .constructions import make_sequence
from .errors import CapExceeded
from .group_core import (
    DirectSumContext,
    PruferGroup,
    circle,
    ds_make,
    prufer_make,
)
from .windows import (
    SequenceHandle,
    Window,
    cond_ii_tuples,
    cond_iii_tuples,
    cond_iv_check,
    enum_Alm,
    zp_scan,
)


@dataclass(frozen=True)
class CriterionResult:
    id: int
    title: str
    passed: bool
    seconds: float
    limit: float
    certificate: dict

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        return f"criterion {self.id:>2} {self.status}  {self.title}  ({self.seconds:.2f}s / limit {self.limit:g}s)"

    def to_json(self) -> dict:
        return {
            "criterion": self.id,
            "title": self.title,
            "result": self.status,
            "limit": self.limit,
            "certificate": self.certificate,
        }


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# 1. non-T-sequence -e_1 + e_n
# ---------------------------------------------------------------------------


def criterion_1(seed: int = 0):
    cert = {}
    ok = True
    for p in (3, 5):
        seq = make_sequence({"kind": "ex12", "p": p})
        e1 = PruferGroup(p).e(1)
        identity = all(seq(n + 1) * p - seq(n) == e1 for n in range(1, 26))
        verdict = zp_scan(e1, seq, p + 1, range(1, 11), window_width=2)
        cert[str(p)] = {"identity_n_le_25": identity, **verdict.to_json()}
        ok &= identity and verdict.kind == "Refuted"
    return ok, cert


# ---------------------------------------------------------------------------
# 2. canonical forms against an exhaustive table
# ---------------------------------------------------------------------------


def _balanced_table(p: int, width: int) -> dict[int, tuple[int, ...]]:
    """Every vector in [-(p-1)/2, (p-1)/2]^width keyed by its value mod p^width.

    Vector entry j weighs p^(width-1-j). The table is built by plain
    enumeration; its size proves each residue has exactly one vector.
    """
    half = (p - 1) // 2
    mod = p**width
    table: dict[int, tuple[int, ...]] = {}
    for vec in itertools.product(range(-half, half + 1), repeat=width):
        val = sum(s * p ** (width - 1 - j) for j, s in enumerate(vec)) % mod
        table.setdefault(val, vec)
    return table


def _oracle_canonical(p: int, num: int, top: int, low: dict, high: dict, half_width: int) -> tuple:
    """Canonical terms of num/p^top (top = 2*half_width) by table lookup."""
    mod = p**half_width
    lo = low[num % mod]
    lo_val = sum(s * p ** (half_width - 1 - j) for j, s in enumerate(lo))
    hi = high[((num - lo_val) // mod) % mod]
    vec = hi + lo  # entry j is the coefficient of e_{j+1}
    return tuple((j + 1, s) for j, s in enumerate(vec) if s)


def criterion_2(seed: int = 0, samples: int = 10**4):
    rng = random.Random(seed)
    cert = {}
    ok = True
    top, hw = 10, 5
    for p in (3, 5, 7):
        table = _balanced_table(p, hw)
        bijective = len(table) == p**hw
        mismatches = 0
        by_value: dict = {}
        by_form: dict = {}
        clash = 0
        for _ in range(samples):
            idx = rng.sample(range(1, top + 1), rng.randint(1, top))
            rep = CoeffRep(p, tuple((n, rng.choice([s for s in range(-50, 51) if s])) for n in idx))
            y = eval_coeffs(rep)
            num = y.num * p ** (top - y.exp)
            got = canonicalize(rep)
            if got.terms != _oracle_canonical(p, num, top, table, table, hw):
                mismatches += 1
            if by_value.setdefault(y, got.terms) != got.terms:
                clash += 1
            if by_form.setdefault(got.terms, y) != y:
                clash += 1
        cert[str(p)] = {"table_bijective": bijective, "mismatches": mismatches, "uniqueness_clashes": clash,
                        "distinct_values": len(by_value)}
        ok &= bijective and mismatches == 0 and clash == 0
    return ok, cert


# ---------------------------------------------------------------------------
# 3. order bounds from canonical supports
# ---------------------------------------------------------------------------


def _enumerated_z(p: int, l: int, top: int = 12) -> list:
    return sorted(enum_Alm(make_sequence({"kind": "e", "p": p}), l, Window(1, top)), key=lambda z: z.sort_key())


def _random_gapped(rng: random.Random, p: int, f: int) -> tuple[list[int], list[int]]:
    nus, ns, prev = [], [], 0
    for _ in range(f):
        nu = rng.choice([v for v in range(-(p**2), p**2 + 1) if v])
        li = math.ceil(math.log(abs(nu), p) - 1e-12) if abs(nu) > 1 else 0
        n = prev + li + 1 + rng.randint(0, 3)
        nus.append(nu)
        ns.append(n)
        prev = n
    return nus, ns


def criterion_3(seed: int = 0):
    p = 3
    rng = random.Random(seed)
    G = PruferGroup(p)
    violations: dict[str, int] = {}
    checked: dict[str, int] = {}

    def record(name: str, good: bool):
        checked[name] = checked.get(name, 0) + 1
        if not good:
            violations[name] = violations.get(name, 0) + 1

    zs = {l: _enumerated_z(p, l) for l in range(1, 5)}

    # weight bound: lambda(z) <= l on A(l,1)
    for l, zl in zs.items():
        for z in zl:
            record("weight_bound", canonical_support(z)[1] <= l)

    # support of m e_n lies in [n - l, n]
    for l in range(1, 4):
        for n in range(l + 1, 11):
            for m in range(-(p**l) + 1, p**l):
                if m:
                    sup, lam = canonical_support(G.e(n) * m)
                    record("multiple_support", lam >= 1 and sup <= set(range(n - l, n + 1)))

    # sum order bound when lambda(y) > lambda(z)
    for _ in range(3000):
        l = rng.randint(1, 4)
        z = rng.choice(zs[l])
        y = prufer_make(p, rng.randrange(1, p**12), 12)
        if canonical_support(y)[1] <= canonical_support(z)[1]:
            continue
        record("sum_order", (y + z).order() >= p ** sum_order_exponent(y, z))

    # disjoint supports add
    for _ in range(2000):
        idx = rng.sample(range(1, 13), rng.randint(2, 12))
        cut = rng.randint(1, len(idx) - 1)
        t1 = [(n, rng.choice((-1, 1))) for n in sorted(idx[:cut])]
        t2 = [(n, rng.choice((-1, 1))) for n in sorted(idx[cut:])]
        y1, y2 = eval_coeffs(CoeffRep(p, tuple(t1))), eval_coeffs(CoeffRep(p, tuple(t2)))
        s1, l1 = canonical_support(y1)
        s2, l2 = canonical_support(y2)
        s, lam = canonical_support(y1 + y2)
        record("disjoint_additivity", s == s1 | s2 and lam == l1 + l2)

    # gapped sums: f <= lambda(y) and the order bound against every z
    for _ in range(60):
        f = rng.randint(1, 6)
        nus, ns = _random_gapped(rng, p, f)
        if not gap_hypothesis_holds(nus, ns, p):
            continue
        y = eval_coeffs(CoeffRep(p, tuple(zip(ns, nus))))
        record("gapped_weight", f <= canonical_support(y)[1])
        l = rng.randint(1, 4)
        for z in zs[l]:
            lz = canonical_support(z)[1]
            if lz < f:
                record("gapped_order", (y + z).order() >= p ** gapped_sum_order_exponent(nus, ns, lz, p))

    # multiples of e_{n_1} + ... + e_{n_f} with gaps > l
    for l in range(1, 5):
        for _ in range(3):
            f = rng.randint(l + 1, 6)
            ns, prev = [], 0
            for _ in range(f):
                prev += l + 1 + rng.randint(0, 2)
                ns.append(prev)
            y = eval_coeffs(CoeffRep(p, tuple((n, 1) for n in ns)))
            bound = p ** multiple_sum_order_exponent(ns, l)
            for mu in [m for m in range(-l, l + 1) if m]:
                my = y * mu
                for z in zs[l]:
                    record("multiple_order", (my + z).order() >= bound)

    ok = not violations and all(checked.get(k) for k in (
        "weight_bound", "multiple_support", "sum_order", "disjoint_additivity",
        "gapped_weight", "gapped_order", "multiple_order"))
    return ok, {"checked": checked, "violations": violations}


# ---------------------------------------------------------------------------
# 4. block decomposition identity
# ---------------------------------------------------------------------------


def criterion_4(seed: int = 0, samples: int = 1000):
    rng = random.Random(seed)
    bad = []
    for t in range(samples):
        p = rng.choice((3, 5))
        N = rng.randint(2, 60)
        chi = TruncatedPAdic(p, tuple(rng.randrange(p) for _ in range(N)))
        nk = rng.randint(0, N - 1)
        nk1 = rng.randint(nk + 1, N)
        G = PruferGroup(p)
        lhs = eval_char(chi, G.e(nk1)).value
        rhs = eval_char(chi, G.e(nk)).value / p ** (nk1 - nk) + r_block(chi, nk, nk1).value
        if lhs != rhs:
            bad.append({"p": p, "digits": list(chi.digits), "n_k": nk, "n_k+1": nk1})
    return not bad, {"samples": samples, "failures": bad[:5], "failure_count": len(bad)}


# ---------------------------------------------------------------------------
# 5. classification of continuous multiples of chi_1
# ---------------------------------------------------------------------------


def criterion_5(seed: int = 0):
    p, modulus, horizon, N = 3, 27, 12, 1800
    tol = Fraction(1, p**6)
    cert = {}
    ok = True
    for x_str, step in (("1/3", 3), ("1/9", 9)):
        d = make_sequence({"kind": "thm410_d", "p": p, "x": x_str})
        classified = classify_mchi1(d, modulus, horizon, tol, truncation=N)
        expected = set(range(0, modulus, step))
        x = d.x
        low_sup = []
        for m in range(modulus):
            if m % step == 0:
                continue
            rep = continuity_report(TruncatedPAdic.from_int(p, m, N), d, horizon, tol=tol)
            # the b_n terms pull m*chi_1 towards -m*x
            low_sup.append(rep.sups[-1] >= circle((x * m).value).norm() - tol)
        sups_ok = all(low_sup)
        cert[x_str] = {"classified": sorted(classified), "expected": sorted(expected), "excluded_sup_at_least_norm_mx_minus_tol": sups_ok}
        ok &= set(classified) == expected and sups_ok
    return ok, cert


# ---------------------------------------------------------------------------
# 6. common kernel of {3 chi_1}
# ---------------------------------------------------------------------------


def criterion_6(seed: int = 0):
    p = 3
    kernel = radical_from_kernels([TruncatedPAdic.from_int(p, 3, 6)], 6)
    expected = {prufer_make(p, k, 1) for k in range(3)}
    return set(kernel.elements) == expected, {"kernel": sorted(str(y) for y in kernel)}


# ---------------------------------------------------------------------------
# 7. continuity and common kernel for the direct-sum construction
# ---------------------------------------------------------------------------


def _ds_characters(ctx: DirectSumContext, M: int, rng: random.Random, exhaustive_limit: int, samples: int):
    """All characters with support in [1, M] when there are few enough;
    otherwise every character supported on the longest prefix that fits
    plus a seeded sample of fully supported ones."""
    orders = [ctx.order_at(i) for i in range(1, M + 1)]
    total = math.prod(orders)
    if total <= exhaustive_limit:
        for cs in itertools.product(*[range(n) for n in orders]):
            yield DsCharacter.make(ctx, {i + 1: c for i, c in enumerate(cs)})
        return
    prefix, size = 0, 1
    while prefix < M and size * orders[prefix] <= exhaustive_limit:
        size *= orders[prefix]
        prefix += 1
    for cs in itertools.product(*[range(n) for n in orders[:prefix]]):
        yield DsCharacter.make(ctx, {i + 1: c for i, c in enumerate(cs)})
    for _ in range(samples):
        yield DsCharacter.make(ctx, {i + 1: rng.randrange(n) for i, n in enumerate(orders)})


def criterion_7(seed: int = 0, M: int = 8, horizon_terms: int = 60):
    rng = random.Random(seed)
    tol = Fraction(1, 9)
    cert = {}
    ok = True
    for case, rule in (("a", "const:3"), ("b", "pow:3")):
        ctx = DirectSumContext(rule)
        d = make_sequence({"kind": "prop33_d", "orders": rule, "x": "1"})
        x = d.x
        rounds = horizon_terms // d.period
        tested = wrong = 0
        first_wrong = None
        continuous = []
        for chi in _ds_characters(ctx, M, rng, exhaustive_limit=3**8, samples=500):
            tested += 1
            rep = continuity_report(chi, d, rounds, tol=tol)
            expected = chi(x).is_zero
            if rep.tends_to_zero:
                continuous.append(chi)
            if rep.tends_to_zero != expected:
                wrong += 1
                if first_wrong is None:
                    first_wrong = {"character": chi.to_json(), "expected_continuous": expected, **rep.to_json()}
        try:
            kernel = radical_from_kernels(continuous, M) if continuous else None
            kernel_size = len(kernel) if kernel is not None else None
            kernel_ok = kernel is not None and set(kernel.elements) == {x * j for j in range(3)}
        except CapExceeded as exc:
            kernel_size, kernel_ok = f"cap exceeded: {exc}", False
        cert[case] = {
            "orders": rule,
            "characters_tested": tested,
            "misclassified": wrong,
            "first_misclassified": first_wrong,
            "kernel_size": kernel_size,
            "kernel_is_<g_1>": kernel_ok,
        }
        ok &= wrong == 0 and kernel_ok
    return ok, cert


# ---------------------------------------------------------------------------
# 8. faithful witness for a shifted sequence
# ---------------------------------------------------------------------------


def criterion_8(seed: int = 0, N: int = 200):
    p = 3
    x = prufer_make(p, 1, 1)
    square = lambda k: k * k
    chi = build_faithful_witness(x, square, N)
    G = PruferGroup(p)
    blocks = complete_blocks(square, N)
    r_ok = all(r_block(chi, a, b).value == x.value for a, b in blocks)
    fixes_x = eval_char(chi, x).value == x.value
    e1_nonzero = not eval_char(chi, G.e(1)).is_zero
    # k-th block [n_k, n_{k+1}) bounds the k-th term a_k = -x + e_{n_k}
    failures = []
    for k, (a, b) in enumerate(blocks, start=1):
        val = eval_char(chi, G.e(a) - x).norm()
        if val > Fraction(1, p ** (b - a - 1)):
            failures.append({"k": k, "n_k": a, "n_k+1": b, "norm": _frac(val), "bound": f"1/{p ** (b - a - 1)}"})
    # for reference: the same bound with the block's closing term a_{k+1}
    shifted_failures = sum(
        eval_char(chi, G.e(b) - x).norm() > Fraction(1, p ** (b - a - 1)) for a, b in blocks
    )
    ok = r_ok and fixes_x and e1_nonzero and not failures
    return ok, {
        "blocks": len(blocks),
        "r_block_equals_x": r_ok,
        "chi(x)=x": fixes_x,
        "chi(e_1)!=0": e1_nonzero,
        "norm_bound_failures": len(failures),
        "first_failures": failures[:3],
        "closing_term_bound_failures": shifted_failures,
    }


# ---------------------------------------------------------------------------
# 9. divisibility and torsion implications on small direct sums
# ---------------------------------------------------------------------------


def _random_ds_instance(rng: random.Random):
    orders = [rng.choice((2, 3, 4, 6, 8, 9, 12)) for _ in range(rng.randint(2, 4))]
    ctx = DirectSumContext("list:" + ",".join(map(str, orders)))
    elements = []
    for _ in range(rng.randint(3, 6)):
        coords = {i + 1: rng.randrange(n) for i, n in enumerate(orders)}
        elements.append(ds_make(ctx, coords))
    return ctx, SequenceHandle.from_list(ctx, elements, name="random")


def criterion_9(seed: int = 0, instances: int = 200):
    rng = random.Random(seed)
    div_checked = div_fail = 0
    impl_checked = impl_fail = 0
    first_fail = None
    for _ in range(instances):
        ctx, seq = _random_ds_instance(rng)
        length = seq.length
        l = rng.randint(1, min(3, length))
        m = rng.randint(1, length - l + 1)
        w = Window(m, length)
        orders = [seq(k).order() for k in range(1, length + 1)]
        ratio_rows = dict(cond_ii_tuples(orders, l, w))
        quot_rows = dict(cond_iii_tuples(seq, l, w))
        for idx, ratios in ratio_rows.items():
            for r, q in zip(ratios, quot_rows[idx]):
                div_checked += 1
                if q % r:
                    div_fail += 1
                    first_fail = first_fail or {"orders": ctx.rule, "tuple": idx, "ratio": r, "quotient_order": q}
        iii = min(max(v) for v in quot_rows.values())
        for n in (1, 2, 3, 4, 6):
            if iii > n * l:
                impl_checked += 1
                if not cond_iv_check(seq, l, n, w).holds:
                    impl_fail += 1
                    first_fail = first_fail or {"orders": ctx.rule, "l": l, "n": n, "window": [w.m, w.K], "cond_iii_inf": iii}
    ok = div_fail == 0 and impl_fail == 0
    return ok, {
        "instances": instances,
        "divisibility_checked": div_checked,
        "divisibility_failures": div_fail,
        "implication_checked": impl_checked,
        "implication_failures": impl_fail,
        "first_failure": first_fail,
    }


# ---------------------------------------------------------------------------
# 10. window monotonicity and witness soundness
# ---------------------------------------------------------------------------


def _random_sequence(rng: random.Random) -> SequenceHandle:
    if rng.random() < 0.5:
        p = rng.choice((2, 3, 5))
        elems = [prufer_make(p, rng.randrange(p**4), rng.randint(0, 4)) for _ in range(6)]
        return SequenceHandle.from_list(PruferGroup(p), elems)
    ctx, seq = _random_ds_instance(rng)
    return seq


def criterion_10(seed: int = 0, cases: int = 1000):
    rng = random.Random(seed)
    fails = {"window": 0, "weight": 0, "soundness": 0}
    for _ in range(cases):
        seq = _random_sequence(rng)
        length = seq.length
        l = rng.randint(1, 3)
        m = rng.randint(1, length)
        K = rng.randint(m, min(length, m + 3))
        m2 = rng.randint(m, K)
        w = Window(m, K)
        big = enum_Alm(seq, l, w)
        if not set(enum_Alm(seq, l, Window(m2, K))) <= set(big):
            fails["window"] += 1
        if not set(big) <= set(enum_Alm(seq, l + 1, w)):
            fails["weight"] += 1
        if not all(wit.is_sound(seq, l, w) and wit.element == elem for elem, wit in big.items()):
            fails["soundness"] += 1
    return not any(fails.values()), {"cases": cases, "failures": fails}


CRITERIA: dict[int, tuple[str, float, Callable]] = {
    1: ("-e_1 + e_n: identity and membership at every m", 5, criterion_1),
    2: ("canonical forms match exhaustive table; uniqueness", 60, criterion_2),
    3: ("canonical-support order bounds, zero violations", 120, criterion_3),
    4: ("block decomposition identity for truncated characters", 5, criterion_4),
    5: ("continuous multiples of chi_1 along b_1, e_1, b_2, e_2, ...", 60, criterion_5),
    6: ("common kernel of {3 chi_1} on A[3^6] is <1/3>", 1, criterion_6),
    7: ("direct-sum continuity classification and common kernel", 60, criterion_7),
    8: ("faithful witness for -1/3 + e_{k^2}", 5, criterion_8),
    9: ("ratio divides quotient order; quotient bound forces trivial torsion", 60, criterion_9),
    10: ("window monotonicity and witness soundness", 30, criterion_10),
}


def run_criterion(cid: int, seed: int = 0) -> CriterionResult:
    title, limit, fn = CRITERIA[cid]
    t0 = time.perf_counter()
    passed, cert = fn(seed)
    elapsed = time.perf_counter() - t0
    return CriterionResult(cid, title, bool(passed) and elapsed <= limit, elapsed, limit,
                           {**cert, "within_time_limit": elapsed <= limit})
