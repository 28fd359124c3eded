"""Integer lattices between diag(n) Z^M and Z^M.

Subgroups of G = Z/n_1 + ... + Z/n_M correspond to lattices L with
diag(n) Z^M <= L <= Z^M. Since diag(n) Z^M lies in every such L, vector
coordinates may be reduced mod n_i at any time without changing L.
"""

from __future__ import annotations

import math
from typing import Sequence


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def triangular_basis(gens: Sequence[Sequence[int]], moduli: Sequence[int]) -> list[list[int]]:
    """Lower-triangular basis of the lattice spanned by gens and diag(moduli).

    Basis vector i has zeros in coordinates < i and a positive pivot
    dividing moduli[i] at coordinate i.
    """
    M = len(moduli)
    pool = [[c % moduli[j] for j, c in enumerate(v)] for v in gens]
    basis = []
    for i in range(M):
        pivot = [0] * M
        pivot[i] = moduli[i]
        rest = []
        for v in pool:
            if v[i] == 0:
                rest.append(v)
                continue
            g, s, t = _xgcd(pivot[i], v[i])
            a, b = pivot[i] // g, v[i] // g
            new_pivot = [s * x + t * y for x, y in zip(pivot, v)]
            other = [a * y - b * x for x, y in zip(pivot, v)]
            pivot = new_pivot
            rest.append(other)
        # reduce coordinates after i; coordinate i of `rest` is now zero
        pivot = [pivot[j] if j <= i else pivot[j] % moduli[j] for j in range(M)]
        basis.append(pivot)
        pool = [[0 if j <= i else x % moduli[j] for j, x in enumerate(v)] for v in rest]
        pool = [v for v in pool if any(v)]
    return basis


def kernel_of_form(basis: list[list[int]], values: Sequence[int], N: int) -> list[list[int]]:
    """Generators of {v in L : f(v) = 0 mod N} where f(basis[k]) = values[k].

    Column operations fold the values into a single entry g; the other
    transformed basis vectors lie in the kernel, and the folded vector
    enters with multiplier N / gcd(g, N).
    """
    vecs = [list(b) for b in basis]
    vals = [v % N for v in values]
    acc_vec = [0] * len(vecs[0]) if vecs else []
    acc_val = 0
    gens = []
    for vec, val in zip(vecs, vals):
        if val == 0:
            gens.append(vec)
            continue
        if acc_val == 0:
            acc_vec, acc_val = vec, val
            continue
        g, s, t = _xgcd(acc_val, val)
        a, b = acc_val // g, val // g
        gens.append([a * y - b * x for x, y in zip(acc_vec, vec)])
        acc_vec = [s * x + t * y for x, y in zip(acc_vec, vec)]
        acc_val = g
    if acc_val:
        mult = N // math.gcd(acc_val, N)
        gens.append([mult * x for x in acc_vec])
    return gens


def index_in_ambient(basis: list[list[int]], moduli: Sequence[int]) -> int:
    """|L / diag(moduli) Z^M|, the size of the corresponding subgroup."""
    size = 1
    for i, b in enumerate(basis):
        size *= moduli[i] // b[i]
    return size
