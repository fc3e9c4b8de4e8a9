"""Reference computations that share no code with the library's normal forms."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


def det(rows) -> int:
    """Integer determinant by fraction-free Bareiss elimination."""
    M = [list(map(int, r)) for r in rows]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def determinantal_divisors(rows, m, n):
    """``D_k`` = gcd of all k x k minors, for k = 1 .. min(m, n)."""
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = gcd(g, det([[rows[r][c] for c in cs] for r in rs]))
        out.append(g)
    return out


def int_elementary_divisors(rows, m, n):
    """Elementary divisors over Z from determinantal divisors: d_k = D_k / D_{k-1}."""
    D = determinantal_divisors(rows, m, n)
    out, prev = [], 1
    for Dk in D:
        if Dk == 0:
            out.append(0)
            continue
        out.append(Dk // prev)
        prev = Dk
    return out


def vectors(n, k):
    return itertools.product(range(n), repeat=k)


def matvec_mod(rows, v, n):
    return tuple(sum(a * b for a, b in zip(r, v)) % n for r in rows)


def column_span_mod(rows, m, k, n):
    """All vectors A x over Z/n, enumerated."""
    return {matvec_mod(rows, x, n) for x in vectors(n, k)} if k else {tuple([0] * m)}


def cokernel_order_mod(rows, m, k, n):
    return n**m // len(column_span_mod(rows, m, k, n))


def frac(x):
    return Fraction(x)
