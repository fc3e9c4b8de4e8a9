"""Smith normal form, linear solving and kernels over the supported rings.

Every ring reduces to elimination over the integers:

* ``Int`` runs the integer elimination directly;
* ``IntMod(n)`` runs the same elimination on integer lifts with every
  entry reduced modulo ``n`` as it is produced (the row and column moves
  are unimodular over Z, hence invertible modulo n);
* the localizations first clear denominators row by row (a unit scaling)
  and then run the integer elimination.

Pivots are chosen as the entry of smallest absolute value, ties broken by
position, which keeps coefficient growth in check.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .matrix import Matrix
from .rings import RingSpec


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with ``U``, ``V`` invertible and ``D`` diagonal."""

    U: Matrix
    D: Matrix
    V: Matrix
    divisors: tuple

    def rank(self, ring: RingSpec) -> int:
        return sum(1 for d in self.divisors if d != 0)


def _normalize_pivot(A, U, t, modulus, rhs):
    """Replace the pivot A[t][t] by its canonical associate gcd(a, n) (modular case)."""
    a = A[t][t]
    g = gcd(a, modulus)
    if g == a:
        return
    m = modulus // g
    u = (a // g) % m
    while gcd(u, modulus) != 1:
        u += m
    inv = pow(u, -1, modulus)
    A[t] = [x * inv % modulus for x in A[t]]
    if U is not None:
        U[t] = [x * inv % modulus for x in U[t]]
    if rhs is not None:
        rhs[t] = [x * inv % modulus for x in rhs[t]]


def _int_smith(A, m, n, modulus=None, want_u=True, want_v=True, rhs=None):
    """In-place integer Smith elimination of the ``m x n`` list-of-lists ``A``.

    Returns ``(U, V)`` (or None for untracked factors).  ``rhs`` rows, when
    given, receive the same row operations as ``A`` (so they end up as
    ``U @ rhs`` without forming ``U``).
    """
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if want_u else None
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if want_v else None
    mod = modulus

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]
        if rhs is not None:
            rhs[i], rhs[j] = rhs[j], rhs[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        rs = A[src]
        if mod:
            A[dst] = [(a - q * b) % mod for a, b in zip(A[dst], rs)]
        else:
            A[dst] = [a - q * b for a, b in zip(A[dst], rs)]
        if U is not None:
            us = U[src]
            if mod:
                U[dst] = [(a - q * b) % mod for a, b in zip(U[dst], us)]
            else:
                U[dst] = [a - q * b for a, b in zip(U[dst], us)]
        if rhs is not None:
            bs = rhs[src]
            if mod:
                rhs[dst] = [(a - q * b) % mod for a, b in zip(rhs[dst], bs)]
            else:
                rhs[dst] = [a - q * b for a, b in zip(rhs[dst], bs)]

    def add_col(dst, src, q):
        # col_dst -= q * col_src
        if mod:
            for r in A:
                if r[src]:
                    r[dst] = (r[dst] - q * r[src]) % mod
        else:
            for r in A:
                if r[src]:
                    r[dst] -= q * r[src]
        if V is not None:
            if mod:
                for r in V:
                    if r[src]:
                        r[dst] = (r[dst] - q * r[src]) % mod
            else:
                for r in V:
                    if r[src]:
                        r[dst] -= q * r[src]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                a = row[j]
                if a:
                    v = a if a > 0 else -a
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        if mod:
            _normalize_pivot(A, U, t, mod, rhs)

        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                a = A[i][t]
                if a:
                    add_row(i, t, a // p)
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                a = A[t][j]
                if a:
                    add_col(j, t, a // p)
                    if A[t][j]:
                        clean = False
            if not clean:
                # move the smallest leftover in row/column t into the pivot
                best = None
                for i in range(t + 1, m):
                    a = abs(A[i][t])
                    if a and (best is None or a < best[0]):
                        best = (a, i, None)
                for j in range(t + 1, n):
                    a = abs(A[t][j])
                    if a and (best is None or a < best[0]):
                        best = (a, None, j)
                _, i, j = best
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                if mod:
                    _normalize_pivot(A, U, t, mod, rhs)
                continue
            # divisibility of the trailing block by the pivot
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row_t += row_bad, then the column sweep produces a smaller remainder
            add_row(t, bad, -1)
        t += 1

    if not mod:
        for i in range(min(m, n)):
            if A[i][i] < 0:
                A[i] = [-x for x in A[i]]
                if U is not None:
                    U[i] = [-x for x in U[i]]
                if rhs is not None:
                    rhs[i] = [-x for x in rhs[i]]
    return U, V


def _to_integer_rows(A: Matrix):
    """Scale each row of a localization matrix by a unit clearing its denominators."""
    ring = A.ring
    scales = []
    rows = []
    for r in A.data:
        s = ring.to_integer_row_scale(r)
        scales.append(s)
        rows.append([int(x * s) for x in r])
    return rows, scales


def _prepare(A: Matrix):
    ring = A.ring
    if ring.kind == "IntMod":
        return [list(r) for r in A.data], None, ring.n
    if ring.kind == "Int":
        return [list(r) for r in A.data], None, None
    rows, scales = _to_integer_rows(A)
    return rows, scales, None


def snf(A: Matrix) -> SmithForm:
    """Smith normal form ``U @ A @ V == D`` with canonical divisors.

    Divisors satisfy d1 | d2 | ... and are canonical associates:
    nonnegative over Z, the divisor of n representing the ideal over Z/n,
    and the part prime to the inverted primes (resp. the power of p) over
    the localizations.  Zero divisors trail.
    """
    ring = A.ring
    m, n = A.shape
    rows, scales, mod = _prepare(A)
    U, V = _int_smith(rows, m, n, modulus=mod)
    if scales is not None:
        U = [[x * s for x, s in zip(r, scales)] for r in U]
        # canonical associates: strip unit factors from the diagonal
        for i in range(min(m, n)):
            d = rows[i][i]
            if d:
                c, u = ring.associate(d)
                if u != 1:
                    inv = ring.inverse(u)
                    rows[i] = [ring.mul(x, inv) for x in rows[i]]
                    U[i] = [ring.mul(x, inv) for x in U[i]]
    Um = Matrix(ring, U, m, m)
    Dm = Matrix(ring, rows, m, n)
    Vm = Matrix(ring, V, n, n)
    divisors = tuple(Dm.data[i][i] for i in range(min(m, n)))
    return SmithForm(Um, Dm, Vm, divisors)


def elementary_divisors(A: Matrix) -> tuple:
    ring = A.ring
    m, n = A.shape
    rows, scales, mod = _prepare(A)
    _int_smith(rows, m, n, modulus=mod, want_u=False, want_v=False)
    out = []
    for i in range(min(m, n)):
        d = rows[i][i]
        out.append(ring.associate(ring.elem(d))[0] if d else 0)
    return tuple(out)


def has_unit_divisor(A: Matrix) -> bool:
    ring = A.ring
    if any(ring.is_unit(x) for r in A.data for x in r):
        return True
    if ring.is_local:
        return False
    divs = elementary_divisors(A)
    return bool(divs) and ring.is_unit(divs[0])


def solve_linear(A: Matrix, B: Matrix) -> Matrix | None:
    """Some ``X`` with ``A @ X == B``, or None when no solution exists over the ring."""
    if A.ring != B.ring:
        raise ValueError("solve_linear: ring mismatch")
    if A.rows != B.rows:
        raise ValueError(f"solve_linear: shape mismatch {A.shape} vs {B.shape}")
    ring = A.ring
    m, n = A.shape
    k = B.cols
    rows, scales, mod = _prepare(A)
    if scales is not None:
        rhs = [[ring.mul(x, s) for x in r] for r, s in zip(B.data, scales)]
    else:
        rhs = [list(r) for r in B.data]
    _, V = _int_smith(rows, m, n, modulus=mod, want_u=False, rhs=rhs)
    Y = [[0] * k for _ in range(n)]
    for i in range(m):
        d = rows[i][i] if i < min(m, n) else 0
        for j in range(k):
            c = ring.elem(rhs[i][j])
            q = ring.divide(c, ring.elem(d))
            if q is None:
                return None
            if i < n:
                Y[i][j] = q
    return Matrix(ring, V, n, n) @ Matrix(ring, Y, n, k)


def kernel(A: Matrix) -> Matrix:
    """Matrix whose columns generate {x : A @ x == 0}."""
    ring = A.ring
    m, n = A.shape
    rows, scales, mod = _prepare(A)
    _, V = _int_smith(rows, m, n, modulus=mod, want_u=False)
    cols = []
    for j in range(n):
        d = rows[j][j] if j < min(m, n) else 0
        a = ring.annihilator(ring.elem(d))
        if a != 0:
            cols.append([ring.mul(V[i][j], a) for i in range(n)])
    return Matrix(ring, [[c[i] for c in cols] for i in range(n)], n, len(cols))


def in_column_span(A: Matrix, b) -> bool:
    B = b if isinstance(b, Matrix) else Matrix.column_vector(A.ring, b)
    return solve_linear(A, B) is not None


def inverse(A: Matrix) -> Matrix:
    if not A.is_square():
        raise ValueError("inverse of a non-square matrix")
    X = solve_linear(A, Matrix.identity(A.ring, A.rows))
    if X is None:
        raise ValueError("matrix is not invertible over the ring")
    return X


def is_invertible(A: Matrix) -> bool:
    return A.is_square() and A.ring.is_unit(A.determinant()) if A.rows else A.is_square()


class LinearSystem:
    """Collects matrix unknowns and linear equations ``sum L @ X @ R == C``.

    Used for retraction, homotopy and chain-map searches: each unknown is a
    matrix block, each equation a matrix identity; everything is vectorized
    row-major into one call of :func:`solve_linear`.
    """

    def __init__(self, ring: RingSpec):
        self.ring = ring
        self.blocks = {}
        self.nvars = 0
        self.rows = []
        self.rhs = []

    def unknown(self, name, rows, cols):
        if name in self.blocks:
            raise KeyError(f"duplicate unknown {name!r}")
        self.blocks[name] = (self.nvars, rows, cols)
        self.nvars += rows * cols
        return name

    def equation(self, terms, rhs: Matrix):
        """``terms`` is a list of ``(L, name, R)``; ``None`` stands for an identity."""
        s, t = rhs.shape
        eqs = [dict() for _ in range(s * t)]
        ring = self.ring
        for L, name, R in terms:
            off, p, q = self.blocks[name]
            Ld = L.data if L is not None else None
            Rd = R.data if R is not None else None
            if L is not None and L.shape != (s, p):
                raise ValueError(f"left factor {L.shape} does not fit unknown {name} {p}x{q} in equation {s}x{t}")
            if R is not None and R.shape != (q, t):
                raise ValueError(f"right factor {R.shape} does not fit unknown {name} {p}x{q} in equation {s}x{t}")
            for i in range(s):
                lrow = [(a, Ld[i][a]) for a in range(p) if Ld[i][a] != 0] if Ld is not None else [(i, 1)]
                for a, la in lrow:
                    for b in range(q):
                        if Rd is None:
                            js = ((b, 1),)
                        else:
                            rb = Rd[b]
                            js = [(j, rb[j]) for j in range(t) if rb[j] != 0]
                        var = off + a * q + b
                        for j, rj in js:
                            e = eqs[i * t + j]
                            e[var] = ring.add(e.get(var, 0), ring.mul(la, rj))
        self.rows.extend(eqs)
        self.rhs.extend(x for r in rhs.data for x in r)

    def solve(self):
        ring = self.ring
        neq = len(self.rows)
        if self.nvars == 0:
            if any(x != 0 for x in self.rhs):
                return None
            return {name: Matrix.zeros(ring, p, q) for name, (_, p, q) in self.blocks.items()}
        data = [[0] * self.nvars for _ in range(neq)]
        for i, e in enumerate(self.rows):
            row = data[i]
            for v, c in e.items():
                row[v] = c
        A = Matrix(ring, data, neq, self.nvars, canonical=True)
        b = Matrix(ring, [[x] for x in self.rhs], neq, 1, canonical=True)
        x = solve_linear(A, b)
        if x is None:
            return None
        vals = [r[0] for r in x.data]
        out = {}
        for name, (off, p, q) in self.blocks.items():
            out[name] = Matrix(ring, [vals[off + a * q : off + (a + 1) * q] for a in range(p)], p, q, canonical=True)
        return out
