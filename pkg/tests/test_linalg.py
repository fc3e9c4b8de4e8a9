import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import column_span_mod, cokernel_order_mod, det, int_elementary_divisors, matvec_mod
from puremin.linalg import LinearSystem, elementary_divisors, inverse, kernel, snf, solve_linear
from puremin.matrix import Matrix
from puremin.rings import ZZ, IntInvert, IntLocalAt, IntMod


def int_rows(max_dim=4, bound=12):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def strip(d, primes):
    for p in primes:
        while d and d % p == 0:
            d //= p
    return d


def p_part(d, p):
    out = 1
    while d and d % p == 0:
        d //= p
        out *= p
    return out if d else 0


@given(int_rows())
def test_snf_over_integers_matches_determinantal_divisors(rows):
    m, n = len(rows), len(rows[0])
    A = Matrix(ZZ, rows, m, n)
    S = snf(A)
    assert S.U @ A @ S.V == S.D
    assert abs(det(S.U.data)) == 1 and abs(det(S.V.data)) == 1
    assert list(S.divisors) == int_elementary_divisors(rows, m, n)
    nz = [d for d in S.divisors if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(d >= 0 for d in S.divisors)


@given(int_rows(max_dim=3, bound=20), st.sampled_from([4, 6, 8, 9, 12]))
def test_snf_over_z_mod_n_counts_cokernel(rows, n):
    m, k = len(rows), len(rows[0])
    R = IntMod(n)
    A = Matrix(R, rows, m, k)
    S = snf(A)
    assert S.U @ A @ S.V == S.D
    assert all(d == 0 or n % d == 0 for d in S.divisors)
    order = n ** (m - min(m, k))
    for d in S.divisors:
        order *= d if d else n
    assert order == cokernel_order_mod([[x % n for x in r] for r in rows], m, k, n)
    assert S.divisors == elementary_divisors(A)


@given(int_rows())
def test_snf_over_localizations(rows):
    m, n = len(rows), len(rows[0])
    base = int_elementary_divisors(rows, m, n)
    R = IntInvert((5,))
    assert list(elementary_divisors(Matrix(R, rows, m, n))) == [strip(d, (5,)) for d in base]
    L = IntLocalAt(3)
    S = snf(Matrix(L, rows, m, n))
    assert S.U @ Matrix(L, rows, m, n) @ S.V == S.D
    assert list(S.divisors) == [p_part(d, 3) for d in base]


@given(int_rows(max_dim=3, bound=6), st.sampled_from([4, 6, 9]), st.data())
def test_solve_linear_agrees_with_enumeration(rows, n, data):
    m, k = len(rows), len(rows[0])
    R = IntMod(n)
    A = Matrix(R, rows, m, k)
    b = data.draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    span = column_span_mod([[x % n for x in r] for r in rows], m, k, n)
    X = solve_linear(A, Matrix.column_vector(R, b))
    assert (X is not None) == (tuple(b) in span)
    if X is not None:
        assert A @ X == Matrix.column_vector(R, b)


@given(int_rows(), st.data())
def test_solve_linear_recovers_constructed_solutions(rows, data):
    m, n = len(rows), len(rows[0])
    for ring in (ZZ, IntInvert((5,)), IntLocalAt(3)):
        A = Matrix(ring, rows, m, n)
        x0 = data.draw(st.lists(st.integers(-9, 9), min_size=n, max_size=n))
        B = A @ Matrix.column_vector(ring, x0)
        X = solve_linear(A, B)
        assert X is not None and A @ X == B


@given(int_rows(max_dim=3, bound=6), st.sampled_from([4, 6, 8]))
def test_kernel_over_z_mod_n_is_complete(rows, n):
    m, k = len(rows), len(rows[0])
    R = IntMod(n)
    A = Matrix(R, rows, m, k)
    K = kernel(A)
    assert (A @ K).is_zero()
    red = [[x % n for x in r] for r in rows]
    brute = {x for x in itertools.product(range(n), repeat=k) if not any(matvec_mod(red, x, n))}
    assert column_span_mod(K.data, k, K.cols, n) == brute


@given(int_rows())
def test_kernel_over_integers_is_saturated(rows):
    m, n = len(rows), len(rows[0])
    A = Matrix(ZZ, rows, m, n)
    K = kernel(A)
    assert (A @ K).is_zero()
    rank = sum(1 for d in int_elementary_divisors(rows, m, n) if d)
    assert K.cols == n - rank
    if K.cols:
        # a saturated sublattice has all elementary divisors 1
        assert int_elementary_divisors(K.data, n, K.cols) == [1] * K.cols


@given(st.integers(1, 4), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)), max_size=12))
def test_inverse_of_unimodular(n, ops):
    M = Matrix.identity(ZZ, n)
    for i, j, c in ops:
        i, j = i % n, j % n
        if i != j:
            E = [[int(a == b) for b in range(n)] for a in range(n)]
            E[i][j] = c
            M = Matrix(ZZ, E, n, n) @ M
    assert M @ inverse(M) == Matrix.identity(ZZ, n)


def test_inverse_rejects_singular():
    with pytest.raises(ValueError):
        inverse(Matrix(ZZ, [[2]], 1, 1))
    assert inverse(Matrix(IntInvert((5,)), [[5]], 1, 1)).data[0][0] * 5 == 1


@given(st.data())
def test_linear_system_solves_sandwich_equations(data):
    ring = IntMod(6)
    ints = st.integers(0, 5)
    mat = lambda r, c: Matrix(ring, data.draw(st.lists(st.lists(ints, min_size=c, max_size=c), min_size=r, max_size=r)), r, c)  # noqa: E731
    L, X0, Rm = mat(2, 3), mat(3, 2), mat(2, 2)
    C = L @ X0 @ Rm
    sys = LinearSystem(ring)
    sys.unknown("X", 3, 2)
    sys.equation([(L, "X", Rm)], C)
    sol = sys.solve()
    assert sol is not None and L @ sol["X"] @ Rm == C


def test_linear_system_detects_inconsistency():
    sys = LinearSystem(ZZ)
    sys.unknown("X", 1, 1)
    sys.equation([(Matrix(ZZ, [[2]], 1, 1), "X", None)], Matrix(ZZ, [[1]], 1, 1))
    assert sys.solve() is None
