import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from puremin.complexes import Bounded, ChainComplex
from puremin.finite import (
    FiniteComplex,
    FiniteMap,
    FiniteModule,
    all_homs,
    brute_homology_orders,
    brute_solve_exists,
    subcomplex_sequence,
)
from puremin.harness.gallery import dold
from puremin.linalg import solve_linear
from puremin.matrix import Matrix
from puremin.modules import FPModule
from puremin.rings import ZZ, IntMod

# subgroup counts of small abelian groups, from the standard tables
SUBGROUP_COUNTS = [
    ((4,), 3),
    ((6,), 4),
    ((2, 2), 5),
    ((2, 4), 8),
    ((4, 4), 15),
    ((2, 2, 2), 16),
    ((3, 3), 6),
    ((9, 9), 23),
]


def cyclic_sum(divisors):
    n = math.lcm(*divisors)
    g = len(divisors)
    rel = [[d if r == j else 0 for r in range(g)] for j, d in enumerate(divisors)]
    return FiniteModule(n, g, rel)


@pytest.mark.parametrize("divisors,count", SUBGROUP_COUNTS, ids=str)
def test_subgroup_counts(divisors, count):
    M = cyclic_sum(divisors)
    assert len(M) == math.prod(divisors)
    assert len(M.submodules) == count
    assert all(M.zero in S for S in M.submodules)


def test_purity_of_small_submodules():
    Z4 = cyclic_sum((4,))
    two = Z4.span_of([Z4.element((2,))])
    assert not Z4.is_pure_submodule(two) and not Z4.is_summand(two)
    M = cyclic_sum((2, 4))
    first = M.span_of([M.generator(0)])
    assert M.is_pure_submodule(first) and M.is_summand(first)
    # the diagonal (1, 2) generates a pure cyclic subgroup of order 2 in Z/2 + Z/4
    diag = M.span_of([M.element((1, 2))])
    assert len(diag) == 2 and M.is_summand(diag)
    # 2 * (second generator) is not pure: it is divisible by 2 in M but not in itself
    inner = M.span_of([M.scale(2, M.generator(1))])
    assert not M.is_pure_submodule(inner)


@pytest.mark.parametrize("a,b", [(4, 6), (4, 4), (6, 9), (12, 8), (5, 4)])
def test_hom_counts(a, b):
    n = math.lcm(a, b)
    A, B = FiniteModule(n, 1, [[a]]), FiniteModule(n, 1, [[b]])
    assert sum(1 for _ in all_homs(A, B)) == math.gcd(a, b)


def test_map_kernel_and_image():
    M = cyclic_sum((4,))
    f = FiniteMap(M, M, [M.element((2,))])
    assert f.is_well_defined()
    assert len(f.image()) == 2 and len(f.kernel()) == 2
    bad = FiniteMap(FiniteModule(4, 1, [[2]]), M, [M.element((1,))])
    assert not bad.is_well_defined()


@given(st.sampled_from([4, 6]), st.data())
def test_solve_exists_matches_solver(n, data):
    R = IntMod(n)
    ints = st.integers(0, n - 1)
    A = Matrix(R, data.draw(st.lists(st.lists(ints, min_size=2, max_size=2), min_size=2, max_size=2)), 2, 2)
    B = Matrix(R, data.draw(st.lists(st.lists(ints, min_size=1, max_size=1), min_size=2, max_size=2)), 2, 1)
    assert brute_solve_exists(A, B) == (solve_linear(A, B) is not None)


def test_dold_subcomplexes():
    F = FiniteComplex(dold())
    subs = F.subcomplexes()
    assert sorted(len(P[0]) for P in subs) == [1, 2, 4]
    assert [F.sub_is_acyclic(P) for P in sorted(subs, key=lambda P: len(P[0]))] == [True, False, True]
    full = max(subs, key=lambda P: len(P[0]))
    assert not F.sub_is_pure_acyclic(full) and not F.sub_is_contractible(full)
    assert brute_homology_orders(dold()) == {0: 1}


def test_disk_subcomplex_and_complement():
    R = IntMod(4)
    D = ChainComplex.disk(FPModule.free(R, 1), 1)
    F = FiniteComplex(D)
    subs = F.subcomplexes()
    full = {i: frozenset(range(len(F.mods[i]))) for i in F.degrees}
    assert F.sub_is_contractible(full) and F.sub_is_pure_acyclic(full)
    # (x, y) with 1 * x in y: pairs of subgroups P_1 <= P_0 of Z/4, which form a chain of 3
    assert len(subs) == 6
    zero_in_top = next(P for P in subs if len(P[1]) == 1 and len(P[0]) == 4)
    # a complement would need Q_1 = Z/4 and Q_0 = 0, which d does not preserve
    assert F.complex_complement(zero_in_top, subs) is None
    bottom = next(P for P in subs if len(P[1]) == 1 and len(P[0]) == 1)
    assert F.complex_complement(bottom, subs) == full
    half = next(P for P in subs if len(P[1]) == 2 and len(P[0]) == 2)
    s = subcomplex_sequence(F, half)
    assert not s.validate()


def test_homology_orders_of_koszul_mod():
    R = IntMod(8)
    F = FPModule.free(R, 1)
    K = ChainComplex(R, Bounded(0, 1), {0: F, 1: F}, {1: Matrix(R, [[2]])})
    assert brute_homology_orders(K) == {0: 2, 1: 2}


def test_enumeration_limit():
    with pytest.raises(ValueError):
        FiniteModule(4, 7, [])
    with pytest.raises(ValueError):
        FiniteModule.of(FPModule.free(ZZ, 1))


def test_element_indexing_is_a_group():
    M = cyclic_sum((2, 4))
    els = range(len(M))
    for a, b in itertools.product(els, els):
        assert M.add(a, b) == M.add(b, a)
    assert all(M.add(a, M.zero) == a for a in els)
