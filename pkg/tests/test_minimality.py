import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import det
from puremin.complexes import ChainComplex, homology, is_contractible, validate_complex
from puremin.errors import Unsupported
from puremin.harness.gallery import disk, dold, exa_f, koszul, koszul22
from puremin.harness.generators import (
    GenProfile,
    acyclic_piece,
    free_random,
    gen_complex,
    gen_disk_sphere,
    periodic_two_step,
    rand_module,
)
from puremin.minimality import (
    diagnose,
    dimension,
    free_resolution,
    is_minimal,
    is_pure_minimal,
    is_split_minimal,
    pure_minimal_replacement,
    reduce,
    witness_homotopy,
)
from puremin.modules import FPModule
from puremin.rings import ZZ, IntInvert, IntLocalAt, IntMod

SEEDS = st.integers(0, 2**32)
REDUCE_RINGS = [ZZ, IntMod(4), IntMod(6), IntMod(12), IntInvert((5,)), IntLocalAt(3)]


def unit_entries(C):
    return [x for i in C.diff_degrees() for r in C.d(i).data for x in r if x != 0 and C.ring.is_unit(x)]


def check_reduction(C):
    tr = reduce(C)
    assert tr.verify() == []
    assert tr.replay()
    for i in C.degrees():
        assert homology(tr.reduced, i).canonical_form == homology(C, i).canonical_form
    assert is_contractible(tr.split_part).contractible
    assert is_split_minimal(tr.reduced).value is True
    again = reduce(tr.reduced)
    assert len(again.moves) == 0 and again.reduced.same_as(tr.reduced)
    return tr


@given(SEEDS, st.sampled_from(REDUCE_RINGS))
def test_reduction_is_sound(seed, ring):
    rng = random.Random(seed)
    check_reduction(free_random(rng, ring, rng.randint(-2, 1), rng.randint(1, 4), 3, 9))


@given(SEEDS, st.sampled_from([ZZ, IntMod(4), IntMod(9), IntInvert((5,))]))
def test_disk_sphere_sum_reduces_to_its_spheres(seed, ring):
    C, content = gen_disk_sphere(GenProfile(ring=ring, seed=seed, max_length=4, max_rank=3))
    tr = check_reduction(C)
    disk_rank = sum(2 * r for _, r in content.disks)
    split_rank = sum(tr.split_part.rank(i) for i in tr.split_part.degrees())
    if ring.kind == "IntMod":
        # over a local ring the disks are exactly the contractible part
        assert split_rank == disk_rank
        assert unit_entries(tr.reduced) == []
    else:
        # R -2-> R plus R -3-> R has Smith form (1, 6), so more may split off
        assert split_rank >= disk_rank


def test_disk_reduces_to_zero():
    tr = check_reduction(disk(ZZ, 1))
    assert tr.reduced.is_zero() and len(tr.moves) == 1


def test_reduce_rejects_non_free():
    R = ZZ
    C = ChainComplex.sphere(FPModule.cyclic(R, 2), 0)
    with pytest.raises(Unsupported):
        reduce(C)
    tr = reduce(dold())
    assert tr.moves == [] and tr.verify() == []


def _component_is_unit(C, sigma, i):
    ring = C.ring
    n = C.rank(i)
    s_i = sigma.get(i) if not C.periodic else sigma.get(0)
    s_p = sigma.get(i - 1) if not C.periodic else sigma.get(-1, sigma.get(0))
    M = [[int(a == b) for b in range(n)] for a in range(n)]
    if s_i is not None and C.rank(i + 1):
        A = C.d(i + 1) @ s_i
        M = [[ring.add(M[a][b], A.data[a][b]) for b in range(n)] for a in range(n)]
    if s_p is not None and C.rank(i - 1):
        B = s_p @ C.d(i)
        M = [[ring.add(M[a][b], B.data[a][b]) for b in range(n)] for a in range(n)]
    return ring.is_unit(ring.elem(det(M)))


def test_exa_f_witness_is_one():
    C = exa_f()
    res = is_minimal(C)
    assert res.status == "no"
    assert {k: v.data for k, v in res.witness.items()} == {0: ((1,),)}
    # 1 + 2 * 1 = 3 is not a unit once only 5 is inverted
    assert not _component_is_unit(C, res.witness, res.degree)
    h = witness_homotopy(C, res)
    assert h is not None and h.verify()


def test_dold_is_minimal_by_exhaustion():
    res = is_minimal(dold())
    assert res.status == "yes"


@pytest.mark.parametrize("ring", [IntMod(4), IntMod(6), IntMod(9)], ids=str)
def test_minimality_witnesses_are_genuine(ring):
    for seed in range(25):
        rng = random.Random(seed)
        C = free_random(rng, ring, 0, rng.randint(1, 3), 2, 9)
        res = is_minimal(C)
        assert res.status in ("yes", "no")
        if res.status == "no":
            assert not _component_is_unit(C, res.witness, res.degree)
        sm = is_split_minimal(C).value
        if res.status == "yes":
            assert sm is True
        # over Z/p^k a free complex is minimal iff split-minimal
        if ring.n in (4, 9):
            assert (res.status == "yes") == sm


def test_local_ring_free_complexes():
    L = IntLocalAt(3)
    assert is_minimal(koszul(L, 3)).status == "yes"
    assert is_minimal(koszul(L, 2)).status == "no"
    # over the integers 1 + 2 = 3 is not a unit, so K(2) is split-minimal but not minimal
    res = is_minimal(koszul(ZZ, 2))
    assert res.status == "no" and not _component_is_unit(koszul(ZZ, 2), res.witness, res.degree)
    assert is_split_minimal(koszul(ZZ, 2)).value is True


@given(SEEDS, st.sampled_from([ZZ, IntMod(4), IntMod(6), IntInvert((5,))]))
@settings(max_examples=25)
def test_diagnose_implications(seed, ring):
    C = gen_complex(GenProfile(ring=ring, seed=seed, max_length=3, max_rank=2))
    f = diagnose(C).flags()
    assert f["split_minimal"] == f["pure_minimal"]
    if f["contractible"]:
        assert f["pure_acyclic"] and f["acyclic"]
    if f["pure_acyclic"]:
        assert f["acyclic"]
    if f["minimal"] == "yes":
        assert f["split_minimal"] is True


def test_gallery_diagnoses():
    f = diagnose(dold()).flags()
    assert f == {"acyclic": True, "pure_acyclic": False, "contractible": False,
                 "split_minimal": True, "pure_minimal": True, "minimal": "yes"}
    f = diagnose(exa_f()).flags()
    assert (f["split_minimal"], f["pure_minimal"], f["minimal"]) == (True, True, "no")
    f = diagnose(koszul22()).flags()
    assert not f["acyclic"] and f["split_minimal"] is True
    assert is_pure_minimal(periodic_two_step(IntMod(6), 2, 3)).value is False


def torsion_free(M):
    return not M.canonical_form.divisors


def test_integer_projective_dimension_matches_torsion():
    rng = random.Random(2024)
    for _ in range(40):
        M = rand_module(rng, ZZ, 3, 9)
        d = dimension(M).value
        assert d in (0, 1, "-infinity")
        if d != "-infinity":
            assert (d == 0) == torsion_free(M)
        else:
            assert M.canonical_form.is_zero


def test_dimension_values():
    Z4 = IntMod(4)
    assert dimension(FPModule.cyclic(Z4, 2), cutoff=8).value == "infinite"
    assert dimension(FPModule.free(Z4, 2)).value == 0
    # Z/2 is a direct summand of Z/6
    assert dimension(FPModule.cyclic(IntMod(6), 2)).value == 0
    assert dimension(FPModule.cyclic(IntMod(12), 2)).value == "infinite"
    assert dimension(FPModule.cyclic(ZZ, 6)).value == 1
    assert dimension(FPModule.cyclic(IntInvert((5,)), 5)).value == "-infinity"
    assert dimension(FPModule.cyclic(ZZ, 6), kind="fd").value == 1
    with pytest.raises(ValueError):
        dimension(FPModule.cyclic(ZZ, 6), kind="id")


def test_dimension_is_top_degree_of_reduced_resolution():
    rng = random.Random(5)
    for ring in (ZZ, IntLocalAt(3), IntInvert((5,))):
        for _ in range(10):
            M = rand_module(rng, ring, 2, 9)
            r = dimension(M)
            if isinstance(r.value, int):
                P = r.resolution.complex
                assert r.value == max(k for k in P.degrees() if P.rank(k))


@pytest.mark.parametrize("ring", [ZZ, IntMod(4), IntMod(9), IntLocalAt(3)], ids=str)
def test_free_resolution_is_quasi_isomorphic(ring):
    rng = random.Random(11)
    for _ in range(8):
        M = rand_module(rng, ring, 2, 9)
        res = free_resolution(M, cutoff=3)
        P = res.complex
        assert not validate_complex(P) and P.is_free()
        assert res.chain_map().validate() == []
        assert homology(P, 0).canonical_form == M.canonical_form
        for k in range(1, res.exact_below):
            assert homology(P, k).canonical_form.is_zero


def test_resolution_of_bounded_complex():
    rng = random.Random(3)
    for _ in range(6):
        C, _ = acyclic_piece(rng, IntMod(4), 0, 2, 2, 9, allow_periodic=False)
        res = free_resolution(C, cutoff=3)
        for k in range(C.shape.lo, res.exact_below):
            assert homology(res.complex, k).canonical_form == homology(C, k).canonical_form


def test_replacement_refuses_composite_modulus():
    with pytest.raises(Unsupported):
        pure_minimal_replacement(FPModule.cyclic(IntMod(6), 2))
    R = pure_minimal_replacement(FPModule.cyclic(IntMod(4), 2), cutoff=3)
    assert all(R.complex.rank(k) == 1 for k in range(0, 4))
