import json
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from puremin.complexes import (
    Bounded,
    ChainComplex,
    ChainMap,
    Periodic,
    character_dual_complex,
    classify_map,
    classify_ses,
    cone,
    cone_sequence,
    find_homotopy,
    homology,
    is_acyclic,
    is_contractible,
    is_pure_acyclic,
    shift,
    total_hom,
    total_tensor,
    validate_complex,
)
from puremin.finite import brute_homology_orders
from puremin.harness.gallery import dold, koszul
from puremin.harness.generators import (
    GenProfile,
    STYLES,
    acyclic_piece,
    free_random,
    gen_complex,
    gen_disk_sphere,
    random_homotopic_map,
    scramble,
)
from puremin.matrix import Matrix
from puremin.modules import FPModule, hom_modules
from puremin.rings import ZZ, IntInvert, IntMod

SEEDS = st.integers(0, 2**32)
SMALL_RINGS = [IntMod(4), IntMod(6), IntMod(9)]


def test_validate_flags_nonzero_square():
    R = ZZ
    F = FPModule.free(R, 1)
    C = ChainComplex(R, Bounded(0, 2), {0: F, 1: F, 2: F}, {1: Matrix(R, [[1]]), 2: Matrix(R, [[1]])})
    assert validate_complex(C)
    assert not validate_complex(koszul(R, 2))


def test_koszul_tensor_homology():
    K = koszul(ZZ, 2)
    T = total_tensor(K, K)
    forms = [homology(T, i).canonical_form for i in range(3)]
    assert [f.divisors for f in forms] == [(2,), (2,), ()]
    assert all(f.free_rank == 0 for f in forms)


def test_dold_complex_facts():
    D = dold()
    assert not validate_complex(D)
    assert is_acyclic(D)
    assert not is_pure_acyclic(D).pure_acyclic
    assert not is_contractible(D).contractible
    assert not is_contractible(D, method="stacked").contractible


def test_dold_homotopy_classes_by_enumeration():
    # chain endomorphisms and homotopies of the Dold complex are scalars; d s + s d = 4 s = 0,
    # so of the 16 pairs of endomorphisms exactly the 4 diagonal pairs are homotopic
    D = dold()
    R = D.ring
    maps = [ChainMap(D, D, {0: Matrix(R, [[a]])}) for a in range(4)]
    homotopic = [(a, b) for a in range(4) for b in range(4) if find_homotopy(maps[a], maps[b]) is not None]
    assert homotopic == [(a, a) for a in range(4)]


@pytest.mark.parametrize("ring", SMALL_RINGS, ids=str)
def test_homology_orders_match_enumeration(ring):
    rng = random.Random(7)
    for _ in range(12):
        C = free_random(rng, ring, 0, rng.randint(1, 3), 2, 9)
        brute = brute_homology_orders(C, limit=1024)
        for i, order in brute.items():
            assert homology(C, i).cardinality() == order


@pytest.mark.parametrize("ring", [ZZ, IntMod(4), IntMod(6), IntInvert((5,))], ids=str)
@pytest.mark.parametrize("style", STYLES)
def test_generated_complexes_are_valid(ring, style):
    for seed in range(8):
        p = GenProfile(ring=ring, style=style, seed=seed, max_length=4, max_rank=3)
        C = gen_complex(p)
        assert not validate_complex(C)
        assert json.dumps(C.to_json()) == json.dumps(gen_complex(p).to_json())
        if style == "acyclic_by_construction":
            assert is_acyclic(C)


@pytest.mark.parametrize("ring", [ZZ, IntMod(4), IntMod(6)], ids=str)
def test_disk_sphere_content_predicts_homology(ring):
    for seed in range(10):
        C, content = gen_disk_sphere(GenProfile(ring=ring, seed=seed, max_length=4, max_rank=3))
        spheres = list(content.spheres)
        if ring.kind == "IntMod":
            # over Z/n the two-term piece R -a-> R also has kernel ann(a) = R/gcd(a, n) on top
            spheres += [(k + 1, math.gcd(int(d), ring.n)) for k, d in content.spheres if d]
        for i in C.degrees():
            divs = [d for k, d in spheres if k == i and d]
            free = sum(1 for k, d in spheres if k == i and not d)
            expect = FPModule.from_divisors(ring, divs, free)
            assert homology(C, i).canonical_form == expect.canonical_form


@given(SEEDS, st.sampled_from([ZZ, IntMod(4), IntMod(6), IntMod(8)]))
def test_contractibility_routes_agree(seed, ring):
    rng = random.Random(seed)
    C = free_random(rng, ring, 0, rng.randint(1, 3), 2, 6) if rng.random() < 0.5 else \
        scramble(rng, acyclic_piece(rng, ring, 0, 3, 2, 6)[0]).complex
    a = is_contractible(C).contractible
    assert a == is_contractible(C, method="stacked").contractible
    if a:
        assert is_acyclic(C) and is_pure_acyclic(C).pure_acyclic


@given(SEEDS, st.sampled_from([ZZ, IntMod(4), IntMod(6)]))
def test_cone_of_homotopic_maps(seed, ring):
    rng = random.Random(seed)
    C = free_random(rng, ring, 0, rng.randint(1, 3), 2, 6)
    f = random_homotopic_map(rng, C, 1)
    assert not f.validate()
    Cf = cone(f)
    assert not validate_complex(Cf)
    flags = classify_map(f)
    assert flags["is_homotopy_equiv"] and flags["is_qis"] and flags["is_pure_qis"]
    assert is_contractible(Cf).contractible
    s = cone_sequence(f)
    assert not s.validate()
    assert classify_ses(s)["degreewise_split"]


def test_identity_cone_and_zero_map():
    C = koszul(ZZ, 3)
    assert is_contractible(cone(ChainMap.identity(C))).contractible
    z = ChainMap.zero(C, C)
    flags = classify_map(z)
    assert not flags["is_qis"] and not flags["is_homotopy_equiv"]


def test_total_hom_degree_zero_homology_is_homotopy_classes():
    R = ZZ
    for a, b in [(2, 4), (3, 6), (4, 6)]:
        M, N = FPModule.cyclic(R, a), FPModule.cyclic(R, b)
        H = total_hom(ChainComplex.sphere(M, 0), ChainComplex.sphere(N, 0)).complex
        assert homology(H, 0).canonical_form == hom_modules(M, N).module.canonical_form
    K = koszul(ZZ, 2)
    H = total_hom(K, K).complex
    assert not validate_complex(H)
    # [K, K] = Z/2: multiplication by 2 is null-homotopic on K(2)
    assert homology(H, 0).canonical_form.divisors == (2,)


@given(SEEDS, st.sampled_from([IntMod(4), IntMod(6)]))
def test_character_dual_reflects_homology(seed, ring):
    rng = random.Random(seed)
    C = free_random(rng, ring, 0, rng.randint(1, 3), 2, 6)
    D = character_dual_complex(C)
    assert not validate_complex(D)
    for i in C.degrees():
        assert homology(D, -i).canonical_form == homology(C, i).canonical_form


def test_shift_moves_homology():
    K = koszul(ZZ, 5)
    S = shift(K, 2)
    assert homology(S, 2).canonical_form == homology(K, 0).canonical_form


def test_periodic_shape_and_json():
    D = dold()
    assert D.periodic and isinstance(D.shape, Periodic)
    assert ChainComplex.from_json(json.loads(json.dumps(D.to_json()))).same_as(D)


@given(SEEDS, st.sampled_from([ZZ, IntMod(12), IntInvert((5,))]))
def test_complex_json_round_trip(seed, ring):
    rng = random.Random(seed)
    C = free_random(rng, ring, -1, rng.randint(1, 3), 3, 9)
    assert ChainComplex.from_json(json.loads(json.dumps(C.to_json()))).same_as(C)


def test_total_hom_refuses_periodic():
    with pytest.raises(ValueError):
        total_hom(dold(), dold())
