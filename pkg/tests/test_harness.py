import json
from types import SimpleNamespace

import pytest

import puremin.harness.suites as suites
from puremin.complexes import is_acyclic, validate_complex
from puremin.harness.gallery import NAMES, REFUSALS, RefusedExample, gallery
from puremin.harness.generators import STYLES, GenProfile, gen_complex
from puremin.harness.suites import SUITES, case_seed, report_json, run_case, run_suite
from puremin.rings import IntMod

SMALL = 12


def test_case_seeds_are_stable_and_distinct():
    seeds = {case_seed(name, 0, k) for name in SUITES for k in range(20)}
    assert len(seeds) == 20 * len(SUITES)
    assert case_seed("bg", 3, 7) == case_seed("bg", 3, 7)
    assert case_seed("bg", 3, 7) != case_seed("bg", 4, 7)


def test_registry_is_complete():
    assert set(SUITES) == {
        "vnr", "bg", "two_of_three", "ses_pa", "ses_he", "impl", "pmiff", "m1m4", "asm_apm",
        "semiflat", "semiinj", "corvnr", "perfect", "pmsm", "appendix_hom", "appendix_homZ",
        "appendix_tensor",
    }
    for entry in SUITES.values():
        assert entry.cases >= entry.min_non_vacuous >= 30


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_prefix_runs_clean_and_deterministically(name):
    a = run_suite(name, cases=SMALL, seed=1)
    b = run_suite(name, cases=SMALL, seed=1)
    assert report_json(a) == report_json(b)
    assert a.failures == [] and a.errors == []


def test_parallel_matches_serial():
    a = run_suite("ses_pa", cases=8, seed=2)
    b = run_suite("ses_pa", cases=8, seed=2, jobs=2)
    assert report_json(a) == report_json(b)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_underpowered_runs_do_not_pass():
    rep = run_suite("bg", cases=3)
    assert rep.underpowered and not rep.passed


def test_profile_ring_triggers_counterexample_mode():
    rep = run_suite("vnr", profile=GenProfile(ring=IntMod(4)), cases=40)
    assert rep.expect_counterexample
    first = rep.expected_counterexamples[0]
    assert first["case"] == 0
    assert rep.failures == []


def test_mutated_predicate_is_caught(monkeypatch):
    monkeypatch.setattr(suites, "is_contractible", lambda C, method="sections", check=True: SimpleNamespace(contractible=False))
    rep = run_suite("bg", cases=40)
    assert rep.failures and not rep.passed
    monkeypatch.undo()
    monkeypatch.setattr(suites, "is_pure_acyclic", lambda C, check=True: SimpleNamespace(pure_acyclic=False, notes=[]))
    rep = run_suite("vnr", cases=20)
    assert rep.failures and not rep.passed


def test_failures_carry_serialized_objects(monkeypatch):
    monkeypatch.setattr(suites, "is_pure_acyclic", lambda C, check=True: SimpleNamespace(pure_acyclic=False, notes=[]))
    out = run_case("vnr", 0, 1)
    assert not out["vacuous"] and out["violations"]
    assert json.loads(json.dumps(out["objects"]))["complex"]["complex"]["ring"] == {"kind": "IntMod", "n": 6}


@pytest.mark.parametrize("style", STYLES)
def test_generators_are_deterministic(style):
    p = GenProfile(ring=IntMod(6), style=style, seed=99, max_length=3, max_rank=2)
    C = gen_complex(p)
    assert not validate_complex(C)
    assert gen_complex(p).same_as(C)
    assert GenProfile.from_json(p.to_json()) == p
    if style == "acyclic_by_construction":
        assert is_acyclic(C)


def test_profile_rejects_bad_bounds():
    with pytest.raises(ValueError):
        GenProfile(ring=IntMod(4), max_rank=0)
    with pytest.raises(ValueError):
        GenProfile(ring=IntMod(4), style="nope")


def test_gallery_examples():
    for name in NAMES:
        if name in REFUSALS:
            with pytest.raises(RefusedExample):
                gallery(name)
        else:
            assert not validate_complex(gallery(name))
    with pytest.raises(KeyError):
        gallery("missing")
