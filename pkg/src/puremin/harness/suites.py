"""Named property suites, one per theorem-level statement.

A suite builds one random instance per case from a seed derived from
``(suite, seed, case index)``, checks the statement on it and reports a
failure (with the instance serialized) when the statement is violated.
Instances that do not meet a statement's hypotheses are counted as
vacuous; a suite with fewer than ``MIN_NON_VACUOUS`` non-vacuous cases
fails as underpowered.

For statements characterizing von Neumann regular rings the expected
outcome depends on the ring: over a regular ring no violation may
occur, over any other ring the suite must find one (the first case is
then a known witness such as the Dold complex).
"""

from __future__ import annotations

import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..complexes import (
    Bounded,
    ChainComplex,
    ChainMap,
    SESComplexes,
    character_dual_complex,
    classify_map,
    classify_ses,
    cone,
    direct_sum_complexes,
    homology,
    is_acyclic,
    is_contractible,
    is_pure_acyclic,
    total_hom,
    total_tensor,
    validate_complex,
)
from ..finite import FiniteComplex, subcomplex_sequence
from ..matrix import Matrix
from ..minimality import (
    UNKNOWN,
    YES,
    is_minimal,
    is_pure_minimal,
    is_split_minimal,
    pure_minimal_replacement,
    reduce,
)
from ..modules import FPModule
from ..rings import ZZ, IntInvert, IntLocalAt, IntMod, RingSpec
from .generators import (
    GenProfile,
    acyclic_piece,
    disk_sphere_sum,
    free_random,
    gen_split_ses,
    module_ses_complex,
    periodic_disk,
    periodic_two_step,
    rand_elem,
    rand_matrix,
    rand_module,
    rand_unit,
    random_homotopic_map,
    scramble,
    sum_bounded,
    two_term,
)

MIN_NON_VACUOUS = 30


class Vacuous(Exception):
    """The instance does not meet the hypotheses of the statement."""


@dataclass
class Ctx:
    """Everything a suite case may use: its ring, size bounds and a private RNG."""

    name: str
    index: int
    seed: int
    ring: RingSpec
    rng: random.Random
    max_length: int
    max_rank: int
    bound: int
    objects: dict = field(default_factory=dict)
    checks: int = 0

    def keep(self, key, C):
        """Record an object for serialization of a failure."""
        self.objects[key] = C
        return C

    def check(self, cond, message, violations):
        self.checks += 1
        if not cond:
            violations.append(message)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: int
    non_vacuous: int
    failures: list
    expected_counterexamples: list
    expect_counterexample: bool
    errors: list = field(default_factory=list)
    min_non_vacuous: int = MIN_NON_VACUOUS

    @property
    def underpowered(self) -> bool:
        return self.non_vacuous < self.min_non_vacuous

    @property
    def passed(self) -> bool:
        if self.failures or self.errors or self.underpowered:
            return False
        if self.expect_counterexample:
            return bool(self.expected_counterexamples)
        return True

    def to_json(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "non_vacuous": self.non_vacuous,
            "min_non_vacuous": self.min_non_vacuous,
            "expect_counterexample": self.expect_counterexample,
            "passed": self.passed,
            "failures": self.failures,
            "expected_counterexamples": self.expected_counterexamples,
            "errors": self.errors,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = ""
        if self.expect_counterexample:
            extra = f", expected counterexamples found: {len(self.expected_counterexamples)}"
        if self.underpowered:
            extra += f", underpowered (< {self.min_non_vacuous} non-vacuous)"
        return (f"{status} {self.suite}: {self.cases} cases, {self.non_vacuous} non-vacuous, "
                f"{len(self.failures)} failures{extra}")


def case_seed(name: str, seed: int, index: int) -> int:
    h = hashlib.sha256(f"{name}/{seed}/{index}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def _serialize(obj):
    if isinstance(obj, ChainComplex):
        return {"complex": obj.to_json()}
    if isinstance(obj, FPModule):
        return {"module": obj.to_json(with_ring=True)}
    if isinstance(obj, ChainMap):
        return {
            "source": obj.source.to_json(),
            "target": obj.target.to_json(),
            "components": {str(i): A.to_json() for i, A in sorted(obj.components.items())},
        }
    if isinstance(obj, SESComplexes):
        return {"inj": _serialize(obj.inj), "surj": _serialize(obj.surj)}
    return obj


# --- instance helpers ----------------------------------------------------------------


def non_vnr_witness(ring: RingSpec) -> ChainComplex:
    """An acyclic complex that is not pure-acyclic (exists exactly when the ring is not regular)."""
    if ring.kind == "IntMod":
        for p in sorted(ring.factorization):
            if ring.n % (p * p) == 0:
                a = ring.n // p
                return periodic_two_step(ring, p, a) if p != a else periodic_two_step(ring, p, p)
        raise ValueError(f"{ring} is von Neumann regular")
    p = 2 if ring.kind != "IntInvert" or 2 not in ring.primes else 3
    if ring.kind == "IntLocalAt":
        p = ring.p
    R1 = FPModule.free(ring, 1)
    Q = FPModule.cyclic(ring, p)
    return ChainComplex(ring, Bounded(0, 2), {2: R1, 1: R1, 0: Q},
                        {2: Matrix(ring, [[p]]), 1: Matrix(ring, [[1]])})


def vnr_witness_minimal(ring: RingSpec) -> ChainComplex:
    """A nonzero acyclic pure-minimal complex over a non-regular ring."""
    return non_vnr_witness(ring)


def _free_instance(ctx: Ctx, allow_periodic=True) -> ChainComplex:
    """Free complex from a mix of styles, small enough for exhaustive checks."""
    rng, ring = ctx.rng, ctx.ring
    L, r, b = ctx.max_length, ctx.max_rank, ctx.bound
    t = rng.random()
    if t < 0.35:
        return free_random(rng, ring, 0, rng.randint(1, L), r, b)
    if t < 0.6:
        C, _ = disk_sphere_sum(rng, ring, 0, rng.randint(2, max(2, L)), r, b)
        return scramble(rng, C).complex
    if t < 0.75 or not (allow_periodic and ring.kind == "IntMod"):
        C = reduce(free_random(rng, ring, 0, rng.randint(1, L), r, b), check=False)
        R = C.reduced if not C.components else free_random(rng, ring, 0, 2, r, b)
        return scramble(rng, R).complex
    if t < 0.9:
        n = ring.n
        a = rng.choice([d for d in range(1, n) if n % d == 0] or [1])
        return scramble(rng, periodic_two_step(ring, a, (n // a) % n, rng.randint(1, 2))).complex
    return scramble(rng, periodic_disk(ring, rng.randint(1, 2))).complex


def _component_free_instance(ctx: Ctx) -> ChainComplex:
    """Complex of projective (equivalently injective) modules over Z/n.

    Each prime-power factor ``q`` contributes a free complex over ``Z/q``
    whose modules are embedded as sums of ``R/(q)``; the result is
    scrambled by invertible matrices.
    """
    rng, ring = ctx.rng, ctx.ring
    factors = ring.prime_power_factors()
    length = rng.randint(1, min(3, ctx.max_length))
    blocks = []
    for q in factors:
        Rq = IntMod(q)
        F = free_random(rng, Rq, 0, length, max(1, min(2, ctx.max_rank) if len(factors) == 1 else 1), ctx.bound)
        if rng.random() < 0.4:
            D, _ = disk_sphere_sum(rng, Rq, 0, length, 1, ctx.bound)
            F = direct_sum_complexes(F.with_shape(Bounded(0, max(F.shape.hi, D.shape.hi))),
                                     D.with_shape(Bounded(0, max(F.shape.hi, D.shape.hi))))
        blocks.append((q, F))
    hi = max(F.shape.hi for _, F in blocks)
    mods, diffs = {}, {}
    for i in range(0, hi + 1):
        gens = sum(F.rank(i) for _, F in blocks)
        rel_cols = []
        off = 0
        for q, F in blocks:
            for k in range(F.rank(i)):
                if q != ring.n:
                    col = [0] * gens
                    col[off + k] = q
                    rel_cols.append(col)
            off += F.rank(i)
        mods[i] = FPModule(ring, gens, Matrix.from_columns(ring, rel_cols, gens))
    for i in range(1, hi + 1):
        diffs[i] = Matrix.block_diag(
            ring, *(Matrix(ring, [[F.d(i)[r, c] for c in range(F.rank(i))] for r in range(F.rank(i - 1))],
                           F.rank(i - 1), F.rank(i)) for _, F in blocks))
    C = ChainComplex(ring, Bounded(0, hi), mods, diffs)
    return scramble(rng, C).complex


def _module_complex(ctx: Ctx) -> ChainComplex:
    """Small bounded complex whose modules need not be free."""
    rng, ring = ctx.rng, ctx.ring
    t = rng.random()
    if t < 0.3:
        return module_ses_complex(rng, ring, 0, ctx.bound)
    if t < 0.55:
        M = rand_module(rng, ring, 2, ctx.bound)
        return ChainComplex.sphere(M, rng.randint(0, 1))
    if t < 0.8:
        M = rand_module(rng, ring, 2, ctx.bound)
        N = rand_module(rng, ring, 2, ctx.bound)
        from ..modules import hom_modules

        H = hom_modules(M, N)
        coords = [rand_elem(rng, ring, 3) for _ in range(H.module.generators)]
        A = H.element(coords) if coords else Matrix.zeros(ring, N.generators, M.generators)
        return two_term(M, N, A, 1)
    C, _ = acyclic_piece(rng, ring, 0, 2, 2, ctx.bound, allow_periodic=False)
    return C


def _is_zero_status(x):
    return x is True


# --- suites ------------------------------------------------------------------------


def suite_vnr(ctx: Ctx):
    """Acyclic implies pure-acyclic over regular rings; a counterexample exists otherwise."""
    rng, ring = ctx.rng, ctx.ring
    if not ring.is_vnr and ctx.index == 0:
        C = non_vnr_witness(ring)
    elif rng.random() < 0.85:
        C, _ = acyclic_piece(rng, ring, 0, ctx.max_length, ctx.max_rank, ctx.bound)
        C = scramble(rng, C).complex
    else:
        C = _free_instance(ctx)
    ctx.keep("complex", C)
    if not is_acyclic(C):
        raise Vacuous
    return [] if is_pure_acyclic(C, check=False).pure_acyclic else ["acyclic complex that is not pure-acyclic"]


def suite_bg(ctx: Ctx):
    """Pure-acyclic complexes of finitely generated projectives are contractible."""
    rng, ring = ctx.rng, ctx.ring
    t = rng.random()
    if t < 0.55:
        C, _ = acyclic_piece(rng, ring, 0, ctx.max_length, ctx.max_rank, ctx.bound, allow_modules=False)
    elif t < 0.7 and ring.kind == "IntMod":
        C = periodic_disk(ring, rng.randint(1, 2))
        if rng.random() < 0.3:
            C = non_vnr_witness(ring) if not ring.is_vnr else C
    else:
        C = _free_instance(ctx)
    C = ctx.keep("complex", scramble(rng, C).complex)
    v = []
    pa = is_pure_acyclic(C, check=False).pure_acyclic
    con = is_contractible(C, check=False).contractible
    con2 = is_contractible(C, method="stacked", check=False).contractible
    ctx.check(con == con2, "contractibility routes disagree", v)
    ctx.check(not con or pa, "contractible complex that is not pure-acyclic", v)
    if not C.is_free() or not pa:
        if v:
            return v
        raise Vacuous
    ctx.check(con, "pure-acyclic complex of projectives that is not contractible", v)
    return v


def _endo(ctx, C):
    rng, ring = ctx.rng, ctx.ring
    t = rng.random()
    if t < 0.45:
        c = rand_unit(rng, ring)
    elif t < 0.6:
        c = 0
    else:
        c = rand_elem(rng, ring, 3)
    return random_homotopic_map(rng, C, c, 2)


def suite_two_of_three(ctx: Ctx):
    """If two of alpha, beta and their composite are pure quasi-isomorphisms, so is the third."""
    rng, ring = ctx.rng, ctx.ring
    L = free_random(rng, ring, 0, rng.randint(1, 3), min(ctx.max_rank, 2), ctx.bound)
    t = rng.random()
    if t < 0.5:
        D = ChainComplex.zero(ring)
    elif t < 0.85:
        D, _ = acyclic_piece(rng, ring, 0, 3, 2, ctx.bound, allow_modules=False, allow_periodic=False)
        D = scramble(rng, D).complex
    else:
        D = module_ses_complex(rng, ring, 0, ctx.bound)
    lo = min(L.shape.lo, D.shape.lo) if not D.shape.empty else L.shape.lo
    hi = max(L.shape.hi, D.shape.hi) if not D.shape.empty else L.shape.hi
    Lb = L.with_shape(Bounded(lo, hi))
    M = direct_sum_complexes(Lb, D.with_shape(Bounded(lo, hi))) if not D.shape.empty else Lb
    e1, e2 = _endo(ctx, Lb), _endo(ctx, Lb)
    inc, proj = {}, {}
    for i in range(lo, hi + 1):
        a, b = Lb.rank(i), M.rank(i) - Lb.rank(i)
        inc[i] = Matrix.identity(ring, a).vstack(Matrix.zeros(ring, b, a))
        proj[i] = Matrix.identity(ring, a).hstack(Matrix.zeros(ring, a, b))
    alpha = ChainMap(Lb, M, inc) @ e1
    beta = e2 @ ChainMap(M, Lb, proj)
    if rng.random() < 0.3 and M.is_free():
        # perturb beta by a null-homotopic map M -> L (random matrices are homs only out of free modules)
        s = {i: rand_matrix(rng, ring, Lb.rank(i + 1), M.rank(i), 2, 0.5) for i in range(lo, hi + 1)}
        S = lambda i: s.get(i, Matrix.zeros(ring, Lb.rank(i + 1), M.rank(i)))  # noqa: E731
        beta = beta + ChainMap(M, Lb, {i: Lb.d(i + 1) @ S(i) + S(i - 1) @ M.d(i) for i in range(lo, hi + 1)})
    ctx.keep("alpha", alpha)
    ctx.keep("beta", beta)
    v = []
    for name, f in (("alpha", alpha), ("beta", beta)):
        errs = f.validate()
        if errs:
            return [f"{name} is not a chain map: {errs[0]}"]
    flags = [classify_map(f)["is_pure_qis"] for f in (alpha, beta, beta @ alpha)]
    if sum(flags) < 2:
        raise Vacuous
    ctx.check(all(flags), f"two of three pure quasi-isomorphisms but not the third: {flags}", v)
    return v


def _ses_instance(ctx: Ctx):
    rng, ring = ctx.rng, ctx.ring
    t = rng.random()
    if t < 0.12:
        # degreewise non-split sequences from module complexes
        L = module_ses_complex(rng, ring, 0, ctx.bound)
        M = _module_complex(ctx)
        s, kind = _sum_sequence(L, M), "module_sum"
    else:
        s, kind = gen_split_ses(rng, ring, 0, rng.randint(1, 3), min(2, ctx.max_rank), ctx.bound)
    return s, kind


def _sum_sequence(L, N):
    """``0 -> L -> L + N -> N -> 0``."""
    ring = L.ring
    lo = min(L.shape.lo, N.shape.lo)
    hi = max(L.shape.hi, N.shape.hi)
    Lb, Nb = L.with_shape(Bounded(lo, hi)), N.with_shape(Bounded(lo, hi))
    M = direct_sum_complexes(Lb, Nb)
    inj, surj = {}, {}
    for i in range(lo, hi + 1):
        a, b = Lb.rank(i), Nb.rank(i)
        inj[i] = Matrix.identity(ring, a).vstack(Matrix.zeros(ring, b, a))
        surj[i] = Matrix.zeros(ring, b, a).hstack(Matrix.identity(ring, b))
    return SESComplexes(ChainMap(Lb, M, inj), ChainMap(M, Nb, surj))


def suite_ses_pa(ctx: Ctx):
    """Degreewise pure sequences: L pure-acyclic iff the surjection is a pure quasi-isomorphism (and dually)."""
    s, kind = _ses_instance(ctx)
    ctx.keep("sequence", s)
    errs = s.validate()
    if errs:
        return [f"generator produced an invalid sequence: {errs[0]}"]
    flags = classify_ses(s, check=False)
    if not flags["degreewise_pure"]:
        raise Vacuous
    v = []
    paL = is_pure_acyclic(s.L, check=False).pure_acyclic
    paN = is_pure_acyclic(s.N, check=False).pure_acyclic
    ps = classify_map(s.surj)["is_pure_qis"]
    pi = classify_map(s.inj)["is_pure_qis"]
    ctx.check(paL == ps, f"L pure-acyclic={paL} but surjection pure-qis={ps}", v)
    ctx.check(paN == pi, f"N pure-acyclic={paN} but injection pure-qis={pi}", v)
    if paL or paN:
        ctx.check(flags["complex_pure"], "pure-acyclic end but the sequence is not pure", v)
    return v


def suite_ses_he(ctx: Ctx):
    """Degreewise split sequences: L contractible iff the surjection is a homotopy equivalence (and dually)."""
    s, kind = _ses_instance(ctx)
    ctx.keep("sequence", s)
    errs = s.validate()
    if errs:
        return [f"generator produced an invalid sequence: {errs[0]}"]
    flags = classify_ses(s, check=False)
    if not flags["degreewise_split"]:
        raise Vacuous
    v = []
    cL = is_contractible(s.L, check=False).contractible
    cN = is_contractible(s.N, check=False).contractible
    hs = classify_map(s.surj)["is_homotopy_equiv"]
    hi = classify_map(s.inj)["is_homotopy_equiv"]
    ctx.check(cL == hs, f"L contractible={cL} but surjection homotopy equivalence={hs}", v)
    ctx.check(cN == hi, f"N contractible={cN} but injection homotopy equivalence={hi}", v)
    if cL or cN:
        ctx.check(flags["complex_split"], "contractible end but the sequence does not split", v)
    return v


def suite_impl(ctx: Ctx):
    """Minimal implies split-minimal; the converse for projective complexes over semi-perfect rings."""
    ring = ctx.ring
    C = ctx.keep("complex", _free_instance(ctx))
    sm = is_split_minimal(C, check=False).value
    mn = is_minimal(C, check=False).status
    if sm == UNKNOWN or mn == UNKNOWN:
        raise Vacuous
    v = []
    if mn == YES:
        ctx.check(sm is True, "minimal complex that is not split-minimal", v)
    semi_perfect = ring.is_finite or ring.kind == "IntLocalAt"
    if semi_perfect and C.is_free() and sm is True:
        ctx.check(mn == YES, "split-minimal projective complex over a semi-perfect ring that is not minimal", v)
    return v


def _brute(ctx: Ctx, C: ChainComplex, cap=4000):
    try:
        F = FiniteComplex(C, limit=150)
    except ValueError:
        raise Vacuous
    subs = F.subcomplexes(cap=cap + 1)
    if len(subs) > cap:
        raise Vacuous
    return F, subs


def _finite_projective_instance(ctx: Ctx) -> ChainComplex:
    if ctx.ring.is_local:
        return _free_instance(ctx)
    return _component_free_instance(ctx) if ctx.rng.random() < 0.6 else _free_instance(ctx)


def suite_pmiff(ctx: Ctx):
    """For complexes of finitely generated projectives: split-minimal iff pure-minimal."""
    C = ctx.keep("complex", _finite_projective_instance(ctx))
    F, subs = _brute(ctx, C)
    nonzero = [P for P in subs if not F.is_zero_sub(P)]
    pa_pure = [P for P in nonzero if F.sub_is_degreewise_pure(P) and F.sub_is_pure_acyclic(P)]
    c_split = [P for P in nonzero if F.sub_is_degreewise_split(P) and F.sub_is_contractible(P)]
    v = []
    sm = is_split_minimal(C, check=False).value
    pm = is_pure_minimal(C, check=False).value
    ctx.check(sm == (not c_split), f"split-minimal={sm} but enumeration found {len(c_split)} contractible summands", v)
    ctx.check(pm == (not pa_pure), f"pure-minimal={pm} but enumeration found {len(pa_pure)} pure-acyclic pure subcomplexes", v)
    ctx.check((not c_split) == (not pa_pure), "split-minimality and pure-minimality differ by enumeration", v)
    for P in pa_pure[:3]:
        ctx.check(F.sub_is_contractible(P) and F.sub_is_degreewise_split(P),
                  "pure-acyclic pure subcomplex that is not a contractible degreewise summand", v)
        ctx.check(F.complex_complement(P, subs) is not None, "pure-acyclic pure subcomplex without complement", v)
    return v


def suite_m1m4(ctx: Ctx):
    """Quotients by degreewise pure (split) subcomplexes of pure-minimal (split-minimal) complexes."""
    rng = ctx.rng
    C = _finite_projective_instance(ctx)
    if rng.random() < 0.5 and C.is_free() and not C.periodic:
        tr = reduce(C, check=False)
        if not tr.components:
            C = scramble(rng, tr.reduced).complex
    C = ctx.keep("complex", C)
    F, subs = _brute(ctx, C)
    nonzero = [P for P in subs if not F.is_zero_sub(P)]
    pm = is_pure_minimal(C, check=False).value
    sm = is_split_minimal(C, check=False).value
    v = []
    bad_pure = [P for P in nonzero if F.sub_is_degreewise_pure(P) and F.sub_is_pure_acyclic(P)]
    bad_split = [P for P in nonzero if F.sub_is_degreewise_split(P) and F.sub_is_contractible(P)]
    ctx.check(pm == (not bad_pure), "pure-minimality differs from the subcomplex criterion", v)
    ctx.check(sm == (not bad_split), "split-minimality differs from the subcomplex criterion", v)
    pure_subs = [P for P in nonzero if F.sub_is_degreewise_pure(P)]
    sample = pure_subs if len(pure_subs) <= 4 else rng.sample(pure_subs, 4)
    sample += [P for P in bad_pure[:1] if P not in sample]
    for P in sample:
        s = subcomplex_sequence(F, P)
        flags = classify_map(s.surj)
        iso = flags["is_iso"]
        if pm is True:
            ctx.check(flags["is_pure_qis"] == iso, "pure-minimal: quotient map pure-qis differs from iso", v)
        if sm is True and F.sub_is_degreewise_split(P):
            ctx.check(flags["is_homotopy_equiv"] == iso, "split-minimal: quotient map h.e. differs from iso", v)
        if pm is False and P in bad_pure:
            ctx.check(flags["is_pure_qis"] and not iso, "quotient by a pure-acyclic subcomplex is not a pure-qis", v)
    return v


def suite_asm_apm(ctx: Ctx):
    """Contractible split-minimal and pure-acyclic pure-minimal complexes are zero."""
    rng, ring = ctx.rng, ctx.ring
    t = rng.random()
    if t < 0.6:
        C, _ = acyclic_piece(rng, ring, 0, ctx.max_length, min(3, ctx.max_rank), ctx.bound)
        C = scramble(rng, C).complex
    elif t < 0.7:
        C = ChainComplex.zero(ring)
    else:
        C = _free_instance(ctx)
    C = ctx.keep("complex", C)
    con = is_contractible(C, check=False).contractible
    pa = is_pure_acyclic(C, check=False).pure_acyclic
    if not (con or pa):
        raise Vacuous
    v = []
    sm = is_split_minimal(C, check=False).value
    pm = is_pure_minimal(C, check=False).value
    zero = C.is_zero()
    if con:
        ctx.check(sm is not True or zero, "nonzero contractible split-minimal complex", v)
    if pa:
        ctx.check(pm is not True or zero, "nonzero pure-acyclic pure-minimal complex", v)
    if pa and C.is_free() and not C.periodic:
        tr = reduce(C, check=False)
        red = tr.reduced if not tr.components else None
        if red is not None:
            ctx.check(red.is_zero(), "pure-acyclic free complex with a nonzero reduced part", v)
    return v


def suite_semiflat(ctx: Ctx):
    """Bounded free complexes: pure-minimal iff no nonzero acyclic pure subcomplex."""
    rng = ctx.rng
    C = _free_instance(ctx, allow_periodic=False)
    if rng.random() < 0.4 and not C.periodic:
        tr = reduce(C, check=False)
        if not tr.components:
            C = scramble(rng, tr.reduced).complex
    C = ctx.keep("complex", C)
    F, subs = _brute(ctx, C)
    acyc_pure = [P for P in subs if not F.is_zero_sub(P) and F.sub_is_degreewise_pure(P) and F.sub_is_acyclic(P)]
    pm = is_pure_minimal(C, check=False).value
    v = []
    ctx.check(pm == (not acyc_pure), f"pure-minimal={pm} but {len(acyc_pure)} acyclic pure subcomplexes", v)
    for P in acyc_pure[:2]:
        ctx.check(F.sub_is_pure_acyclic(P), "acyclic pure subcomplex of a semi-flat complex is not pure-acyclic", v)
    return v


def suite_semiinj(ctx: Ctx):
    """Bounded complexes of injectives over Z/n: the four minimality conditions agree."""
    C = ctx.keep("complex", _component_free_instance(ctx) if not ctx.ring.is_local else _free_instance(ctx, False))
    F, subs = _brute(ctx, C)
    acyc = [P for P in subs if not F.is_zero_sub(P) and F.sub_is_acyclic(P)]
    mn = is_minimal(C, check=False).status
    if mn == UNKNOWN:
        raise Vacuous
    sm = is_split_minimal(C, check=False).value
    pm = is_pure_minimal(C, check=False).value
    v = []
    want = not acyc
    ctx.check((mn == YES) == want, f"minimal={mn} but {len(acyc)} acyclic subcomplexes", v)
    ctx.check(sm == want, f"split-minimal={sm} but {len(acyc)} acyclic subcomplexes", v)
    ctx.check(pm == want, f"pure-minimal={pm} but {len(acyc)} acyclic subcomplexes", v)
    return v


def suite_corvnr(ctx: Ctx):
    """Over a regular ring the zero complex is the only acyclic pure-minimal complex."""
    rng, ring = ctx.rng, ctx.ring
    if not ring.is_vnr and ctx.index == 0:
        C = vnr_witness_minimal(ring)
    else:
        t = rng.random()
        if t < 0.4:
            C, _ = acyclic_piece(rng, ring, 0, 3, 2, ctx.bound)
            C = scramble(rng, C).complex
        elif t < 0.7:
            C = _module_complex(ctx)
        else:
            C = _free_instance(ctx)
    C = ctx.keep("complex", C)
    F, subs = _brute(ctx, C)
    acyc = [P for P in subs if not F.is_zero_sub(P) and F.sub_is_acyclic(P)]
    pm = is_pure_minimal(C, check=False).value
    if pm == UNKNOWN:
        raise Vacuous
    v = []
    if is_acyclic(C):
        ctx.check(pm is not True or C.is_zero(), "nonzero acyclic pure-minimal complex", v)
    ctx.check(pm == (not acyc), f"pure-minimal={pm} but {len(acyc)} nonzero acyclic subcomplexes", v)
    return v


def suite_perfect(ctx: Ctx):
    """Over finite local rings every module has a pure-minimal projective resolution."""
    rng, ring = ctx.rng, ctx.ring
    t = rng.random()
    if t < 0.6:
        M = ChainComplex.sphere(rand_module(rng, ring, 2, ctx.bound), 0)
    elif t < 0.8:
        M = module_ses_complex(rng, ring, 0, ctx.bound)
    else:
        M = _module_complex(ctx)
    M = ctx.keep("complex", M)
    res = pure_minimal_replacement(M, cutoff=3)
    P = res.complex
    v = []
    ctx.check(P.is_free(), "resolution is not free", v)
    ctx.check(not validate_complex(P), "resolution is not a valid complex", v)
    ctx.check(is_pure_minimal(P, check=False).value is True, "resolution is not pure-minimal", v)
    p = min(ring.factorization)
    for i in P.diff_degrees():
        D = P.d(i)
        ctx.check(all(x % p == 0 for row in D.data for x in row), f"differential {i} has an entry outside the maximal ideal", v)
    f = res.chain_map()
    ctx.check(not f.validate(), "comparison map is not a chain map", v)
    Cf = cone(f)
    lo = f.source.shape.lo
    for i in range(lo, res.exact_below):
        ctx.check(homology(Cf, i).is_zero(), f"cone of the comparison map has homology in degree {i}", v)
    return v


def suite_pmsm(ctx: Ctx):
    """Degreewise pure subcomplexes of complexes of finitely generated projectives are degreewise split."""
    C = ctx.keep("complex", _finite_projective_instance(ctx))
    F, subs = _brute(ctx, C)
    nonzero = [P for P in subs if not F.is_zero_sub(P)]
    pure = [P for P in nonzero if F.sub_is_degreewise_pure(P)]
    proper = [P for P in pure if any(len(P[i]) < len(F.mods[i]) for i in F.degrees)]
    if not proper:
        raise Vacuous
    v = []
    for P in pure:
        ctx.check(F.sub_is_degreewise_split(P), "degreewise pure subcomplex that is not degreewise split", v)
    rng = ctx.rng
    sample = nonzero if len(nonzero) <= 3 else rng.sample(nonzero, 3)
    for P in sample:
        flags = classify_ses(subcomplex_sequence(F, P), check=False)
        ctx.check(flags["degreewise_pure"] == F.sub_is_degreewise_pure(P), "degreewise purity differs from enumeration", v)
        ctx.check(flags["degreewise_split"] == F.sub_is_degreewise_split(P), "degreewise splitness differs from enumeration", v)
    return v


def _hom_acyclic(M, N):
    return is_acyclic(total_hom(M, N).complex)


def _contractible_module_complex(ctx: Ctx) -> ChainComplex:
    rng, ring = ctx.rng, ctx.ring
    pieces = []
    for _ in range(rng.randint(1, 2)):
        M = rand_module(rng, ring, 2, ctx.bound)
        pieces.append(ChainComplex.disk(M, rng.randint(1, 2)))
    return scramble(rng, sum_bounded(ring, pieces, 0, 2)).complex


def _acyclic_bounded(ctx: Ctx) -> ChainComplex:
    rng, ring = ctx.rng, ctx.ring
    if rng.random() < 0.6:
        C = module_ses_complex(rng, ring, rng.randint(-1, 0), ctx.bound)
    else:
        C, _ = acyclic_piece(rng, ring, 0, 3, 2, ctx.bound, allow_periodic=False)
    return scramble(rng, C).complex


def _small_free(ctx: Ctx) -> ChainComplex:
    return free_random(ctx.rng, ctx.ring, ctx.rng.randint(-1, 0), ctx.rng.randint(1, 3), 2, ctx.bound)


def suite_appendix_hom(ctx: Ctx):
    """Hom(M, N) is acyclic when every Hom(M_i, N) is (M bounded, so the cokernel condition is empty)."""
    rng = ctx.rng
    if rng.random() < 0.5:
        M, N = _small_free(ctx), _acyclic_bounded(ctx)
    else:
        M, N = _module_complex(ctx), _contractible_module_complex(ctx)
    ctx.keep("M", M)
    ctx.keep("N", N)
    for i in M.degrees():
        if not _hom_acyclic(ChainComplex.sphere(M.module(i), i), N):
            raise Vacuous
    v = []
    ctx.check(_hom_acyclic(M, N), "Hom(M, N) is not acyclic although every Hom(M_i, N) is", v)
    return v


def suite_appendix_homZ(ctx: Ctx):
    """Hom(M, N) is acyclic when every Hom(M, N_i) is (N bounded, so the cycle condition is empty)."""
    rng = ctx.rng
    if rng.random() < 0.5:
        M, N = _acyclic_bounded(ctx), _small_free(ctx)
    else:
        M, N = _contractible_module_complex(ctx), _module_complex(ctx)
    ctx.keep("M", M)
    ctx.keep("N", N)
    for i in N.degrees():
        if not _hom_acyclic(M, ChainComplex.sphere(N.module(i), i)):
            raise Vacuous
    v = []
    ctx.check(_hom_acyclic(M, N), "Hom(M, N) is not acyclic although every Hom(M, N_i) is", v)
    return v


def _finite_complex(C: ChainComplex) -> bool:
    return all(C.module(i).is_finite() for i in C.degrees())


def suite_appendix_tensor(ctx: Ctx):
    """L (x) M is acyclic when every L (x) M_i (or every L_i (x) M) is; checked through character duals."""
    rng = ctx.rng
    t = rng.random()
    if t < 0.35:
        L, M = _acyclic_bounded(ctx), _small_free(ctx)
    elif t < 0.7:
        L, M = _contractible_module_complex(ctx), _module_complex(ctx)
    else:
        L, M = _small_free(ctx), _acyclic_bounded(ctx)
    ctx.keep("L", L)
    ctx.keep("M", M)
    by_M = all(is_acyclic(total_tensor(L, ChainComplex.sphere(M.module(i), i))) for i in M.degrees())
    by_L = all(is_acyclic(total_tensor(ChainComplex.sphere(L.module(i), i), M)) for i in L.degrees())
    if not (by_M or by_L):
        raise Vacuous
    T = total_tensor(L, M)
    v = []
    acyc = is_acyclic(T)
    ctx.check(acyc, "L (x) M is not acyclic although the degreewise hypothesis holds", v)
    if _finite_complex(T):
        D = character_dual_complex(T)
        ctx.check(is_acyclic(D) == acyc, "character dual of L (x) M disagrees on acyclicity", v)
        if _finite_complex(L):
            adj = total_hom(M, character_dual_complex(L)).complex
            ctx.check(is_acyclic(adj) == acyc, "Hom(M, dual L) disagrees with L (x) M on acyclicity", v)
    return v


# --- registry ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteEntry:
    fn: object
    rings: tuple
    cases: int
    min_non_vacuous: int = MIN_NON_VACUOUS
    vnr_dependent: bool = False
    max_rank: int = 3
    max_length: int = 4


Z4, Z6, Z9, Z8, Z12 = IntMod(4), IntMod(6), IntMod(9), IntMod(8), IntMod(12)
Z5inv = IntInvert((5,))

SUITES = {
    "vnr": SuiteEntry(suite_vnr, (Z6,), 130, vnr_dependent=True),
    "bg": SuiteEntry(suite_bg, (Z4,), 90),
    "two_of_three": SuiteEntry(suite_two_of_three, (ZZ, Z4, Z6, Z5inv), 150),
    "ses_pa": SuiteEntry(suite_ses_pa, (ZZ, Z4, Z6, Z5inv), 80),
    "ses_he": SuiteEntry(suite_ses_he, (ZZ, Z4, Z6, Z5inv), 80),
    "impl": SuiteEntry(suite_impl, (Z4, Z9, Z6, IntLocalAt(3), ZZ), 80, max_rank=2, max_length=3),
    "pmiff": SuiteEntry(suite_pmiff, (Z4, Z6, Z9), 80, max_rank=2, max_length=3),
    "m1m4": SuiteEntry(suite_m1m4, (Z4, Z6, Z9), 80, max_rank=2, max_length=3),
    "asm_apm": SuiteEntry(suite_asm_apm, (ZZ, Z4, Z6, Z5inv, IntLocalAt(3)), 70),
    "semiflat": SuiteEntry(suite_semiflat, (Z4, Z6, Z9), 60, max_rank=2, max_length=3),
    "semiinj": SuiteEntry(suite_semiinj, (Z4, Z6, Z12, Z9), 90, max_rank=2, max_length=3),
    "corvnr": SuiteEntry(suite_corvnr, (Z6,), 60, vnr_dependent=True, max_rank=2, max_length=3),
    "perfect": SuiteEntry(suite_perfect, (Z4, Z8, Z9, IntMod(5)), 60, max_rank=2),
    "pmsm": SuiteEntry(suite_pmsm, (Z4, Z6, Z9), 90, max_rank=2, max_length=3),
    "appendix_hom": SuiteEntry(suite_appendix_hom, (ZZ, Z4, Z6), 60),
    "appendix_homZ": SuiteEntry(suite_appendix_homZ, (ZZ, Z4, Z6), 70),
    "appendix_tensor": SuiteEntry(suite_appendix_tensor, (ZZ, Z4, Z6), 60),
}


def run_case(name: str, seed: int, index: int, profile: GenProfile | None = None) -> dict:
    """Run one case; the outcome is a plain dict so it can cross process boundaries."""
    entry = SUITES[name]
    ring = profile.ring if profile is not None else entry.rings[index % len(entry.rings)]
    s = case_seed(name, seed, index)
    ctx = Ctx(
        name, index, s, ring, random.Random(s),
        profile.max_length if profile else entry.max_length,
        min(profile.max_rank, entry.max_rank) if profile else entry.max_rank,
        profile.entry_bound if profile else 9,
    )
    out = {"case": index, "seed": s, "ring": ring.to_json(), "vacuous": False, "violations": [], "error": None}
    try:
        out["violations"] = list(entry.fn(ctx))
    except Vacuous:
        out["vacuous"] = True
    except Exception as exc:  # an exception is reported, never swallowed into a pass
        out["error"] = f"{type(exc).__name__}: {exc}"
    out["expect"] = entry.vnr_dependent and not ring.is_vnr
    if out["violations"] or out["error"]:
        out["objects"] = {k: _serialize(o) for k, o in ctx.objects.items()}
    return out


def _run_case_args(args):
    return run_case(*args)


def run_suite(name: str, profile: GenProfile | None = None, cases: int | None = None, seed: int = 0,
              jobs: int = 1) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    entry = SUITES[name]
    n = entry.cases if cases is None else cases
    seed = profile.seed if profile is not None and seed == 0 else seed
    args = [(name, seed, k, profile) for k in range(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_case_args, args))
    else:
        results = [run_case(*a) for a in args]
    results.sort(key=lambda r: r["case"])
    failures, expected, errors = [], [], []
    non_vacuous = 0
    for r in results:
        if r["error"]:
            errors.append({"case": r["case"], "seed": r["seed"], "error": r["error"], "objects": r.get("objects")})
            continue
        if r["vacuous"]:
            continue
        non_vacuous += 1
        if r["violations"]:
            item = {"case": r["case"], "seed": r["seed"], "ring": r["ring"],
                    "violations": r["violations"], "objects": r["objects"]}
            (expected if r["expect"] else failures).append(item)
    expect = any(r["expect"] for r in results)
    return SuiteReport(name, seed, n, non_vacuous, failures, expected, expect, errors, entry.min_non_vacuous)


def report_json(report: SuiteReport) -> str:
    return json.dumps(report.to_json(), sort_keys=False, separators=(",", ":"))
