"""Seeded random modules, complexes, maps and sequences.

Every generator takes a ``random.Random`` instance, so a fixed seed
reproduces the same objects bit for bit.  Complexes are assembled from
pieces whose differentials square to zero by construction (disks,
spheres, two-term complexes, cones, kernel-compatible stacks) and then
conjugated by random unimodular basis changes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..complexes import (
    Bounded,
    ChainComplex,
    ChainMap,
    Periodic,
    SESComplexes,
    cone,
    cone_sequence,
    direct_sum_complexes,
)
from ..linalg import kernel
from ..matrix import Matrix
from ..modules import FPModule, ses_from_submodule
from ..rings import RingSpec, ring_from_json

STYLES = ("free_random", "disk_sphere_sum_scrambled", "cone_of_random_map", "acyclic_by_construction")


@dataclass(frozen=True)
class GenProfile:
    ring: RingSpec
    max_length: int = 5
    max_rank: int = 4
    entry_bound: int = 9
    style: str = "free_random"
    seed: int = 0

    def __post_init__(self):
        if self.style not in STYLES:
            raise ValueError(f"unknown style {self.style!r}")
        if self.max_length < 1 or self.max_rank < 1 or self.entry_bound < 1:
            raise ValueError("profile bounds must be positive")

    def with_seed(self, seed):
        return GenProfile(self.ring, self.max_length, self.max_rank, self.entry_bound, self.style, seed)

    def to_json(self):
        return {
            "ring": self.ring.to_json(),
            "max_length": self.max_length,
            "max_rank": self.max_rank,
            "entry_bound": self.entry_bound,
            "style": self.style,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(ring_from_json(obj["ring"]), obj.get("max_length", 5), obj.get("max_rank", 4),
                   obj.get("entry_bound", 9), obj.get("style", "free_random"), obj.get("seed", 0))


# --- elements and matrices ---------------------------------------------------------


def rand_elem(rng: random.Random, ring: RingSpec, bound=9):
    if ring.kind == "IntMod":
        return rng.randrange(ring.n)
    a = rng.randint(-bound, bound)
    if ring.kind == "Int" or rng.random() < 0.7:
        return a
    if ring.kind == "IntInvert":
        den = rng.choice(ring.primes) ** rng.randint(1, 2)
    else:
        den = rng.choice([q for q in range(2, 8) if q % ring.p])
    return ring.elem(Fraction(a, den))


def rand_unit(rng: random.Random, ring: RingSpec):
    if ring.kind == "IntMod":
        return rng.choice([u for u in range(1, ring.n) if ring.is_unit(u)])
    sign = rng.choice([1, -1])
    if ring.kind == "IntInvert" and rng.random() < 0.5:
        p = rng.choice(ring.primes)
        return ring.elem(Fraction(sign * p) if rng.random() < 0.5 else Fraction(sign, p))
    if ring.kind == "IntLocalAt" and rng.random() < 0.5:
        q = rng.choice([q for q in range(2, 8) if q % ring.p])
        return ring.elem(Fraction(sign * q, rng.choice([1, q + ring.p])))
    return sign


def rand_nonunit(rng: random.Random, ring: RingSpec, bound=9):
    """A nonzero non-unit (None when the ring is a field)."""
    if ring.kind == "IntMod":
        cands = [a for a in range(1, ring.n) if not ring.is_unit(a)]
        return rng.choice(cands) if cands else None
    if ring.kind == "Int":
        return rng.choice([2, 3, 4, 6, -2, -3])
    if ring.kind == "IntInvert":
        cands = [a for a in range(2, bound + 3) if not ring.is_unit(a)]
        return rng.choice(cands)
    return ring.p * rng.choice([1, 2, 3, -1])


def rand_matrix(rng, ring, rows, cols, bound=9, density=0.7):
    return Matrix(ring, [[rand_elem(rng, ring, bound) if rng.random() < density else 0 for _ in range(cols)]
                         for _ in range(rows)], rows, cols)


def unimodular(rng: random.Random, ring: RingSpec, n: int, steps=None, bound=2):
    """A random invertible matrix together with its inverse (products of elementary moves)."""
    B = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    Binv = [row[:] for row in B]
    steps = 2 * n if steps is None else steps
    if n == 0:
        return Matrix.zeros(ring, 0, 0), Matrix.zeros(ring, 0, 0)
    for _ in range(steps):
        kind = rng.random()
        if n > 1 and kind < 0.7:
            i, j = rng.sample(range(n), 2)
            c = ring.elem(rng.randint(-bound, bound))
            # B <- E B with E = 1 + c e_ij (row i += c row j); Binv <- Binv E^-1 (col j -= c col i)
            B[i] = [ring.add(x, ring.mul(c, y)) for x, y in zip(B[i], B[j])]
            for row in Binv:
                row[j] = ring.sub(row[j], ring.mul(c, row[i]))
        elif n > 1 and kind < 0.85:
            i, j = rng.sample(range(n), 2)
            B[i], B[j] = B[j], B[i]
            for row in Binv:
                row[i], row[j] = row[j], row[i]
        else:
            i = rng.randrange(n)
            u = rand_unit(rng, ring)
            ui = ring.inverse(u)
            B[i] = [ring.mul(u, x) for x in B[i]]
            for row in Binv:
                row[i] = ring.mul(row[i], ui)
    return Matrix(ring, B, n, n), Matrix(ring, Binv, n, n)


def rand_module(rng, ring, max_gens=2, bound=9, free_prob=0.3):
    g = rng.randint(1, max_gens)
    if rng.random() < free_prob:
        return FPModule.free(ring, g)
    k = rng.randint(1, g)
    return FPModule(ring, g, rand_matrix(rng, ring, g, k, bound))


# --- basis changes ------------------------------------------------------------------


@dataclass
class Scrambled:
    complex: ChainComplex
    to: dict  # degree -> B_i, a chain isomorphism original -> complex
    frm: dict  # degree -> B_i^-1

    def iso(self, original) -> ChainMap:
        return ChainMap(original, self.complex, dict(self.to))


def scramble(rng, C: ChainComplex) -> Scrambled:
    """Conjugate ``C`` by random invertible matrices in every degree."""
    ring = C.ring
    to, frm, mods = {}, {}, {}
    for i in C.degrees():
        M = C.module(i)
        B, Bi = unimodular(rng, ring, M.generators)
        to[i], frm[i] = B, Bi
        mods[i] = FPModule(ring, M.generators, B @ M.relations)
    tmp = ChainComplex(ring, C.shape, mods)
    diffs = {}
    for i in tmp.diff_degrees():
        j = C._key(i - 1)
        if j is None:
            continue
        diffs[i] = to[j] @ C.d(i) @ frm[C._key(i)]
    return Scrambled(ChainComplex(ring, C.shape, mods, diffs), to, frm)


# --- building blocks -----------------------------------------------------------------


def free_random(rng, ring, lo=0, length=3, max_rank=3, bound=9, zero_prob=0.15) -> ChainComplex:
    """Random free complex; each differential is a random combination of left-kernel rows of the next."""
    ranks = [0 if rng.random() < 0.1 else rng.randint(1, max_rank) for _ in range(length)]
    hi = lo + length - 1
    diffs = {}
    nxt = None  # differential d_{i+1}
    for i in range(hi, lo, -1):
        r_src, r_tgt = ranks[i - lo], ranks[i - 1 - lo]
        if rng.random() < zero_prob:
            D = Matrix.zeros(ring, r_tgt, r_src)
        elif nxt is None:
            D = rand_matrix(rng, ring, r_tgt, r_src, bound)
        else:
            K = kernel(nxt.T)  # columns y with y^T d_{i+1} = 0
            coeff = rand_matrix(rng, ring, K.cols, r_tgt, 2)
            D = (K @ coeff).T
        diffs[i] = D
        nxt = D
    return ChainComplex.free(ring, lo, ranks, diffs)


def two_term(M: FPModule, N: FPModule, A: Matrix, degree=1) -> ChainComplex:
    """``M --A--> N`` in degrees ``degree`` and ``degree - 1``."""
    return ChainComplex(M.ring, Bounded(degree - 1, degree), {degree: M, degree - 1: N}, {degree: A})


def placed(C: ChainComplex, lo: int, hi: int) -> ChainComplex:
    return C.with_shape(Bounded(lo, hi))


def sum_bounded(ring, pieces, lo, hi) -> ChainComplex:
    if not pieces:
        return ChainComplex(ring, Bounded(lo, hi), {})
    return direct_sum_complexes(*(placed(P, lo, hi) for P in pieces))


@dataclass
class Content:
    """Bookkeeping of the summands used by a generator."""

    disks: list = field(default_factory=list)  # (degree, rank)
    spheres: list = field(default_factory=list)  # (degree, divisor or 0)


def disk_sphere_sum(rng, ring, lo=0, length=3, max_rank=3, bound=9, modules=False):
    """Sum of disks, free spheres and two-term complexes ``R --a--> R`` with ``a`` a non-unit.

    Returns the unscrambled sum and its content.
    """
    hi = lo + max(length, 2) - 1
    pieces = []
    content = Content()
    for _ in range(rng.randint(1, max_rank)):
        t = rng.random()
        if t < 0.45:
            k = rng.randint(lo + 1, hi)
            M = rand_module(rng, ring, 2, bound) if modules else FPModule.free(ring, rng.randint(1, 2))
            pieces.append(ChainComplex.disk(M, k))
            content.disks.append((k, M.generators))
        elif t < 0.7:
            k = rng.randint(lo, hi)
            pieces.append(ChainComplex.sphere(FPModule.free(ring, 1), k))
            content.spheres.append((k, 0))
        else:
            a = rand_nonunit(rng, ring, bound)
            k = rng.randint(lo + 1, hi)
            if a is None:
                pieces.append(ChainComplex.sphere(FPModule.free(ring, 1), k))
                content.spheres.append((k, 0))
                continue
            R1 = FPModule.free(ring, 1)
            pieces.append(two_term(R1, R1, Matrix(ring, [[a]]), k))
            content.spheres.append((k - 1, a))
    return sum_bounded(ring, pieces, lo, hi), content


def random_homotopic_map(rng, C: ChainComplex, c=None, bound=3) -> ChainMap:
    """``c * 1 + d s + s d`` for a random degree-one family ``s`` (free complexes)."""
    ring = C.ring
    if c is None:
        c = rand_elem(rng, ring, bound)
    s = {i: rand_matrix(rng, ring, C.rank(i + 1), C.rank(i), bound, 0.5) for i in C.degrees()}

    def S(i):
        if C.periodic:
            return s[i % C.shape.q]
        return s.get(i, Matrix.zeros(ring, C.rank(i + 1), C.rank(i)))

    comps = {}
    for i in C.degrees():
        comps[i] = Matrix.scalar(ring, C.rank(i), c) + C.d(i + 1) @ S(i) + S(i - 1) @ C.d(i)
    return ChainMap(C, C, comps)


def periodic_two_step(ring, a, b, rank=1) -> ChainComplex:
    """``... -> R^r --a--> R^r --b--> R^r -> ...`` with period 2 (``ab = 0``); period 1 when ``a = b``."""
    R = FPModule.free(ring, rank)
    if a == b:
        return ChainComplex(ring, Periodic(1), {0: R}, {0: Matrix.scalar(ring, rank, a)})
    return ChainComplex(ring, Periodic(2), {0: R, 1: R}, {1: Matrix.scalar(ring, rank, a), 0: Matrix.scalar(ring, rank, b)})


def periodic_disk(ring, rank=1) -> ChainComplex:
    """Period-1 contractible complex ``R^2 --[[0,1],[0,0]]--> R^2``."""
    n = 2 * rank
    rows = [[0] * n for _ in range(n)]
    for k in range(rank):
        rows[2 * k][2 * k + 1] = 1
    return ChainComplex(ring, Periodic(1), {0: FPModule.free(ring, n)}, {0: Matrix(ring, rows, n, n)})


def module_ses_complex(rng, ring, lo=0, bound=9) -> ChainComplex:
    """``L -> M -> N`` from a random submodule, in degrees ``lo + 2 .. lo``: an acyclic complex."""
    M = rand_module(rng, ring, 2, bound, free_prob=0.5)
    gens = rand_matrix(rng, ring, M.generators, rng.randint(1, 2), bound)
    s = ses_from_submodule(M, gens)
    return ChainComplex(ring, Bounded(lo, lo + 2), {lo + 2: s.L, lo + 1: s.M, lo: s.N},
                        {lo + 2: s.inj.matrix, lo + 1: s.surj.matrix})


def acyclic_piece(rng, ring, lo=0, length=3, max_rank=3, bound=9, allow_modules=True, allow_periodic=True):
    """A complex that is acyclic by construction (disks, cones of identities, module sequences, periodic)."""
    choices = ["disks", "cone_id", "cone_id"]
    if allow_modules:
        choices += ["ses", "disks_mod"]
    if allow_periodic and ring.kind == "IntMod":
        choices += ["periodic"]
    kind = rng.choice(choices)
    if kind in ("disks", "disks_mod"):
        pieces = []
        hi = lo + max(length, 2) - 1
        for _ in range(rng.randint(1, max(1, max_rank - 1))):
            M = rand_module(rng, ring, 2, bound) if kind == "disks_mod" else FPModule.free(ring, rng.randint(1, 2))
            pieces.append(ChainComplex.disk(M, rng.randint(lo + 1, hi)))
        return sum_bounded(ring, pieces, lo, hi), kind
    if kind == "cone_id":
        C = free_random(rng, ring, lo, max(1, length - 1), max(1, max_rank - 1), bound)
        return cone(ChainMap.identity(C)), kind
    if kind == "ses":
        return module_ses_complex(rng, ring, lo, bound), kind
    n = ring.n
    divs = [a for a in range(1, n) if n % a == 0]
    a = rng.choice(divs) if divs else 1
    b = n // a
    base = periodic_two_step(ring, a % n, b % n, rng.randint(1, 2))
    if rng.random() < 0.5:
        base = scramble(rng, base).complex
    return base, kind


# --- profile-driven entry point ---------------------------------------------------------------


def gen_complex(profile: GenProfile) -> ChainComplex:
    rng = random.Random(profile.seed)
    ring = profile.ring
    length = rng.randint(1, profile.max_length)
    rank = profile.max_rank
    B = profile.entry_bound
    if profile.style == "free_random":
        return free_random(rng, ring, 0, length, rank, B)
    if profile.style == "disk_sphere_sum_scrambled":
        C, _ = disk_sphere_sum(rng, ring, 0, length, rank, B)
        return scramble(rng, C).complex
    if profile.style == "cone_of_random_map":
        C = free_random(rng, ring, 0, max(1, length - 1), max(1, rank - 1), B)
        return cone(random_homotopic_map(rng, C))
    C, _ = acyclic_piece(rng, ring, 0, length, rank, B)
    return scramble(rng, C).complex


def gen_disk_sphere(profile: GenProfile):
    """Scrambled disk/sphere sum together with its content bookkeeping."""
    rng = random.Random(profile.seed)
    length = rng.randint(1, profile.max_length)
    C, content = disk_sphere_sum(rng, profile.ring, 0, length, profile.max_rank, profile.entry_bound)
    return scramble(rng, C).complex, content


# --- maps and sequences -------------------------------------------------------------------


def scrambled_ses(rng, s: SESComplexes) -> SESComplexes:
    """Change bases in the middle complex of a sequence."""
    sc = scramble(rng, s.M)
    ring = s.M.ring

    def B(table, i):
        k = s.M._key(i)
        return table[k] if k is not None else Matrix.identity(ring, 0)

    inj = ChainMap(s.L, sc.complex, {i: B(sc.to, i) @ s.inj.f(i) for i in s.inj.degrees()})
    surj = ChainMap(sc.complex, s.N, {i: s.surj.f(i) @ B(sc.frm, i) for i in s.surj.degrees()})
    return SESComplexes(inj, surj)


def gen_split_ses(rng, ring, lo=0, length=3, max_rank=3, bound=9, kind=None):
    """A degreewise split sequence ``0 -> N -> Cone(f) -> S L -> 0`` with a random chain map ``f``.

    ``f: L -> N`` is chosen among: zero, ``c * 1 + ds + sd`` on a random
    complex, identities and inclusions of summands.
    """
    kind = kind or rng.choice(["homotopic", "homotopic", "zero", "identity_like", "contractible_L", "contractible_N"])
    if kind == "contractible_L":
        L, _ = acyclic_piece(rng, ring, lo, length, max_rank, bound, allow_modules=False, allow_periodic=False)
        N = free_random(rng, ring, lo, length, max_rank, bound)
        f = ChainMap.zero(L, N)
    elif kind == "contractible_N":
        L = free_random(rng, ring, lo, length, max_rank, bound)
        N, _ = acyclic_piece(rng, ring, lo, length, max_rank, bound, allow_modules=False, allow_periodic=False)
        f = ChainMap.zero(L, N)
    elif kind == "zero":
        L = free_random(rng, ring, lo, length, max_rank, bound)
        N = free_random(rng, ring, lo, length, max_rank, bound)
        f = ChainMap.zero(L, N)
    else:
        L = free_random(rng, ring, lo, length, max_rank, bound)
        c = rand_unit(rng, ring) if kind == "identity_like" else None
        f = random_homotopic_map(rng, L, c)
        N = L
    s = cone_sequence(f)
    return scrambled_ses(rng, s), kind
