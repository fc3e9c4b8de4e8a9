"""Finitely presented modules, homomorphisms and purity of short exact sequences.

A module ``M = coker(R)`` is stored as a generator count ``g`` and a
relation matrix ``R`` with ``g`` rows (one column per relation); elements
are coordinate vectors modulo the column span of ``R``.  A homomorphism
``M -> N`` is a matrix sending generators of ``M`` to coordinate vectors
of ``N``.

Purity is decided as splitness.  Over the supported rings every module
is finitely presented and the rings are noetherian, so a pure exact
sequence ``0 -> L -> M -> N -> 0`` has finitely presented ``N`` and
therefore splits; split sequences are always pure.  The Hom and tensor
descriptions of purity are kept as witnesses (see :func:`is_pure_ses`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .linalg import LinearSystem, inverse, kernel, snf, solve_linear
from .matrix import Matrix
from .rings import IntMod, RingSpec, lcm, ring_from_json


@dataclass(frozen=True)
class CanonicalForm:
    """``M`` is isomorphic to the sum of ``R/(d)`` over ``divisors`` plus ``R**free_rank``."""

    divisors: tuple
    free_rank: int

    @property
    def is_zero(self):
        return not self.divisors and self.free_rank == 0

    def __str__(self):
        parts = [f"R/({d})" for d in self.divisors]
        if self.free_rank:
            parts.append(f"R^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _subquotient_relations(G: Matrix, S: Matrix) -> Matrix:
    """Relations among the columns of ``G`` modulo the column span of ``S``."""
    K = kernel(G.hstack(S))
    return K.submatrix(range(G.cols), None)


@dataclass(frozen=True, eq=False)
class FPModule:
    ring: RingSpec
    generators: int
    relations: Matrix

    def __post_init__(self):
        if self.relations.rows != self.generators:
            raise ValueError(
                f"relation matrix has {self.relations.rows} rows for {self.generators} generators"
            )
        if self.relations.ring != self.ring:
            raise ValueError("relation matrix lives over a different ring")

    # --- constructors ---------------------------------------------------

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank, Matrix.zeros(ring, rank, 0))

    @classmethod
    def zero(cls, ring):
        return cls.free(ring, 0)

    @classmethod
    def cyclic(cls, ring, d):
        return cls(ring, 1, Matrix(ring, [[d]]))

    @classmethod
    def from_divisors(cls, ring, divisors, free_rank=0):
        divisors = list(divisors)
        g = len(divisors) + free_rank
        return cls(ring, g, Matrix.diagonal(ring, divisors, g, len(divisors)))

    @classmethod
    def presented_by(cls, relations: Matrix):
        return cls(relations.ring, relations.rows, relations)

    # --- structure ------------------------------------------------------

    @cached_property
    def smith(self):
        return snf(self.relations)

    @cached_property
    def _pruning(self):
        ring = self.ring
        sf = self.smith
        g = self.generators
        divs = list(sf.divisors) + [0] * (g - len(sf.divisors))
        kept = [i for i, d in enumerate(divs) if not ring.is_unit(d)]
        Uinv = inverse(sf.U) if g else sf.U
        to_p = sf.U.submatrix(kept, None)
        from_p = Uinv.submatrix(None, kept)
        kept_divs = [divs[i] for i in kept]
        torsion = [i for i, d in enumerate(kept_divs) if d != 0]
        # diagonal presentation; zero divisors contribute free generators
        rel = [[0] * len(torsion) for _ in kept]
        for j, i in enumerate(torsion):
            rel[i][j] = kept_divs[i]
        rel = Matrix(ring, rel, len(kept), len(torsion), canonical=True)
        return FPModule(ring, len(kept), rel), to_p, from_p, tuple(kept_divs)

    def pruned(self):
        """``(P, to_p, from_p)``: a diagonal presentation ``P`` and mutually inverse isomorphisms."""
        P, to_p, from_p, _ = self._pruning
        return P, ModuleHom(self, P, to_p), ModuleHom(P, self, from_p)

    @cached_property
    def canonical_form(self) -> CanonicalForm:
        kept = self._pruning[3]
        return CanonicalForm(tuple(d for d in kept if d != 0), sum(1 for d in kept if d == 0))

    def is_zero(self) -> bool:
        return self.canonical_form.is_zero

    def is_free(self) -> bool:
        return not self.canonical_form.divisors

    def is_finite(self) -> bool:
        if self.ring.is_finite:
            return True
        return self.ring.kind == "Int" and self.canonical_form.free_rank == 0

    def cardinality(self):
        if not self.is_finite():
            return None
        cf = self.canonical_form
        out = 1
        for d in cf.divisors:
            out *= d
        if cf.free_rank:
            out *= self.ring.size**cf.free_rank
        return out

    def exponent(self):
        """Least positive e with e*M = 0 for finite modules over Z; n over Z/n."""
        if self.ring.kind == "IntMod":
            return self.ring.n
        if not self.is_finite():
            raise ValueError("exponent of an infinite module")
        return lcm(*self.canonical_form.divisors) if self.canonical_form.divisors else 1

    def contains_zero(self, v) -> bool:
        """Is the coordinate vector ``v`` zero in the module?"""
        if all(x == 0 for x in v):
            return True
        return solve_linear(self.relations, Matrix.column_vector(self.ring, v)) is not None

    def hom_is_zero(self, A: Matrix) -> bool:
        """Do all columns of ``A`` (coordinates in this module) vanish?"""
        if A.is_zero():
            return True
        return solve_linear(self.relations, A) is not None

    def identity(self) -> ModuleHom:
        return ModuleHom(self, self, Matrix.identity(self.ring, self.generators))

    # --- finite enumeration -----------------------------------------------

    def _orders(self):
        kept = self._pruning[3]
        n = self.ring.size if self.ring.is_finite else None
        return [d if d != 0 else n for d in kept]

    def canonical_element(self, v) -> tuple:
        """Normal form of an element of a finite module (coordinates in the pruned basis)."""
        _, to_p, _, _ = self._pruning
        ring = self.ring
        y = to_p @ Matrix.column_vector(ring, v)
        return tuple(int(ring.lift(a)) % o for a, o in zip(y.column(0), self._orders()))

    def element_from_canonical(self, c) -> tuple:
        _, _, from_p, _ = self._pruning
        return (from_p @ Matrix.column_vector(self.ring, c)).column(0)

    def elements(self):
        """All elements of a finite module, as coordinate vectors in this presentation."""
        if not self.is_finite():
            raise ValueError("module is not finite")
        for c in itertools.product(*(range(o) for o in self._orders())):
            yield self.element_from_canonical(c)

    # --- CRT ------------------------------------------------------------

    @cached_property
    def crt_components(self):
        """``[(q, M/qM over Z/q)]`` for the prime-power factors q of n (IntMod only)."""
        if self.ring.kind != "IntMod":
            raise ValueError("CRT decomposition only applies to IntMod rings")
        out = []
        for q in self.ring.prime_power_factors():
            Rq = IntMod(q)
            out.append((q, FPModule(Rq, self.generators, self.relations.change_ring(Rq))))
        return out

    # --- misc -----------------------------------------------------------

    def __repr__(self):
        return f"FPModule({self.ring}, {self.canonical_form})"

    def same_presentation(self, other) -> bool:
        return self.ring == other.ring and self.generators == other.generators and self.relations == other.relations

    def to_json(self, with_ring=False):
        out = {}
        if with_ring:
            out["ring"] = self.ring.to_json()
        if self.relations.cols == 0:
            out["free_rank"] = self.generators
        else:
            out["generators"] = self.generators
            out["relations"] = self.relations.to_json()
        return out

    @classmethod
    def from_json(cls, obj, ring: RingSpec | None = None):
        if ring is None:
            ring = ring_from_json(obj["ring"])
        if "free_rank" in obj:
            return cls.free(ring, int(obj["free_rank"]))
        g = int(obj["generators"])
        rel = obj.get("relations")
        if rel is None:
            return cls.free(ring, g)
        return cls(ring, g, Matrix.from_json(rel, ring))


def direct_sum(*modules: FPModule) -> FPModule:
    ring = modules[0].ring
    return FPModule(
        ring, sum(m.generators for m in modules), Matrix.block_diag(ring, *(m.relations for m in modules))
    )


@dataclass(frozen=True, eq=False)
class ModuleHom:
    source: FPModule
    target: FPModule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.generators, self.source.generators):
            raise ValueError(
                f"hom matrix shape {self.matrix.shape} does not match "
                f"{self.target.generators}x{self.source.generators}"
            )

    @property
    def ring(self):
        return self.source.ring

    def is_well_defined(self) -> bool:
        return self.target.hom_is_zero(self.matrix @ self.source.relations)

    def __matmul__(self, other: ModuleHom) -> ModuleHom:
        return ModuleHom(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other):
        return ModuleHom(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other):
        return ModuleHom(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self):
        return ModuleHom(self.source, self.target, -self.matrix)

    def scale(self, c):
        return ModuleHom(self.source, self.target, self.matrix.scale(c))

    def is_zero(self) -> bool:
        return self.target.hom_is_zero(self.matrix)

    def equals(self, other: ModuleHom) -> bool:
        return (self - other).is_zero()

    @cached_property
    def kic(self):
        return kic(self)

    def is_injective(self) -> bool:
        return self.kic.kernel.is_zero()

    def is_surjective(self) -> bool:
        return self.kic.cokernel.is_zero()

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def apply(self, v):
        return (self.matrix @ Matrix.column_vector(self.ring, v)).column(0)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, Matrix.zeros(source.ring, target.generators, source.generators))


@dataclass(frozen=True, eq=False)
class KIC:
    kernel: FPModule
    kernel_incl: ModuleHom
    image: FPModule
    image_from: ModuleHom
    image_incl: ModuleHom
    cokernel: FPModule
    coker_proj: ModuleHom


def kic(f: ModuleHom) -> KIC:
    """Kernel, image and cokernel of ``f`` with their structure maps."""
    M, N, A = f.source, f.target, f.matrix
    ring = f.ring
    # preimage of the relations of N, as vectors in the generator space of M
    P = kernel(A.hstack(N.relations)).submatrix(range(M.generators), None)
    ker_rel = _subquotient_relations(P, M.relations)
    K = FPModule(ring, P.cols, ker_rel)
    im_rel = P.hstack(M.relations) if M.relations.cols else P
    # image = R^g / preimage(relations of N)
    I = FPModule(ring, M.generators, im_rel)
    C = FPModule(ring, N.generators, N.relations.hstack(A))
    return KIC(
        kernel=K,
        kernel_incl=ModuleHom(K, M, P),
        image=I,
        image_from=ModuleHom(M, I, Matrix.identity(ring, M.generators)),
        image_incl=ModuleHom(I, N, A),
        cokernel=C,
        coker_proj=ModuleHom(N, C, Matrix.identity(ring, N.generators)),
    )


def canonical_form(M: FPModule) -> CanonicalForm:
    return M.canonical_form


def tensor_modules(M: FPModule, N: FPModule) -> FPModule:
    ring = M.ring
    if N.ring != ring:
        raise ValueError("tensor product over different rings")
    Ig = Matrix.identity(ring, M.generators)
    Ih = Matrix.identity(ring, N.generators)
    rel = M.relations.kron(Ih).hstack(Ig.kron(N.relations))
    return FPModule(ring, M.generators * N.generators, rel)


def tensor_homs(f: ModuleHom, g: ModuleHom) -> ModuleHom:
    return ModuleHom(
        tensor_modules(f.source, g.source), tensor_modules(f.target, g.target), f.matrix.kron(g.matrix)
    )


@dataclass(frozen=True, eq=False)
class HomModule:
    """``Hom(source, target)`` as a finitely presented module.

    ``basis[j]`` is the matrix of the hom represented by the j-th
    generator of ``module``.
    """

    source: FPModule
    target: FPModule
    module: FPModule
    lifts: Matrix  # columns: row-major vectorized hom matrices
    null: Matrix  # vectorized homs that are zero as maps

    @property
    def basis(self):
        h, g = self.target.generators, self.source.generators
        return [_unvec(self.lifts.column(j), h, g, self.module.ring) for j in range(self.lifts.cols)]

    def element(self, coords) -> Matrix:
        h, g = self.target.generators, self.source.generators
        v = self.lifts @ Matrix.column_vector(self.module.ring, coords)
        return _unvec(v.column(0), h, g, self.module.ring)

    def hom(self, coords) -> ModuleHom:
        return ModuleHom(self.source, self.target, self.element(coords))

    def coordinates(self, X: Matrix):
        """Coordinates of the (well-defined) hom with matrix ``X``; None if not a hom."""
        ring = self.module.ring
        v = Matrix.column_vector(ring, [x for r in X.data for x in r])
        sol = solve_linear(self.lifts.hstack(self.null), v)
        if sol is None:
            return None
        return sol.column(0)[: self.lifts.cols]

    def homs(self):
        """Enumerate all homs (only when the hom-set is finite)."""
        if not self.module.is_finite():
            raise ValueError("hom-set is infinite; only generators are available")
        for c in self.module.elements():
            yield self.hom(c)


def _unvec(v, h, g, ring) -> Matrix:
    return Matrix(ring, [list(v[i * g : (i + 1) * g]) for i in range(h)], h, g, canonical=True)


def hom_modules(M: FPModule, N: FPModule) -> HomModule:
    """Presentation of Hom(M, N) computed from the presentations."""
    ring = M.ring
    if N.ring != ring:
        raise ValueError("Hom between modules over different rings")
    g, k = M.generators, M.relations.cols
    h, l = N.generators, N.relations.cols
    RM, RN = M.relations.data, N.relations.data
    nx = h * g
    # unknowns: X (h x g) row-major, then Z (l x k); equations X R_M - R_N Z = 0
    rows = []
    for i in range(h):
        for j in range(k):
            row = [0] * (nx + l * k)
            for a in range(g):
                row[i * g + a] = RM[a][j]
            for c in range(l):
                row[nx + c * k + j] = ring.neg(RN[i][c])
            rows.append(row)
    E = Matrix(ring, rows, h * k, nx + l * k, canonical=True)
    lifts = kernel(E).submatrix(range(nx), None)
    # homs of the form R_N Y vanish: vec(R_N Y) for Y (l x g)
    null = [[0] * (l * g) for _ in range(nx)]
    for i in range(h):
        for a in range(g):
            for c in range(l):
                null[i * g + a][c * g + a] = RN[i][c]
    S = Matrix(ring, null, nx, l * g, canonical=True)
    rel = _subquotient_relations(lifts, S)
    return HomModule(M, N, FPModule(ring, lifts.cols, rel), lifts, S)


def hom_map_pre(f: ModuleHom, HN: HomModule, HM: HomModule) -> ModuleHom:
    """``Hom(f, T): Hom(N, T) -> Hom(M, T)``, phi |-> phi o f, on presentations."""
    cols = []
    for X in HN.basis:
        c = HM.coordinates(X @ f.matrix)
        if c is None:
            raise ValueError("precomposition did not produce a hom")
        cols.append(c)
    return ModuleHom(HN.module, HM.module, Matrix.from_columns(f.ring, cols, HM.module.generators))


def hom_map_post(f: ModuleHom, HM: HomModule, HN: HomModule) -> ModuleHom:
    """``Hom(T, f): Hom(T, M) -> Hom(T, N)``, phi |-> f o phi."""
    cols = []
    for X in HM.basis:
        c = HN.coordinates(f.matrix @ X)
        if c is None:
            raise ValueError("postcomposition did not produce a hom")
        cols.append(c)
    return ModuleHom(HM.module, HN.module, Matrix.from_columns(f.ring, cols, HN.module.generators))


# --- character dual -----------------------------------------------------------


def dual_target(ring: RingSpec, *modules: FPModule) -> FPModule:
    """A cyclic module T with Hom_R(M, T) = Hom_Z(M, Q/Z) for the given finite modules.

    Over Z/n this is R itself (n kills M, and Z/n is self-injective);
    over Z it is Z/e with e a common exponent.
    """
    for M in modules:
        if not M.is_finite():
            raise ValueError("character dual needs a finite module")
    if ring.kind == "IntMod":
        return FPModule.free(ring, 1)
    e = lcm(*(M.exponent() for M in modules)) if modules else 1
    return FPModule.cyclic(ring, e)


def character_dual_data(M: FPModule, target: FPModule | None = None) -> HomModule:
    if target is None:
        target = dual_target(M.ring, M)
    return hom_modules(M, target)


def character_dual(M: FPModule) -> FPModule:
    """Pontryagin dual Hom_Z(M, Q/Z) of a finite module, as an R-module."""
    return character_dual_data(M).module


def character_dual_hom(f: ModuleHom, target: FPModule | None = None) -> ModuleHom:
    """Dual of ``f: M -> N`` as a map ``N^ -> M^``."""
    if target is None:
        target = dual_target(f.ring, f.source, f.target)
    HN = hom_modules(f.target, target)
    HM = hom_modules(f.source, target)
    return hom_map_pre(f, HN, HM)


# --- short exact sequences and purity ----------------------------------------


@dataclass(frozen=True, eq=False)
class SESModules:
    inj: ModuleHom
    surj: ModuleHom

    def validate(self):
        """List of failed invariants (empty when the sequence is short exact)."""
        errors = []
        if not self.inj.target.same_presentation(self.surj.source) and self.inj.target is not self.surj.source:
            errors.append("middle modules differ")
            return errors
        if not self.inj.is_well_defined():
            errors.append("inj is not well defined")
        if not self.surj.is_well_defined():
            errors.append("surj is not well defined")
        if errors:
            return errors
        if not self.inj.is_injective():
            errors.append("inj is not injective")
        if not self.surj.is_surjective():
            errors.append("surj is not surjective")
        if not (self.surj @ self.inj).is_zero():
            errors.append("surj o inj != 0")
        else:
            # kernel(surj) inside image(inj)
            K = self.surj.kic.kernel_incl.matrix
            M = self.inj.target
            if solve_linear(self.inj.matrix.hstack(M.relations), K) is None:
                errors.append("kernel(surj) is not contained in image(inj)")
        return errors

    @property
    def L(self):
        return self.inj.source

    @property
    def M(self):
        return self.inj.target

    @property
    def N(self):
        return self.surj.target


def ses_from_submodule(M: FPModule, gens: Matrix) -> SESModules:
    """``0 -> <gens> -> M -> M/<gens> -> 0`` for generator columns ``gens`` of a submodule."""
    ring = M.ring
    L = FPModule(ring, gens.cols, _subquotient_relations(gens, M.relations))
    N = FPModule(ring, M.generators, M.relations.hstack(gens))
    return SESModules(ModuleHom(L, M, gens), ModuleHom(M, N, Matrix.identity(ring, M.generators)))


def find_retraction(f: ModuleHom) -> ModuleHom | None:
    """A hom ``r`` with ``r o f = id`` if one exists."""
    L, M = f.source, f.target
    ring = f.ring
    sys = LinearSystem(ring)
    sys.unknown("r", L.generators, M.generators)
    sys.unknown("z1", L.relations.cols, M.relations.cols)
    sys.unknown("z2", L.relations.cols, L.generators)
    # well defined: r R_M = R_L z1
    sys.equation([(None, "r", M.relations), (-L.relations, "z1", None)],
                 Matrix.zeros(ring, L.generators, M.relations.cols))
    # r f = id modulo relations of L
    sys.equation([(None, "r", f.matrix), (-L.relations, "z2", None)], Matrix.identity(ring, L.generators))
    sol = sys.solve()
    if sol is None:
        return None
    return ModuleHom(M, L, sol["r"])


def find_section(f: ModuleHom) -> ModuleHom | None:
    """A hom ``s`` with ``f o s = id`` if one exists."""
    M, N = f.source, f.target
    ring = f.ring
    sys = LinearSystem(ring)
    sys.unknown("s", M.generators, N.generators)
    sys.unknown("z1", M.relations.cols, N.relations.cols)
    sys.unknown("z2", N.relations.cols, N.generators)
    sys.equation([(None, "s", N.relations), (-M.relations, "z1", None)],
                 Matrix.zeros(ring, M.generators, N.relations.cols))
    sys.equation([(f.matrix, "s", None), (-N.relations, "z2", None)], Matrix.identity(ring, N.generators))
    sol = sys.solve()
    if sol is None:
        return None
    return ModuleHom(N, M, sol["s"])


@dataclass(frozen=True, eq=False)
class PurityResult:
    pure: bool
    retraction: ModuleHom | None = None
    witness: FPModule | None = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.pure


def tensor_exactness_fails(s: SESModules, d) -> bool:
    """Does ``R/(d) (x) L -> R/(d) (x) M`` fail to be injective?"""
    C = FPModule.cyclic(s.L.ring, d)
    return not tensor_homs(C.identity(), s.inj).is_injective()


def is_pure_ses(s: SESModules, check=True) -> PurityResult:
    """Decide purity of a short exact sequence of finitely presented modules.

    Pure iff split: a retraction of ``inj`` is searched for by one linear
    solve.  When none exists, a cyclic module ``R/(d)`` with ``d`` an
    elementary divisor of the quotient is returned for which tensoring
    loses injectivity.
    """
    if check:
        errors = s.validate()
        if errors:
            raise ValueError("invalid short exact sequence: " + "; ".join(errors))
    r = find_retraction(s.inj)
    if r is not None:
        return PurityResult(True, retraction=r, notes=["split: retraction found"])
    ring = s.L.ring
    candidates = list(s.N.canonical_form.divisors)
    if ring.kind == "IntMod":
        candidates += [d for d in range(2, ring.n) if ring.n % d == 0]
    for d in candidates:
        if tensor_exactness_fails(s, d):
            return PurityResult(False, witness=FPModule.cyclic(ring, d), notes=[f"R/({d}) (x) - is not exact"])
    raise AssertionError("non-split sequence without a tensor witness; purity collapse violated")


def classify_module(M: FPModule) -> dict:
    """Free / projective / flat / self-injective flags for a finitely presented module."""
    ring = M.ring
    cf = M.canonical_form
    if ring.kind != "IntMod":
        free = not cf.divisors
        return {
            "is_free": free,
            "is_projective": free,
            "is_flat": free,
            "is_injective_over_self": cf.is_zero,
        }
    comps = M.crt_components
    ranks = []
    proj = True
    for q, Mq in comps:
        cq = Mq.canonical_form
        if cq.divisors:
            proj = False
        ranks.append(cq.free_rank)
    free = proj and len(set(ranks)) <= 1
    return {
        "is_free": free,
        "is_projective": proj,
        "is_flat": proj,
        # Z/n is quasi-Frobenius: injective = projective, decided per component
        "is_injective_over_self": proj,
    }
