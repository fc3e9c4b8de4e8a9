"""Chain complexes of finitely presented modules.

Complexes are homologically graded: ``d(i): M_i -> M_{i-1}``.  A complex
is either bounded (modules in degrees ``lo..hi``, zero elsewhere) or
periodic with period ``q`` (degree ``i`` and ``i + q`` share module and
differential).  Matrices of differentials have rows indexed by the
generators of the target.

Sign conventions:

* shift: ``(S C)_i = C_{i-1}`` with differential ``-d^C``;
* cone of ``f: L -> N``: ``Cone_i = N_i + L_{i-1}`` and
  ``d = [[d^N, f], [0, -d^L]]``;
* Hom complex: ``d(phi) = d^N phi - (-1)^|phi| phi d^M``;
* tensor complex: ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import Unsupported
from .linalg import LinearSystem, solve_linear
from .matrix import Matrix
from .modules import (
    FPModule,
    HomModule,
    ModuleHom,
    SESModules,
    _subquotient_relations,
    direct_sum,
    dual_target,
    find_retraction,
    hom_map_pre,
    hom_modules,
    is_pure_ses,
    tensor_modules,
)
from .rings import RingSpec, lcm, ring_from_json


@dataclass(frozen=True)
class Bounded:
    lo: int
    hi: int

    kind = "bounded"

    @property
    def empty(self):
        return self.hi < self.lo

    def to_json(self):
        return {"kind": "bounded", "min": self.lo, "max": self.hi}


@dataclass(frozen=True)
class Periodic:
    q: int

    kind = "periodic"

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("period must be at least 1")

    def to_json(self):
        return {"kind": "periodic", "period": self.q}


def shape_from_json(obj):
    kind = obj.get("kind")
    if kind == "bounded":
        return Bounded(int(obj["min"]), int(obj["max"]))
    if kind == "periodic":
        return Periodic(int(obj["period"]))
    raise ValueError(f"unknown shape kind {kind!r}")


class ChainComplex:
    """A bounded or periodic complex; see the module docstring for conventions."""

    def __init__(self, ring: RingSpec, shape, modules: dict, diffs: dict | None = None):
        self.ring = ring
        self.shape = shape
        diffs = diffs or {}
        self._modules = {}
        for i, M in modules.items():
            k = self._key(int(i))
            if k is None:
                if not M.is_zero():
                    raise ValueError(f"module in degree {i} lies outside the bounds")
                continue
            self._modules[k] = M
        self._diffs = {}
        for i, D in diffs.items():
            k = self._key(int(i))
            if k is None:
                if not D.is_zero():
                    raise ValueError(f"differential in degree {i} lies outside the bounds")
                continue
            self._diffs[k] = D

    # --- indexing -------------------------------------------------------

    @property
    def periodic(self) -> bool:
        return isinstance(self.shape, Periodic)

    def _key(self, i):
        if self.periodic:
            return i % self.shape.q
        return i if self.shape.lo <= i <= self.shape.hi else None

    def degrees(self):
        """Degrees carrying modules (residues 0..q-1 when periodic)."""
        if self.periodic:
            return list(range(self.shape.q))
        return list(range(self.shape.lo, self.shape.hi + 1))

    def diff_degrees(self):
        """Degrees i whose differential d(i) can be nonzero."""
        if self.periodic:
            return list(range(self.shape.q))
        return list(range(self.shape.lo + 1, self.shape.hi + 1))

    def module(self, i) -> FPModule:
        k = self._key(i)
        if k is None or k not in self._modules:
            return FPModule.zero(self.ring)
        return self._modules[k]

    def rank(self, i) -> int:
        return self.module(i).generators

    def d(self, i) -> Matrix:
        k = self._key(i)
        rows, cols = self.rank(i - 1), self.rank(i)
        if k is None or self._key(i - 1) is None or k not in self._diffs:
            return Matrix.zeros(self.ring, rows, cols)
        return self._diffs[k]

    def dhom(self, i) -> ModuleHom:
        return ModuleHom(self.module(i), self.module(i - 1), self.d(i))

    # --- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ring, shape=None):
        return cls(ring, shape or Bounded(0, -1), {})

    @classmethod
    def sphere(cls, M: FPModule, degree=0):
        return cls(M.ring, Bounded(degree, degree), {degree: M})

    @classmethod
    def disk(cls, M: FPModule, degree=1):
        """``M --1--> M`` in degrees ``degree`` and ``degree - 1``."""
        return cls(
            M.ring,
            Bounded(degree - 1, degree),
            {degree: M, degree - 1: M},
            {degree: Matrix.identity(M.ring, M.generators)},
        )

    @classmethod
    def free(cls, ring, lo, ranks, diffs):
        """Bounded complex of free modules; ``ranks[k]`` sits in degree ``lo + k``."""
        mods = {lo + k: FPModule.free(ring, r) for k, r in enumerate(ranks)}
        D = {}
        for i, m in diffs.items():
            D[i] = m if isinstance(m, Matrix) else Matrix(ring, m, ranks[i - 1 - lo], ranks[i - lo])
        return cls(ring, Bounded(lo, lo + len(ranks) - 1), mods, D)

    # --- properties -----------------------------------------------------

    def is_free(self) -> bool:
        return all(self.module(i).relations.cols == 0 for i in self.degrees())

    def is_zero(self) -> bool:
        return all(self.module(i).is_zero() for i in self.degrees())

    def total_rank(self) -> int:
        return sum(self.rank(i) for i in self.degrees())

    def validate(self):
        return validate_complex(self)

    def with_shape(self, shape):
        """Re-embed a bounded complex into a larger bounded range."""
        return ChainComplex(self.ring, shape, {i: self.module(i) for i in self.degrees()},
                            {i: self.d(i) for i in self.diff_degrees()})

    def __repr__(self):
        if self.periodic:
            s = f"periodic q={self.shape.q}"
        else:
            s = f"[{self.shape.lo}..{self.shape.hi}]"
        return f"ChainComplex({self.ring}, {s}, ranks={[self.rank(i) for i in self.degrees()]})"

    # --- serialization --------------------------------------------------

    def to_json(self):
        mods = {}
        for i in self.degrees():
            M = self.module(i)
            if M.generators:
                mods[str(i)] = M.to_json()
        diffs = {}
        for i in self.diff_degrees():
            D = self.d(i)
            if D.rows and D.cols:
                diffs[str(i)] = D.to_json()
        return {"ring": self.ring.to_json(), "shape": self.shape.to_json(), "modules": mods, "differentials": diffs}

    @classmethod
    def from_json(cls, obj):
        ring = ring_from_json(obj["ring"])
        shape = shape_from_json(obj["shape"])
        mods = {int(k): FPModule.from_json(v, ring) for k, v in obj.get("modules", {}).items()}
        C = cls(ring, shape, mods)
        diffs = {}
        for k, v in obj.get("differentials", {}).items():
            i = int(k)
            D = Matrix.from_json(v, ring)
            if D.shape != (C.rank(i - 1), C.rank(i)):
                raise ValueError(
                    f"differential {i} has shape {D.shape}, expected {(C.rank(i - 1), C.rank(i))}"
                )
            diffs[i] = D
        return cls(ring, shape, mods, diffs)

    def same_as(self, other) -> bool:
        return self.to_json() == other.to_json()


def validate_complex(C: ChainComplex) -> list:
    """All failed invariants of ``C`` as human-readable strings (empty when valid)."""
    errors = []
    for i in C.degrees():
        M = C.module(i)
        if M.ring != C.ring:
            errors.append(f"degree {i}: module over {M.ring}, complex over {C.ring}")
    if errors:
        return errors
    for i in C.diff_degrees():
        D = C.d(i)
        if D.shape != (C.rank(i - 1), C.rank(i)):
            errors.append(f"degree {i}: differential has shape {D.shape}")
            continue
        if not C.dhom(i).is_well_defined():
            errors.append(f"degree {i}: differential is not well defined")
    if errors:
        return errors
    for i in C.diff_degrees():
        if C._key(i - 1) is None:
            continue
        if not C.module(i - 2).hom_is_zero(C.d(i - 1) @ C.d(i)):
            errors.append(f"degree {i}: d({i - 1}) d({i}) != 0")
    return errors


def _check(C):
    errors = validate_complex(C)
    if errors:
        raise ValueError("invalid complex: " + "; ".join(errors))


# --- shapes ---------------------------------------------------------------------


def _common_shape(*pairs):
    """Shape covering complexes given as (complex, degree offset) pairs."""
    periodic = [C for C, _ in pairs if C.periodic]
    if periodic:
        q = lcm(*(C.shape.q for C in periodic))
        for C, _ in pairs:
            if not C.periodic and not C.is_zero():
                raise ValueError("cannot combine a periodic complex with a nonzero bounded one")
        return Periodic(q)
    live = [(C, k) for C, k in pairs if not C.shape.empty]
    if not live:
        return Bounded(0, -1)
    return Bounded(min(C.shape.lo + k for C, k in live), max(C.shape.hi + k for C, k in live))


def _span(shape):
    if isinstance(shape, Periodic):
        return list(range(shape.q))
    return list(range(shape.lo, shape.hi + 1))


def shift(C: ChainComplex, k=1) -> ChainComplex:
    """``S^k C`` with ``(S^k C)_i = C_{i-k}`` and differential ``(-1)^k d``."""
    sign = -1 if k % 2 else 1
    if C.periodic:
        shape = C.shape
    else:
        shape = Bounded(C.shape.lo + k, C.shape.hi + k)
    mods = {i: C.module(i - k) for i in _span(shape)}
    tmp = ChainComplex(C.ring, shape, mods)
    diffs = {i: C.d(i - k).scale(sign) for i in tmp.diff_degrees()}
    return ChainComplex(C.ring, shape, mods, diffs)


def direct_sum_complexes(*Cs: ChainComplex) -> ChainComplex:
    ring = Cs[0].ring
    shape = _common_shape(*((C, 0) for C in Cs))
    mods = {i: direct_sum(*(C.module(i) for C in Cs)) for i in _span(shape)}
    tmp = ChainComplex(ring, shape, mods)
    diffs = {i: Matrix.block_diag(ring, *(C.d(i) for C in Cs)) for i in tmp.diff_degrees()}
    return ChainComplex(ring, shape, mods, diffs)


# --- chain maps -------------------------------------------------------------------


class ChainMap:
    """Degree-preserving chain map; ``components[i]`` is a matrix ``M_i -> N_i``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, components: dict | None = None):
        self.source = source
        self.target = target
        self.ring = source.ring
        comps = {}
        for i in self.degrees():
            A = (components or {}).get(i)
            if A is None:
                A = Matrix.zeros(self.ring, target.rank(i), source.rank(i))
            comps[i] = A
        self.components = comps

    def degrees(self):
        shape = _common_shape((self.source, 0), (self.target, 0))
        return _span(shape)

    def f(self, i) -> Matrix:
        if self.source.periodic or self.target.periodic:
            q = len(self.components)
            return self.components[i % q] if q else Matrix.zeros(self.ring, 0, 0)
        if i in self.components:
            return self.components[i]
        return Matrix.zeros(self.ring, self.target.rank(i), self.source.rank(i))

    def hom(self, i) -> ModuleHom:
        return ModuleHom(self.source.module(i), self.target.module(i), self.f(i))

    @classmethod
    def identity(cls, C):
        return cls(C, C, {i: Matrix.identity(C.ring, C.rank(i)) for i in C.degrees()})

    @classmethod
    def zero(cls, S, T):
        return cls(S, T, {})

    def scale(self, c):
        return ChainMap(self.source, self.target, {i: A.scale(c) for i, A in self.components.items()})

    def __matmul__(self, other: ChainMap) -> ChainMap:
        degs = ChainMap(other.source, self.target).degrees()
        return ChainMap(other.source, self.target, {i: self.f(i) @ other.f(i) for i in degs})

    def __add__(self, other):
        return ChainMap(self.source, self.target, {i: self.f(i) + other.f(i) for i in self.degrees()})

    def __sub__(self, other):
        return ChainMap(self.source, self.target, {i: self.f(i) - other.f(i) for i in self.degrees()})

    def validate(self) -> list:
        errors = []
        S, T = self.source, self.target
        for i in self.degrees():
            if not self.hom(i).is_well_defined():
                errors.append(f"degree {i}: component is not well defined")
        if errors:
            return errors
        for i in self.degrees():
            lhs = T.d(i) @ self.f(i)
            rhs = self.f(i - 1) @ S.d(i)
            if not T.module(i - 1).hom_is_zero(lhs - rhs):
                errors.append(f"degree {i}: map does not commute with differentials")
        return errors


@dataclass(frozen=True, eq=False)
class Homotopy:
    """``f - g = d sigma + sigma d`` with ``sigma[i]: M_i -> N_{i+1}``."""

    f: ChainMap
    g: ChainMap
    sigma: dict

    def s(self, i) -> Matrix:
        S, T = self.f.source, self.f.target
        if S.periodic or T.periodic:
            q = len(self.sigma)
            return self.sigma[i % q]
        return self.sigma.get(i, Matrix.zeros(S.ring, T.rank(i + 1), S.rank(i)))

    def verify(self) -> bool:
        S, T = self.f.source, self.f.target
        for i in self.f.degrees():
            if not ModuleHom(S.module(i), T.module(i + 1), self.s(i)).is_well_defined():
                return False
            lhs = self.f.f(i) - self.g.f(i)
            rhs = T.d(i + 1) @ self.s(i) + self.s(i - 1) @ S.d(i)
            if not T.module(i).hom_is_zero(lhs - rhs):
                return False
        return True


def find_homotopy(f: ChainMap, g: ChainMap) -> Homotopy | None:
    """Homotopy between ``f`` and ``g`` via one stacked linear solve, or None."""
    S, T = f.source, f.target
    ring = f.ring
    degs = f.degrees()
    sys = LinearSystem(ring)
    for i in degs:
        sys.unknown(("s", i), T.rank(i + 1), S.rank(i))
    key = _index_fn(f)
    for i in degs:
        Mi, Ni, N1 = S.module(i), T.module(i), T.module(i + 1)
        # well defined: s_i R_{M_i} = R_{N_{i+1}} z
        sys.unknown(("w", i), N1.relations.cols, Mi.relations.cols)
        sys.equation([(None, ("s", i), Mi.relations), (-N1.relations, ("w", i), None)],
                     Matrix.zeros(ring, N1.generators, Mi.relations.cols))
        # d s_i + s_{i-1} d = f_i - g_i modulo R_{N_i}
        sys.unknown(("e", i), Ni.relations.cols, Mi.generators)
        terms = [(T.d(i + 1), ("s", key(i)), None), (-Ni.relations, ("e", i), None)]
        if key(i - 1) is not None:
            terms.append((None, ("s", key(i - 1)), S.d(i)))
        sys.equation(terms, f.f(i) - g.f(i))
    sol = sys.solve()
    if sol is None:
        return None
    return Homotopy(f, g, {i: sol[("s", i)] for i in degs})


def _index_fn(f: ChainMap):
    degs = set(f.degrees())
    if f.source.periodic or f.target.periodic:
        q = len(degs)
        return lambda i: i % q
    return lambda i: i if i in degs else None


# --- subquotients -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subquotient:
    module: FPModule
    kind: str
    degree: int
    incl: ModuleHom | None = None  # into M_i (cycles, boundaries)
    proj: ModuleHom | None = None  # from M_i (cokernels) or from the cycles (homology)


def _cycles_gens(C, i) -> Matrix:
    return C.dhom(i).kic.kernel_incl.matrix


def subquotient(C: ChainComplex, kind: str, i: int) -> Subquotient:
    Mi = C.module(i)
    ring = C.ring
    if kind == "cycles":
        k = C.dhom(i).kic
        return Subquotient(k.kernel, kind, i, incl=k.kernel_incl)
    if kind == "boundaries":
        k = C.dhom(i + 1).kic
        return Subquotient(k.image, kind, i, incl=k.image_incl)
    if kind == "cokernels":
        k = C.dhom(i + 1).kic
        return Subquotient(k.cokernel, kind, i, proj=k.coker_proj)
    if kind == "homology":
        Z = C.dhom(i).kic
        P = Z.kernel_incl.matrix
        S = Mi.relations.hstack(C.d(i + 1))
        H = FPModule(ring, P.cols, _subquotient_relations(P, S))
        return Subquotient(H, kind, i, proj=ModuleHom(Z.kernel, H, Matrix.identity(ring, P.cols)))
    raise ValueError(f"unknown subquotient kind {kind!r}")


def homology(C: ChainComplex, i: int) -> FPModule:
    return subquotient(C, "homology", i).module


def is_exact_at(C: ChainComplex, i: int) -> bool:
    P = _cycles_gens(C, i)
    if P.cols == 0:
        return True
    S = C.d(i + 1).hstack(C.module(i).relations)
    return solve_linear(S, P) is not None


def is_acyclic(C: ChainComplex) -> bool:
    return all(is_exact_at(C, i) for i in C.degrees())


# --- cone, Hom and tensor complexes ---------------------------------------------


def cone(f: ChainMap) -> ChainComplex:
    L, N = f.source, f.target
    ring = f.ring
    shape = _common_shape((N, 0), (L, 1))
    mods = {i: direct_sum(N.module(i), L.module(i - 1)) for i in _span(shape)}
    tmp = ChainComplex(ring, shape, mods)
    diffs = {}
    for i in tmp.diff_degrees():
        diffs[i] = Matrix.blocks(
            ring,
            [[N.d(i), f.f(i - 1)], [None, -L.d(i - 1)]],
            [N.rank(i - 1), L.rank(i - 2)],
            [N.rank(i), L.rank(i - 1)],
        )
    return ChainComplex(ring, shape, mods, diffs)


def cone_sequence(f: ChainMap):
    """The degreewise split sequence ``N -> Cone(f) -> S L``."""
    L, N = f.source, f.target
    ring = f.ring
    Cf = cone(f)
    SL = shift(L, 1)
    inj, surj = {}, {}
    for i in Cf.degrees():
        a, b = N.rank(i), L.rank(i - 1)
        inj[i] = Matrix.identity(ring, a).vstack(Matrix.zeros(ring, b, a))
        surj[i] = Matrix.zeros(ring, b, a).hstack(Matrix.identity(ring, b))
    return SESComplexes(ChainMap(N, Cf, inj), ChainMap(Cf, SL, surj))


@dataclass(frozen=True, eq=False)
class TotalHom:
    complex: ChainComplex
    pieces: dict  # degree n -> list of (i, HomModule Hom(M_i, N_{i+n}))


def total_hom(M: ChainComplex, N: ChainComplex, simplify=True) -> TotalHom:
    """Total Hom complex of two bounded complexes, with its product decomposition."""
    if M.periodic or N.periodic:
        raise Unsupported("total Hom complexes need bounded complexes")
    ring = M.ring
    if M.shape.empty or N.shape.empty:
        return TotalHom(ChainComplex.zero(ring), {})
    lo = N.shape.lo - M.shape.hi
    hi = N.shape.hi - M.shape.lo
    pieces = {}
    for n in range(lo, hi + 1):
        ps = []
        for i in M.degrees():
            if N._key(i + n) is None:
                continue
            H = hom_modules(M.module(i), N.module(i + n))
            if simplify:
                H = simplify_hom(H)
            ps.append((i, H))
        pieces[n] = ps
    mods = {n: direct_sum(ring_zero(ring), *(H.module for _, H in ps)) for n, ps in pieces.items()}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        sign = -1 if n % 2 else 1
        tgt = pieces[n - 1]
        tindex = {i: k for k, (i, _) in enumerate(tgt)}
        offsets = _offsets([H.module.generators for _, H in tgt])
        cols = []
        for i, H in pieces[n]:
            for X in H.basis:
                col = [0] * sum(H2.module.generators for _, H2 in tgt)
                # component into Hom(M_i, N_{i+n-1}): d^N X
                if i in tindex:
                    _, H2 = tgt[tindex[i]]
                    c = H2.coordinates(N.d(i + n) @ X)
                    _put(col, offsets[tindex[i]], c)
                # component into Hom(M_{i+1}, N_{i+n}): -(-1)^n X d^M
                if i + 1 in tindex:
                    _, H2 = tgt[tindex[i + 1]]
                    c = H2.coordinates((X @ M.d(i + 1)).scale(-sign))
                    _put(col, offsets[tindex[i + 1]], c)
                cols.append(col)
        diffs[n] = Matrix.from_columns(ring, cols, len(cols[0]) if cols else mods[n - 1].generators)
    return TotalHom(ChainComplex(ring, Bounded(lo, hi), mods, diffs), pieces)


def ring_zero(ring):
    return FPModule.zero(ring)


def _offsets(sizes):
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out


def _put(col, off, coords):
    if coords is None:
        raise ValueError("map is not a hom between the given modules")
    for k, x in enumerate(coords):
        col[off + k] = x


def simplify_hom(H: HomModule) -> HomModule:
    """Replace the presentation of a Hom module by its diagonal form."""
    P, _, from_p = H.module.pruned()
    return HomModule(H.source, H.target, P, H.lifts @ from_p.matrix, H.null)


def total_tensor(L: ChainComplex, M: ChainComplex) -> ChainComplex:
    if L.periodic or M.periodic:
        raise Unsupported("total tensor complexes need bounded complexes")
    ring = L.ring
    if L.shape.empty or M.shape.empty:
        return ChainComplex.zero(ring)
    lo = L.shape.lo + M.shape.lo
    hi = L.shape.hi + M.shape.hi
    pieces = {n: [(i, n - i) for i in L.degrees() if M._key(n - i) is not None] for n in range(lo, hi + 1)}
    mods = {
        n: direct_sum(ring_zero(ring), *(tensor_modules(L.module(i), M.module(j)) for i, j in ps))
        for n, ps in pieces.items()
    }
    diffs = {}
    for n in range(lo + 1, hi + 1):
        src, tgt = pieces[n], pieces[n - 1]
        rsz = [L.rank(i) * M.rank(j) for i, j in tgt]
        csz = [L.rank(i) * M.rank(j) for i, j in src]
        tindex = {p: k for k, p in enumerate(tgt)}
        grid = [[None] * len(src) for _ in tgt]
        for c, (i, j) in enumerate(src):
            if (i - 1, j) in tindex:
                grid[tindex[(i - 1, j)]][c] = L.d(i).kron(Matrix.identity(ring, M.rank(j)))
            if (i, j - 1) in tindex:
                sign = -1 if i % 2 else 1
                grid[tindex[(i, j - 1)]][c] = Matrix.identity(ring, L.rank(i)).kron(M.d(j)).scale(sign)
        diffs[n] = Matrix.blocks(ring, grid, rsz, csz)
    return ChainComplex(ring, Bounded(lo, hi), mods, diffs)


# --- contractibility and purity -------------------------------------------------


@dataclass
class ContractionResult:
    contractible: bool
    homotopy: Homotopy | None = None
    failed_degree: int | None = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.contractible


def _split_section(C: ChainComplex, i: int):
    """A hom ``S: M_{i-1} -> M_i`` with ``d_i S`` the identity on the cycles of ``M_{i-1}``."""
    ring = C.ring
    Mi, Mp = C.module(i), C.module(i - 1)
    K = _cycles_gens(C, i - 1)
    if K.cols == 0:
        return Matrix.zeros(ring, Mi.generators, Mp.generators)
    sys = LinearSystem(ring)
    sys.unknown("S", Mi.generators, Mp.generators)
    sys.unknown("w", Mi.relations.cols, Mp.relations.cols)
    sys.unknown("e", Mp.relations.cols, K.cols)
    sys.equation([(None, "S", Mp.relations), (-Mi.relations, "w", None)],
                 Matrix.zeros(ring, Mi.generators, Mp.relations.cols))
    sys.equation([(C.d(i), "S", K), (-Mp.relations, "e", None)], K)
    sol = sys.solve()
    return None if sol is None else sol["S"]


def is_contractible(C: ChainComplex, method="sections", check=True) -> ContractionResult:
    """Decide contractibility and produce a contracting homotopy.

    ``sections``: per degree, a hom ``S_i: M_{i-1} -> M_i`` restricting to a
    section of ``d_i`` over the cycles; these exist for all ``i`` exactly
    when ``C`` is contractible, and ``sigma_{i-1} = S_i (1 - S_{i-1} d_{i-1})``
    is then a contraction.  ``stacked``: one linear solve for all
    ``sigma_i`` at once.
    """
    if check:
        _check(C)
    ident = ChainMap.identity(C)
    zero = ChainMap.zero(C, C)
    if method == "stacked":
        h = find_homotopy(ident, zero)
        return ContractionResult(h is not None, h, notes=["stacked homotopy solve"])
    ring = C.ring
    if C.periodic:
        idx = C.degrees()
    else:
        idx = list(range(C.shape.lo, C.shape.hi + 2)) if not C.shape.empty else []
    S = {}
    for i in idx:
        s = _split_section(C, i)
        if s is None:
            return ContractionResult(False, failed_degree=i, notes=[f"cycles in degree {i - 1} do not split off"])
        S[i] = s

    def getS(i):
        if C.periodic:
            return S[i % C.shape.q]
        return S.get(i, Matrix.zeros(ring, C.rank(i), C.rank(i - 1)))

    sigma = {}
    for j in C.degrees():
        # sigma_j = S_{j+1} (1 - S_j d_j)
        proj = Matrix.identity(ring, C.rank(j)) - getS(j) @ C.d(j)
        sigma[j] = getS(j + 1) @ proj
    h = Homotopy(ident, zero, sigma)
    if not h.verify():
        raise AssertionError("assembled contraction failed verification")
    return ContractionResult(True, h, notes=["split sections per degree"])


def cycle_ses(C: ChainComplex, i: int) -> SESModules:
    """``0 -> Z_i -> M_i -> B_{i-1} -> 0``."""
    k = C.dhom(i).kic
    return SESModules(k.kernel_incl, k.image_from)


@dataclass
class PureAcyclicResult:
    pure_acyclic: bool
    acyclic: bool
    failed_degree: int | None = None
    witness: FPModule | None = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.pure_acyclic


def is_pure_acyclic(C: ChainComplex, check=True) -> PureAcyclicResult:
    if check:
        _check(C)
    if not is_acyclic(C):
        return PureAcyclicResult(False, False, notes=["not acyclic"])
    for i in C.degrees():
        r = is_pure_ses(cycle_ses(C, i), check=False)
        if not r.pure:
            return PureAcyclicResult(False, True, i, r.witness, [f"cycle sequence in degree {i} is not pure"])
    return PureAcyclicResult(True, True, notes=["every cycle sequence splits"])


# --- maps and sequences ------------------------------------------------------------


def classify_map(f: ChainMap) -> dict:
    Cf = cone(f)
    qis = is_acyclic(Cf)
    pqis = qis and is_pure_acyclic(Cf, check=False).pure_acyclic
    he = pqis and is_contractible(Cf, check=False).contractible
    iso = all(f.hom(i).is_iso() for i in f.degrees())
    flags = {"is_qis": qis, "is_pure_qis": pqis, "is_homotopy_equiv": he, "is_iso": iso}
    if iso and not he:
        raise AssertionError("isomorphism that is not a homotopy equivalence")
    return flags


@dataclass(frozen=True, eq=False)
class SESComplexes:
    inj: ChainMap
    surj: ChainMap

    @property
    def L(self):
        return self.inj.source

    @property
    def M(self):
        return self.inj.target

    @property
    def N(self):
        return self.surj.target

    def degreewise(self, i) -> SESModules:
        return SESModules(self.inj.hom(i), self.surj.hom(i))

    def degrees(self):
        return _span(_common_shape((self.L, 0), (self.M, 0), (self.N, 0)))

    def validate(self) -> list:
        errors = []
        for name, C in (("L", self.L), ("M", self.M), ("N", self.N)):
            errors += [f"{name}: {e}" for e in validate_complex(C)]
        errors += [f"inj: {e}" for e in self.inj.validate()]
        errors += [f"surj: {e}" for e in self.surj.validate()]
        if errors:
            return errors
        for i in self.degrees():
            errors += [f"degree {i}: {e}" for e in self.degreewise(i).validate()]
        return errors


def find_chain_retraction(f: ChainMap) -> ChainMap | None:
    """A chain map ``r`` with ``r o f = 1``, by one stacked solve."""
    L, M = f.source, f.target
    ring = f.ring
    degs = f.degrees()
    key = _index_fn(f)
    sys = LinearSystem(ring)
    for i in degs:
        sys.unknown(("r", i), L.rank(i), M.rank(i))
    for i in degs:
        Li, Mi, Lp = L.module(i), M.module(i), L.module(i - 1)
        sys.unknown(("w", i), Li.relations.cols, Mi.relations.cols)
        sys.equation([(None, ("r", i), Mi.relations), (-Li.relations, ("w", i), None)],
                     Matrix.zeros(ring, Li.generators, Mi.relations.cols))
        sys.unknown(("u", i), Li.relations.cols, Li.generators)
        sys.equation([(None, ("r", i), f.f(i)), (-Li.relations, ("u", i), None)],
                     Matrix.identity(ring, Li.generators))
        # commute: d^L r_i = r_{i-1} d^M modulo R_{L_{i-1}}
        sys.unknown(("c", i), Lp.relations.cols, Mi.generators)
        terms = [(L.d(i), ("r", i), None), (Lp.relations.scale(-1), ("c", i), None)]
        if key(i - 1) is not None:
            terms.append((None, ("r", key(i - 1)), M.d(i).scale(-1)))
        sys.equation(terms, Matrix.zeros(ring, Lp.generators, Mi.generators))
    sol = sys.solve()
    if sol is None:
        return None
    return ChainMap(M, L, {i: sol[("r", i)] for i in degs})


def classify_ses(s: SESComplexes, check=True) -> dict:
    """Degreewise and complex-level splitness and purity of a sequence of complexes.

    Bounded complexes of finitely presented modules can be used as test
    objects for purity, so a pure sequence of such complexes splits;
    complex purity is therefore decided as complex splitness.
    """
    if check:
        errors = s.validate()
        if errors:
            raise ValueError("invalid sequence of complexes: " + "; ".join(errors))
    dsplit = all(find_retraction(s.inj.hom(i)) is not None for i in s.degrees())
    dpure = all(is_pure_ses(s.degreewise(i), check=False).pure for i in s.degrees())
    csplit = find_chain_retraction(s.inj) is not None
    return {
        "degreewise_split": dsplit,
        "degreewise_pure": dpure,
        "complex_split": csplit,
        "complex_pure": csplit,
    }


def character_dual_complex(C: ChainComplex) -> ChainComplex:
    """``Hom_Z(C, Q/Z)`` of a bounded complex of finite modules, homologically graded.

    Degree ``i`` holds the dual of ``C_{-i}`` and ``d_i`` is the dual of
    ``d_{1-i}``; exactness is preserved and reflected.
    """
    if C.periodic:
        raise Unsupported("character duals are formed for bounded complexes")
    ring = C.ring
    if C.shape.empty:
        return ChainComplex.zero(ring)
    T = dual_target(ring, *(C.module(i) for i in C.degrees()))
    H = {i: hom_modules(C.module(i), T) for i in C.degrees()}
    lo, hi = -C.shape.hi, -C.shape.lo
    mods = {-i: H[i].module for i in C.degrees()}
    diffs = {}
    for j in range(lo + 1, hi + 1):
        # d_j: C_{-j}^ -> C_{1-j}^ is precomposition with d_{1-j}: C_{1-j} -> C_{-j}
        diffs[j] = hom_map_pre(C.dhom(1 - j), H[-j], H[1 - j]).matrix
    return ChainComplex(ring, Bounded(lo, hi), mods, diffs)
