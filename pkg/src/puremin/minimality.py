"""Reduction of complexes, minimality predicates and dimensions.

``reduce`` splits a complex of free modules as ``P + R`` with ``P`` a sum
of disks ``R --1--> R`` and ``R`` free of unit elementary divisors.  A
move picks ``x`` in degree ``i`` and a functional ``phi`` on degree
``i - 1`` with ``phi(d x) = 1``; then ``x, dx`` span a disk and
``ker(phi d)``, ``ker(phi)`` span a complement closed under ``d``.  When
a unit entry ``u = d[r][c]`` exists, ``x = e_c`` and ``phi = e_r / u``;
otherwise a Smith basis change supplies ``x`` and ``phi``.

Over ``Z/n`` with several prime factors everything goes through the
Chinese remainder splitting into local factors ``Z/p^k``, where finitely
generated projective modules are free.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .complexes import (
    Bounded,
    ChainComplex,
    ChainMap,
    Homotopy,
    _check,
    is_acyclic,
    is_contractible,
    is_pure_acyclic,
)
from .errors import Unsupported
from .linalg import elementary_divisors, inverse, kernel, snf, solve_linear
from .matrix import Matrix
from .modules import FPModule, ModuleHom, hom_modules
from .rings import IntMod, RingSpec

YES, NO, UNKNOWN = "yes", "no", "unknown"


# --- free models and CRT components -----------------------------------------------


def change_ring_complex(C: ChainComplex, ring: RingSpec) -> ChainComplex:
    mods = {i: FPModule(ring, C.module(i).generators, C.module(i).relations.change_ring(ring)) for i in C.degrees()}
    diffs = {i: C.d(i).change_ring(ring) for i in C.diff_degrees()}
    return ChainComplex(ring, C.shape, mods, diffs)


def crt_components(C: ChainComplex):
    """``[(q, C/qC over Z/q)]`` for the prime-power factors ``q`` of ``n``."""
    return [(q, change_ring_complex(C, IntMod(q))) for q in C.ring.prime_power_factors()]


def is_composite_mod(ring) -> bool:
    return ring.kind == "IntMod" and not ring.is_local


def free_model(C: ChainComplex):
    """``(F, to, frm)``: a complex of free modules with degreewise isomorphisms, or None.

    Each module is replaced by its diagonal presentation; this succeeds
    exactly when every module is free.
    """
    ring = C.ring
    mods, to, frm = {}, {}, {}
    for i in C.degrees():
        M = C.module(i)
        if M.relations.cols == 0:
            mods[i] = M
            to[i] = frm[i] = Matrix.identity(ring, M.generators)
            continue
        P, t, f = M.pruned()
        if P.relations.cols:
            return None
        mods[i] = FPModule.free(ring, P.generators)
        to[i], frm[i] = t.matrix, f.matrix
    tmp = ChainComplex(ring, C.shape, mods)
    diffs = {}
    for i in tmp.diff_degrees():
        diffs[i] = to[_k(C, i - 1)] @ C.d(i) @ frm[_k(C, i)] if _k(C, i - 1) is not None else C.d(i)
    return ChainComplex(ring, C.shape, mods, diffs), to, frm


def _k(C, i):
    return C._key(i)


# --- reduction --------------------------------------------------------------------


@dataclass
class Move:
    """One disk split off at differential ``degree``.

    ``bases[k]`` holds the new basis of degree ``k`` (columns, in the
    coordinates current before the move); the disk vectors come first.
    """

    degree: int
    pivot: tuple | None
    bases: dict
    component: int | None = None

    def to_json(self):
        return {
            "degree": self.degree,
            "pivot": list(self.pivot) if self.pivot is not None else None,
            "component": self.component,
            "bases": {str(k): B.to_json() for k, B in sorted(self.bases.items())},
        }


@dataclass
class ReductionTrace:
    original: ChainComplex
    moves: list
    split_part: ChainComplex
    reduced: ChainComplex
    iso_data: dict  # degree -> (to, frm): M_k -> P_k + reduced_k and back
    components: list = field(default_factory=list)  # [(q, ReductionTrace)] for composite Z/n

    @property
    def decomposition(self) -> ChainComplex:
        from .complexes import direct_sum_complexes

        return direct_sum_complexes(self.split_part, self.reduced)

    def verify(self) -> list:
        """Check that ``iso_data`` is an isomorphism of complexes ``M -> P + reduced``."""
        errors = []
        M = self.original
        T = self.decomposition
        ring = M.ring
        for k in M.degrees():
            to, frm = self.iso_data[k]
            A, B = M.module(k), T.module(k)
            if not ModuleHom(A, B, to).is_well_defined() or not ModuleHom(B, A, frm).is_well_defined():
                errors.append(f"degree {k}: iso data not well defined")
                continue
            if not A.hom_is_zero(frm @ to - Matrix.identity(ring, A.generators)):
                errors.append(f"degree {k}: frm o to != 1")
            if not B.hom_is_zero(to @ frm - Matrix.identity(ring, B.generators)):
                errors.append(f"degree {k}: to o frm != 1")
        if errors:
            return errors
        for k in M.diff_degrees():
            km = M._key(k - 1)
            if km is None:
                continue
            lhs = self.iso_data[km][0] @ M.d(k)
            rhs = T.d(k) @ self.iso_data[M._key(k)][0]
            if not T.module(k - 1).hom_is_zero(lhs - rhs):
                errors.append(f"degree {k}: iso data does not commute with differentials")
        if not is_contractible(self.split_part, check=False).contractible:
            errors.append("split part is not contractible")
        if _find_unit_move(self.reduced) is not None and not self.components:
            errors.append("reduced complex still has a unit elementary divisor")
        return errors

    def replay(self) -> bool:
        """Re-apply the recorded moves to the original complex and compare."""
        if self.components:
            return all(t.replay() for _, t in self.components)
        fm = free_model(self.original)
        if fm is None:
            return False
        diffs, ranks, C = _state(fm[0])
        for mv in self.moves:
            _apply(C, diffs, ranks, mv)
        for i in C.diff_degrees():
            if _get(C, diffs, ranks, i) != self.reduced.d(i):
                return False
        return all(ranks[k] == self.reduced.rank(k) for k in ranks)

    def to_json(self):
        return {
            "moves": [m.to_json() for m in self.moves],
            "split_part": self.split_part.to_json(),
            "reduced": self.reduced.to_json(),
            "iso_data": {
                str(k): {"to": t.to_json(), "from": f.to_json()} for k, (t, f) in sorted(self.iso_data.items())
            },
        }


def _state(F: ChainComplex):
    diffs = {i: F.d(i) for i in F.diff_degrees()}
    ranks = {k: F.rank(k) for k in F.degrees()}
    return diffs, ranks, F


def _get(C, diffs, ranks, i):
    k, km = C._key(i), C._key(i - 1)
    if k is None or km is None or k not in diffs:
        return Matrix.zeros(C.ring, ranks.get(km, 0) if km is not None else 0, ranks.get(k, 0) if k is not None else 0)
    return diffs[k]


def _apply(C, diffs, ranks, mv: Move):
    """Conjugate by the move's bases and drop the disk vectors."""
    ring = C.ring
    binv = {k: inverse(B) for k, B in mv.bases.items()}
    for i in list(diffs):
        k, km = C._key(i), C._key(i - 1)
        D = diffs[i]
        if km in binv:
            D = binv[km] @ D
        if k in mv.bases:
            D = D @ mv.bases[k]
        diffs[i] = D
    drop = {}
    periodic1 = C.periodic and C.shape.q == 1
    if periodic1:
        drop[C._key(mv.degree)] = 2
    else:
        drop[C._key(mv.degree)] = 1
        drop[C._key(mv.degree - 1)] = 1
    for i in list(diffs):
        k, km = C._key(i), C._key(i - 1)
        D = diffs[i]
        r0 = drop.get(km, 0)
        c0 = drop.get(k, 0)
        if r0 or c0:
            D = D.submatrix(range(r0, D.rows), range(c0, D.cols))
        diffs[i] = D
    for k, n in drop.items():
        ranks[k] -= n
    del ring


def _find_unit_move(C: ChainComplex):
    """The next pivot under the order: lowest degree, then lexicographic entry; else a Smith pivot."""
    ring = C.ring
    for i in sorted(C.diff_degrees()):
        D = C.d(i)
        for r in range(D.rows):
            for c in range(D.cols):
                if D[r, c] != 0 and ring.is_unit(D[r, c]):
                    return i, (r, c)
        if D.rows and D.cols:
            divs = elementary_divisors(D)
            if divs and divs[0] != 0 and ring.is_unit(divs[0]):
                return i, None
    return None


def _move_bases(C: ChainComplex, diffs, ranks, i, pivot) -> dict:
    ring = C.ring
    D = _get(C, diffs, ranks, i)
    n_src = D.cols
    if pivot is not None:
        r, c = pivot
        u_inv = ring.inverse(D[r, c])
        x = [1 if j == c else 0 for j in range(n_src)]
        phi = [u_inv if k == r else 0 for k in range(D.rows)]
    else:
        sf = snf(D)
        d1_inv = ring.inverse(sf.D[0, 0])
        x = list(sf.V.column(0))
        phi = [ring.mul(d1_inv, a) for a in sf.U.row(0)]
    X = Matrix.column_vector(ring, x)
    Phi = Matrix(ring, [phi])
    Y = D @ X
    Psi = Phi @ D
    if C.periodic and C.shape.q == 1:
        K = kernel(Psi.vstack(Phi))
        return {C._key(i): X.hstack(Y, K)}
    if pivot is not None:
        r, c = pivot
        psi = Psi.row(0)
        cols_src = [x] + [[1 if a == j else 0 for a in range(n_src)] for j in range(n_src) if j != c]
        for v, j in zip(cols_src[1:], [j for j in range(n_src) if j != c]):
            v[c] = ring.neg(psi[j])
        B_src = Matrix.from_columns(ring, cols_src, n_src)
        cols_tgt = [Y.column(0)] + [[1 if a == k else 0 for a in range(D.rows)] for k in range(D.rows) if k != r]
        B_tgt = Matrix.from_columns(ring, cols_tgt, D.rows)
    else:
        B_src = X.hstack(kernel(Psi))
        B_tgt = Y.hstack(kernel(Phi))
    return {C._key(i): B_src, C._key(i - 1): B_tgt}


def _reduce_free(F: ChainComplex, component=None):
    """Reduction of a complex of free modules over a local or integral ring."""
    ring = F.ring
    diffs, ranks, C = _state(F)
    W = {k: Matrix.identity(ring, ranks[k]) for k in ranks}
    split = {k: [] for k in ranks}
    disks = []  # (degree i, index of x in split[i], index of y in split[i-1])
    moves = []
    periodic1 = F.periodic and F.shape.q == 1
    while True:
        cur = ChainComplex(ring, F.shape, {k: FPModule.free(ring, ranks[k]) for k in ranks},
                           {i: diffs[i] for i in diffs})
        nxt = _find_unit_move(cur)
        if nxt is None:
            break
        i, pivot = nxt
        bases = _move_bases(C, diffs, ranks, i, pivot)
        mv = Move(i, pivot, bases, component)
        for k, B in bases.items():
            W[k] = W[k] @ B
        ki, kp = C._key(i), C._key(i - 1)
        if periodic1:
            split[ki].append(W[ki].column(0))
            split[ki].append(W[ki].column(1))
            disks.append((i, len(split[ki]) - 2, len(split[ki]) - 1))
            W[ki] = W[ki].submatrix(None, range(2, W[ki].cols))
        else:
            split[ki].append(W[ki].column(0))
            split[kp].append(W[kp].column(0))
            disks.append((i, len(split[ki]) - 1, len(split[kp]) - 1))
            W[ki] = W[ki].submatrix(None, range(1, W[ki].cols))
            W[kp] = W[kp].submatrix(None, range(1, W[kp].cols))
        _apply(C, diffs, ranks, mv)
        moves.append(mv)
    reduced = ChainComplex(ring, F.shape, {k: FPModule.free(ring, ranks[k]) for k in ranks}, dict(diffs))
    pmods = {k: FPModule.free(ring, len(split[k])) for k in ranks}
    ptmp = ChainComplex(ring, F.shape, pmods)
    pd = {i: [[0] * ptmp.rank(i) for _ in range(ptmp.rank(i - 1))] for i in ptmp.diff_degrees()}
    for i, a, b in disks:
        pd[C._key(i)][b][a] = 1
    P = ChainComplex(ring, F.shape, pmods,
                     {i: Matrix(ring, m, ptmp.rank(i - 1), ptmp.rank(i), canonical=True) for i, m in pd.items()})
    Q = {}
    for k in ranks:
        cols = split[k] + W[k].columns()
        Qk = Matrix.from_columns(ring, cols, F.rank(k)) if cols else Matrix.zeros(ring, F.rank(k), 0)
        Q[k] = (inverse(Qk) if Qk.rows else Qk.T, Qk)
    return moves, P, reduced, Q


def reduce(C: ChainComplex, check=True) -> ReductionTrace:
    """Split ``C`` as a contractible sum of disks plus a complex without unit pivots."""
    if check:
        _check(C)
    ring = C.ring
    if is_composite_mod(ring):
        return _reduce_crt(C)
    fm = free_model(C)
    if fm is None:
        raise Unsupported("reduce needs a complex of free (or projective) modules")
    F, to, frm = fm
    moves, P, red, Q = _reduce_free(F)
    iso = {k: (Q[k][0] @ to[k], frm[k] @ Q[k][1]) for k in C.degrees()}
    return ReductionTrace(C, moves, P, red, iso)


def _reduce_crt(C: ChainComplex) -> ReductionTrace:
    from .complexes import direct_sum_complexes

    ring = C.ring
    comps = []
    for q, Cq in crt_components(C):
        fm = free_model(Cq)
        if fm is None:
            raise Unsupported(f"component over Z/{q} is not projective")
        F, to, frm = fm
        moves, P, red, Q = _reduce_free(F, component=q)
        iso = {k: (Q[k][0] @ to[k], frm[k] @ Q[k][1]) for k in Cq.degrees()}
        comps.append((q, ReductionTrace(Cq, moves, P, red, iso)))

    def lift(q, X: ChainComplex):
        mods = {k: FPModule.from_divisors(ring, [q] * X.rank(k)) for k in X.degrees()}
        return ChainComplex(ring, X.shape, mods, {i: X.d(i).change_ring(ring) for i in X.diff_degrees()})

    P = direct_sum_complexes(*(lift(q, t.split_part) for q, t in comps))
    moves = [m for _, t in comps for m in t.moves]
    if not moves:
        # nothing split off: keep the given presentation so that reduction is idempotent
        iso = {k: (Matrix.identity(ring, C.rank(k)),) * 2 for k in C.degrees()}
        return ReductionTrace(C, [], P, C, iso, components=comps)
    red = direct_sum_complexes(*(lift(q, t.reduced) for q, t in comps))
    iso = {}
    for k in C.degrees():
        to_p, to_r, fr_p, fr_r = [], [], [], []
        for q, t in comps:
            np_ = t.split_part.rank(k)
            tq, fq = t.iso_data[k]
            tq, fq = tq.change_ring(ring), fq.change_ring(ring)
            e = ring.idempotent(q)
            to_p.append(tq.submatrix(range(np_), None))
            to_r.append(tq.submatrix(range(np_, tq.rows), None))
            fr_p.append(fq.submatrix(None, range(np_)).scale(e))
            fr_r.append(fq.submatrix(None, range(np_, fq.cols)).scale(e))
        g = C.rank(k)
        to = Matrix.zeros(ring, 0, g).vstack(*to_p, *to_r)
        frm = Matrix.zeros(ring, g, 0).hstack(*fr_p, *fr_r)
        iso[k] = (to, frm)
    return ReductionTrace(C, moves, P, red, iso, components=comps)


# --- split- and pure-minimality -------------------------------------------------------


@dataclass
class Decision:
    value: object  # True / False / "unknown"
    notes: list = field(default_factory=list)
    witness: object = None

    def __bool__(self):
        return self.value is True


def _combine(decisions):
    vals = [d.value for d in decisions]
    if any(v is False for v in vals):
        return False
    if any(v == UNKNOWN for v in vals):
        return UNKNOWN
    return True


def is_split_minimal(C: ChainComplex, budget=20000, check=True) -> Decision:
    """Does ``C`` have no nonzero contractible direct summand?"""
    if check:
        _check(C)
    if is_composite_mod(C.ring):
        parts = [is_split_minimal(Cq, budget, check=False) for _, Cq in crt_components(C)]
        notes = ["decided on each local factor"] + [n for p in parts for n in p.notes]
        return Decision(_combine(parts), notes)
    fm = free_model(C)
    if fm is not None:
        nxt = _find_unit_move(fm[0])
        if nxt is None:
            return Decision(True, ["free complex without unit elementary divisors"])
        return Decision(False, [f"unit elementary divisor in differential {nxt[0]}"], nxt)
    if all(C.module(i).is_finite() for i in C.degrees()):
        e = _null_homotopic_idempotent(C, budget)
        if e is None:
            return Decision(True, ["no nonzero null-homotopic idempotent chain endomorphism"])
        if e == UNKNOWN:
            return Decision(UNKNOWN, ["endomorphism search exceeded its budget"])
        return Decision(False, ["nonzero null-homotopic idempotent found"], e)
    return Decision(UNKNOWN, ["non-free complex over an infinite ring"])


def is_pure_minimal(C: ChainComplex, budget=20000, check=True) -> Decision:
    """Decided as split-minimality.

    For complexes of finitely presented modules a pure subcomplex that is
    pure-acyclic is a contractible direct summand, and conversely.
    """
    d = is_split_minimal(C, budget, check)
    return Decision(d.value, d.notes + ["pure-minimal = split-minimal for finitely presented complexes"], d.witness)


def _end_key(M: FPModule, A: Matrix):
    return tuple(M.canonical_element(A.column(j)) for j in range(A.cols))


def _null_homotopic_idempotent(C: ChainComplex, budget):
    """Search the group of null-homotopic chain endomorphisms (periodic homotopies) for an idempotent."""
    ring = C.ring
    degs = C.degrees()
    gens = []
    for k in degs:
        H = hom_modules(C.module(k), C.module(k + 1))
        for X in H.basis:
            # d s + s d with s = X in degree k only
            comp = {}
            comp[C._key(k)] = C.d(k + 1) @ X
            kk = C._key(k + 1)
            extra = X @ C.d(k + 1)
            comp[kk] = comp[kk] + extra if kk in comp else extra
            gens.append(comp)

    def full(comp):
        return {k: comp.get(k, Matrix.zeros(ring, C.rank(k), C.rank(k))) for k in degs}

    def key(comp):
        return tuple(_end_key(C.module(k), comp[k]) for k in degs)

    zero = full({})
    seen = {key(zero): zero}
    frontier = [zero]
    while frontier:
        new = []
        for e in frontier:
            for g in gens:
                s = full({k: e[k] + full(g)[k] for k in degs})
                ks = key(s)
                if ks in seen:
                    continue
                seen[ks] = s
                new.append(s)
                if len(seen) > budget:
                    return UNKNOWN
        frontier = new
    for e in seen.values():
        if all(C.module(k).hom_is_zero(e[k]) for k in degs):
            continue
        if all(C.module(k).hom_is_zero(e[k] @ e[k] - e[k]) for k in degs):
            return e
    return None


# --- homotopic minimality ------------------------------------------------------------------


@dataclass
class MinimalityResult:
    status: str  # yes / no / unknown
    witness: dict | None = None  # degree -> sigma_degree (a homotopy making 1 + d s + s d non-invertible)
    degree: int | None = None  # degree where 1 + d s + s d fails to be invertible
    notes: list = field(default_factory=list)

    def morphism(self, C: ChainComplex, i: int) -> Matrix:
        """Component ``1 + d s + s d`` in degree ``i``."""
        return _h(C, self.witness or {}, i)

    def to_json(self):
        out = {"status": self.status, "notes": list(self.notes)}
        if self.witness is not None:
            out["degree"] = self.degree
            out["sigma"] = {str(k): v.to_json() for k, v in sorted(self.witness.items())}
        return out


def _sig(C, sigma, i):
    if i in sigma:
        return sigma[i]
    return Matrix.zeros(C.ring, C.rank(i + 1), C.rank(i))


def _h(C, sigma, i):
    return Matrix.identity(C.ring, C.rank(i)) + C.d(i + 1) @ _sig(C, sigma, i) + _sig(C, sigma, i - 1) @ C.d(i)


def _is_auto(M: FPModule, A: Matrix) -> bool:
    if M.relations.cols == 0:
        return M.ring.is_unit(A.determinant()) if A.rows else True
    if M.is_finite():
        # surjective endomorphisms of finite modules are bijective
        return solve_linear(A.hstack(M.relations), Matrix.identity(M.ring, M.generators)) is not None
    return ModuleHom(M, M, A).is_iso()


def _disk_witness(C: ChainComplex):
    """For a free complex with a unit pivot: ``s_{i-1} = -x phi`` kills the disk through ``x``."""
    fm = free_model(C)
    if fm is None:
        return None
    F, to, frm = fm
    nxt = _find_unit_move(F)
    if nxt is None:
        return None
    i, pivot = nxt
    ring = C.ring
    D = F.d(i)
    if pivot is not None:
        r, c = pivot
        x = Matrix.column_vector(ring, [1 if j == c else 0 for j in range(D.cols)])
        phi = Matrix(ring, [[ring.inverse(D[r, c]) if k == r else 0 for k in range(D.rows)]])
    else:
        sf = snf(D)
        x = Matrix.column_vector(ring, sf.V.column(0))
        phi = Matrix(ring, [[ring.mul(ring.inverse(sf.D[0, 0]), a) for a in sf.U.row(0)]])
    s = (x @ phi).scale(-1)
    # back to the given presentations
    s = frm[C._key(i)] @ s @ to[C._key(i - 1)]
    deg = i - 1 if not C.periodic else C._key(i - 1)
    return {deg: s}, (i if not C.periodic else C._key(i))


def _finite_degree_search(C: ChainComplex, i: int, budget):
    """All of ``{d s_i + s_{i-1} d}`` in degree ``i``; returns a failing pair, None, or UNKNOWN."""
    Mi = C.module(i)
    ring = C.ring
    gens = []
    for X in hom_modules(Mi, C.module(i + 1)).basis:
        gens.append((C.d(i + 1) @ X, None, X))
    for Y in hom_modules(C.module(i - 1), Mi).basis:
        gens.append((Y @ C.d(i), Y, None))
    z_prev = Matrix.zeros(ring, C.rank(i), C.rank(i - 1))
    z_next = Matrix.zeros(ring, C.rank(i + 1), C.rank(i))
    zero = Matrix.zeros(ring, C.rank(i), C.rank(i))
    seen = {_end_key(Mi, zero): (zero, z_prev, z_next)}
    frontier = [seen[_end_key(Mi, zero)]]
    while frontier:
        new = []
        for h, sp, sn in frontier:
            for g, gp, gn in gens:
                h2 = h + g
                k = _end_key(Mi, h2)
                if k in seen:
                    continue
                item = (h2, sp + gp if gp is not None else sp, sn + gn if gn is not None else sn)
                seen[k] = item
                new.append(item)
                if len(seen) > budget:
                    return UNKNOWN, len(seen)
        frontier = new
    ident = Matrix.identity(ring, Mi.generators)
    for h, sp, sn in seen.values():
        if not _is_auto(Mi, ident + h):
            return (sp, sn), len(seen)
    return None, len(seen)


def _local_free_minimal(F: ChainComplex) -> bool:
    """Over a local ring: a free complex is minimal iff no differential has a unit entry."""
    ring = F.ring
    return not any(ring.is_unit(x) for i in F.diff_degrees() for r in F.d(i).data for x in r if x != 0)


def _seed(*parts) -> int:
    h = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(h[:8], "big")


def is_minimal(C: ChainComplex, budget=20000, bound=9, samples=200, seed=0, check=True) -> MinimalityResult:
    """Is every self-map homotopic to the identity an isomorphism?

    The answer is ``yes``, ``no`` (with a homotopy ``s`` such that
    ``1 + d s + s d`` is not invertible) or ``unknown``.  Invertibility
    is checked degreewise: the degree-``i`` component only involves
    ``s_{i-1}`` and ``s_i``.
    """
    if check:
        _check(C)
    ring = C.ring
    degs = C.degrees()
    if all(C.d(i).is_zero() for i in C.diff_degrees()):
        return MinimalityResult(YES, notes=["all differentials vanish, so 1 + ds + sd = 1"])
    sm = is_split_minimal(C, budget, check=False)
    if sm.value is False:
        if is_composite_mod(ring):
            return _minimal_crt(C, budget)
        w = _disk_witness(C)
        if w is not None:
            sigma, i = w
            return MinimalityResult(NO, sigma, i, ["a disk splits off; its contraction gives the witness"])
    if ring.is_finite:
        notes = []
        exhausted = True
        for i in degs:
            res, n = _finite_degree_search(C, i, budget)
            if res == UNKNOWN:
                exhausted = False
                notes.append(f"degree {i}: homotopy group exceeds budget {budget}")
                break
            notes.append(f"degree {i}: {n} maps d s + s d checked")
            if res is not None:
                sp, sn = res
                sigma = {}
                if C.rank(i - 1):
                    sigma[C._key(i - 1) if C.periodic else i - 1] = sp
                if C.rank(i + 1):
                    sigma[C._key(i) if C.periodic else i] = sn
                if C.periodic and C.shape.q == 1:
                    # s_{i-1} and s_i sit on the same module but are independent maps
                    notes.append("witness homotopy is not periodic: s_{i-1} and s_i given separately")
                    sigma = {-1: sp, 0: sn}
                return MinimalityResult(NO, sigma, i, notes + ["exhaustive search over finite homotopies"])
        if exhausted:
            return MinimalityResult(YES, notes=notes + ["exhaustive search over finite homotopies"])
        if is_composite_mod(ring):
            return _minimal_crt(C, budget)
        fm = free_model(C)
        if fm is not None and _local_free_minimal(fm[0]):
            return MinimalityResult(YES, notes=notes + ["free complex over a local ring with entries in the maximal ideal"])
        return MinimalityResult(UNKNOWN, notes=notes)
    fm = free_model(C)
    if ring.kind == "IntLocalAt" and fm is not None:
        if _local_free_minimal(fm[0]):
            return MinimalityResult(YES, notes=["free complex over a local ring with entries in the maximal ideal"])
    return _search_infinite(C, bound, samples, seed)


def _minimal_crt(C: ChainComplex, budget) -> MinimalityResult:
    ring = C.ring
    notes = ["decided on each local factor"]
    status = YES
    for q, Cq in crt_components(C):
        r = is_minimal(Cq, budget, check=False)
        notes += [f"Z/{q}: {n}" for n in r.notes]
        if r.status == NO:
            e = ring.idempotent(q)
            sigma = {k: s.change_ring(ring).scale(e) for k, s in r.witness.items()}
            return MinimalityResult(NO, sigma, r.degree, notes)
        if r.status == UNKNOWN:
            status = UNKNOWN
    return MinimalityResult(status, notes=notes)


def _search_infinite(C: ChainComplex, bound, samples, seed) -> MinimalityResult:
    ring = C.ring
    degs = C.degrees()

    def check(i, sp, sn):
        h = Matrix.identity(ring, C.rank(i)) + C.d(i + 1) @ sn + sp @ C.d(i)
        return not _is_auto(C.module(i), h)

    def pack(i, sp, sn):
        sigma = {}
        if C.rank(i - 1):
            sigma[i - 1] = sp
        if C.rank(i + 1):
            sigma[i] = sn
        return sigma

    # deterministic: scalar multiples of elementary maps, smallest |c| first
    cs = [c for m in range(1, bound + 1) for c in (m, -m)]
    for c in cs:
        for i in degs:
            zp = Matrix.zeros(ring, C.rank(i), C.rank(i - 1))
            zn = Matrix.zeros(ring, C.rank(i + 1), C.rank(i))
            for slot, Z in (("prev", zp), ("next", zn)):
                for a in range(Z.rows):
                    for b in range(Z.cols):
                        E = [[0] * Z.cols for _ in range(Z.rows)]
                        E[a][b] = c
                        E = Matrix(ring, E, Z.rows, Z.cols)
                        sp, sn = (E, zn) if slot == "prev" else (zp, E)
                        if check(i, sp, sn):
                            return MinimalityResult(
                                NO, pack(i, sp, sn), i, [f"elementary homotopy search, coefficient {c}"]
                            )
    rng = random.Random(_seed("is_minimal", seed))
    for _ in range(samples):
        for i in degs:
            sp = Matrix(ring, [[rng.randint(-bound, bound) for _ in range(C.rank(i - 1))] for _ in range(C.rank(i))],
                        C.rank(i), C.rank(i - 1))
            sn = Matrix(ring, [[rng.randint(-bound, bound) for _ in range(C.rank(i))] for _ in range(C.rank(i + 1))],
                        C.rank(i + 1), C.rank(i))
            if not (ModuleHom(C.module(i - 1), C.module(i), sp).is_well_defined()
                    and ModuleHom(C.module(i), C.module(i + 1), sn).is_well_defined()):
                continue
            if check(i, sp, sn):
                return MinimalityResult(NO, pack(i, sp, sn), i, ["random homotopy sampling"])
    return MinimalityResult(
        UNKNOWN, notes=[f"no refuting homotopy with entries up to {bound} in {samples} samples; no decision procedure"]
    )


def witness_homotopy(C: ChainComplex, res: MinimalityResult) -> Homotopy | None:
    """For bounded complexes: the witness as a homotopy between ``1 + ds + sd`` and ``1``."""
    if res.witness is None or C.periodic:
        return None
    ident = ChainMap.identity(C)
    f = ChainMap(C, C, {i: _h(C, res.witness, i) for i in C.degrees()})
    return Homotopy(f, ident, {i: _sig(C, res.witness, i) for i in C.degrees()})


# --- diagnosis ---------------------------------------------------------------------------


@dataclass
class DiagnosisReport:
    acyclic: bool
    contractible: bool
    pure_acyclic: bool
    split_minimal: object
    pure_minimal: object
    minimal: MinimalityResult
    notes: list = field(default_factory=list)

    def flags(self):
        return {
            "acyclic": self.acyclic,
            "pure_acyclic": self.pure_acyclic,
            "contractible": self.contractible,
            "split_minimal": self.split_minimal,
            "pure_minimal": self.pure_minimal,
            "minimal": self.minimal.status,
        }

    def to_json(self):
        out = dict(self.flags())
        out["minimal_witness"] = self.minimal.to_json()
        out["notes"] = list(self.notes)
        return out


def diagnose(C: ChainComplex, budget=20000, seed=0) -> DiagnosisReport:
    _check(C)
    notes = []
    acyc = is_acyclic(C)
    pa = is_pure_acyclic(C, check=False)
    notes += [f"pure_acyclic: {n}" for n in pa.notes]
    con = is_contractible(C, check=False)
    notes += [f"contractible: {n}" for n in con.notes]
    sm = is_split_minimal(C, budget, check=False)
    notes += [f"split_minimal: {n}" for n in sm.notes]
    pm = is_pure_minimal(C, budget, check=False)
    notes.append("pure_minimal: pure-minimal = split-minimal for finitely presented complexes")
    mn = is_minimal(C, budget, seed=seed, check=False)
    notes += [f"minimal: {n}" for n in mn.notes]
    rep = DiagnosisReport(acyc, con.contractible, pa.pure_acyclic, sm.value, pm.value, mn, notes)
    if mn.status == YES and sm.value is False:
        raise AssertionError("minimal complex that is not split-minimal")
    if pm.value is True and sm.value is False:
        raise AssertionError("pure-minimal complex that is not split-minimal")
    if pa.pure_acyclic and pm.value is True and not C.is_zero():
        raise AssertionError("nonzero pure-acyclic pure-minimal complex")
    return rep


# --- resolutions and dimension ----------------------------------------------------------


@dataclass
class Resolution:
    """Free complex ``P`` with a chain map ``phi: P -> M``; a quasi-isomorphism in degrees below ``exact_below``."""

    complex: ChainComplex
    phi: dict  # degree -> matrix P_k -> M_k
    target: ChainComplex
    exact_below: int

    def chain_map(self) -> ChainMap:
        P, M = self.complex, self.target
        lo = min(P.shape.lo, M.shape.lo) if not M.shape.empty else P.shape.lo
        hi = max(P.shape.hi, M.shape.hi) if not M.shape.empty else P.shape.hi
        S, T = P.with_shape(Bounded(lo, hi)), M.with_shape(Bounded(lo, hi))
        return ChainMap(S, T, {k: self.phi.get(k, Matrix.zeros(P.ring, M.rank(k), P.rank(k))) for k in range(lo, hi + 1)})


def _as_complex(M) -> ChainComplex:
    if isinstance(M, FPModule):
        return ChainComplex.sphere(M, 0)
    if M.periodic:
        raise Unsupported("resolutions are built for modules and bounded complexes")
    return M


def free_resolution(M, cutoff=8, minimize=True) -> Resolution:
    """Free resolution of a module or bounded complex, exact through ``hi + cutoff``.

    Degree by degree, ``P_i`` is free on generators of the pairs
    ``(x, y)`` in ``P_{i-1} + M_i`` with ``d x = 0`` and ``phi x = d y``;
    ``d(x, y) = x`` and ``phi(x, y) = y``.  This makes the cone of ``phi``
    exact in degree ``i - 1``.  The result is reduced afterwards.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    C = _as_complex(M)
    ring = C.ring
    if C.shape.empty:
        return Resolution(ChainComplex.zero(ring), {}, C, 0)
    lo, hi = C.shape.lo, C.shape.hi
    top = hi + cutoff + 1
    ranks = {lo - 1: 0}
    dP = {}
    phi = {lo - 1: Matrix.zeros(ring, 0, 0)}
    for i in range(lo, top + 1):
        p_prev = ranks[i - 1]
        Mi, Mp = C.module(i), C.module(i - 1)
        dprev = dP.get(i - 1, Matrix.zeros(ring, ranks.get(i - 2, 0), p_prev))
        phip = phi[i - 1] if Mp.generators else Matrix.zeros(ring, 0, p_prev)
        gi, gp, kp = Mi.generators, Mp.generators, Mp.relations.cols
        # unknowns (x, y, z): dprev x = 0 and phi x - d y - R z = 0
        E = Matrix.blocks(
            ring,
            [[dprev, None, None], [phip, -C.d(i) if gp and gi else None, -Mp.relations if kp else None]],
            [dprev.rows, gp],
            [p_prev, gi, kp],
        )
        K = kernel(E)
        G = K.submatrix(range(p_prev + gi), None)
        G = _drop_redundant(ring, G, Mi, p_prev)
        ranks[i] = G.cols
        dP[i] = G.submatrix(range(p_prev), None)
        phi[i] = G.submatrix(range(p_prev, p_prev + gi), None)
    P = ChainComplex.free(ring, lo, [ranks[i] for i in range(lo, top + 1)], {i: dP[i] for i in range(lo + 1, top + 1)})
    phis = {i: phi[i] for i in range(lo, top + 1)}
    if minimize:
        tr = reduce(P, check=False)
        if tr.components:
            raise Unsupported("minimized resolutions over composite Z/n are formed per local factor")
        P = _reduced_free(tr)
        phis = {i: phis[i] @ tr.iso_data[i][1].submatrix(None, range(tr.split_part.rank(i), P.rank(i) + tr.split_part.rank(i)))
                for i in range(lo, top + 1)}
    return Resolution(P, phis, C, top)


def _reduced_free(tr: ReductionTrace) -> ChainComplex:
    return tr.reduced


def _drop_redundant(ring, G: Matrix, Mi: FPModule, p_prev: int) -> Matrix:
    """Remove zero columns and exact duplicates (cheap pre-trimming before reduction)."""
    seen = set()
    keep = []
    for j in range(G.cols):
        col = G.column(j)
        if all(x == 0 for x in col) or col in seen:
            continue
        seen.add(col)
        keep.append(j)
    return G.submatrix(None, keep)


@dataclass
class DimensionResult:
    value: object  # int, "infinite", "exceeds_cutoff" or "-infinity" (zero in the derived category)
    resolution: Resolution | None = None
    notes: list = field(default_factory=list)


def _syzygy(P: ChainComplex, k: int) -> FPModule:
    """Cokernel of ``d_{k+1}``."""
    return FPModule(P.ring, P.rank(k), P.d(k + 1))


def dimension(M, kind="pd", cutoff=8) -> DimensionResult:
    """Projective (``pd``) or flat (``fd``) dimension as the top degree of the reduced resolution."""
    if kind not in ("pd", "fd"):
        raise ValueError(f"unknown dimension kind {kind!r}")
    C = _as_complex(M)
    ring = C.ring
    notes = ["pd = fd: finitely generated flat modules are projective over the supported rings"]
    if is_composite_mod(ring):
        vals = []
        for q, Cq in crt_components(C):
            r = dimension(Cq, kind, cutoff)
            vals.append(r.value)
            notes.append(f"Z/{q}: {r.value}")
        if "infinite" in vals:
            return DimensionResult("infinite", notes=notes)
        if "exceeds_cutoff" in vals:
            return DimensionResult("exceeds_cutoff", notes=notes)
        ints = [v for v in vals if isinstance(v, int)]
        return DimensionResult(max(ints) if ints else "-infinity", notes=notes + ["maximum over local factors"])
    if C.shape.empty:
        return DimensionResult("-infinity", notes=notes + ["zero complex"])
    res = free_resolution(C, cutoff)
    P = res.complex
    lo, hi = C.shape.lo, C.shape.hi
    limit = hi + cutoff
    top = res.exact_below
    ends = next((k for k in range(hi + 1, top + 1) if P.rank(k) == 0), None)
    if ends is not None:
        below = [k for k in range(lo, ends) if P.rank(k)]
        if not below:
            return DimensionResult("-infinity", res, notes + ["resolution is zero"])
        d = max(below)
        return DimensionResult(d, res, notes + [f"top nonzero degree {d} of the reduced resolution"])
    # periodic tail: a nonzero syzygy class repeating
    seen = {}
    for k in range(hi + 1, limit + 1):
        if not P.rank(k):
            continue
        cf = _syzygy(P, k).canonical_form
        if cf.is_zero:
            continue
        if cf in seen:
            return DimensionResult(
                "infinite", res, notes + [f"syzygies in degrees {seen[cf]} and {k} agree: {cf}"]
            )
        seen[cf] = k
    return DimensionResult("exceeds_cutoff", res, notes + [f"no termination or repetition up to degree {limit}"])


def pure_minimal_replacement(M, cutoff=8) -> Resolution:
    """Reduced free resolution; for modules of finite dimension it is the whole minimal resolution."""
    C = _as_complex(M)
    if is_composite_mod(C.ring):
        raise Unsupported("replacement over composite Z/n: resolve each local factor")
    return free_resolution(C, cutoff, minimize=True)
