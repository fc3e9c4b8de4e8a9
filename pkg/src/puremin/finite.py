"""Brute-force models of finite modules and complexes over Z/n.

The predicates here use no Smith forms or linear solves: modules are explicit
sets of coset representatives of ``(Z/n)**g`` modulo the span of the
relation columns, and every predicate is decided by enumeration.  These
models serve as independent oracles for the decision procedures in the
rest of the package, so they are deliberately naive.  Only
``subcomplex_sequence`` uses the library, to turn an enumerated
subcomplex back into presentations.
"""

from __future__ import annotations

import itertools
from functools import cached_property

from .complexes import ChainComplex, ChainMap, SESComplexes
from .linalg import solve_linear
from .matrix import Matrix
from .modules import FPModule, ModuleHom, SESModules, _subquotient_relations


def _divisors(n: int):
    return [d for d in range(1, n + 1) if n % d == 0]


class FiniteModule:
    """``(Z/n)**g`` modulo the subgroup spanned by the relation columns."""

    def __init__(self, n: int, g: int, relations, limit=4096):
        if n**g > limit:
            raise ValueError(f"(Z/{n})^{g} is too large to enumerate")
        self.n = n
        self.g = g
        self.relations = [tuple(int(x) % n for x in col) for col in relations]
        span = self._closure(self.relations, {tuple([0] * g)})
        self.span = frozenset(span)
        index = {}
        reps = []
        for v in itertools.product(range(n), repeat=g):
            if v in index:
                continue
            k = len(reps)
            reps.append(v)
            for s in self.span:
                index[self._vadd(v, s)] = k
        self._index = index
        self.reps = reps

    @classmethod
    def of(cls, M: FPModule, limit=4096) -> FiniteModule:
        ring = M.ring
        if ring.kind != "IntMod":
            raise ValueError("brute-force models exist only over Z/n")
        cols = [[ring.lift(x) for x in M.relations.column(j)] for j in range(M.relations.cols)]
        return cls(ring.n, M.generators, cols, limit)

    # --- arithmetic on coordinate vectors ---------------------------------

    def _vadd(self, a, b):
        n = self.n
        return tuple((x + y) % n for x, y in zip(a, b))

    def _vscale(self, c, a):
        n = self.n
        return tuple((c * x) % n for x in a)

    def _closure(self, gens, start):
        out = set(start)
        frontier = list(out)
        while frontier:
            new = []
            for v in frontier:
                for gvec in gens:
                    w = self._vadd(v, gvec)
                    if w not in out:
                        out.add(w)
                        new.append(w)
            frontier = new
        return out

    # --- elements ---------------------------------------------------------

    def __len__(self):
        return len(self.reps)

    @property
    def zero(self) -> int:
        return self._index[tuple([0] * self.g)]

    def element(self, v) -> int:
        """Index of the class of the coordinate vector ``v``."""
        return self._index[tuple(int(x) % self.n for x in v)]

    def add(self, a: int, b: int) -> int:
        return self._index[self._vadd(self.reps[a], self.reps[b])]

    def scale(self, c: int, a: int) -> int:
        return self._index[self._vscale(c, self.reps[a])]

    def generator(self, j: int) -> int:
        e = [0] * self.g
        e[j] = 1
        return self.element(e)

    # --- submodules -------------------------------------------------------

    def span_of(self, elems) -> frozenset:
        """Submodule generated by the given element indices."""
        out = {self.zero}
        frontier = [self.zero]
        elems = list(elems)
        while frontier:
            new = []
            for a in frontier:
                for e in elems:
                    b = self.add(a, e)
                    if b not in out:
                        out.add(b)
                        new.append(b)
            frontier = new
        return frozenset(out)

    @cached_property
    def submodules(self) -> list:
        """Every submodule, as a frozenset of element indices (sorted by size)."""
        # every submodule of a finite module is a sum of cyclic ones
        cyclic = {self.span_of([x]) for x in range(len(self))}
        seen = {frozenset([self.zero])}
        frontier = list(seen)
        while frontier:
            new = []
            for S in frontier:
                for C in cyclic:
                    if C <= S:
                        continue
                    T = self.sum(S, C)
                    if T not in seen:
                        seen.add(T)
                        new.append(T)
            frontier = new
        return sorted(seen, key=lambda S: (len(S), sorted(S)))

    def sum(self, S, T) -> frozenset:
        return frozenset(self.add(a, b) for a in S for b in T)

    def multiples(self, d: int, S=None) -> frozenset:
        S = range(len(self)) if S is None else S
        return frozenset(self.scale(d, a) for a in S)

    def is_pure_submodule(self, P) -> bool:
        """``P`` is pure iff ``P`` meets ``dM`` exactly in ``dP`` for every divisor ``d`` of ``n``."""
        P = frozenset(P)
        for d in _divisors(self.n):
            if (P & self.multiples(d)) != self.multiples(d, P):
                return False
        return True

    def is_summand(self, P) -> bool:
        P = frozenset(P)
        for Q in self.submodules:
            if len(P) * len(Q) == len(self) and P & Q == {self.zero}:
                return True
        return False


class FiniteMap:
    """A homomorphism between brute-force models given by the images of generators."""

    def __init__(self, source: FiniteModule, target: FiniteModule, images):
        self.source = source
        self.target = target
        self.images = list(images)  # element indices in target
        self._table = None

    @classmethod
    def of_matrix(cls, source: FiniteModule, target: FiniteModule, A: Matrix) -> FiniteMap:
        ring = A.ring
        imgs = [target.element([ring.lift(x) for x in A.column(j)]) for j in range(A.cols)]
        return cls(source, target, imgs)

    def image_of_vector(self, v) -> int:
        T = self.target
        out = T.zero
        for c, e in zip(v, self.images):
            if c % T.n:
                out = T.add(out, T.scale(c, e))
        return out

    def is_well_defined(self) -> bool:
        return all(self.image_of_vector(r) == self.target.zero for r in self.source.relations)

    def __call__(self, a: int) -> int:
        if self._table is None:
            self._table = [self.image_of_vector(v) for v in self.source.reps]
        return self._table[a]

    def image(self, S=None) -> frozenset:
        S = range(len(self.source)) if S is None else S
        return frozenset(self(a) for a in S)

    def kernel(self, S=None) -> frozenset:
        S = range(len(self.source)) if S is None else S
        z = self.target.zero
        return frozenset(a for a in S if self(a) == z)


def all_homs(source: FiniteModule, target: FiniteModule):
    """Every homomorphism, by enumerating images of the generators."""
    for imgs in itertools.product(range(len(target)), repeat=source.g):
        f = FiniteMap(source, target, imgs)
        if f.is_well_defined():
            yield f


# --- sequences of modules ------------------------------------------------------------


def brute_has_retraction(inj: ModuleHom, limit=4096) -> bool:
    """Search all homs ``M -> L`` for a left inverse of ``inj``."""
    L, M = FiniteModule.of(inj.source, limit), FiniteModule.of(inj.target, limit)
    f = FiniteMap.of_matrix(L, M, inj.matrix)
    gens_L = [L.generator(j) for j in range(L.g)]
    targets = [f(e) for e in gens_L]
    for r in all_homs(M, L):
        if all(r(t) == e for t, e in zip(targets, gens_L)):
            return True
    return False


def brute_is_pure(s: SESModules, limit=4096) -> bool:
    """Hom(R/(d), -) surjectivity for every divisor d of n, by enumeration."""
    M, N = FiniteModule.of(s.M, limit), FiniteModule.of(s.N, limit)
    p = FiniteMap.of_matrix(M, N, s.surj.matrix)
    for d in _divisors(M.n):
        killed_N = {y for y in range(len(N)) if N.scale(d, y) == N.zero}
        lifted = {p(x) for x in range(len(M)) if M.scale(d, x) == M.zero}
        if not killed_N <= lifted:
            return False
    return True


# --- complexes ---------------------------------------------------------------------


class FiniteComplex:
    """Brute-force model of a bounded or periodic complex over Z/n."""

    def __init__(self, C: ChainComplex, limit=4096):
        self.complex = C
        self.degrees = C.degrees()
        self.mods = {i: FiniteModule.of(C.module(i), limit) for i in self.degrees}
        self.diffs = {}
        for i in self.degrees:
            if self._has(i - 1):
                self.diffs[i] = FiniteMap.of_matrix(self.mods[i], self.mods[self._k(i - 1)], C.d(i))

    def _k(self, i):
        return i % self.complex.shape.q if self.complex.periodic else i

    def _has(self, i):
        return self._k(i) in self.mods

    def subcomplexes(self, cap=None):
        """Every family ``P_i`` of submodules with ``d(P_i)`` inside ``P_{i-1}``."""
        degs = self.degrees
        out = []

        def ok(i, P):
            if i not in self.diffs:
                return True
            j = self._k(i - 1)
            if j not in P:
                return True
            return self.diffs[i].image(P[i]) <= P[j]

        def rec(k, P):
            if cap is not None and len(out) >= cap:
                return
            if k == len(degs):
                if all(ok(i, P) for i in degs):
                    out.append(dict(P))
                return
            i = degs[k]
            for S in self.mods[i].submodules:
                P[i] = S
                if ok(i, P) and (i + 1 not in P or ok(i + 1, P)):
                    rec(k + 1, P)
                del P[i]

        rec(0, {})
        return out

    def is_zero_sub(self, P) -> bool:
        return all(len(S) == 1 for S in P.values())

    def cycles(self, P, i) -> frozenset:
        if i not in self.diffs:
            return P[i]
        return self.diffs[i].kernel(P[i])

    def boundaries(self, P, i) -> frozenset:
        j = self._k(i + 1)
        if j not in self.diffs:
            return frozenset([self.mods[i].zero])
        return self.diffs[j].image(P[j])

    def sub_is_acyclic(self, P) -> bool:
        return all(self.cycles(P, i) == self.boundaries(P, i) for i in self.degrees)

    def sub_is_pure_acyclic(self, P) -> bool:
        if not self.sub_is_acyclic(P):
            return False
        for i in self.degrees:
            Z = self.cycles(P, i)
            Mi = self.mods[i]
            for d in _divisors(Mi.n):
                if (Z & Mi.multiples(d, P[i])) != Mi.multiples(d, Z):
                    return False
        return True

    def sub_is_degreewise_pure(self, P) -> bool:
        return all(self.mods[i].is_pure_submodule(P[i]) for i in self.degrees)

    def sub_is_degreewise_split(self, P) -> bool:
        return all(self.mods[i].is_summand(P[i]) for i in self.degrees)

    def sub_is_contractible(self, P) -> bool:
        """Acyclic with every cycle submodule a direct summand of ``P_i``."""
        if not self.sub_is_acyclic(P):
            return False
        for i in self.degrees:
            Z, Pi = self.cycles(P, i), P[i]
            Mi = self.mods[i]
            if not any(len(Z) * len(Q) == len(Pi) and Q <= Pi and Q & Z == {Mi.zero} for Q in Mi.submodules):
                return False
        return True

    def complex_complement(self, P, subs=None):
        """A subcomplex ``Q`` with ``P_i + Q_i = M_i`` and ``P_i`` meeting ``Q_i`` in zero, or None."""
        subs = self.subcomplexes() if subs is None else subs
        for Q in subs:
            if all(len(P[i]) * len(Q[i]) == len(self.mods[i]) and P[i] & Q[i] == {self.mods[i].zero}
                   for i in self.degrees):
                return Q
        return None

    def generators_of(self, P, i) -> Matrix:
        """Columns (coordinates in ``M_i``) generating ``P_i``, chosen greedily."""
        Mi = self.mods[i]
        chosen = []
        span = frozenset([Mi.zero])
        for a in sorted(P[i]):
            if a not in span:
                chosen.append(a)
                span = Mi.span_of(chosen)
        ring = self.complex.ring
        cols = [list(Mi.reps[a]) for a in chosen]
        return Matrix.from_columns(ring, cols, Mi.g)


def brute_homology_orders(C: ChainComplex, limit=4096) -> dict:
    """``|H_i|`` for every degree, from element counts."""
    F = FiniteComplex(C, limit)
    full = {i: frozenset(range(len(F.mods[i]))) for i in F.degrees}
    return {i: len(F.cycles(full, i)) // len(F.boundaries(full, i)) for i in F.degrees}


def brute_solve_exists(A: Matrix, B: Matrix) -> bool:
    """Is ``A X = B`` solvable over Z/n?  Enumerates every X."""
    ring = A.ring
    n = ring.n
    a = [[ring.lift(x) for x in row] for row in A.data]
    b = [[ring.lift(x) for x in row] for row in B.data]
    for flat in itertools.product(range(n), repeat=A.cols * B.cols):
        ok = True
        for i in range(A.rows):
            for j in range(B.cols):
                s = sum(a[i][k] * flat[k * B.cols + j] for k in range(A.cols))
                if (s - b[i][j]) % n:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False



def subcomplex_sequence(F: FiniteComplex, P) -> SESComplexes:
    """The sequence ``0 -> P -> M -> M/P -> 0`` of library complexes for a brute-force subcomplex."""
    C = F.complex
    ring = C.ring
    G = {i: F.generators_of(P, i) for i in F.degrees}
    Lmods, Nmods = {}, {}
    for i in F.degrees:
        Mi = C.module(i)
        Lmods[i] = FPModule(ring, G[i].cols, _subquotient_relations(G[i], Mi.relations))
        Nmods[i] = FPModule(ring, Mi.generators, Mi.relations.hstack(G[i]))
    Ltmp = ChainComplex(ring, C.shape, Lmods)
    Ldiffs, Ndiffs = {}, {}
    for i in Ltmp.diff_degrees():
        j = C._key(i - 1)
        if j is None:
            continue
        k = C._key(i)
        X = solve_linear(G[j].hstack(C.module(j).relations), C.d(i) @ G[k])
        if X is None:
            raise ValueError(f"degree {i}: not a subcomplex")
        Ldiffs[i] = X.submatrix(range(G[j].cols), None)
        Ndiffs[i] = C.d(i)
    L = ChainComplex(ring, C.shape, Lmods, Ldiffs)
    N = ChainComplex(ring, C.shape, Nmods, Ndiffs)
    inj = ChainMap(L, C, {i: G[i] for i in F.degrees})
    surj = ChainMap(C, N, {i: Matrix.identity(ring, C.rank(i)) for i in F.degrees})
    return SESComplexes(inj, surj)
