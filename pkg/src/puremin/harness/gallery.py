"""Named built-in complexes, plus documented refusals for examples that cannot be represented."""

from __future__ import annotations

from ..complexes import Bounded, ChainComplex, Periodic, total_tensor
from ..matrix import Matrix
from ..modules import FPModule
from ..rings import ZZ, IntInvert, IntMod, RingSpec


class RefusedExample(Exception):
    """The example exists mathematically but has no finitely presented model."""


def dold() -> ChainComplex:
    """``... -> Z/4 -2-> Z/4 -2-> Z/4 -> ...``: acyclic, not pure-acyclic, minimal."""
    R = IntMod(4)
    return ChainComplex(R, Periodic(1), {0: FPModule.free(R, 1)}, {0: Matrix(R, [[2]])})


def exa_f(p: int = 5) -> ChainComplex:
    """``0 -> R -2-> R -> 0`` over ``Z[1/p]``, ``p >= 5``: split-minimal but not minimal."""
    if p < 5:
        raise ValueError("p must be a prime >= 5 so that 2 and 3 stay non-units")
    R = IntInvert((p,))
    F = FPModule.free(R, 1)
    return ChainComplex(R, Bounded(0, 1), {0: F, 1: F}, {1: Matrix(R, [[2]])})


def koszul(ring: RingSpec, a) -> ChainComplex:
    F = FPModule.free(ring, 1)
    return ChainComplex(ring, Bounded(0, 1), {0: F, 1: F}, {1: Matrix(ring, [[a]])})


def koszul22(ring: RingSpec = ZZ) -> ChainComplex:
    """``K(2) (x) K(2)``; over the integers its homology is ``Z/2`` in degrees 0 and 1."""
    return total_tensor(koszul(ring, 2), koszul(ring, 2))


def disk(ring: RingSpec = ZZ, degree: int = 1) -> ChainComplex:
    return ChainComplex.disk(FPModule.free(ring, 1), degree)


def sphere(ring: RingSpec = ZZ, degree: int = 0) -> ChainComplex:
    return ChainComplex.sphere(FPModule.free(ring, 1), degree)


REFUSALS = {
    "ZQ": (
        "The rationals are a flat abelian group that is not finitely presented, so the "
        "complex built from the inclusion of the integers into the rationals cannot be "
        "written down with finitely many generators and relations. Over the integers every "
        "finitely presented flat module is free, which is why the library cannot exhibit it."
    ),
    "Zp_completion": (
        "The p-adic completion of the integers localized at p is uncountable and not "
        "finitely presented over the local ring, so the two-term complex formed by the "
        "completion map has no model here. It is the standard example of a complex that is "
        "minimal but not pure-minimal; every finitely generated free complex over a local "
        "ring is minimal exactly when it is pure-minimal, so no representable substitute exists."
    ),
}

BUILTINS = {
    "dold": dold,
    "exaF": exa_f,
    "koszul22": koszul22,
    "disk": disk,
    "sphere": sphere,
}

NAMES = tuple(BUILTINS) + tuple(REFUSALS)


def gallery(name: str) -> ChainComplex:
    if name in REFUSALS:
        raise RefusedExample(REFUSALS[name])
    if name not in BUILTINS:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(NAMES)}")
    return BUILTINS[name]()
