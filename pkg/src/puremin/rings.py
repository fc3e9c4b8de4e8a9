"""Computable base rings and their elements in canonical form.

Four kinds of commutative noetherian rings are supported, all of them
quotients or localizations of the integers:

    Int()              the integers
    IntMod(n)          Z/nZ, elements are residues in [0, n)
    IntInvert(S)       Z[1/p : p in S], elements are reduced fractions
    IntLocalAt(p)      Z localized at the prime ideal (p)

Elements are plain Python values: ``int`` for Int/IntMod and for integral
elements of the localizations, ``fractions.Fraction`` otherwise.  Every
operation returns the canonical representative, so equality of elements
is equality of Python values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from sympy import factorint, isprime

__all__ = [
    "RingSpec",
    "Int",
    "IntMod",
    "IntInvert",
    "IntLocalAt",
    "ZZ",
    "ring_from_json",
]


def _strip(n: int, primes) -> int:
    """Remove every factor of the given primes from ``n``."""
    for p in primes:
        while n and n % p == 0:
            n //= p
    return n


class RingSpec:
    """Common interface of the four ring kinds."""

    kind: str = ""

    # --- element construction -------------------------------------------

    def elem(self, x):
        raise NotImplementedError

    def zero(self):
        return 0

    def one(self):
        return self.elem(1)

    # --- arithmetic -----------------------------------------------------

    def add(self, a, b):
        return self.elem(a + b)

    def sub(self, a, b):
        return self.elem(a - b)

    def neg(self, a):
        return self.elem(-a)

    def mul(self, a, b):
        return self.elem(a * b)

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def divide(self, a, b):
        """Return some ``x`` with ``b*x == a``, or None if none exists."""
        raise NotImplementedError

    def associate(self, a):
        """Split ``a = u * c`` with ``u`` a unit and ``c`` canonical; return (c, u)."""
        raise NotImplementedError

    def annihilator(self, d):
        """Generator of the ideal {x : d*x = 0}."""
        return 1 if d == 0 else 0

    def divides(self, a, b) -> bool:
        return self.divide(b, a) is not None

    def gcd(self, a, b):
        raise NotImplementedError

    # --- structure ------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def size(self):
        return None

    @property
    def is_local(self) -> bool:
        return False

    @property
    def is_vnr(self) -> bool:
        """Von Neumann regular: every module is flat."""
        return False

    def to_json(self):
        raise NotImplementedError

    def lift(self, a) -> int:
        """Integer representative (only for rings whose elements are integers)."""
        return int(a)


@dataclass(frozen=True)
class Int(RingSpec):
    kind = "Int"

    def elem(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_unit(self, a):
        return a == 1 or a == -1

    def inverse(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        return a

    def divide(self, a, b):
        if b == 0:
            return 0 if a == 0 else None
        q, r = divmod(a, b)
        return q if r == 0 else None

    def associate(self, a):
        return (abs(a), -1 if a < 0 else 1)

    def gcd(self, a, b):
        return gcd(a, b)

    def to_json(self):
        return {"kind": "Int"}

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class IntMod(RingSpec):
    n: int

    kind = "IntMod"

    def __post_init__(self):
        if int(self.n) < 2:
            raise ValueError("IntMod modulus must be at least 2")

    def elem(self, x):
        if isinstance(x, Fraction):
            # a/b with b invertible mod n
            return (x.numerator * pow(x.denominator, -1, self.n)) % self.n
        return int(x) % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def is_unit(self, a):
        return gcd(a, self.n) == 1

    def inverse(self, a):
        return pow(a, -1, self.n)

    def divide(self, a, b):
        n = self.n
        a %= n
        b %= n
        g = gcd(b, n)
        if a % g:
            return None
        m = n // g
        if m == 1:
            return 0
        return (a // g) * pow(b // g, -1, m) % m

    def associate(self, a):
        a %= self.n
        g = gcd(a, self.n)
        if g == self.n:
            return (0, 1)
        # a = g * a' with a' a unit modulo n/g; lift a' to a unit modulo n
        m = self.n // g
        u = (a // g) % m
        while gcd(u, self.n) != 1:
            u += m
        return (g, u % self.n)

    def annihilator(self, d):
        return self.n // gcd(d, self.n) % self.n

    def gcd(self, a, b):
        return gcd(gcd(a, b), self.n) % self.n

    @property
    def is_finite(self):
        return True

    @property
    def size(self):
        return self.n

    @cached_property
    def factorization(self) -> dict:
        return {int(p): int(k) for p, k in factorint(self.n).items()}

    @property
    def is_local(self):
        return len(self.factorization) == 1

    @property
    def is_vnr(self):
        return all(k == 1 for k in self.factorization.values())

    def prime_power_factors(self):
        """The CRT factors p**k of n, in increasing order of p."""
        return [p**k for p, k in sorted(self.factorization.items())]

    def idempotent(self, q: int) -> int:
        """The idempotent of Z/n that is 1 modulo q and 0 modulo n/q."""
        r = self.n // q
        return (r * pow(r, -1, q)) % self.n

    def to_json(self):
        return {"kind": "IntMod", "n": self.n}

    def __str__(self):
        return f"Z/{self.n}"


class _Localization(RingSpec):
    """Shared arithmetic for subrings of Q."""

    def _allowed_den(self, b: int) -> bool:
        raise NotImplementedError

    def elem(self, x):
        if isinstance(x, tuple) or isinstance(x, list):
            x = Fraction(int(x[0]), int(x[1]))
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return x.numerator
            if not self._allowed_den(x.denominator):
                raise ValueError(f"{x} does not lie in {self}")
            return x
        return int(x)

    def add(self, a, b):
        return self.elem(Fraction(a) + b) if isinstance(a, Fraction) or isinstance(b, Fraction) else a + b

    def sub(self, a, b):
        return self.elem(Fraction(a) - b) if isinstance(a, Fraction) or isinstance(b, Fraction) else a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return self.elem(Fraction(a) * b) if isinstance(a, Fraction) or isinstance(b, Fraction) else a * b

    def _unit_part(self, num: int) -> int:
        raise NotImplementedError

    def is_unit(self, a):
        if a == 0:
            return False
        return self._allowed_den(abs(Fraction(a).numerator))

    def inverse(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in {self}")
        return self.elem(1 / Fraction(a))

    def divide(self, a, b):
        if b == 0:
            return 0 if a == 0 else None
        q = Fraction(a) / Fraction(b)
        if q.denominator != 1 and not self._allowed_den(q.denominator):
            return None
        return self.elem(q)

    def associate(self, a):
        if a == 0:
            return (0, 1)
        num = abs(Fraction(a).numerator)
        c = self._canonical_num(num)
        return (c, self.elem(Fraction(a) / c))

    def gcd(self, a, b):
        na = Fraction(a).numerator
        nb = Fraction(b).numerator
        return self._canonical_num(gcd(na, nb)) if (na or nb) else 0

    def to_integer_row_scale(self, values) -> int:
        """A unit clearing the denominators of ``values``."""
        den = 1
        for v in values:
            if isinstance(v, Fraction):
                d = v.denominator
                den = den * d // gcd(den, d)
        return den


@dataclass(frozen=True)
class IntInvert(_Localization):
    primes: tuple

    kind = "IntInvert"

    def __post_init__(self):
        ps = tuple(sorted(int(p) for p in self.primes))
        if len(set(ps)) != len(ps) or not ps:
            raise ValueError("IntInvert needs a nonempty set of distinct primes")
        if not all(isprime(p) for p in ps):
            raise ValueError("IntInvert primes must be prime")
        object.__setattr__(self, "primes", ps)

    def _allowed_den(self, b):
        return _strip(abs(b), self.primes) == 1

    def _canonical_num(self, num):
        return _strip(num, self.primes)

    def to_json(self):
        return {"kind": "IntInvert", "primes": list(self.primes)}

    def __str__(self):
        return "Z[1/" + ",".join(map(str, self.primes)) + "]"


@dataclass(frozen=True)
class IntLocalAt(_Localization):
    p: int

    kind = "IntLocalAt"

    def __post_init__(self):
        if not isprime(int(self.p)):
            raise ValueError("IntLocalAt needs a prime")

    def _allowed_den(self, b):
        return b % self.p != 0

    def _canonical_num(self, num):
        k = 0
        while num % self.p == 0:
            num //= self.p
            k += 1
        return self.p**k

    @property
    def is_local(self):
        return True

    def to_json(self):
        return {"kind": "IntLocalAt", "p": self.p}

    def __str__(self):
        return f"Z_({self.p})"


ZZ = Int()


def ring_from_json(obj) -> RingSpec:
    if isinstance(obj, str):
        if obj in ("Int", "Z", "ZZ"):
            return ZZ
        if obj.startswith("Z/"):
            return IntMod(int(obj[2:]))
        raise ValueError(f"unknown ring {obj!r}")
    kind = obj.get("kind")
    if kind == "Int":
        return ZZ
    if kind == "IntMod":
        return IntMod(int(obj["n"]))
    if kind == "IntInvert":
        return IntInvert(tuple(obj["primes"]))
    if kind == "IntLocalAt":
        return IntLocalAt(int(obj["p"]))
    raise ValueError(f"unknown ring kind {kind!r}")


def product_of(ring: RingSpec, values):
    out = ring.one()
    for v in values:
        out = ring.mul(out, v)
    return out


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x) if x else out
    return out


def is_prime_power(n: int) -> bool:
    return len(factorint(n)) == 1

