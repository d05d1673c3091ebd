"""Exact arithmetic over the two supported coefficient domains.

Supported domains: the integers, and univariate polynomials over a prime
field F_p.  Elements are plain Python payloads -- ``int`` for integers,
little-endian coefficient tuples for polynomials -- and each ring object
owns every operation on its elements.  The ring abstraction is an internal
seam between exactly these two instances, not a public extension point;
nothing in the library ever rounds, so all results are exact.

Canonical associates are nonnegative integers and monic polynomials, so
elementary-divisor lists coming out of diagonalization are directly
comparable.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import DomainMismatchError, InvalidInputError, NotFactorableError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Ring:
    """Base class for the two Euclidean coefficient domains.

    Subclasses provide ``zero``, ``one`` and the primitive operations;
    the helpers here are shared derived arithmetic.
    """

    token: str
    zero = None
    one = None

    def validate(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def divmod(self, a, b):
        """Euclidean division a = q*b + r with measure(r) < measure(b)."""
        raise NotImplementedError

    def measure(self, a) -> int:
        """Euclidean size used for pivot selection: |a| resp. deg-based."""
        raise NotImplementedError

    def normalize(self, a):
        """Split a = unit * canonical; ``normalize(0) == (one, zero)``."""
        raise NotImplementedError

    def unit_inverse(self, u):
        raise NotImplementedError

    def ext_gcd(self, a, b):
        """Return (g, s, t) with g = s*a + t*b and g the canonical gcd."""
        raise NotImplementedError

    def factor(self, a) -> dict:
        """Factor into canonical primes: a = unit * prod(p**m)."""
        raise NotImplementedError

    # Derived helpers.

    def div_exact(self, a, b):
        """Return q with a == q*b, or None when b does not divide a."""
        if self.is_zero(b):
            return self.zero if self.is_zero(a) else None
        q, r = self.divmod(a, b)
        return q if self.is_zero(r) else None

    def divides(self, a, b) -> bool:
        return self.div_exact(b, a) is not None

    def gcd(self, a, b):
        return self.ext_gcd(a, b)[0]

    def is_canonical_prime(self, p) -> bool:
        if self.is_zero(p) or self.is_unit(p):
            return False
        unit, canon = self.normalize(p)
        if canon != p:
            return False
        return self.factor(p) == {p: 1}

    def __eq__(self, other):
        return isinstance(other, Ring) and self.token == other.token

    def __hash__(self):
        return hash(self.token)

    def __repr__(self):
        return f"<ring {self.token}>"


class IntegerRing(Ring):
    token = "Z"
    zero = 0
    one = 1

    def validate(self, a):
        if type(a) is not int:
            raise DomainMismatchError(f"not an integer element: {a!r}")
        return a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a == 1 or a == -1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def divmod(self, a, b):
        return divmod(a, b)

    def measure(self, a):
        return abs(a)

    def normalize(self, a):
        return (-1, -a) if a < 0 else (1, a)

    def unit_inverse(self, u):
        if u != 1 and u != -1:
            raise InvalidInputError(f"{u!r} is not a unit in Z")
        return u

    def ext_gcd(self, a, b):
        self.validate(a), self.validate(b)
        old_r, r = a, b
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            return -old_r, -old_s, -old_t
        return old_r, old_s, old_t

    def factor(self, a):
        self.validate(a)
        _, c = self.normalize(a)
        if c == 0 or c == 1:
            raise NotFactorableError(f"cannot factor {a!r}")
        result: dict[int, int] = {}
        for p in itertools.chain((2,), itertools.count(3, 2)):
            if p * p > c:
                break
            while c % p == 0:
                c //= p
                result[p] = result.get(p, 0) + 1
        if c > 1:
            result[c] = result.get(c, 0) + 1
        return result


class PrimeFieldPolynomialRing(Ring):
    """Univariate polynomials over F_p, elements as coefficient tuples.

    Coefficients are stored little-endian in [0, p) with no trailing
    zeros; the zero polynomial is the empty tuple.
    """

    def __init__(self, p: int):
        if not is_prime(p):
            raise InvalidInputError(f"characteristic {p} is not prime")
        self.p = p
        self.token = f"fpx:{p}"
        self.zero = ()
        self.one = (1,)

    def validate(self, a):
        if type(a) is not tuple:
            raise DomainMismatchError(f"not a polynomial element: {a!r}")
        p = self.p
        for c in a:
            if type(c) is not int or not 0 <= c < p:
                raise DomainMismatchError(f"coefficient {c!r} out of F_{p}")
        if a and a[-1] == 0:
            raise DomainMismatchError("leading coefficient must be nonzero")
        return a

    @staticmethod
    def _trim(coeffs: list) -> tuple:
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return tuple(coeffs)

    def poly(self, coeffs) -> tuple:
        """Build an element from arbitrary integer coefficients."""
        return self._trim([c % self.p for c in coeffs])

    def is_zero(self, a):
        return not a

    def is_unit(self, a):
        return len(a) == 1

    def add(self, a, b):
        p = self.p
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return self._trim(out)

    def neg(self, a):
        p = self.p
        return tuple((-c) % p for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] = (out[i + j] + ca * cb) % p
        return self._trim(out)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(a)
        db = len(b) - 1
        lead_inv = pow(b[-1], -1, p)
        quot = [0] * max(len(a) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c:
                q = (c * lead_inv) % p
                quot[i - db] = q
                for j, cb in enumerate(b):
                    rem[i - db + j] = (rem[i - db + j] - q * cb) % p
        return self._trim(quot), self._trim(rem)

    def measure(self, a):
        return len(a)

    def normalize(self, a):
        if not a:
            return self.one, ()
        lead = a[-1]
        if lead == 1:
            return self.one, a
        inv = pow(lead, -1, self.p)
        return (lead,), tuple((c * inv) % self.p for c in a)

    def unit_inverse(self, u):
        if len(u) != 1:
            raise InvalidInputError(f"{u!r} is not a unit in {self.token}")
        return (pow(u[0], -1, self.p),)

    def ext_gcd(self, a, b):
        self.validate(a), self.validate(b)
        old_r, r = a, b
        old_s, s = self.one, self.zero
        old_t, t = self.zero, self.one
        while r:
            q, rem = self.divmod(old_r, r)
            old_r, r = r, rem
            old_s, s = s, self.sub(old_s, self.mul(q, s))
            old_t, t = t, self.sub(old_t, self.mul(q, t))
        if not old_r:
            return (), old_s, old_t
        unit, canon = self.normalize(old_r)
        inv = self.unit_inverse(unit)
        return canon, self.mul(inv, old_s), self.mul(inv, old_t)

    def _monic_by_degree(self, degree: int):
        for lower in itertools.product(range(self.p), repeat=degree):
            yield tuple(lower) + (1,)

    def factor(self, a):
        self.validate(a)
        if self.is_zero(a) or self.is_unit(a):
            raise NotFactorableError(f"cannot factor {a!r}")
        _, rem = self.normalize(a)
        result: dict[tuple, int] = {}
        degree = 1
        while len(rem) > 1:
            if len(rem) - 1 < 2 * degree:
                result[rem] = result.get(rem, 0) + 1
                break
            for cand in self._monic_by_degree(degree):
                while True:
                    q, r = self.divmod(rem, cand)
                    if r:
                        break
                    rem = q
                    result[cand] = result.get(cand, 0) + 1
                if len(rem) - 1 < 2 * degree:
                    break
            degree += 1
        return result


ZZ = IntegerRing()


@lru_cache(maxsize=None)
def fpx(p: int) -> PrimeFieldPolynomialRing:
    return PrimeFieldPolynomialRing(p)


def ring_from_token(token: str) -> Ring:
    """Parse the CLI ring selector: ``"Z"`` or ``"fpx:<p>"``."""
    if token == "Z":
        return ZZ
    if token.startswith("fpx:"):
        try:
            p = int(token[4:])
        except ValueError:
            raise InvalidInputError(f"bad ring token {token!r}") from None
        return fpx(p)
    raise InvalidInputError(f"bad ring token {token!r}")
