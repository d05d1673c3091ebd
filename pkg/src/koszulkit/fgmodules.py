"""Finitely generated modules in canonical form.

A module is recorded as a free rank plus a torsion list of canonical
divisors chained by divisibility, which is the classification of f.g.
modules over a PID.  Arbitrary divisor lists are re-normalized into a
chain by factoring and regrouping prime powers, so isomorphism testing
is a plain equality of canonical forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInputError
from .matrices import Matrix, snf
from .rings import Ring


@dataclass(frozen=True)
class FgModule:
    ring: Ring
    free_rank: int
    torsion: tuple = field(default=())

    @classmethod
    def make(cls, ring: Ring, free_rank: int, divisors) -> "FgModule":
        """Canonicalize an arbitrary torsion-divisor list into a chain.

        Units are dropped; a zero divisor is rejected (a free summand
        must be counted in ``free_rank``).  Prime-power contributions
        are regrouped so the result satisfies t1 | t2 | ... .
        """
        if free_rank < 0:
            raise InvalidInputError("negative free rank")
        exponents: dict = {}
        for d in divisors:
            _, canon = ring.normalize(ring.validate(d))
            if ring.is_zero(canon):
                raise InvalidInputError("zero torsion divisor")
            if ring.is_unit(canon):
                continue
            for p, e in ring.factor(canon).items():
                exponents.setdefault(p, []).append(e)
        if not exponents:
            return cls(ring, free_rank, ())
        width = max(len(v) for v in exponents.values())
        for v in exponents.values():
            v.sort(reverse=True)
            v.extend([0] * (width - len(v)))
        chain = []
        for k in range(width):
            factor = ring.one
            for p in sorted(exponents):
                for _ in range(exponents[p][k]):
                    factor = ring.mul(factor, p)
            chain.append(factor)
        chain.reverse()
        return cls(ring, free_rank, tuple(chain))

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_torsion(self) -> bool:
        return self.free_rank == 0

    def direct_sum(self, other: "FgModule") -> "FgModule":
        if self.ring != other.ring:
            raise InvalidInputError("direct sum across different rings")
        return FgModule.make(self.ring, self.free_rank + other.free_rank, self.torsion + other.torsion)

    def __repr__(self):
        return f"FgModule({self.ring.token}, free={self.free_rank}, torsion={list(self.torsion)})"


def cokernel(mat: Matrix) -> FgModule:
    """Canonical form of the cokernel of a matrix acting on columns."""
    cert = snf(mat)
    return FgModule.make(mat.ring, mat.rows - cert.rank, cert.divisors)


def module_iso(first: FgModule, second: FgModule) -> bool:
    """Isomorphism test: equality of canonical forms."""
    if first.ring != second.ring:
        raise InvalidInputError("modules over different rings")
    return first == second


def length_at(module: FgModule, p) -> int:
    """Total multiplicity of the prime p across the torsion divisors."""
    ring = module.ring
    if not module.is_torsion():
        raise InvalidInputError("length is defined for torsion modules only")
    if not ring.is_canonical_prime(p):
        raise InvalidInputError(f"{p!r} is not a canonical prime")
    total = 0
    for t in module.torsion:
        while True:
            q = ring.div_exact(t, p)
            if q is None:
                break
            total += 1
            t = q
    return total
