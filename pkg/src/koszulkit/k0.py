"""Grothendieck-group shadows: additive classes at the level of K0.

Torsion modules are classified by their length at each prime (the
classes are finitely supported prime-to-integer maps); Koszul complexes
carry two classes: the quasi-isomorphism-invariant torsion class of
their degree-zero homology, and the finer pair (rank of the degree-one
part, torsion class), whose two projections realize the split
decomposition of the category's K0 into an acyclic part and a torsion
part.  Classes are stored in classified form; the additivity checks
below are the executable content.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .complexes import ChainComplex
from .errors import InvalidInputError
from .fgmodules import FgModule
from .koszul import (
    AdmissibleSes,
    CanonicalTriple,
    PresentedKoszul,
    PresentedSes,
    h0,
    in_kos1,
    retraction_q,
)
from .presented import is_short_exact
from .rings import Ring


@dataclass(frozen=True)
class K0TorsionClass:
    """Finitely supported map from canonical primes to integers."""

    ring: Ring
    counts: tuple  # sorted (prime, multiplicity) pairs, multiplicity != 0

    @classmethod
    def make(cls, ring: Ring, counts: dict) -> "K0TorsionClass":
        return cls(ring, tuple(sorted((p, m) for p, m in counts.items() if m)))

    @classmethod
    def zero(cls, ring: Ring) -> "K0TorsionClass":
        return cls(ring, ())

    def as_dict(self) -> dict:
        return dict(self.counts)

    def __add__(self, other: "K0TorsionClass") -> "K0TorsionClass":
        if self.ring != other.ring:
            raise InvalidInputError("classes over different rings")
        merged = self.as_dict()
        for p, m in other.counts:
            merged[p] = merged.get(p, 0) + m
        return K0TorsionClass.make(self.ring, merged)

    def is_zero(self) -> bool:
        return not self.counts


@dataclass(frozen=True)
class K0KosClass:
    """Rank paired with a torsion class; componentwise addition."""

    rank: int
    torsion: K0TorsionClass

    def __add__(self, other: "K0KosClass") -> "K0KosClass":
        return K0KosClass(self.rank + other.rank, self.torsion + other.torsion)


def class_torsion(module: FgModule) -> K0TorsionClass:
    """Dévissage class of a torsion module: prime -> length at that prime."""
    ring = module.ring
    if not module.is_torsion():
        raise InvalidInputError("torsion class of a non-torsion module")
    counts: dict = {}
    for t in module.torsion:
        for p, e in ring.factor(t).items():
            counts[p] = counts.get(p, 0) + e
    return K0TorsionClass.make(ring, counts)


def class_kos_qis(complex_: ChainComplex) -> K0TorsionClass:
    """Quasi-isomorphism-invariant class: the torsion class of H0."""
    if not in_kos1(complex_):
        raise InvalidInputError("input is not a free Koszul complex")
    return class_torsion(h0(complex_))


def class_kos_isom(complex_: ChainComplex) -> K0KosClass:
    """Isomorphism-level class: (rank of the degree-one part, H0 class)."""
    if not in_kos1(complex_):
        raise InvalidInputError("input is not a free Koszul complex")
    return K0KosClass(complex_.rank(1), class_torsion(h0(complex_)))


def class_acyclic(complex_: ChainComplex) -> int:
    """Class of an acyclic Koszul complex: the rank of its degree-one part."""
    retract = retraction_q(complex_)
    if not retract.comparison_is_iso:
        raise InvalidInputError("complex is not acyclic")
    return complex_.rank(1)


def class_presented(x: PresentedKoszul) -> K0KosClass:
    """Class of a presented two-term complex: (generic rank of the top, H0 class)."""
    return K0KosClass(x.top.canonical_form().free_rank,
                      class_torsion(x.h0().canonical_form()))


def splitting_decomposition_check(complex_: ChainComplex) -> bool:
    """The isomorphism-level class decomposes as (acyclic retract class, H0 class)."""
    full = class_kos_isom(complex_)
    retract = retraction_q(complex_)
    return full.rank == retract.complex.rank(1) and full.torsion == class_kos_qis(complex_)


_CLASSIFIERS = {
    "kos_isom": class_kos_isom,
    "kos_qis": class_kos_qis,
    "presented": class_presented,
}


def additivity_check(seq: Union[AdmissibleSes, PresentedSes, CanonicalTriple, tuple], which: str) -> bool:
    """class(middle) == class(left) + class(right) for the named classifier.

    Accepts a free-complex admissible sequence, a presented sequence or
    canonical triple, or a (mono, epi) pair of presented module maps for
    the plain torsion classifier.
    """
    if which == "torsion":
        mono, epi = seq
        if not is_short_exact(mono, epi):
            raise InvalidInputError("not a short exact sequence of modules")
        left = class_torsion(mono.source.canonical_form())
        middle = class_torsion(mono.target.canonical_form())
        right = class_torsion(epi.target.canonical_form())
        return middle == left + right
    if isinstance(seq, CanonicalTriple):
        seq = seq.sequence
    classifier = _CLASSIFIERS.get(which)
    if classifier is None:
        raise InvalidInputError(f"unknown classifier {which!r}")
    if isinstance(seq, PresentedSes):
        if which != "presented":
            raise InvalidInputError("presented sequences use the presented classifier")
        left, middle, right = seq.left, seq.middle, seq.right
    elif isinstance(seq, AdmissibleSes):
        if which == "presented":
            left = PresentedKoszul.from_free(seq.left)
            middle = PresentedKoszul.from_free(seq.middle)
            right = PresentedKoszul.from_free(seq.right)
        else:
            left, middle, right = seq.left, seq.middle, seq.right
    else:
        raise InvalidInputError("unsupported sequence kind")
    total = classifier(left) + classifier(right)
    return classifier(middle) == total
