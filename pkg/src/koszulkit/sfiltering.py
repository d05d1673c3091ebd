"""Excision machinery for the acyclic subcategory of Koszul complexes.

Images and kernels of maps between Koszul complexes stay inside the
category; a Koszul complex decomposes by elementary divisors into an
identity-boundary part and a diagonal non-unit part; and for every
degreewise split mono out of an acyclic complex there is an explicit
epimorphism under which the mono becomes a split inclusion into an
acyclic complex.  Every construction returns a certificate whose pieces
re-verify independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .complexes import (
    ChainComplex,
    ChainMap,
    direct_sum,
    is_acyclic,
    quotient_by_split_mono,
    split_retractions,
    two_term,
)
from .errors import InvalidInputError
from .koszul import AdmissibleSes, in_kos1
from .matrices import (
    Matrix,
    block_diag,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    snf,
    solve,
    vstack,
)


# ---------------------------------------------------------------------------
# Images and kernels of chain maps, as subcomplexes.


def image_complex(f: ChainMap):
    """Image subcomplex with its epi from the source and mono into the target."""
    ring = f.source.ring
    bases = {n: image_basis(f.at(n)) for n in set(f.source.ranks) | set(f.target.ranks)}
    ranks = {n: b.cols for n, b in bases.items() if b.cols}
    diffs = {}
    for n in ranks:
        if ranks.get(n - 1):
            inside = solve(bases[n - 1], f.target.d(n) * bases[n])
            if inside is None:
                raise InvalidInputError("image is not closed under the boundary")
            diffs[n] = inside
    image = ChainComplex(ring, ranks, diffs)
    epi_comps = {}
    for n in ranks:
        expressed = solve(bases[n], f.at(n))
        if expressed is None:
            raise InvalidInputError("map does not factor through its image basis")
        epi_comps[n] = expressed
    epi = ChainMap(f.source, image, epi_comps)
    mono = ChainMap(image, f.target, {n: bases[n] for n in ranks})
    return image, epi, mono


def kernel_complex(f: ChainMap):
    """Kernel subcomplex with its basis inclusion into the source."""
    ring = f.source.ring
    bases = {n: kernel_basis(f.at(n)) for n in f.source.ranks}
    ranks = {n: b.cols for n, b in bases.items() if b.cols}
    diffs = {}
    for n in ranks:
        if ranks.get(n - 1):
            inside = solve(bases[n - 1], f.source.d(n) * bases[n])
            if inside is None:
                raise InvalidInputError("kernel is not closed under the boundary")
            diffs[n] = inside
    kernel = ChainComplex(ring, ranks, diffs)
    incl = ChainMap(kernel, f.source, {n: bases[n] for n in ranks})
    return kernel, incl


@dataclass(frozen=True)
class ImageFactorization:
    """Acyclic image factorization of a map out of an acyclic Koszul complex."""

    image: ChainComplex
    epi: ChainMap
    mono: ChainMap
    sections: dict
    kernel: ChainComplex
    kernel_inclusion: ChainMap

    def verifies(self, f: ChainMap) -> bool:
        if self.mono.compose(self.epi) != f:
            return False
        if not in_kos1(self.image) or not is_acyclic(self.image):
            return False
        ring = f.source.ring
        for n, sect in self.sections.items():
            if self.epi.at(n) * sect != Matrix.identity(ring, self.image.rank(n)):
                return False
        return bool(in_kos1(self.kernel)) and is_acyclic(self.kernel)


def image_factorization(f: ChainMap) -> ImageFactorization:
    """Factor a map from an acyclic Koszul complex through its image.

    The image has free entries, is again a Koszul complex, is acyclic,
    and the epi onto it splits degreewise; the kernel stays in the
    category and is acyclic as well.
    """
    if not in_kos1(f.source) or not in_kos1(f.target):
        raise InvalidInputError("both ends must be free Koszul complexes")
    if not is_acyclic(f.source):
        raise InvalidInputError("source is not acyclic")
    image, epi, mono = image_complex(f)
    ring = f.source.ring
    sections = {}
    for n in image.ranks:
        sect = solve(epi.at(n), Matrix.identity(ring, image.rank(n)))
        if sect is None:
            raise InvalidInputError("image epi does not split degreewise")
        sections[n] = sect
    kernel, incl = kernel_complex(f)
    return ImageFactorization(image, epi, mono, sections, kernel, incl)


# ---------------------------------------------------------------------------
# Extension closure of acyclicity.


def extension_closure_check(seq: AdmissibleSes) -> bool:
    """Agreement of (ends acyclic) with (middle acyclic) on a sequence.

    Returns True when the two verdicts coincide; a False on validly
    generated input is a library defect.
    """
    ends = is_acyclic(seq.left) and is_acyclic(seq.right)
    return ends == is_acyclic(seq.middle)


# ---------------------------------------------------------------------------
# Elementary-divisor decomposition of a Koszul complex.


@dataclass(frozen=True)
class EdDecomposition:
    """Split a Koszul complex as (diagonal non-unit part) (+) (identity part).

    ``iso`` is an explicit chain isomorphism from the source onto the
    direct sum, built from the diagonalization transforms; the non-unit
    diagonal is the canonical divisor chain, and the identity part has
    as many columns as the boundary has unit divisors.
    """

    source: ChainComplex
    nonunit_part: ChainComplex
    unit_part: ChainComplex
    iso: ChainMap

    @property
    def nonunit_divisors(self) -> tuple:
        return tuple(self.nonunit_part.d(1).entries[i][i] for i in range(self.nonunit_part.rank(1)))


def ed_decompose(complex_: ChainComplex) -> EdDecomposition:
    if not in_kos1(complex_):
        raise InvalidInputError("input is not a free Koszul complex")
    ring = complex_.ring
    boundary = complex_.d(1)
    if boundary.rows != boundary.cols:
        raise InvalidInputError("Koszul complex with torsion H0 must have a square boundary")
    cert = snf(boundary)
    if cert.rank != boundary.rows:
        raise InvalidInputError("boundary is not injective")
    units = [i for i, d in enumerate(cert.divisors) if ring.is_unit(d)]
    nonunits = [i for i, d in enumerate(cert.divisors) if not ring.is_unit(d)]
    order = nonunits + units
    perm = Matrix._raw(ring, len(order), len(order),
                       [[ring.one if j == src else ring.zero for j in range(len(order))]
                        for src in order])
    phi1 = perm * inverse(cert.V)
    phi0 = perm * cert.U
    k, u_count = len(nonunits), len(units)
    nonunit = two_term(Matrix.diagonal(ring, [cert.divisors[i] for i in nonunits])) \
        if k else two_term(Matrix.zeros(ring, 0, 0))
    unit = two_term(Matrix.identity(ring, u_count)) if u_count else two_term(Matrix.zeros(ring, 0, 0))
    total = direct_sum(nonunit, unit).complex
    iso = ChainMap(complex_, total, {1: phi1, 0: phi0})
    if not iso.is_chain_iso():
        raise AssertionError("decomposition transforms are not invertible")
    return EdDecomposition(complex_, nonunit, unit, iso)


# ---------------------------------------------------------------------------
# The excision epimorphism.


@dataclass(frozen=True)
class ExcisionCertificate:
    """Witnesses that a split mono from an acyclic complex excises.

    ``q`` maps the ambient complex onto (acyclic source) (+) (identity
    part of the quotient); composing with the mono gives the split
    inclusion (id; 0), both components of q admit verified sections,
    and the kernel of q is a Koszul complex.
    """

    mono: ChainMap
    retraction0: Matrix
    target: ChainComplex
    q: ChainMap
    sections: dict
    kernel: ChainComplex
    kernel_inclusion: ChainMap
    decomposition: EdDecomposition

    def verifies(self) -> bool:
        ring = self.mono.source.ring
        X = self.mono.source
        Z = self.target
        incl = ChainMap(X, Z, {
            n: vstack([Matrix.identity(ring, X.rank(n)),
                       Matrix.zeros(ring, Z.rank(n) - X.rank(n), X.rank(n))])
            for n in X.ranks
        })
        if self.q.compose(self.mono) != incl:
            return False
        for n, sect in self.sections.items():
            if self.q.at(n) * sect != Matrix.identity(ring, Z.rank(n)):
                return False
        if not in_kos1(self.kernel):
            return False
        if not is_acyclic(Z):
            return False
        return True


def excision_epi(mono: ChainMap, retractions: Optional[dict] = None) -> ExcisionCertificate:
    """Excise a degreewise split mono from an acyclic Koszul complex.

    The quotient decomposes by elementary divisors; the target is the
    source plus the quotient's identity part.  Degree 0 of q stacks a
    retraction of the mono over the identity-part rows of the quotient
    projection, and degree 1 is forced by the chain-map law through the
    unimodular boundary of the target (applied by exact solving, never
    by fractions).  Sections of both components are assembled from a
    solved section of the quotient projection and the off-diagonal
    block correction, then verified entrywise.
    """
    X, Y = mono.source, mono.target
    ring = X.ring
    if not in_kos1(X) or not in_kos1(Y):
        raise InvalidInputError("both ends must be free Koszul complexes")
    if not is_acyclic(X):
        raise InvalidInputError("source of the mono is not acyclic")
    if retractions is None:
        retractions = split_retractions(mono)
        if retractions is None:
            raise InvalidInputError("monomorphism is not degreewise split")
    quotient, projection = quotient_by_split_mono(mono, retractions)
    if not in_kos1(quotient):
        raise InvalidInputError("quotient left the category")
    decomposition = ed_decompose(quotient)
    flat = decomposition.iso.compose(projection)
    k = decomposition.nonunit_part.rank(1)
    u_count = decomposition.unit_part.rank(1)
    unit_rows = range(k, k + u_count)

    target = direct_sum(X, decomposition.unit_part).complex
    h = retractions[0]
    q0 = vstack([h, flat.at(0).take_rows(unit_rows)])
    dz = block_diag(ring, [X.d(1), Matrix.identity(ring, u_count)])
    q1 = solve(dz, q0 * Y.d(1))
    if q1 is None:
        raise AssertionError("excision degree-1 component failed to solve")
    q = ChainMap(Y, target, {0: q0, 1: q1})

    sections = {}
    for degree in (0, 1):
        sect_flat = solve(flat.at(degree), Matrix.identity(ring, k + u_count))
        if sect_flat is None:
            raise AssertionError("quotient projection lost its degreewise section")
        lam = sect_flat.take_cols(unit_rows)
        mixing = q.at(degree) * lam
        mu = mixing.take_rows(range(X.rank(degree)))
        section = hstack([mono.at(degree), lam - mono.at(degree) * mu])
        if q.at(degree) * section != Matrix.identity(ring, target.rank(degree)):
            raise AssertionError("assembled section failed to verify")
        sections[degree] = section

    kernel, kernel_incl = kernel_complex(q)
    return ExcisionCertificate(
        mono=mono,
        retraction0=h,
        target=target,
        q=q,
        sections=sections,
        kernel=kernel,
        kernel_inclusion=kernel_incl,
        decomposition=decomposition,
    )


# ---------------------------------------------------------------------------
# Idempotent splitting in the acyclic subcategory.


@dataclass(frozen=True)
class IdempotentSplit:
    """X decomposed as (image of e) (+) (image of 1 - e)."""

    image_part: ChainComplex
    complement_part: ChainComplex
    iso: ChainMap

    def rank_additive(self) -> bool:
        X = self.iso.target
        return all(
            self.image_part.rank(n) + self.complement_part.rank(n) == X.rank(n)
            for n in X.ranks
        )


def idempotent_split(endo: ChainMap) -> IdempotentSplit:
    """Split an idempotent endomorphism of an acyclic Koszul complex.

    Both image subcomplexes have free entries and are acyclic, and the
    paired basis inclusion is an exact chain isomorphism onto the input.
    """
    if endo.source != endo.target:
        raise InvalidInputError("idempotent must be an endomorphism")
    X = endo.source
    if not in_kos1(X) or not is_acyclic(X):
        raise InvalidInputError("idempotents split inside the acyclic subcategory")
    if endo.compose(endo) != endo:
        raise InvalidInputError("endomorphism is not idempotent")
    ident = ChainMap.identity(X)
    image, _, image_mono = image_complex(endo)
    complement, _, complement_mono = image_complex(ident - endo)
    total = direct_sum(image, complement)
    ring = X.ring
    comps = {}
    for n in X.ranks:
        comps[n] = hstack([image_mono.at(n), complement_mono.at(n)])
    iso = ChainMap(total.complex, X, comps)
    if not iso.is_chain_iso():
        raise AssertionError("idempotent images do not recombine to the input")
    return IdempotentSplit(image, complement, iso)
