"""Two-term complexes with injective boundary and the categories around them.

This module implements the working categories: two-term complexes of
free modules with injective boundary and torsion degree-zero homology
("Koszul complexes"), bounded free complexes with torsion homology, the
n-spherical subcategories, and the presented-coordinate variant whose
entries are arbitrary finitely presented modules.

The two central algorithms are the two-sided truncation retraction
(``kappa``) and the cellular factorization of a morphism into
degreewise split monomorphisms with spherical subquotients followed by
a quasi-isomorphism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .complexes import (
    ChainComplex,
    ChainMap,
    ComplexSes,
    Homotopy,
    chain_retraction,
    cone,
    homology_table,
    homotopy_between,
    quasi_iso_degree,
    quotient_by_split_mono,
    shift,
    shift_map,
    split_retractions,
    structure_maps,
    tau_ge_map,
    tau_le_map,
    truncation_splitting,
    _tau_ge,
    _tau_le,
)
from .errors import InvalidInputError
from .fgmodules import FgModule, cokernel
from .matrices import Matrix, hstack, image_basis, kernel_basis, solve, vstack
from .presented import PresentedModule, PresentedMap, is_short_exact


# ---------------------------------------------------------------------------
# Membership predicates.


@dataclass(frozen=True)
class Kos1Membership:
    ok: bool
    concentrated: bool
    injective: bool
    torsion_h0: bool

    def __bool__(self):
        return self.ok


def in_kos1(complex_: ChainComplex) -> Kos1Membership:
    """Two-term in degrees {1, 0}, injective boundary, torsion H0."""
    concentrated = all(n in (0, 1) for n in complex_.ranks)
    injective = concentrated and kernel_basis(complex_.d(1)).cols == 0
    torsion = concentrated and cokernel(complex_.d(1)).free_rank == 0
    return Kos1Membership(concentrated and injective and torsion, concentrated, injective, torsion)


@dataclass(frozen=True)
class AMembership:
    in_a: bool
    homologies: dict
    spherical_degree: Optional[int]

    def __bool__(self):
        return self.in_a


def in_A(complex_: ChainComplex) -> AMembership:
    """Bounded free complex with torsion homology in every degree."""
    homs = homology_table(complex_)
    torsion = all(h.free_rank == 0 for h in homs.values())
    nonzero = [n for n, h in homs.items() if not h.is_zero()]
    spherical = nonzero[0] if len(nonzero) == 1 else None
    return AMembership(torsion, homs, spherical)


def in_A_n(complex_: ChainComplex, n: int) -> bool:
    """Torsion homology concentrated in degree n (acyclic qualifies)."""
    member = in_A(complex_)
    if not member.in_a:
        return False
    return all(h.is_zero() for k, h in member.homologies.items() if k != n)


# ---------------------------------------------------------------------------
# Degree-zero homology and its augmentation.


def h0(complex_: ChainComplex) -> FgModule:
    if any(n not in (0, 1) for n in complex_.ranks):
        raise InvalidInputError("degree-zero homology shortcut needs a two-term complex")
    return cokernel(complex_.d(1))


def h0_presentation(complex_: ChainComplex) -> PresentedModule:
    if any(n not in (0, 1) for n in complex_.ranks):
        raise InvalidInputError("degree-zero homology shortcut needs a two-term complex")
    return PresentedModule(complex_.ring, complex_.rank(0), complex_.d(1))


@dataclass(frozen=True)
class Augmentation:
    """The canonical surjection of a two-term complex onto its H0.

    The target is the presented two-term complex [0 -> H0]; the degree
    zero component is the identity on generators, degree one is zero.
    """

    source: ChainComplex
    target: "PresentedKoszul"
    degree0: PresentedMap
    degree1: PresentedMap


def h0_augmentation(complex_: ChainComplex) -> Augmentation:
    ring = complex_.ring
    membership = in_kos1(complex_)
    if not membership:
        raise InvalidInputError("augmentation needs a Koszul complex")
    bottom = h0_presentation(complex_)
    zero_mod = PresentedModule.free(ring, 0)
    target = PresentedKoszul(zero_mod, bottom, PresentedMap.zero(zero_mod, bottom))
    degree0 = PresentedMap(PresentedModule.free(ring, complex_.rank(0)), bottom,
                           Matrix.identity(ring, complex_.rank(0)), check=False)
    degree1 = PresentedMap.zero(PresentedModule.free(ring, complex_.rank(1)), zero_mod)
    return Augmentation(complex_, target, degree0, degree1)


def h0_map(f: ChainMap) -> PresentedMap:
    """Induced map on degree-zero homology presentations."""
    return PresentedMap(h0_presentation(f.source), h0_presentation(f.target), f.at(0))


# ---------------------------------------------------------------------------
# The two-sided truncation retraction.


@dataclass(frozen=True)
class KappaResult:
    """Retraction of a 0-spherical complex onto a Koszul complex.

    ``u`` maps the upper truncation at 0 back into the input, ``v``
    projects it onto the retract; both are quasi-isomorphisms on
    0-spherical input, and the retract of a Koszul complex is itself.
    """

    kos: ChainComplex
    u: ChainMap
    v: ChainMap
    u_is_quasi_iso: bool
    v_is_quasi_iso: bool


def kappa(complex_: ChainComplex) -> KappaResult:
    if not in_A_n(complex_, 0):
        raise InvalidInputError("input is not 0-spherical with torsion homology")
    upper, incl = _tau_ge(complex_, 0)
    kos, proj = _tau_le(upper, 0)
    return KappaResult(
        kos=kos,
        u=incl,
        v=proj,
        u_is_quasi_iso=quasi_iso_degree(incl) == math.inf,
        v_is_quasi_iso=quasi_iso_degree(proj) == math.inf,
    )


# ---------------------------------------------------------------------------
# Cellular factorization.


@dataclass(frozen=True)
class FactorStep:
    """One factorization step f = h . g through an intermediate complex.

    ``witness`` is the degreewise homotopy built from the source-summand
    inclusion into the cone, ``upper`` the upper truncation of the cone
    whose homology the cone of h reproduces.
    """

    g: ChainMap
    h: ChainMap
    witness: Homotopy
    upper: ChainComplex


def factor_step(f: ChainMap, n: int) -> FactorStep:
    """Split off the degree-(n+1) homology of the cone of f.

    Requires f to kill cone homology in degrees <= n.  The intermediate
    complex is the shifted cone of the composite (target -> cone -> upper
    truncation); the new map g pairs f with a homotopy witnessing that
    the composite vanishes on the source, making the cone of g
    (n+1)-spherical while h keeps only the homology above n+1.
    """
    if quasi_iso_degree(f) < n:
        raise InvalidInputError(f"map does not vanish in cone degrees <= {n}")
    X, Y = f.source, f.target
    ring = X.ring
    mapping_cone = cone(f)
    splitting = truncation_splitting(mapping_cone.complex, n + 1)
    upper = splitting.triple.upper
    a = splitting.u
    b = mapping_cone.inclusion
    composite = a.compose(b)
    cone_of_composite = cone(composite)
    intermediate = shift(cone_of_composite.complex, 1)
    h = shift_map(cone_of_composite.projection, 1)
    witness_components = {}
    for m in X.ranks:
        iota = vstack([Matrix.identity(ring, X.rank(m)),
                       Matrix.zeros(ring, Y.rank(m + 1), X.rank(m))])
        witness_components[m] = -(a.at(m + 1) * iota)
    witness = Homotopy(a.compose(b).compose(f), ChainMap.zero(X, upper), witness_components)
    g_components = {}
    for m in set(X.ranks):
        g_components[m] = vstack([f.at(m), witness.at(m)])
    g = ChainMap(X, intermediate, g_components)
    if h.compose(g) != f:
        raise AssertionError("factor step lost exact equality with the input map")
    return FactorStep(g=g, h=h, witness=witness, upper=upper)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Explicit homotopy-equivalence data between the cone of the second
    factor and the truncated cone it reproduces."""

    into: ChainMap       # truncated cone -> cone of h, a split quasi-iso
    back: ChainMap       # chain retraction of ``into``
    homotopy: Homotopy   # id (cone of h) ~ into . back


def factor_step_equivalence(step: FactorStep) -> Optional[EquivalenceWitness]:
    """Upgrade the homology-level comparison of a factor step to explicit
    homotopy-equivalence data.

    The canonical summand inclusion of the truncated cone into the cone
    of h is a chain map; a chain-level retraction is solved for, and the
    identity is connected to the round trip by a solved homotopy.  Over
    these coefficient rings the solves always succeed on valid steps,
    but the stacked systems grow quickly, so callers guard by width.
    """
    upper = step.upper
    mapping_cone = cone(step.h).complex
    ring = upper.ring
    target_of_h = step.h.target
    comps = {}
    for n in upper.ranks:
        above = target_of_h.rank(n - 1)
        below = target_of_h.rank(n)
        comps[n] = vstack([
            Matrix.zeros(ring, above, upper.rank(n)),
            Matrix.identity(ring, upper.rank(n)),
            Matrix.zeros(ring, below, upper.rank(n)),
        ])
    into = ChainMap(upper, mapping_cone, comps)
    back = chain_retraction(into)
    if back is None:
        return None
    witness = homotopy_between(ChainMap.identity(mapping_cone), into.compose(back))
    if witness is None:
        return None
    return EquivalenceWitness(into=into, back=back, homotopy=witness)


@dataclass(frozen=True)
class CellularFactorization:
    """Chain of degreewise split monos with spherical subquotients.

    ``stages[i]`` includes stage i into stage i+1; ``subquotients[i]``
    is its quotient complex, spherical in degree ``spherical_degrees[i]``;
    ``final`` is a quasi-isomorphism, and final . stages == the input.
    """

    stages: tuple
    retractions: tuple
    subquotients: tuple
    spherical_degrees: tuple
    final: ChainMap

    def composite(self) -> ChainMap:
        out = self.final
        for stage in reversed(self.stages):
            out = out.compose(stage)
        return out


def cellular_factorization(f: ChainMap) -> CellularFactorization:
    """Factor a morphism of torsion-homology complexes cell by cell.

    Each pass applies ``factor_step`` at the current cone-vanishing
    degree.  When the step map is not already degreewise split, the
    cylinder replacement makes it so (the end inclusion of a cylinder
    is always split, and the projection keeps the composite equal to f
    on the nose).  Bounded input forces termination in at most
    support-width + 1 stages.
    """
    if not in_A(f.source).in_a or not in_A(f.target).in_a:
        raise InvalidInputError("both ends must have torsion homology")
    stages = []
    retractions = []
    subquotients = []
    spherical = []
    current = f
    degrees = set(f.source.ranks) | set(f.target.ranks)
    width = (max(degrees) - min(degrees) + 1) if degrees else 0
    n = quasi_iso_degree(current)
    guard = width + 3
    while n != math.inf:
        if guard == 0:
            raise AssertionError("cellular factorization failed to terminate")
        guard -= 1
        step = factor_step(current, n)
        retr = split_retractions(step.g)
        if retr is not None:
            mono, nxt = step.g, step.h
        else:
            smaps = structure_maps(step.g)
            mono = smaps.j1
            nxt = step.h.compose(smaps.p)
            retr = split_retractions(mono)
        quotient, _ = quotient_by_split_mono(mono, retr)
        stages.append(mono)
        retractions.append(retr)
        subquotients.append(quotient)
        spherical.append(n + 1)
        current = nxt
        n = quasi_iso_degree(current)
    return CellularFactorization(
        stages=tuple(stages),
        retractions=tuple(retractions),
        subquotients=tuple(subquotients),
        spherical_degrees=tuple(spherical),
        final=current,
    )


# ---------------------------------------------------------------------------
# Admissible short exact sequences of free complexes.


class AdmissibleSes:
    """Degreewise split short exact sequence with stored witnesses."""

    __slots__ = ("ses", "retractions", "sections")

    def __init__(self, mono: ChainMap, epi: ChainMap,
                 retractions: Optional[dict] = None, sections: Optional[dict] = None):
        self.ses = ComplexSes(mono, epi)
        if retractions is None:
            retractions = split_retractions(mono)
            if retractions is None:
                raise InvalidInputError("monomorphism is not degreewise split")
        if sections is None:
            sections = {}
            for n in epi.target.ranks:
                sol = solve(epi.at(n), Matrix.identity(epi.source.ring, epi.target.rank(n)))
                if sol is None:
                    raise InvalidInputError("epimorphism is not degreewise split")
                sections[n] = sol
        ring = mono.source.ring
        for n, retr in retractions.items():
            if retr * mono.at(n) != Matrix.identity(ring, mono.source.rank(n)):
                raise InvalidInputError("stored retraction fails")
        for n, sect in sections.items():
            if epi.at(n) * sect != Matrix.identity(ring, epi.target.rank(n)):
                raise InvalidInputError("stored section fails")
        self.retractions = retractions
        self.sections = sections

    @property
    def mono(self) -> ChainMap:
        return self.ses.sub

    @property
    def epi(self) -> ChainMap:
        return self.ses.quo

    @property
    def left(self) -> ChainComplex:
        return self.ses.left

    @property
    def middle(self) -> ChainComplex:
        return self.ses.middle

    @property
    def right(self) -> ChainComplex:
        return self.ses.right


def h0_additive(seq: AdmissibleSes) -> bool:
    """Exactness of 0 -> H0(left) -> H0(middle) -> H0(right) -> 0."""
    left = h0_presentation(seq.left)
    mid = h0_presentation(seq.middle)
    right = h0_presentation(seq.right)
    into = PresentedMap(left, mid, seq.mono.at(0))
    onto = PresentedMap(mid, right, seq.epi.at(0))
    return is_short_exact(into, onto)


def tau_maps_spherical_check(seq: AdmissibleSes, k: int, spherical: int) -> bool:
    """Truncating a split sequence of spherical complexes keeps it split
    and spherical.

    Applies both truncations at k to the sequence's maps, rebuilds the
    admissible sequence (which re-solves degreewise splittings), and
    re-tests sphericity of all six truncated complexes.
    """
    for mapper in (tau_ge_map, tau_le_map):
        mono_t = mapper(seq.mono, k)
        epi_t = mapper(seq.epi, k)
        try:
            truncated = AdmissibleSes(mono_t, epi_t)
        except InvalidInputError:
            return False
        for part in (truncated.left, truncated.middle, truncated.right):
            if not in_A_n(part, spherical):
                return False
    return True


# ---------------------------------------------------------------------------
# Presented-coordinate two-term complexes.


@dataclass(frozen=True)
class PresentedKoszul:
    """Two-term complex of presented modules with injective boundary.

    The degree-zero homology must be torsion.  Free-coordinate Koszul
    complexes embed via ``from_free``.
    """

    top: PresentedModule
    bottom: PresentedModule
    d: PresentedMap

    def __post_init__(self):
        if self.d.source != self.top or self.d.target != self.bottom:
            raise InvalidInputError("boundary map endpoints do not match")
        if not self.d.is_injective():
            raise InvalidInputError("boundary map is not injective")
        if self.h0().canonical_form().free_rank:
            raise InvalidInputError("degree-zero homology is not torsion")

    @classmethod
    def from_free(cls, complex_: ChainComplex) -> "PresentedKoszul":
        member = in_kos1(complex_)
        if not member:
            raise InvalidInputError("complex is not a free Koszul complex")
        ring = complex_.ring
        top = PresentedModule.free(ring, complex_.rank(1))
        bottom = PresentedModule.free(ring, complex_.rank(0))
        return cls(top, bottom, PresentedMap(top, bottom, complex_.d(1), check=False))

    def h0(self) -> PresentedModule:
        return self.d.cokernel_module()

    def is_acyclic(self) -> bool:
        return self.d.is_surjective()


@dataclass(frozen=True)
class PresentedKoszulMap:
    source: PresentedKoszul
    target: PresentedKoszul
    degree1: PresentedMap
    degree0: PresentedMap

    def __post_init__(self):
        if not self.target.d.compose(self.degree1).equals(self.degree0.compose(self.source.d)):
            raise InvalidInputError("components do not commute with the boundaries")


@dataclass(frozen=True)
class PresentedSes:
    """Degreewise short exact sequence of presented two-term complexes."""

    mono: PresentedKoszulMap
    epi: PresentedKoszulMap

    def __post_init__(self):
        if not is_short_exact(self.mono.degree1, self.epi.degree1):
            raise InvalidInputError("degree-1 row is not short exact")
        if not is_short_exact(self.mono.degree0, self.epi.degree0):
            raise InvalidInputError("degree-0 row is not short exact")

    @property
    def left(self) -> PresentedKoszul:
        return self.mono.source

    @property
    def middle(self) -> PresentedKoszul:
        return self.mono.target

    @property
    def right(self) -> PresentedKoszul:
        return self.epi.target


# ---------------------------------------------------------------------------
# Resolution by a free Koszul complex.


@dataclass(frozen=True)
class Resolution:
    """Free Koszul cover of a presented two-term complex.

    ``e0``/``e1`` are the degreewise surjections; ``kernel`` is the
    degreewise kernel with its basis inclusion into the cover, a free
    Koszul complex again, so the cover map is an admissible epi.
    """

    cover: ChainComplex
    e1: PresentedMap
    e0: PresentedMap
    kernel: ChainComplex
    kernel_inclusion: ChainMap


def resolve_in_kos1(target: PresentedKoszul) -> Resolution:
    """Cover a presented two-term complex by a free Koszul complex.

    Degree 0 is the free module on the generators; degree 1 is a basis
    of the preimage lattice of (relations + boundary image), i.e. the
    kernel of generators -> H0.  The degree-1 component of the cover map
    is the unique lift through the injective boundary, solved exactly.
    """
    ring = target.top.ring
    g0 = target.bottom.gens
    lattice = hstack([target.bottom.relations, target.d.matrix])
    basis = image_basis(lattice)
    cover = ChainComplex(ring, {1: basis.cols, 0: g0}, {1: basis})
    free0 = PresentedModule.free(ring, g0)
    free1 = PresentedModule.free(ring, basis.cols)
    e0 = PresentedMap(free0, target.bottom, Matrix.identity(ring, g0), check=False)
    stacked = solve(hstack([target.d.matrix, target.bottom.relations]), basis)
    if stacked is None:
        raise InvalidInputError("cover basis does not lift through the boundary")
    lift = stacked.take_rows(range(target.top.gens))
    e1 = PresentedMap(free1, target.top, lift, check=False)
    k0 = image_basis(target.bottom.relations)
    pre = kernel_basis(hstack([lift, target.top.relations]))
    k1_raw = pre.take_rows(range(basis.cols)) if pre.cols else Matrix.zeros(ring, basis.cols, 0)
    k1 = image_basis(k1_raw)
    kernel_diff = solve(k0, basis * k1)
    if kernel_diff is None:
        raise InvalidInputError("kernel is not closed under the boundary")
    kernel = ChainComplex(ring, {1: k1.cols, 0: k0.cols}, {1: kernel_diff})
    incl = ChainMap(kernel, cover, {1: k1, 0: k0})
    return Resolution(cover=cover, e1=e1, e0=e0, kernel=kernel, kernel_inclusion=incl)


# ---------------------------------------------------------------------------
# The canonical three-term decomposition of a presented two-term complex.


@dataclass(frozen=True)
class CanonicalTriple:
    """(acyclic part) -> X -> [0 -> H0 X], degreewise short exact."""

    sequence: PresentedSes

    @property
    def left(self) -> PresentedKoszul:
        return self.sequence.left

    @property
    def middle(self) -> PresentedKoszul:
        return self.sequence.middle

    @property
    def right(self) -> PresentedKoszul:
        return self.sequence.right


def e_functor(x: PresentedKoszul) -> CanonicalTriple:
    """Decompose X as [X1 = X1] >--> X -->> [0 -> H0 X]."""
    ring = x.top.ring
    left = PresentedKoszul(x.top, x.top, PresentedMap.identity(x.top))
    h0_module = x.h0()
    zero_mod = PresentedModule.free(ring, 0)
    right = PresentedKoszul(zero_mod, h0_module, PresentedMap.zero(zero_mod, h0_module))
    mono = PresentedKoszulMap(left, x, PresentedMap.identity(x.top), x.d)
    epi = PresentedKoszulMap(
        x, right,
        PresentedMap.zero(x.top, zero_mod),
        PresentedMap(x.bottom, h0_module, Matrix.identity(ring, x.bottom.gens), check=False))
    return CanonicalTriple(PresentedSes(mono, epi))


# ---------------------------------------------------------------------------
# The acyclic retraction on Koszul complexes.


@dataclass(frozen=True)
class AcyclicRetract:
    """[X1 = X1] with the canonical comparison (id, d) into the input.

    The comparison is a chain isomorphism exactly when the input is
    acyclic (square unimodular boundary).
    """

    complex: ChainComplex
    comparison: ChainMap
    comparison_is_iso: bool


def retraction_q(complex_: ChainComplex) -> AcyclicRetract:
    if not in_kos1(complex_):
        raise InvalidInputError("input is not a free Koszul complex")
    ring = complex_.ring
    r1 = complex_.rank(1)
    retract = ChainComplex(ring, {1: r1, 0: r1}, {1: Matrix.identity(ring, r1)})
    comparison = ChainMap(retract, complex_, {1: Matrix.identity(ring, r1), 0: complex_.d(1)})
    return AcyclicRetract(retract, comparison, comparison.is_chain_iso())
