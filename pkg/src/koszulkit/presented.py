"""Finitely presented modules, maps between them, and diagram checks.

A presented module is R^gens modulo the column span of a relations
matrix; a map is a matrix on generators that carries relations into
relations.  Everything reduces to exact solving against column spans:
kernels and images come out as presented modules with explicit
inclusion maps, and short-exactness of a pair of maps is decidable.

The two diagram-level checks at the bottom verify, on concrete module
data, that a square in a morphism of short exact sequences is a pushout
precisely when the last vertical map is an isomorphism, and that the
two induced sequences of a nine-term diagram are short exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DimensionError, InvalidInputError
from .fgmodules import FgModule, cokernel
from .matrices import Matrix, hstack, kernel_basis, solve, vstack
from .rings import Ring


@dataclass(frozen=True)
class PresentedModule:
    """R^gens modulo the column span of ``relations`` (gens x k)."""

    ring: Ring
    gens: int
    relations: Matrix

    def __post_init__(self):
        if self.relations.rows != self.gens or self.relations.ring != self.ring:
            raise DimensionError("relations matrix must have one row per generator")

    @classmethod
    def free(cls, ring: Ring, n: int) -> "PresentedModule":
        return cls(ring, n, Matrix.zeros(ring, n, 0))

    @classmethod
    def cyclic(cls, ring: Ring, modulus) -> "PresentedModule":
        if ring.is_zero(modulus):
            return cls.free(ring, 1)
        return cls(ring, 1, Matrix(ring, [[modulus]]))

    def canonical_form(self) -> FgModule:
        return cokernel(self.relations)

    def is_zero_module(self) -> bool:
        return self.canonical_form().is_zero()

    def contains(self, vectors: Matrix) -> bool:
        """Whether each column is zero in the module (lies in the relations span)."""
        return solve(self.relations, vectors) is not None


def direct_sum_modules(parts: Sequence[PresentedModule]) -> PresentedModule:
    ring = parts[0].ring
    gens = sum(p.gens for p in parts)
    rels = []
    offset = 0
    for p in parts:
        top = Matrix.zeros(ring, offset, p.relations.cols)
        bottom = Matrix.zeros(ring, gens - offset - p.gens, p.relations.cols)
        rels.append(vstack([top, p.relations, bottom]))
        offset += p.gens
    return PresentedModule(ring, gens, hstack(rels) if rels else Matrix.zeros(ring, gens, 0))


class PresentedMap:
    """Module map given by its matrix on generators."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: PresentedModule, target: PresentedModule, matrix: Matrix, check: bool = True):
        if matrix.rows != target.gens or matrix.cols != source.gens:
            raise DimensionError("map matrix has wrong shape")
        if source.ring != target.ring or matrix.ring != source.ring:
            raise InvalidInputError("map across different rings")
        if check and source.relations.cols and not target.contains(matrix * source.relations):
            raise InvalidInputError("matrix does not carry relations into relations")
        self.source = source
        self.target = target
        self.matrix = matrix

    @classmethod
    def identity(cls, module: PresentedModule) -> "PresentedMap":
        return cls(module, module, Matrix.identity(module.ring, module.gens), check=False)

    @classmethod
    def zero(cls, source: PresentedModule, target: PresentedModule) -> "PresentedMap":
        return cls(source, target, Matrix.zeros(source.ring, target.gens, source.gens), check=False)

    def compose(self, other: "PresentedMap") -> "PresentedMap":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise DimensionError("maps do not compose")
        return PresentedMap(other.source, self.target, self.matrix * other.matrix, check=False)

    def add(self, other: "PresentedMap") -> "PresentedMap":
        return PresentedMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def equals(self, other: "PresentedMap") -> bool:
        """Equality as module maps: the difference vanishes on generators."""
        if self.source.gens != other.source.gens or self.target.gens != other.target.gens:
            return False
        return self.target.contains(self.matrix - other.matrix)

    def is_zero_map(self) -> bool:
        return self.target.contains(self.matrix)

    def preimage_of_relations(self) -> Matrix:
        """Columns generating {v : M v lies in the relations span of the target}."""
        stacked = hstack([self.matrix, self.target.relations])
        ker = kernel_basis(stacked)
        return ker.take_rows(range(self.source.gens)) if ker.cols else Matrix.zeros(self.matrix.ring, self.source.gens, 0)

    def kernel(self) -> tuple[PresentedModule, "PresentedMap"]:
        gens_mat = self.preimage_of_relations()
        inner = PresentedMap(PresentedModule.free(self.source.ring, gens_mat.cols), self.source,
                             gens_mat, check=False)
        rels = inner.preimage_of_relations()
        module = PresentedModule(self.source.ring, gens_mat.cols, rels)
        return module, PresentedMap(module, self.source, gens_mat, check=False)

    def image(self) -> tuple[PresentedModule, "PresentedMap", "PresentedMap"]:
        """Return (image, inclusion into target, epi from source)."""
        rels = self.preimage_of_relations()
        module = PresentedModule(self.source.ring, self.source.gens, rels)
        incl = PresentedMap(module, self.target, self.matrix, check=False)
        epi = PresentedMap(self.source, module, Matrix.identity(self.source.ring, self.source.gens), check=False)
        return module, incl, epi

    def cokernel_module(self) -> PresentedModule:
        return PresentedModule(self.target.ring, self.target.gens,
                               hstack([self.target.relations, self.matrix]))

    def is_injective(self) -> bool:
        return self.source.contains(self.preimage_of_relations())

    def is_surjective(self) -> bool:
        return self.cokernel_module().is_zero_module()

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()


def pushout(left: PresentedMap, right: PresentedMap) -> tuple[PresentedModule, PresentedMap, PresentedMap]:
    """Pushout of a span left: X -> A, right: X -> B.

    Returns (P, leg from A, leg from B); P is the cokernel of the
    antidiagonal map X -> A (+) B.
    """
    if left.source.gens != right.source.gens or not left.source.relations == right.source.relations:
        raise InvalidInputError("span legs must share their source")
    ring = left.source.ring
    ambient = direct_sum_modules([left.target, right.target])
    anti = vstack([left.matrix, -right.matrix])
    obj = PresentedModule(ring, ambient.gens, hstack([ambient.relations, anti]))
    ga, gb = left.target.gens, right.target.gens
    leg_a = PresentedMap(left.target, obj,
                         vstack([Matrix.identity(ring, ga), Matrix.zeros(ring, gb, ga)]), check=False)
    leg_b = PresentedMap(right.target, obj,
                         vstack([Matrix.zeros(ring, ga, gb), Matrix.identity(ring, gb)]), check=False)
    return obj, leg_a, leg_b


def pushout_of_span(first: Matrix, second: Matrix) -> tuple[PresentedModule, PresentedMap, PresentedMap]:
    """Pushout of two maps of free modules sharing their source dimension."""
    if first.cols != second.cols:
        raise DimensionError("span legs must share their source dimension")
    ring = first.ring
    src = PresentedModule.free(ring, first.cols)
    f = PresentedMap(src, PresentedModule.free(ring, first.rows), first, check=False)
    a = PresentedMap(src, PresentedModule.free(ring, second.rows), second, check=False)
    return pushout(f, a)


def pullback(left: PresentedMap, right: PresentedMap) -> tuple[PresentedModule, PresentedMap, PresentedMap, PresentedMap]:
    """Pullback of a cospan left: A -> C, right: B -> C.

    Returns (Q, inclusion into A (+) B, leg to A, leg to B); Q is the
    kernel of the difference map out of the direct sum.
    """
    if left.target.gens != right.target.gens or not left.target.relations == right.target.relations:
        raise InvalidInputError("cospan legs must share their target")
    ring = left.source.ring
    ambient = direct_sum_modules([left.source, right.source])
    diff = PresentedMap(ambient, left.target, hstack([left.matrix, -right.matrix]), check=False)
    module, incl = diff.kernel()
    ga = left.source.gens
    leg_a = PresentedMap(module, left.source, incl.matrix.take_rows(range(ga)), check=False)
    leg_b = PresentedMap(module, right.source, incl.matrix.take_rows(range(ga, ambient.gens)), check=False)
    return module, incl, leg_a, leg_b


def factor_through_pullback(module: PresentedModule, incl: PresentedMap, stacked: PresentedMap) -> Optional[PresentedMap]:
    """Factor a map into the ambient direct sum through the pullback."""
    ambient = incl.target
    sol = solve(hstack([incl.matrix, ambient.relations]), stacked.matrix)
    if sol is None:
        return None
    return PresentedMap(stacked.source, module, sol.take_rows(range(module.gens)), check=False)


def is_short_exact(mono: PresentedMap, epi: PresentedMap) -> bool:
    """Whether 0 -> A -> B -> C -> 0 given by the two maps is exact."""
    if mono.target.gens != epi.source.gens or not mono.target.relations == epi.source.relations:
        raise InvalidInputError("maps are not consecutive")
    if not epi.compose(mono).is_zero_map():
        return False
    if not mono.is_injective():
        return False
    if not epi.is_surjective():
        return False
    kernel_gens = epi.preimage_of_relations()
    return solve(hstack([mono.matrix, mono.target.relations]), kernel_gens) is not None


@dataclass(frozen=True)
class SesMorphism:
    """A morphism of short exact sequences of presented modules.

    Rows ``(top_mono, top_epi)`` and ``(bottom_mono, bottom_epi)`` with
    verticals ``left``, ``middle``, ``right`` making both squares
    commute.
    """

    top_mono: PresentedMap
    top_epi: PresentedMap
    bottom_mono: PresentedMap
    bottom_epi: PresentedMap
    left: PresentedMap
    middle: PresentedMap
    right: PresentedMap

    def validate(self):
        if not is_short_exact(self.top_mono, self.top_epi):
            raise InvalidInputError("top row is not short exact")
        if not is_short_exact(self.bottom_mono, self.bottom_epi):
            raise InvalidInputError("bottom row is not short exact")
        if not self.middle.compose(self.top_mono).equals(self.bottom_mono.compose(self.left)):
            raise InvalidInputError("first square does not commute")
        if not self.right.compose(self.top_epi).equals(self.bottom_epi.compose(self.middle)):
            raise InvalidInputError("second square does not commute")


def cobase_change_check(diagram: SesMorphism) -> bool:
    """Compare the two sides of the pushout criterion on a morphism of SESs.

    Computes independently whether the first square is a pushout (the
    induced map from the pushout to the bottom middle is an iso) and
    whether the right vertical is an iso, and reports their agreement.
    A disagreement on valid input is a library defect, not a data error.
    """
    diagram.validate()
    obj, _, _ = pushout(diagram.left, diagram.top_mono)
    comparison = PresentedMap(
        obj, diagram.bottom_mono.target,
        hstack([diagram.bottom_mono.matrix, diagram.middle.matrix]), check=False)
    return comparison.is_iso() == diagram.right.is_iso()


@dataclass(frozen=True)
class ThreeByThree:
    """Nine-term diagram with short exact rows and columns.

    ``rows[i]`` is the (mono, epi) pair of row i (top to bottom) and
    ``cols[j]`` of column j (left to right); all four inner squares must
    commute.
    """

    rows: tuple
    cols: tuple

    def validate(self):
        for mono, epi in list(self.rows) + list(self.cols):
            if not is_short_exact(mono, epi):
                raise InvalidInputError("a row or column is not short exact")
        (ix, px), (iy, py), (iz, pz) = self.rows
        (f, g), (fp, gp), (fpp, gpp) = self.cols
        checks = [
            (fp.compose(ix), iy.compose(f)),
            (fpp.compose(px), py.compose(fp)),
            (gp.compose(iy), iz.compose(g)),
            (gpp.compose(py), pz.compose(gp)),
        ]
        for lhs, rhs in checks:
            if not lhs.equals(rhs):
                raise InvalidInputError("inner square does not commute")


def nine_term_sequences(grid: ThreeByThree) -> tuple[bool, bool]:
    """Exactness verdicts for the two induced sequences of the diagram.

    First: (pushout of the top-left span) -> middle -> bottom-right;
    second: top-left -> middle -> (pullback of the bottom-right cospan).
    """
    grid.validate()
    (ix, px), (iy, py), (iz, pz) = grid.rows
    (f, g), (fp, gp), (fpp, gpp) = grid.cols

    obj, _, _ = pushout(f, ix)
    mono1 = PresentedMap(obj, iy.target, hstack([iy.matrix, fp.matrix]), check=False)
    epi1 = pz.compose(gp)
    first = is_short_exact(mono1, epi1)

    module, incl, _, _ = pullback(pz, gpp)
    stacked = PresentedMap(
        gp.source, direct_sum_modules([pz.source, gpp.source]),
        vstack([gp.matrix, py.matrix]), check=False)
    into = factor_through_pullback(module, incl, stacked)
    second = False
    if into is not None:
        mono2 = iy.compose(f)
        second = is_short_exact(mono2, into)
    return first, second
