"""Seeded random generators for every object class the harness exercises.

Generation is deterministic given (params, seed): each trial derives its
own ``random.Random`` from the pair, so reports are reproducible byte
for byte.  Generators only produce valid instances -- complexes are
built from blocks whose validity is structural (direct sums conjugated
by unimodular changes of basis, extension twists whose square vanishes
identically, shear automorphisms assembled from genuine module
homomorphisms) -- so invalid-input error paths are exercised by curated
fixtures instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Optional

from .complexes import (
    ChainComplex,
    ChainMap,
    direct_sum,
    two_term,
)
from .fgmodules import FgModule
from .koszul import AdmissibleSes, PresentedKoszul
from .matrices import Matrix, block, block_diag, hstack, inverse, vstack
from .presented import PresentedMap, PresentedModule, SesMorphism, ThreeByThree, direct_sum_modules
from .rings import Ring, ZZ


@dataclass(frozen=True)
class GenParams:
    """Bounds for instance generation; all generation is pure in (params, seed)."""

    ring: Ring = ZZ
    seed: int = 0
    max_rank: int = 3
    max_entry: int = 9  # magnitude bound over Z, degree bound over F_p[x]
    support_width: int = 3
    trials: int = 100

    def with_seed(self, seed: int) -> "GenParams":
        return replace(self, seed=seed)


def trial_rng(params: GenParams, trial: int) -> random.Random:
    return random.Random(f"{params.ring.token}/{params.seed}/{trial}")


# ---------------------------------------------------------------------------
# Elements and matrices.


def rand_element(rng: random.Random, ring: Ring, bound: int, nonzero: bool = False):
    if ring.token == "Z":
        while True:
            value = rng.randint(-bound, bound)
            if value or not nonzero:
                return value
    degree_bound = max(1, min(bound, 3))
    while True:
        degree = rng.randint(0, degree_bound)
        coeffs = [rng.randrange(ring.p) for _ in range(degree + 1)]
        value = ring.poly(coeffs)
        if value or not nonzero:
            return value


def rand_unit(rng: random.Random, ring: Ring):
    if ring.token == "Z":
        return rng.choice((1, -1))
    return (rng.randrange(1, ring.p),)


def rand_nonunit(rng: random.Random, ring: Ring):
    """Nonzero non-unit, for torsion block divisors."""
    if ring.token == "Z":
        return rng.choice((1, -1)) * rng.randint(2, 9)
    degree = rng.randint(1, 2)
    coeffs = [rng.randrange(ring.p) for _ in range(degree)] + [rng.randrange(1, ring.p)]
    return ring.poly(coeffs)


def rand_matrix(rng: random.Random, ring: Ring, rows: int, cols: int, bound: int) -> Matrix:
    return Matrix._raw(ring, rows, cols,
                       [[rand_element(rng, ring, bound) for _ in range(cols)] for _ in range(rows)])


def rand_unimodular(rng: random.Random, ring: Ring, n: int, steps: Optional[int] = None):
    """Random product of elementary matrices, returned with its inverse."""
    fwd = [list(row) for row in Matrix.identity(ring, n).entries]
    bwd = [list(row) for row in Matrix.identity(ring, n).entries]
    if steps is None:
        steps = 2 * n + 2
    for _ in range(steps if n > 1 else 0):
        op = rng.randrange(3)
        i, j = rng.sample(range(n), 2)
        if op == 0:
            c = rand_element(rng, ring, 2, nonzero=True)
            # fwd <- E fwd with E = I + c e_ij ; bwd <- bwd E^{-1}
            fwd[i] = [ring.add(x, ring.mul(c, y)) for x, y in zip(fwd[i], fwd[j])]
            for row in bwd:
                row[j] = ring.sub(row[j], ring.mul(c, row[i]))
        elif op == 1:
            fwd[i], fwd[j] = fwd[j], fwd[i]
            for row in bwd:
                row[i], row[j] = row[j], row[i]
        else:
            u = rand_unit(rng, ring)
            uinv = ring.unit_inverse(u)
            fwd[i] = [ring.mul(u, x) for x in fwd[i]]
            for row in bwd:
                row[i] = ring.mul(uinv, row[i])
    if n == 1 and rng.randrange(2):
        u = rand_unit(rng, ring)
        fwd[0][0] = ring.mul(u, fwd[0][0])
        bwd[0][0] = ring.mul(ring.unit_inverse(u), bwd[0][0])
    return Matrix._raw(ring, n, n, fwd), Matrix._raw(ring, n, n, bwd)


def gen_matrix(params: GenParams, trial: int, max_dim: int = 6, bound: Optional[int] = None) -> Matrix:
    rng = trial_rng(params, trial)
    rows, cols = rng.randint(0, max_dim), rng.randint(0, max_dim)
    return rand_matrix(rng, params.ring, rows, cols, bound if bound is not None else params.max_entry)


# ---------------------------------------------------------------------------
# Complex scrambling.


def scramble_complex(rng: random.Random, complex_: ChainComplex):
    """Conjugate by degreewise unimodular changes of basis.

    Returns the twisted complex with the forward and backward chain
    isomorphisms; both degrees move compatibly, so the result is a
    chain-isomorphic presentation with scrambled coordinates.
    """
    ring = complex_.ring
    fwd_mats = {}
    bwd_mats = {}
    for n in complex_.ranks:
        fwd_mats[n], bwd_mats[n] = rand_unimodular(rng, ring, complex_.rank(n))
    diffs = {}
    for n, mat in complex_.diffs.items():
        left = fwd_mats.get(n - 1)
        right = bwd_mats.get(n)
        out = mat
        if left is not None:
            out = left * out
        if right is not None:
            out = out * right
        diffs[n] = out
    twisted = ChainComplex(ring, dict(complex_.ranks), diffs)
    fwd = ChainMap(complex_, twisted, fwd_mats)
    bwd = ChainMap(twisted, complex_, bwd_mats)
    return twisted, fwd, bwd


# ---------------------------------------------------------------------------
# Koszul complexes and torsion-homology complexes.


@dataclass(frozen=True)
class KoszulSample:
    complex: ChainComplex
    block_divisors: tuple
    expected_h0: FgModule


def gen_koszul(params: GenParams, trial: int, acyclic: bool = False,
               rng: Optional[random.Random] = None) -> KoszulSample:
    """Direct sum of [R -> R] blocks conjugated by unimodular changes of basis."""
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    r = rng.randint(1, params.max_rank)
    divisors = []
    for _ in range(r):
        if acyclic or rng.random() < 0.35:
            divisors.append(rand_unit(rng, ring))
        else:
            divisors.append(rand_nonunit(rng, ring))
    p0, _ = rand_unimodular(rng, ring, r)
    _, p1inv = rand_unimodular(rng, ring, r)
    boundary = p0 * Matrix.diagonal(ring, divisors) * p1inv
    expected = FgModule.make(ring, 0, [d for d in divisors if not ring.is_unit(d)])
    return KoszulSample(two_term(boundary), tuple(divisors), expected)


@dataclass(frozen=True)
class AObjectSample:
    complex: ChainComplex
    expected_homology: dict


def gen_a_object(params: GenParams, trial: int, spherical: Optional[int] = None,
                 window_bottom: int = 0, rng: Optional[random.Random] = None,
                 acyclic: bool = False) -> AObjectSample:
    """Shifted Koszul blocks over a support window, then scrambled.

    Every block is a two-term [R -> aR] with a nonzero divisor, so the
    homology is torsion everywhere; a ``spherical`` degree restricts the
    non-unit blocks to sit there.
    """
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    width = max(2, rng.randint(2, max(2, params.support_width)))
    top_base = window_bottom + width - 2
    count = rng.randint(1, params.max_rank + 1)
    blocks = []
    for _ in range(count):
        base = rng.randint(window_bottom, top_base)
        if acyclic or (spherical is not None and base != spherical) or rng.random() < 0.3:
            div = rand_unit(rng, ring)
        else:
            div = rand_nonunit(rng, ring)
        blocks.append((base, div))
    if spherical is not None and not acyclic and not any(
            base == spherical and not ring.is_unit(div) for base, div in blocks):
        if window_bottom <= spherical <= top_base:
            blocks.append((spherical, rand_nonunit(rng, ring)))
    parts = [
        ChainComplex(ring, {base + 1: 1, base: 1}, {base + 1: Matrix(ring, [[div]])})
        for base, div in blocks
    ]
    total = direct_sum(*parts).complex
    twisted, _, _ = scramble_complex(rng, total)
    expected = {}
    for base, div in blocks:
        if not ring.is_unit(div):
            expected.setdefault(base, []).append(div)
    table = {n: FgModule.make(ring, 0, expected.get(n, [])) for n in twisted.degree_range()}
    return AObjectSample(twisted, table)


def gen_chain_map(rng: random.Random, source: ChainComplex, target: ChainComplex,
                  bound: int = 2, terms: int = 2) -> ChainMap:
    """Sum of homotopy-shaped maps dH + Hd, plus a scalar multiple of the
    identity when source and target coincide."""
    ring = source.ring
    out = ChainMap.zero(source, target)
    for _ in range(terms):
        h = {n: rand_matrix(rng, ring, target.rank(n + 1), source.rank(n), bound)
             for n in source.ranks if target.rank(n + 1)}
        comps = {}
        for n in set(source.ranks) | set(target.ranks):
            piece = Matrix.zeros(ring, target.rank(n), source.rank(n))
            if n in h:
                piece = piece + target.d(n + 1) * h[n]
            if n - 1 in h:
                piece = piece + h[n - 1] * source.d(n)
            comps[n] = piece
        out = out + ChainMap(source, target, comps)
    if source == target and rng.random() < 0.5:
        scalar = rand_element(rng, ring, bound, nonzero=True)
        ident = ChainMap.identity(source)
        scaled = ChainMap(source, target, {n: ident.at(n).scale(scalar) for n in source.ranks})
        out = out + scaled
    return out


# ---------------------------------------------------------------------------
# Admissible sequences of Koszul complexes.


@dataclass(frozen=True)
class SesSample:
    sequence: AdmissibleSes
    left: ChainComplex
    right: ChainComplex


def gen_admissible_ses(params: GenParams, trial: int,
                       left_acyclic: Optional[bool] = None,
                       right_acyclic: Optional[bool] = None,
                       rng: Optional[random.Random] = None) -> SesSample:
    """Extension-twisted direct sum of two Koszul complexes, scrambled.

    The middle complex carries the block boundary [[dX, e], [0, dW]]; an
    upper shear by a chain map W -> X varies the recorded splitting
    before the coordinate scramble.
    """
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    if left_acyclic is None:
        left_acyclic = rng.random() < 0.5
    if right_acyclic is None:
        right_acyclic = rng.random() < 0.5
    left = gen_koszul(params, trial, acyclic=left_acyclic, rng=rng).complex
    right = gen_koszul(params, trial, acyclic=right_acyclic, rng=rng).complex
    lx, l0 = left.rank(1), left.rank(0)
    rx, r0 = right.rank(1), right.rank(0)
    mixing = rand_matrix(rng, ring, l0, rx, 2)
    boundary = block(ring, [[left.d(1), mixing], [None, right.d(1)]], [l0, r0], [lx, rx])
    middle = ChainComplex(ring, {1: lx + rx, 0: l0 + r0}, {1: boundary})
    # shear by a chain map right -> left to vary the stored witnesses
    shear = gen_chain_map(rng, right, left, bound=1, terms=1)
    mono_comps = {}
    retr_comps = {}
    epi_comps = {}
    sect_comps = {}
    for n, (a, b) in ((1, (lx, rx)), (0, (l0, r0))):
        ident_a = Matrix.identity(ring, a)
        ident_b = Matrix.identity(ring, b)
        s = shear.at(n)
        mono_comps[n] = vstack([ident_a, Matrix.zeros(ring, b, a)])
        retr_comps[n] = hstack([ident_a, -s])
        epi_comps[n] = hstack([Matrix.zeros(ring, b, a), ident_b])
        sect_comps[n] = vstack([s, ident_b])
    twisted, fwd, bwd = scramble_complex(rng, middle)
    mono = ChainMap(left, twisted, {n: fwd.at(n) * m for n, m in mono_comps.items()})
    epi = ChainMap(twisted, right, {n: m * bwd.at(n) for n, m in epi_comps.items()})
    retractions = {n: m * bwd.at(n) for n, m in retr_comps.items()}
    sections = {n: fwd.at(n) * m for n, m in sect_comps.items()}
    seq = AdmissibleSes(mono, epi, retractions, sections)
    return SesSample(seq, left, right)


def gen_admissible_mono(params: GenParams, trial: int,
                        rng: Optional[random.Random] = None) -> SesSample:
    """Split mono from an acyclic Koszul complex, with recorded splitting."""
    return gen_admissible_ses(params, trial, left_acyclic=True, rng=rng)


def gen_ses_of_complexes(params: GenParams, trial: int, acyclic_side: str = "left",
                         spherical: Optional[int] = None,
                         rng: Optional[random.Random] = None) -> SesSample:
    """Extension-twisted SES of bounded torsion-homology complexes.

    The twist block is a commutator dX.M - M.dZ, so the square of the
    middle boundary vanishes identically; one side can be forced acyclic
    (for the kernel/image sequence hypotheses) or both ends spherical.
    """
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    left = gen_a_object(params, trial, spherical=spherical, rng=rng,
                        acyclic=(acyclic_side == "left")).complex
    right = gen_a_object(params, trial, spherical=spherical, rng=rng,
                         acyclic=(acyclic_side == "right")).complex
    mixer = {n: rand_matrix(rng, ring, left.rank(n), right.rank(n), 1) for n in right.ranks if left.rank(n)}
    degrees = set(left.ranks) | set(right.ranks)
    ranks = {n: left.rank(n) + right.rank(n) for n in degrees}
    diffs = {}
    for n in degrees | {n + 1 for n in degrees}:
        rows = [left.rank(n - 1), right.rank(n - 1)]
        cols = [left.rank(n), right.rank(n)]
        if sum(rows) == 0 or sum(cols) == 0:
            continue
        m_here = mixer.get(n, Matrix.zeros(ring, left.rank(n), right.rank(n)))
        m_prev = mixer.get(n - 1, Matrix.zeros(ring, left.rank(n - 1), right.rank(n - 1)))
        twist = left.d(n) * m_here - m_prev * right.d(n)
        diffs[n] = block(ring, [[left.d(n), twist], [None, right.d(n)]], rows, cols)
    middle = ChainComplex(ring, ranks, diffs)
    mono_comps = {}
    epi_comps = {}
    for n in degrees:
        a, b = left.rank(n), right.rank(n)
        mono_comps[n] = vstack([Matrix.identity(ring, a), Matrix.zeros(ring, b, a)])
        epi_comps[n] = hstack([Matrix.zeros(ring, b, a), Matrix.identity(ring, b)])
    twisted, fwd, bwd = scramble_complex(rng, middle)
    mono = ChainMap(left, twisted, {n: fwd.at(n) * m for n, m in mono_comps.items()})
    epi = ChainMap(twisted, right, {n: m * bwd.at(n) for n, m in epi_comps.items()})
    return SesSample(AdmissibleSes(mono, epi), left, right)


@dataclass(frozen=True)
class QuasiIsoPair:
    map: ChainMap


def gen_quasi_iso_pair(params: GenParams, trial: int,
                       rng: Optional[random.Random] = None) -> QuasiIsoPair:
    """Quasi-isomorphism of Koszul complexes: pad with a twisted acyclic
    summand, then scramble both sides."""
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    base = gen_koszul(params, trial, rng=rng).complex
    pad = gen_koszul(params, trial, acyclic=True, rng=rng).complex
    bx, b0 = base.rank(1), base.rank(0)
    px, p0 = pad.rank(1), pad.rank(0)
    mixing = rand_matrix(rng, ring, b0, px, 2)
    boundary = block(ring, [[base.d(1), mixing], [None, pad.d(1)]], [b0, p0], [bx, px])
    padded = ChainComplex(ring, {1: bx + px, 0: b0 + p0}, {1: boundary})
    incl = ChainMap(base, padded, {
        1: vstack([Matrix.identity(ring, bx), Matrix.zeros(ring, px, bx)]),
        0: vstack([Matrix.identity(ring, b0), Matrix.zeros(ring, p0, b0)]),
    })
    source_twist, _, src_bwd = scramble_complex(rng, base)
    target_twist, tgt_fwd, _ = scramble_complex(rng, padded)
    return QuasiIsoPair(tgt_fwd.compose(incl).compose(src_bwd))


# ---------------------------------------------------------------------------
# Presented two-term complexes (entries in arbitrary f.g. modules).


@dataclass(frozen=True)
class CObjectSample:
    object: PresentedKoszul
    expected_h0: FgModule


def _change_basis(module: PresentedModule, p: Matrix) -> PresentedModule:
    return PresentedModule(module.ring, module.gens, p * module.relations)


def _inflate(rng: random.Random, module: PresentedModule, maps_in: list, maps_out: list):
    """Add a redundant generator equal to a random combination of the others.

    ``maps_in`` are matrices INTO the module (gain a row), ``maps_out``
    matrices OUT of it (gain a column: the image of the new generator).
    """
    ring = module.ring
    combo = rand_matrix(rng, ring, module.gens, 1, 1)
    rels = module.relations
    new_rels = hstack([
        vstack([rels, Matrix.zeros(ring, 1, rels.cols)]),
        vstack([combo, Matrix(ring, [[ring.neg(ring.one)]])]),
    ])
    grown = PresentedModule(ring, module.gens + 1, new_rels)
    maps_in = [vstack([m, Matrix.zeros(ring, 1, m.cols)]) for m in maps_in]
    maps_out = [hstack([m, m * combo]) for m in maps_out]
    return grown, maps_in, maps_out


def gen_c_object(params: GenParams, trial: int,
                 rng: Optional[random.Random] = None) -> CObjectSample:
    """Two-term complex of presented modules with injective boundary.

    Free blocks carry a nonsingular square boundary; torsion blocks are
    R/(m) -> R/(mk) acting by k (injective, cokernel R/(k)).  The
    presentation is then inflated with redundant generators and both
    degrees change basis, so nothing stays in block form.
    """
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    free_rank = rng.randint(0, max(1, params.max_rank - 1))
    torsion_count = rng.randint(0 if free_rank else 1, 2)
    expected = []
    if free_rank:
        divisors = [rand_element(rng, ring, params.max_entry, nonzero=True) for _ in range(free_rank)]
        p0, _ = rand_unimodular(rng, ring, free_rank)
        _, p1inv = rand_unimodular(rng, ring, free_rank)
        free_boundary = p0 * Matrix.diagonal(ring, divisors) * p1inv
        expected.extend(divisors)
    else:
        free_boundary = Matrix.zeros(ring, 0, 0)
    top_parts = [PresentedModule.free(ring, free_rank)]
    bottom_parts = [PresentedModule.free(ring, free_rank)]
    torsion_maps = []
    for _ in range(torsion_count):
        m = rand_nonunit(rng, ring)
        k = rand_element(rng, ring, 3, nonzero=True)
        top_parts.append(PresentedModule.cyclic(ring, m))
        bottom_parts.append(PresentedModule.cyclic(ring, ring.mul(m, k)))
        torsion_maps.append(k)
        expected.append(k)
    top = direct_sum_modules(top_parts)
    bottom = direct_sum_modules(bottom_parts)
    boundary = block_diag(ring, [free_boundary, Matrix.diagonal(ring, torsion_maps)])
    for _ in range(rng.randint(0, 2)):
        top, maps_in, maps_out = _inflate(rng, top, [], [boundary])
        boundary = maps_out[0]
    for _ in range(rng.randint(0, 2)):
        bottom, maps_in, _ = _inflate(rng, bottom, [boundary], [])
        boundary = maps_in[0]
    ptop, ptop_inv = rand_unimodular(rng, ring, top.gens)
    pbot, _ = rand_unimodular(rng, ring, bottom.gens)
    top = _change_basis(top, ptop)
    bottom = _change_basis(bottom, pbot)
    boundary = pbot * boundary * ptop_inv
    obj = PresentedKoszul(top, bottom, PresentedMap(top, bottom, boundary))
    return CObjectSample(obj, FgModule.make(ring, 0, expected))


# ---------------------------------------------------------------------------
# Idempotents on acyclic Koszul complexes.


def gen_idempotent(params: GenParams, trial: int,
                   rng: Optional[random.Random] = None):
    """Conjugated coordinate projection on a sum of two acyclic complexes."""
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    first = gen_koszul(params, trial, acyclic=True, rng=rng).complex
    second = gen_koszul(params, trial, acyclic=True, rng=rng).complex
    total = direct_sum(first, second)
    projector = total.inclusions[0].compose(total.projections[0])
    boundary = total.complex.d(1)
    t1, _ = rand_unimodular(rng, ring, total.complex.rank(1))
    t0 = boundary * t1 * inverse(boundary)
    conj = ChainMap(total.complex, total.complex, {1: t1, 0: t0})
    endo = conj.compose(projector).compose(conj.inverse())
    return total.complex, endo


# ---------------------------------------------------------------------------
# Module-level diagrams from cyclic atoms.


def _atom_hom_scalar(ring: Ring, target_modulus, source_modulus):
    """Generator of Hom(R/(source), R/(target)) as a multiplier, or None."""
    if ring.is_zero(target_modulus):
        if ring.is_zero(source_modulus):
            return ring.one
        return None
    if ring.is_zero(source_modulus):
        return ring.one
    g = ring.gcd(target_modulus, source_modulus)
    return ring.div_exact(target_modulus, g)


def _atoms_module(ring: Ring, moduli) -> PresentedModule:
    return direct_sum_modules([PresentedModule.cyclic(ring, m) for m in moduli]) \
        if moduli else PresentedModule.free(ring, 0)


def _rand_atom_hom(rng: random.Random, ring: Ring, targets, sources) -> Matrix:
    rows = []
    for mt in targets:
        row = []
        for ms in sources:
            gen_scalar = _atom_hom_scalar(ring, mt, ms)
            if gen_scalar is None or rng.random() < 0.4:
                row.append(ring.zero)
            else:
                row.append(ring.mul(gen_scalar, rand_element(rng, ring, 2)))
        rows.append(row)
    return Matrix._raw(ring, len(targets), len(sources), rows)


def _shear_auto(rng: random.Random, ring: Ring, moduli):
    """Automorphism of a sum of cyclic atoms: unit scalings and one shear."""
    n = len(moduli)
    fwd = Matrix.diagonal(ring, [rand_unit(rng, ring) for _ in range(n)])
    bwd = Matrix.diagonal(ring, [ring.unit_inverse(fwd.entries[i][i]) for i in range(n)])
    if n > 1:
        i, j = rng.sample(range(n), 2)
        scalar = _atom_hom_scalar(ring, moduli[i], moduli[j])
        if scalar is not None:
            c = ring.mul(scalar, rand_element(rng, ring, 2))
            shear = [[ring.one if a == b else ring.zero for b in range(n)] for a in range(n)]
            unshear = [row[:] for row in shear]
            shear[i][j] = c
            unshear[i][j] = ring.neg(c)
            fwd = Matrix._raw(ring, n, n, shear) * fwd
            bwd = bwd * Matrix._raw(ring, n, n, unshear)
    return fwd, bwd


def _rand_moduli(rng: random.Random, ring: Ring, count: int, torsion_only: bool = False):
    out = []
    for _ in range(count):
        if not torsion_only and rng.random() < 0.3:
            out.append(ring.zero)
        else:
            out.append(rand_nonunit(rng, ring))
    return out


def _block_inclusion(ring: Ring, all_moduli, positions) -> Matrix:
    rows = []
    for i in range(len(all_moduli)):
        rows.append([ring.one if (j < len(positions) and positions[j] == i) else ring.zero
                     for j in range(len(positions))])
    return Matrix._raw(ring, len(all_moduli), len(positions), rows)


def _block_projection(ring: Ring, all_moduli, positions) -> Matrix:
    rows = []
    for j in positions:
        rows.append([ring.one if i == j else ring.zero for i in range(len(all_moduli))])
    return Matrix._raw(ring, len(positions), len(all_moduli), rows)


def gen_module_ses(params: GenParams, trial: int, torsion_only: bool = False,
                   rng: Optional[random.Random] = None):
    """Short exact sequence of presented modules, shear-twisted.

    Returns (mono, epi) with middle a twisted sum of the two ends.
    """
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    left_moduli = _rand_moduli(rng, ring, rng.randint(1, 2), torsion_only)
    right_moduli = _rand_moduli(rng, ring, rng.randint(1, 2), torsion_only)
    total_moduli = left_moduli + right_moduli
    left = _atoms_module(ring, left_moduli)
    right = _atoms_module(ring, right_moduli)
    middle = _atoms_module(ring, total_moduli)
    incl = _block_inclusion(ring, total_moduli, list(range(len(left_moduli))))
    proj = _block_projection(ring, total_moduli,
                             list(range(len(left_moduli), len(total_moduli))))
    fwd, bwd = _shear_auto(rng, ring, total_moduli)
    mono = PresentedMap(left, middle, fwd * incl)
    epi = PresentedMap(middle, right, proj * bwd)
    return mono, epi


def gen_ses_morphism(params: GenParams, trial: int,
                     rng: Optional[random.Random] = None) -> SesMorphism:
    """Morphism of short exact sequences with controlled right vertical.

    Half the time the right vertical is a unit automorphism (so both
    criterion sides should come out True); otherwise it is a random,
    typically non-invertible, homomorphism.
    """
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    a_moduli = _rand_moduli(rng, ring, rng.randint(1, 2))
    c_moduli = _rand_moduli(rng, ring, rng.randint(1, 2))
    a2_moduli = _rand_moduli(rng, ring, rng.randint(1, 2))
    iso_case = rng.random() < 0.5
    c2_moduli = list(c_moduli) if iso_case else _rand_moduli(rng, ring, rng.randint(1, 2))

    def make_row(first, second):
        total = list(first) + list(second)
        module = _atoms_module(ring, total)
        incl = _block_inclusion(ring, total, list(range(len(first))))
        proj = _block_projection(ring, total, list(range(len(first), len(total))))
        fwd, bwd = _shear_auto(rng, ring, total)
        mono = PresentedMap(_atoms_module(ring, first), module, fwd * incl)
        epi = PresentedMap(module, _atoms_module(ring, second), proj * bwd)
        return module, mono, epi, fwd, bwd

    top_mid, top_mono, top_epi, top_fwd, top_bwd = make_row(a_moduli, c_moduli)
    bot_mid, bot_mono, bot_epi, bot_fwd, bot_bwd = make_row(a2_moduli, c2_moduli)

    alpha = _rand_atom_hom(rng, ring, a2_moduli, a_moduli)
    if iso_case:
        gamma = Matrix.diagonal(ring, [rand_unit(rng, ring) for _ in c_moduli])
    else:
        gamma = _rand_atom_hom(rng, ring, c2_moduli, c_moduli)
    delta = _rand_atom_hom(rng, ring, a2_moduli, c_moduli)
    mixed = block(ring, [[alpha, delta], [None, gamma]],
                  [len(a2_moduli), len(c2_moduli)], [len(a_moduli), len(c_moduli)])
    middle_matrix = bot_fwd * mixed * top_bwd
    left = PresentedMap(_atoms_module(ring, a_moduli), _atoms_module(ring, a2_moduli), alpha)
    middle = PresentedMap(top_mid, bot_mid, middle_matrix)
    right = PresentedMap(_atoms_module(ring, c_moduli), _atoms_module(ring, c2_moduli), gamma)
    return SesMorphism(top_mono, top_epi, bot_mono, bot_epi, left, middle, right)


def gen_three_by_three(params: GenParams, trial: int,
                       rng: Optional[random.Random] = None) -> ThreeByThree:
    """Nine-term diagram built from four corner atom groups, then twisted."""
    if rng is None:
        rng = trial_rng(params, trial)
    ring = params.ring
    a = _rand_moduli(rng, ring, rng.randint(1, 2))
    b = _rand_moduli(rng, ring, rng.randint(1, 2))
    c = _rand_moduli(rng, ring, rng.randint(1, 2))
    d = _rand_moduli(rng, ring, rng.randint(1, 2))
    na, nb, nc, nd = len(a), len(b), len(c), len(d)
    objects = {
        "X": a, "Xp": a + b, "Xpp": b,
        "Y": a + c, "Yp": a + b + c + d, "Ypp": b + d,
        "Z": c, "Zp": c + d, "Zpp": d,
    }
    modules = {k: _atoms_module(ring, v) for k, v in objects.items()}
    # index layout inside Yp: a, b, c, d
    pos = {
        "a": list(range(na)),
        "b": list(range(na, na + nb)),
        "c": list(range(na + nb, na + nb + nc)),
        "d": list(range(na + nb + nc, na + nb + nc + nd)),
    }
    yp = objects["Yp"]
    mats = {
        "iX": _block_inclusion(ring, objects["Xp"], list(range(na))),
        "pX": _block_projection(ring, objects["Xp"], list(range(na, na + nb))),
        "iZ": _block_inclusion(ring, objects["Zp"], list(range(nc))),
        "pZ": _block_projection(ring, objects["Zp"], list(range(nc, nc + nd))),
        "iY": _block_inclusion(ring, yp, pos["a"] + pos["c"]),
        "pY": _block_projection(ring, yp, pos["b"] + pos["d"]),
        "f": _block_inclusion(ring, objects["Y"], list(range(na))),
        "g": _block_projection(ring, objects["Y"], list(range(na, na + nc))),
        "fp": _block_inclusion(ring, yp, pos["a"] + pos["b"]),
        "gp": _block_projection(ring, yp, pos["c"] + pos["d"]),
        "fpp": _block_inclusion(ring, objects["Ypp"], list(range(nb))),
        "gpp": _block_projection(ring, objects["Ypp"], list(range(nb, nb + nd))),
    }
    twists = {}
    for key in ("Xp", "Y", "Yp", "Ypp", "Zp"):
        twists[key] = _shear_auto(rng, ring, objects[key])
    ident = {k: (Matrix.identity(ring, len(v)), Matrix.identity(ring, len(v)))
             for k, v in objects.items() if k not in twists}
    twists.update(ident)

    def tw(name, target_key, source_key):
        fwd_t, _ = twists[target_key]
        _, bwd_s = twists[source_key]
        return fwd_t * mats[name] * bwd_s

    def pm(matrix, source_key, target_key):
        return PresentedMap(modules[source_key], modules[target_key], matrix)

    rows = (
        (pm(tw("iX", "Xp", "X"), "X", "Xp"), pm(tw("pX", "Xpp", "Xp"), "Xp", "Xpp")),
        (pm(tw("iY", "Yp", "Y"), "Y", "Yp"), pm(tw("pY", "Ypp", "Yp"), "Yp", "Ypp")),
        (pm(tw("iZ", "Zp", "Z"), "Z", "Zp"), pm(tw("pZ", "Zpp", "Zp"), "Zp", "Zpp")),
    )
    cols = (
        (pm(tw("f", "Y", "X"), "X", "Y"), pm(tw("g", "Z", "Y"), "Y", "Z")),
        (pm(tw("fp", "Yp", "Xp"), "Xp", "Yp"), pm(tw("gp", "Zp", "Yp"), "Yp", "Zp")),
        (pm(tw("fpp", "Ypp", "Xpp"), "Xpp", "Ypp"), pm(tw("gpp", "Zpp", "Ypp"), "Ypp", "Zpp")),
    )
    return ThreeByThree(rows, cols)
