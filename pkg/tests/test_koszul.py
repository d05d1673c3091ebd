import math

import pytest

from koszulkit.complexes import (
    ChainComplex,
    ChainMap,
    cone,
    direct_sum,
    homology,
    is_acyclic,
    quasi_iso_degree,
    two_term,
    zero_complex,
)
from koszulkit.errors import InvalidInputError
from koszulkit.fgmodules import FgModule, module_iso
from koszulkit.generators import GenParams, gen_a_object, gen_c_object, gen_chain_map, gen_koszul, trial_rng
from koszulkit.koszul import (
    AdmissibleSes,
    PresentedKoszul,
    cellular_factorization,
    e_functor,
    factor_step,
    factor_step_equivalence,
    h0,
    h0_additive,
    h0_augmentation,
    h0_map,
    in_A,
    in_A_n,
    in_kos1,
    kappa,
    resolve_in_kos1,
    retraction_q,
    tau_maps_spherical_check,
)
from koszulkit.matrices import Matrix
from koszulkit.presented import PresentedMap, PresentedModule, is_short_exact
from koszulkit.rings import ZZ

Z2 = two_term(Matrix(ZZ, [[2]]))
Z6 = two_term(Matrix(ZZ, [[6]]))
PARAMS = GenParams(ring=ZZ, seed=5)


def padded_0_spherical():
    # acyclic [Z ->1 Z] in degrees (2,1) on top of [Z ->2 Z] in degrees (1,0)
    return ChainComplex(ZZ, {2: 1, 1: 2, 0: 1},
                        {2: Matrix(ZZ, [[1], [0]]), 1: Matrix(ZZ, [[0, 2]])})


def test_in_kos1():
    assert in_kos1(Z2)
    verdict = in_kos1(two_term(Matrix.zeros(ZZ, 1, 1)))
    assert not verdict and not verdict.injective
    assert in_kos1(two_term(Matrix(ZZ, [[1, 0], [0, 6]])))
    wide = ChainComplex(ZZ, {2: 1, 1: 1}, {2: Matrix(ZZ, [[2]])})
    assert not in_kos1(wide).concentrated


def test_in_A():
    assert in_A_n(Z2, 0)
    assert not in_A(two_term(Matrix.zeros(ZZ, 1, 1)))
    spherical1 = ChainComplex(ZZ, {2: 1, 1: 1}, {2: Matrix(ZZ, [[3]])})
    assert in_A_n(spherical1, 1)
    assert not in_A_n(spherical1, 0)
    acyclic = two_term(Matrix(ZZ, [[1]]))
    assert in_A_n(acyclic, 0) and in_A_n(acyclic, 5)


def test_h0():
    assert h0(Z6) == FgModule(ZZ, 0, (6,))
    assert h0(two_term(Matrix(ZZ, [[1]]))).is_zero()
    total = direct_sum(Z2, Z6).complex
    assert module_iso(h0(total), h0(Z2).direct_sum(h0(Z6)))


def test_h0_augmentation():
    augmentation = h0_augmentation(Z2)
    assert augmentation.degree0.matrix == Matrix.identity(ZZ, 1)
    assert augmentation.target.h0().canonical_form() == FgModule(ZZ, 0, (2,))
    acyclic = two_term(Matrix(ZZ, [[1]]))
    assert h0_augmentation(acyclic).target.h0().canonical_form().is_zero()


def test_h0_augmentation_naturality():
    rng = trial_rng(PARAMS, 1)
    for trial in range(10):
        x = gen_koszul(PARAMS, trial, rng=rng).complex
        y = gen_koszul(PARAMS, trial + 50, rng=rng).complex
        f = gen_chain_map(rng, x, y)
        left = h0_map(f).compose(
            PresentedMap(PresentedModule.free(ZZ, x.rank(0)),
                         h0_augmentation(x).degree0.target,
                         Matrix.identity(ZZ, x.rank(0)), check=False))
        right = h0_augmentation(y).degree0.compose(
            PresentedMap(PresentedModule.free(ZZ, x.rank(0)),
                         PresentedModule.free(ZZ, y.rank(0)), f.at(0), check=False))
        assert left.matrix == right.matrix or left.target.contains(left.matrix - right.matrix)


def test_kappa_on_koszul_is_identity():
    result = kappa(Z2)
    assert result.kos == Z2
    assert result.u == ChainMap.identity(Z2)
    assert result.v == ChainMap.identity(Z2)
    assert result.u_is_quasi_iso and result.v_is_quasi_iso


def test_kappa_on_padded_object():
    x = padded_0_spherical()
    result = kappa(x)
    assert in_kos1(result.kos)
    assert homology(result.kos, 0) == FgModule(ZZ, 0, (2,))
    assert result.u_is_quasi_iso and result.v_is_quasi_iso


def test_kappa_random_certificates():
    for trial in range(25):
        rng = trial_rng(PARAMS, trial)
        x = gen_a_object(PARAMS, trial, spherical=0, window_bottom=rng.choice((-1, 0)),
                         rng=rng).complex
        result = kappa(x)
        assert in_kos1(result.kos)
        assert result.u_is_quasi_iso and result.v_is_quasi_iso


def test_kappa_refuses_non_spherical():
    spherical1 = ChainComplex(ZZ, {2: 1, 1: 1}, {2: Matrix(ZZ, [[3]])})
    with pytest.raises(InvalidInputError):
        kappa(spherical1)


def test_factor_step_quasi_iso_above_support():
    ident = ChainMap.identity(Z2)
    step = factor_step(ident, 5)
    assert step.h.compose(step.g) == ident
    assert step.upper.is_zero_complex()
    # with nothing to truncate the intermediate complex is the target itself
    assert step.g.target == Z2


def test_factor_step_from_zero():
    f = ChainMap.zero(zero_complex(ZZ), Z2)
    step = factor_step(f, -1)
    built = cone(step.g).complex
    assert in_A_n(built, 0)
    assert module_iso(homology(built, 0), h0(Z2))


def test_factor_step_requires_vanishing():
    f = ChainMap.zero(zero_complex(ZZ), Z2)
    with pytest.raises(InvalidInputError):
        factor_step(f, 0)  # cone homology at 0 is Z/2


def test_factor_step_cone_comparison():
    # the cone of the second factor reproduces the truncated cone's homology
    target = ChainComplex(ZZ, {2: 1, 1: 2, 0: 1},
                          {2: Matrix(ZZ, [[3], [0]]), 1: Matrix(ZZ, [[0, 2]])})
    f = ChainMap.zero(zero_complex(ZZ), target)
    step = factor_step(f, quasi_iso_degree(f))
    built = cone(step.h).complex
    for n in set(built.degree_range()) | set(step.upper.degree_range()):
        assert module_iso(homology(built, n), homology(step.upper, n))
    witness = factor_step_equivalence(step)
    assert witness is not None
    assert witness.back.compose(witness.into) == ChainMap.identity(step.upper)
    assert quasi_iso_degree(witness.into) == math.inf


def test_factor_step_random_postconditions():
    params = GenParams(ring=ZZ, seed=31, max_rank=2, support_width=3)
    for trial in range(8):
        rng = trial_rng(params, trial)
        x = gen_a_object(params, trial, rng=rng).complex
        y = gen_a_object(params, trial + 500, rng=rng).complex
        f = gen_chain_map(rng, x, y, terms=1)
        n = quasi_iso_degree(f)
        if n == math.inf:
            continue
        step = factor_step(f, n)
        assert step.h.compose(step.g) == f
        assert in_A_n(cone(step.g).complex, n + 1)
        built = cone(step.h).complex
        for k in set(built.degree_range()) | set(step.upper.degree_range()):
            assert module_iso(homology(built, k), homology(step.upper, k))
        degrees = set(x.ranks) | set(y.ranks)
        if degrees and max(degrees) - min(degrees) + 1 <= 3:
            witness = factor_step_equivalence(step)
            assert witness is not None
            assert witness.back.compose(witness.into) == ChainMap.identity(step.upper)


def test_cellular_factorization_of_quasi_iso():
    ident = ChainMap.identity(Z6)
    factorization = cellular_factorization(ident)
    assert factorization.stages == ()
    assert factorization.final == ident


def test_cellular_factorization_example():
    f = ChainMap.zero(zero_complex(ZZ), Z2)
    factorization = cellular_factorization(f)
    assert len(factorization.stages) == 1
    assert factorization.spherical_degrees == (0,)
    quotient = factorization.subquotients[0]
    assert in_A_n(quotient, 0)
    assert module_iso(homology(quotient, 0), FgModule(ZZ, 0, (2,)))
    assert factorization.composite() == f
    assert quasi_iso_degree(factorization.final) == math.inf


def test_cellular_factorization_random():
    params = GenParams(ring=ZZ, seed=8, max_rank=2, support_width=3)
    for trial in range(10):
        rng = trial_rng(params, trial)
        x = gen_a_object(params, trial, rng=rng).complex
        y = gen_a_object(params, trial, rng=rng).complex
        f = gen_chain_map(rng, x, y, terms=1)
        factorization = cellular_factorization(f)
        assert factorization.composite() == f
        assert quasi_iso_degree(factorization.final) == math.inf
        for quotient, degree in zip(factorization.subquotients, factorization.spherical_degrees):
            assert in_A_n(quotient, degree)


def test_cellular_factorization_requires_torsion_homology():
    free_homology = ChainComplex(ZZ, {0: 1}, {})
    with pytest.raises(InvalidInputError):
        cellular_factorization(ChainMap.identity(free_homology))


def test_admissible_ses_and_h0_additivity():
    total = direct_sum(Z2, Z6)
    seq = AdmissibleSes(total.inclusions[0], total.projections[1])
    assert h0_additive(seq)
    assert seq.retractions and seq.sections


def test_tau_maps_spherical_check():
    total = direct_sum(Z2, Z6)
    seq = AdmissibleSes(total.inclusions[0], total.projections[1])
    for k in (-1, 0, 1):
        assert tau_maps_spherical_check(seq, k, 0)


def test_presented_koszul_validation():
    top = PresentedModule.free(ZZ, 1)
    bottom = PresentedModule.free(ZZ, 1)
    with pytest.raises(InvalidInputError):
        PresentedKoszul(top, bottom, PresentedMap.zero(top, bottom))  # not injective
    with pytest.raises(InvalidInputError):
        # identity boundary has zero cokernel, fine; a free cokernel is not
        PresentedKoszul(PresentedModule.free(ZZ, 0), bottom,
                        PresentedMap.zero(PresentedModule.free(ZZ, 0), bottom))


def test_resolve_in_kos1_example():
    zero_mod = PresentedModule.free(ZZ, 0)
    z2 = PresentedModule.cyclic(ZZ, 2)
    target = PresentedKoszul(zero_mod, z2, PresentedMap.zero(zero_mod, z2))
    res = resolve_in_kos1(target)
    assert res.cover == Z2
    assert in_kos1(res.kernel) and is_acyclic(res.kernel)
    assert res.e0.is_surjective() and res.e1.is_surjective()


def test_resolve_in_kos1_free_input():
    target = PresentedKoszul.from_free(Z6)
    res = resolve_in_kos1(target)
    assert in_kos1(res.cover)
    assert res.e0.is_surjective() and res.e1.is_surjective()
    assert in_kos1(res.kernel)


def test_resolve_zero_object():
    zero_mod = PresentedModule.free(ZZ, 0)
    target = PresentedKoszul(zero_mod, zero_mod, PresentedMap.zero(zero_mod, zero_mod))
    res = resolve_in_kos1(target)
    assert res.cover.is_zero_complex()
    assert res.kernel.is_zero_complex()


def test_e_functor_example():
    target = PresentedKoszul.from_free(Z2)
    triple = e_functor(target)
    assert triple.left.is_acyclic()
    assert triple.middle == target
    assert triple.right.h0().canonical_form() == FgModule(ZZ, 0, (2,))
    # degree-0 row is 0 -> Z -> Z -> Z/2 -> 0
    assert is_short_exact(triple.sequence.mono.degree0, triple.sequence.epi.degree0)


def test_e_functor_acyclic_input():
    target = PresentedKoszul.from_free(two_term(Matrix(ZZ, [[1]])))
    triple = e_functor(target)
    assert triple.right.h0().canonical_form().is_zero()


def test_e_functor_generated():
    for trial in range(8):
        sample = gen_c_object(PARAMS, trial)
        triple = e_functor(sample.object)
        assert triple.left.is_acyclic()
        assert module_iso(triple.right.h0().canonical_form(),
                          sample.object.h0().canonical_form())


def test_retraction_q():
    retract = retraction_q(Z2)
    assert retract.complex == two_term(Matrix.identity(ZZ, 1))
    assert not retract.comparison_is_iso
    # idempotent on objects
    again = retraction_q(retract.complex)
    assert again.complex == retract.complex
    # acyclic input: the comparison is an isomorphism
    unimod = two_term(Matrix(ZZ, [[1, 2], [0, -1]]))
    assert retraction_q(unimod).comparison_is_iso
