import pytest

from koszulkit.complexes import (
    ChainMap,
    direct_sum,
    homology,
    is_acyclic,
    two_term,
)
from koszulkit.errors import InvalidInputError
from koszulkit.fgmodules import module_iso
from koszulkit.generators import (
    GenParams,
    gen_admissible_mono,
    gen_admissible_ses,
    gen_chain_map,
    gen_idempotent,
    gen_koszul,
    rand_unimodular,
    trial_rng,
)
from koszulkit.koszul import AdmissibleSes, in_kos1
from koszulkit.matrices import Matrix
from koszulkit.rings import ZZ
from koszulkit.sfiltering import (
    ed_decompose,
    excision_epi,
    extension_closure_check,
    idempotent_split,
    image_factorization,
    kernel_complex,
)

PARAMS = GenParams(ring=ZZ, seed=12)
UNIT = two_term(Matrix(ZZ, [[1]]))
Z2 = two_term(Matrix(ZZ, [[2]]))


def test_image_factorization_zero_map():
    f = ChainMap.zero(UNIT, Z2)
    factorization = image_factorization(f)
    assert factorization.image.is_zero_complex()
    assert factorization.verifies(f)


def test_image_factorization_identity():
    f = ChainMap.identity(UNIT)
    factorization = image_factorization(f)
    assert factorization.image == UNIT
    assert factorization.epi == ChainMap.identity(UNIT)
    assert factorization.verifies(f)


def test_image_factorization_rank_one_example():
    target = two_term(Matrix(ZZ, [[1, 0], [0, 2]]))
    f = ChainMap(UNIT, target, {1: Matrix(ZZ, [[1], [0]]), 0: Matrix(ZZ, [[1], [0]])})
    factorization = image_factorization(f)
    assert factorization.image.ranks == {1: 1, 0: 1}
    assert is_acyclic(factorization.image)
    assert factorization.verifies(f)
    # the kernel stays in the category and is acyclic
    assert in_kos1(factorization.kernel) and is_acyclic(factorization.kernel)


def test_image_factorization_requires_acyclic_source():
    f = ChainMap.zero(Z2, Z2)
    with pytest.raises(InvalidInputError):
        image_factorization(f)


def test_image_factorization_random():
    for trial in range(15):
        rng = trial_rng(PARAMS, trial)
        source = gen_koszul(PARAMS, trial, acyclic=True, rng=rng).complex
        target = gen_koszul(PARAMS, trial, rng=rng).complex
        f = gen_chain_map(rng, source, target, terms=1)
        assert image_factorization(f).verifies(f)


def test_extension_closure_examples():
    both = direct_sum(UNIT, two_term(Matrix(ZZ, [[-1]])))
    seq = AdmissibleSes(both.inclusions[0], both.projections[1])
    assert is_acyclic(seq.middle)
    assert extension_closure_check(seq)
    mixed = direct_sum(UNIT, Z2)
    seq = AdmissibleSes(mixed.inclusions[0], mixed.projections[1])
    assert not is_acyclic(seq.middle)
    assert extension_closure_check(seq)


def test_extension_closure_random():
    for trial in range(50):
        sample = gen_admissible_ses(PARAMS, trial)
        assert extension_closure_check(sample.sequence)


def test_ed_decompose_acyclic():
    unimod = two_term(Matrix(ZZ, [[1, 2], [0, -1]]))
    decomposition = ed_decompose(unimod)
    assert decomposition.nonunit_part.is_zero_complex()
    assert decomposition.unit_part.ranks == {1: 2, 0: 2}
    assert decomposition.iso.is_chain_iso()


def test_ed_decompose_diag_1_2():
    w = two_term(Matrix(ZZ, [[1, 0], [0, 2]]))
    decomposition = ed_decompose(w)
    assert decomposition.unit_part.ranks == {1: 1, 0: 1}
    assert decomposition.nonunit_part == Z2
    assert decomposition.iso.is_chain_iso()


def test_ed_decompose_upper_triangular():
    w = two_term(Matrix(ZZ, [[2, 1], [0, 3]]))
    decomposition = ed_decompose(w)
    assert decomposition.nonunit_divisors == (6,)
    assert decomposition.unit_part.ranks == {1: 1, 0: 1}
    assert decomposition.iso.is_chain_iso()
    assert module_iso(homology(w, 0), homology(decomposition.nonunit_part, 0))
    assert is_acyclic(decomposition.unit_part)


def test_ed_decompose_stable_under_unimodular_precomposition():
    rng = trial_rng(PARAMS, 3)
    w = two_term(Matrix(ZZ, [[4, 1], [0, 6]]))
    baseline = ed_decompose(w).nonunit_divisors
    for _ in range(5):
        u, _ = rand_unimodular(rng, ZZ, 2)
        twisted = two_term(w.d(1) * u)
        assert ed_decompose(twisted).nonunit_divisors == baseline


def test_excision_projection_case():
    # Y = X (+) W with W purely non-unit: the target collapses to X
    total = direct_sum(UNIT, Z2)
    mono = total.inclusions[0]
    cert = excision_epi(mono)
    assert cert.target == UNIT
    assert cert.verifies()
    # q is the X-projection up to the stored retraction
    assert cert.q.compose(mono) == ChainMap.identity(UNIT)


def test_excision_pipeline_example():
    target = two_term(Matrix(ZZ, [[1, 0], [0, 2]]))
    mono = ChainMap(UNIT, target, {1: Matrix(ZZ, [[1], [0]]), 0: Matrix(ZZ, [[1], [0]])})
    cert = excision_epi(mono)
    assert cert.verifies()
    assert cert.target == UNIT  # the quotient [Z -> 2Z] has no unit part
    # the kernel is Koszul but NOT acyclic here: it carries H0 of the ambient complex
    assert in_kos1(cert.kernel)
    assert module_iso(homology(cert.kernel, 0), homology(target, 0))
    closure = AdmissibleSes(cert.kernel_inclusion, cert.q)
    assert extension_closure_check(closure)


def test_excision_random():
    for trial in range(25):
        sample = gen_admissible_mono(PARAMS, trial)
        cert = excision_epi(sample.sequence.mono, sample.sequence.retractions)
        assert cert.verifies()
        closure = AdmissibleSes(cert.kernel_inclusion, cert.q)
        assert extension_closure_check(closure)
        # kernel acyclicity tracks ambient acyclicity exactly
        assert is_acyclic(cert.kernel) == is_acyclic(sample.sequence.middle)


def test_excision_requires_acyclic_source():
    total = direct_sum(Z2, UNIT)
    with pytest.raises(InvalidInputError):
        excision_epi(total.inclusions[0])


def test_idempotent_trivial_splits():
    x = direct_sum(UNIT, two_term(Matrix(ZZ, [[-1]]))).complex
    ident = ChainMap.identity(x)
    split = idempotent_split(ident)
    assert split.complement_part.is_zero_complex()
    assert split.rank_additive()
    split = idempotent_split(ChainMap.zero(x, x))
    assert split.image_part.is_zero_complex()
    assert split.rank_additive()


def test_idempotent_conjugated_projector():
    for trial in range(10):
        x, endo = gen_idempotent(PARAMS, trial)
        split = idempotent_split(endo)
        assert split.rank_additive()
        for part in (split.image_part, split.complement_part):
            assert in_kos1(part) and is_acyclic(part)
        assert split.iso.is_chain_iso()


def test_idempotent_split_rejects_bad_input():
    x = direct_sum(UNIT, UNIT).complex
    doubled = ChainMap(x, x, {n: Matrix.identity(ZZ, x.rank(n)).scale(2) for n in x.ranks})
    with pytest.raises(InvalidInputError):
        idempotent_split(doubled)
    with pytest.raises(InvalidInputError):
        idempotent_split(ChainMap.identity(Z2))  # not acyclic


def test_kernel_complex():
    f = ChainMap.zero(Z2, Z2)
    kernel, incl = kernel_complex(f)
    assert kernel == Z2
    assert incl == ChainMap.identity(Z2)
