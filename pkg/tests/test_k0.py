import pytest

from koszulkit.complexes import direct_sum, two_term
from koszulkit.errors import InvalidInputError
from koszulkit.fgmodules import FgModule
from koszulkit.generators import GenParams, gen_admissible_ses, gen_module_ses, gen_quasi_iso_pair
from koszulkit.k0 import (
    K0KosClass,
    K0TorsionClass,
    additivity_check,
    class_acyclic,
    class_kos_isom,
    class_kos_qis,
    class_presented,
    class_torsion,
    splitting_decomposition_check,
)
from koszulkit.koszul import AdmissibleSes, PresentedKoszul, e_functor
from koszulkit.matrices import Matrix
from koszulkit.rings import ZZ, fpx

PARAMS = GenParams(ring=ZZ, seed=21)
Z6 = two_term(Matrix(ZZ, [[6]]))


def test_class_torsion_examples():
    assert class_torsion(FgModule.make(ZZ, 0, [12])).as_dict() == {2: 2, 3: 1}
    assert class_torsion(FgModule.make(ZZ, 0, [])).is_zero()
    assert class_torsion(FgModule.make(ZZ, 0, [2, 2])).as_dict() == {2: 2}
    with pytest.raises(InvalidInputError):
        class_torsion(FgModule.make(ZZ, 1, []))


def test_class_torsion_polynomials():
    F2 = fpx(2)
    x = F2.poly([0, 1])
    xp1 = F2.poly([1, 1])
    module = FgModule.make(F2, 0, [F2.mul(x, xp1)])
    assert class_torsion(module).as_dict() == {x: 1, xp1: 1}


def test_class_kos_qis():
    assert class_kos_qis(Z6).as_dict() == {2: 1, 3: 1}
    acyclic = two_term(Matrix(ZZ, [[1]]))
    assert class_kos_qis(acyclic).is_zero()
    padded = direct_sum(Z6, acyclic).complex
    assert class_kos_qis(padded) == class_kos_qis(Z6)


def test_class_kos_isom():
    cls = class_kos_isom(Z6)
    assert cls.rank == 1 and cls.torsion.as_dict() == {2: 1, 3: 1}
    acyclic3 = two_term(Matrix.identity(ZZ, 3))
    cls = class_kos_isom(acyclic3)
    assert cls.rank == 3 and cls.torsion.is_zero()
    both = direct_sum(Z6, acyclic3).complex
    assert class_kos_isom(both) == class_kos_isom(Z6) + class_kos_isom(acyclic3)


def test_class_acyclic():
    assert class_acyclic(two_term(Matrix.identity(ZZ, 3))) == 3
    with pytest.raises(InvalidInputError):
        class_acyclic(Z6)


def test_additivity_on_split_sequences():
    total = direct_sum(Z6, two_term(Matrix(ZZ, [[2]])))
    seq = AdmissibleSes(total.inclusions[0], total.projections[1])
    assert additivity_check(seq, "kos_isom")
    assert additivity_check(seq, "kos_qis")
    with pytest.raises(InvalidInputError):
        additivity_check(seq, "nonsense")


def test_e_functor_triple_additivity_example():
    target = PresentedKoszul.from_free(Z6)
    triple = e_functor(target)
    left = class_presented(triple.left)
    right = class_presented(triple.right)
    middle = class_presented(triple.middle)
    assert left == K0KosClass(1, K0TorsionClass.zero(ZZ))
    assert right.rank == 0 and right.torsion.as_dict() == {2: 1, 3: 1}
    assert middle == left + right
    assert additivity_check(triple, "presented")


def test_additivity_random():
    for trial in range(40):
        sample = gen_admissible_ses(PARAMS, trial)
        assert additivity_check(sample.sequence, "kos_isom")
        assert additivity_check(sample.sequence, "kos_qis")


def test_torsion_module_additivity():
    for trial in range(40):
        mono, epi = gen_module_ses(PARAMS, trial, torsion_only=True)
        assert additivity_check((mono, epi), "torsion")


def test_quasi_iso_invariance():
    for trial in range(20):
        pair = gen_quasi_iso_pair(PARAMS, trial)
        assert class_kos_qis(pair.map.source) == class_kos_qis(pair.map.target)


def test_splitting_decomposition():
    assert splitting_decomposition_check(Z6)
    for trial in range(20):
        pair = gen_quasi_iso_pair(PARAMS, trial)
        assert splitting_decomposition_check(pair.map.source)
        assert splitting_decomposition_check(pair.map.target)


def test_class_arithmetic():
    a = K0TorsionClass.make(ZZ, {2: 1})
    b = K0TorsionClass.make(ZZ, {2: -1, 3: 2})
    assert (a + b).as_dict() == {3: 2}
    with pytest.raises(InvalidInputError):
        a + K0TorsionClass.make(fpx(2), {})
