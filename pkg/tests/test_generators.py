import math

from koszulkit.complexes import homology_table, is_acyclic, quasi_iso_degree
from koszulkit.fgmodules import module_iso
from koszulkit.generators import (
    GenParams,
    gen_a_object,
    gen_admissible_mono,
    gen_admissible_ses,
    gen_c_object,
    gen_chain_map,
    gen_idempotent,
    gen_koszul,
    gen_matrix,
    gen_module_ses,
    gen_quasi_iso_pair,
    gen_ses_morphism,
    gen_three_by_three,
    rand_unimodular,
    trial_rng,
)
from koszulkit.koszul import h0, in_A, in_A_n, in_kos1
from koszulkit.matrices import Matrix, is_unimodular
from koszulkit.presented import is_short_exact
from koszulkit.rings import ZZ, fpx

PARAMS = GenParams(ring=ZZ, seed=42)
POLY_PARAMS = GenParams(ring=fpx(2), seed=42, max_entry=3)


def test_determinism():
    assert gen_koszul(PARAMS, 9).complex == gen_koszul(PARAMS, 9).complex
    assert gen_matrix(PARAMS, 4) == gen_matrix(PARAMS, 4)
    first = gen_three_by_three(PARAMS, 2)
    second = gen_three_by_three(PARAMS, 2)
    assert first.rows[1][0].matrix == second.rows[1][0].matrix


def test_seed_changes_output():
    assert gen_koszul(PARAMS, 1).complex != gen_koszul(PARAMS.with_seed(43), 1).complex


def test_rand_unimodular():
    for ring, params in ((ZZ, PARAMS), (fpx(2), POLY_PARAMS)):
        rng = trial_rng(params, 0)
        for n in range(4):
            fwd, bwd = rand_unimodular(rng, ring, n)
            assert is_unimodular(fwd) or n == 0
            assert fwd * bwd == Matrix.identity(ring, n)


def test_gen_koszul_bookkeeping():
    for params in (PARAMS, POLY_PARAMS):
        for trial in range(20):
            sample = gen_koszul(params, trial)
            assert in_kos1(sample.complex)
            assert module_iso(h0(sample.complex), sample.expected_h0)
        acyclic = gen_koszul(params, 3, acyclic=True)
        assert is_acyclic(acyclic.complex)


def test_gen_a_object_homology():
    for trial in range(15):
        sample = gen_a_object(PARAMS, trial)
        assert in_A(sample.complex)
        table = homology_table(sample.complex)
        for n, expected in sample.expected_homology.items():
            assert module_iso(table[n], expected)


def test_gen_a_object_spherical():
    for trial in range(10):
        sample = gen_a_object(PARAMS, trial, spherical=1)
        assert in_A_n(sample.complex, 1)


def test_gen_chain_map_valid():
    rng = trial_rng(PARAMS, 0)
    for trial in range(10):
        x = gen_a_object(PARAMS, trial, rng=rng).complex
        y = gen_a_object(PARAMS, trial + 77, rng=rng).complex
        gen_chain_map(rng, x, y)  # constructor validates the chain law


def test_gen_admissible_structures():
    for trial in range(10):
        ses = gen_admissible_ses(PARAMS, trial)
        assert ses.sequence.retractions
        mono_sample = gen_admissible_mono(PARAMS, trial)
        assert is_acyclic(mono_sample.sequence.left)


def test_gen_quasi_iso_pair():
    for trial in range(10):
        pair = gen_quasi_iso_pair(PARAMS, trial)
        assert quasi_iso_degree(pair.map) == math.inf


def test_gen_c_object():
    for params in (PARAMS, POLY_PARAMS):
        for trial in range(8):
            sample = gen_c_object(params, trial)
            assert module_iso(sample.object.h0().canonical_form(), sample.expected_h0)


def test_gen_idempotent():
    for trial in range(6):
        complex_, endo = gen_idempotent(PARAMS, trial)
        assert endo.compose(endo) == endo
        assert is_acyclic(complex_)


def test_gen_module_diagrams():
    for trial in range(10):
        mono, epi = gen_module_ses(PARAMS, trial)
        assert is_short_exact(mono, epi)
        diagram = gen_ses_morphism(PARAMS, trial)
        diagram.validate()
        grid = gen_three_by_three(PARAMS, trial)
        grid.validate()


def test_gen_module_ses_torsion_only():
    for trial in range(10):
        mono, epi = gen_module_ses(PARAMS, trial, torsion_only=True)
        assert mono.source.canonical_form().is_torsion()
        assert epi.target.canonical_form().is_torsion()
