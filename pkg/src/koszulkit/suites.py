"""Randomized property suites: each named suite replays one verified
statement over freshly generated instances and reports every violation.

Reports are deterministic in (params, seed): per-trial randomness comes
from the derived trial generator and failures are sorted by their trial
seed, so two runs with the same parameters serialize identically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import jsonio
from .complexes import (
    ChainMap,
    is_acyclic,
    kernel_image_sequences,
    quasi_iso_degree,
    truncation_splitting,
)
from .errors import HypothesisNotMetError, InvalidInputError
from .fgmodules import module_iso
from .generators import (
    GenParams,
    gen_a_object,
    gen_admissible_mono,
    gen_admissible_ses,
    gen_c_object,
    gen_chain_map,
    gen_idempotent,
    gen_koszul,
    gen_module_ses,
    gen_quasi_iso_pair,
    gen_ses_morphism,
    gen_ses_of_complexes,
    gen_three_by_three,
    trial_rng,
)
from .k0 import additivity_check, class_kos_qis, splitting_decomposition_check
from .koszul import (
    AdmissibleSes,
    cellular_factorization,
    e_functor,
    h0_additive,
    in_A_n,
    in_kos1,
    kappa,
    resolve_in_kos1,
    tau_maps_spherical_check,
)
from .matrices import Matrix, solve
from .presented import cobase_change_check, nine_term_sequences
from .sfiltering import (
    excision_epi,
    extension_closure_check,
    idempotent_split,
    image_factorization,
)


class TrialFailure(Exception):
    def __init__(self, message: str, instance):
        super().__init__(message)
        self.instance = instance


def _require(condition: bool, message: str, instance):
    if not condition:
        raise TrialFailure(message, instance)


@dataclass
class SuiteReport:
    suite: str
    ring: str
    seed: int
    trials: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "ring": self.ring,
            "seed": self.seed,
            "trials": self.trials,
            "failures": sorted(self.failures, key=lambda f: f["seed"]),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# Trial bodies.  Each raises TrialFailure with the offending instance.


def lemma_2_4_trial(params: GenParams, trial: int):
    diagram = gen_ses_morphism(params, trial)
    instance = {
        "middle": jsonio.presented_map_to_json(diagram.middle),
        "right": jsonio.presented_map_to_json(diagram.right),
    }
    _require(cobase_change_check(diagram), "pushout criterion sides disagree", instance)


def lemma_2_5_trial(params: GenParams, trial: int):
    grid = gen_three_by_three(params, trial)
    instance = {"rows": [jsonio.presented_map_to_json(m) for pair in grid.rows for m in pair]}
    first, second = nine_term_sequences(grid)
    _require(first, "pushout sequence is not short exact", instance)
    _require(second, "pullback sequence is not short exact", instance)


def remark_3_2_trial(params: GenParams, trial: int):
    sample = gen_a_object(params, trial)
    instance = jsonio.complex_to_json(sample.complex)
    degrees = sample.complex.degree_range()
    for n in range(degrees.start - 1, degrees.stop + 1):
        splitting = truncation_splitting(sample.complex, n)
        _require(splitting.triple.degreewise_exact(),
                 f"truncation triple not exact at {n}", instance)
        _require(splitting.identities_hold(),
                 f"splitting identities fail at {n}", instance)


def prop_3_4_trial(params: GenParams, trial: int):
    rng = trial_rng(params, trial)
    source = gen_a_object(params, trial, rng=rng).complex
    target = gen_a_object(params, trial, rng=rng).complex
    f = gen_chain_map(rng, source, target, bound=2, terms=1)
    instance = jsonio.chain_map_to_json(f)
    factorization = cellular_factorization(f)
    degrees = set(source.ranks) | set(target.ranks)
    width = (max(degrees) - min(degrees) + 1) if degrees else 0
    _require(len(factorization.stages) <= width + 1,
             "factorization used too many stages", instance)
    _require(factorization.composite() == f,
             "stages do not compose back to the input", instance)
    _require(quasi_iso_degree(factorization.final) == math.inf,
             "final map is not a quasi-isomorphism", instance)
    ring = params.ring
    for stage, retr, quotient, degree in zip(
            factorization.stages, factorization.retractions,
            factorization.subquotients, factorization.spherical_degrees):
        for n, r in retr.items():
            _require(r * stage.at(n) == Matrix.identity(ring, stage.source.rank(n)),
                     "stage retraction fails", instance)
        _require(in_A_n(quotient, degree),
                 f"subquotient is not {degree}-spherical", instance)


def prop_3_5_trial(params: GenParams, trial: int):
    rng = trial_rng(params, trial)
    spherical = rng.randint(0, max(0, params.support_width - 2))
    sample = gen_ses_of_complexes(params, trial, acyclic_side="none",
                                  spherical=spherical, rng=rng)
    seq = sample.sequence
    instance = jsonio.chain_map_to_json(seq.mono)
    degrees = seq.middle.degree_range()
    for k in range(degrees.start - 1, degrees.stop + 1):
        verdict = tau_maps_spherical_check(seq, k, spherical)
        _require(verdict, f"truncation at {k} broke the split sequence", instance)


def lemma_3_6_trial(params: GenParams, trial: int):
    rng = trial_rng(params, trial)
    side = "left" if rng.random() < 0.5 else "right"
    sample = gen_ses_of_complexes(params, trial, acyclic_side=side, rng=rng)
    seq = sample.sequence.ses
    instance = jsonio.chain_map_to_json(seq.sub)
    degrees = seq.middle.degree_range()
    checked = 0
    for n in range(degrees.start, degrees.stop + 1):
        try:
            kernels, images = kernel_image_sequences(seq, n)
        except HypothesisNotMetError:
            continue
        checked += 1
        _require(kernels, f"kernel sequence not exact at {n}", instance)
        _require(images, f"image sequence not exact at {n}", instance)
    _require(checked > 0, "hypothesis never held", instance)


def cor_3_8_trial(params: GenParams, trial: int):
    rng = trial_rng(params, trial)
    if rng.random() < 0.5:
        complex_ = gen_a_object(params, trial, spherical=0,
                                window_bottom=rng.choice((-1, 0)), rng=rng).complex
    else:
        complex_ = gen_koszul(params, trial, rng=rng).complex
    instance = jsonio.complex_to_json(complex_)
    result = kappa(complex_)
    _require(bool(in_kos1(result.kos)), "retract left the category", instance)
    _require(result.u_is_quasi_iso, "inclusion comparison is not a quasi-iso", instance)
    _require(result.v_is_quasi_iso, "projection comparison is not a quasi-iso", instance)
    if in_kos1(complex_):
        _require(result.kos == complex_, "retraction moved a two-term complex", instance)
        _require(result.u == ChainMap.identity(complex_)
                 and result.v == ChainMap.identity(complex_),
                 "retraction of a two-term complex is not the identity", instance)


def lemma_4_2_trial(params: GenParams, trial: int):
    sample = gen_c_object(params, trial)
    target = sample.object
    instance = jsonio.presented_koszul_to_json(target)
    res = resolve_in_kos1(target)
    _require(bool(in_kos1(res.cover)), "cover is not a free Koszul complex", instance)
    _require(res.e0.is_surjective(), "degree-0 component is not surjective", instance)
    _require(res.e1.is_surjective(), "degree-1 component is not surjective", instance)
    lifted = target.d.compose(res.e1)
    pushed = res.e0.matrix * res.cover.d(1)
    _require(target.bottom.contains(lifted.matrix - pushed),
             "cover map does not commute with boundaries", instance)
    _require(bool(in_kos1(res.kernel)), "kernel is not a free Koszul complex", instance)
    for degree, e_map in ((1, res.e1), (0, res.e0)):
        incl = res.kernel_inclusion.at(degree)
        _require(e_map.target.contains(e_map.matrix * incl),
                 f"kernel inclusion at degree {degree} does not die in the target", instance)
        pre = e_map.preimage_of_relations()
        _require(solve(incl, pre) is not None,
                 f"kernel at degree {degree} misses part of the true kernel", instance)


def lemma_4_3_trial(params: GenParams, trial: int):
    sample = gen_c_object(params, trial)
    instance = jsonio.presented_koszul_to_json(sample.object)
    triple = e_functor(sample.object)
    _require(triple.left.is_acyclic(), "left term is not acyclic", instance)
    _require(triple.middle == sample.object, "middle term is not the input", instance)
    _require(triple.right.top.canonical_form().is_zero(),
             "right term has a nonzero degree-1 part", instance)
    _require(module_iso(triple.right.h0().canonical_form(),
                        sample.object.h0().canonical_form()),
             "right term does not carry H0", instance)
    _require(additivity_check(triple, "presented"),
             "triple classes are not additive", instance)


def excision_trial(params: GenParams, trial: int):
    sample = gen_admissible_mono(params, trial)
    mono = sample.sequence.mono
    instance = jsonio.chain_map_to_json(mono)
    cert = excision_epi(mono, sample.sequence.retractions)
    _require(cert.verifies(), "excision certificate failed", instance)
    closure = AdmissibleSes(cert.kernel_inclusion, cert.q)
    _require(extension_closure_check(closure),
             "kernel sequence violates extension closure", instance)


def idempotent_trial(params: GenParams, trial: int):
    complex_, endo = gen_idempotent(params, trial)
    instance = jsonio.chain_map_to_json(endo)
    split = idempotent_split(endo)
    _require(split.rank_additive(), "split ranks do not add up", instance)
    for part in (split.image_part, split.complement_part):
        _require(bool(in_kos1(part)) and is_acyclic(part),
                 "split part left the acyclic subcategory", instance)


def closure_trial(params: GenParams, trial: int):
    sample = gen_admissible_ses(params, trial)
    instance = jsonio.chain_map_to_json(sample.sequence.mono)
    _require(extension_closure_check(sample.sequence),
             "acyclicity closure disagreement", instance)


def image_factorization_trial(params: GenParams, trial: int):
    rng = trial_rng(params, trial)
    source = gen_koszul(params, trial, acyclic=True, rng=rng).complex
    target = gen_koszul(params, trial, rng=rng).complex
    f = gen_chain_map(rng, source, target, bound=2, terms=1)
    instance = jsonio.chain_map_to_json(f)
    factorization = image_factorization(f)
    _require(factorization.verifies(f), "image factorization certificate failed", instance)


def appendix_a2_trial(params: GenParams, trial: int):
    excision_trial(params, trial)
    idempotent_trial(params, trial)
    closure_trial(params, trial)
    image_factorization_trial(params, trial)


def k0_additivity_trial(params: GenParams, trial: int):
    sample = gen_admissible_ses(params, trial)
    instance = jsonio.chain_map_to_json(sample.sequence.mono)
    _require(additivity_check(sample.sequence, "kos_isom"),
             "isomorphism-level class is not additive", instance)
    _require(additivity_check(sample.sequence, "kos_qis"),
             "torsion class is not additive", instance)
    _require(h0_additive(sample.sequence), "H0 sequence is not exact", instance)
    mono, epi = gen_module_ses(params, trial, torsion_only=True)
    _require(additivity_check((mono, epi), "torsion"),
             "module torsion class is not additive",
             jsonio.presented_map_to_json(mono))


def k0_qis_pair_trial(params: GenParams, trial: int):
    pair = gen_quasi_iso_pair(params, trial)
    instance = jsonio.chain_map_to_json(pair.map)
    _require(quasi_iso_degree(pair.map) == math.inf,
             "generated pair is not a quasi-isomorphism", instance)
    _require(class_kos_qis(pair.map.source) == class_kos_qis(pair.map.target),
             "quasi-isomorphic pair has different classes", instance)
    for end in (pair.map.source, pair.map.target):
        _require(splitting_decomposition_check(end),
                 "class does not decompose as (acyclic part, torsion part)", instance)


def k0_theorems_trial(params: GenParams, trial: int):
    k0_additivity_trial(params, trial)
    k0_qis_pair_trial(params, trial)


SUITES = {
    "lemma2_4": lemma_2_4_trial,
    "lemma2_5": lemma_2_5_trial,
    "remark3_2": remark_3_2_trial,
    "prop3_4": prop_3_4_trial,
    "prop3_5": prop_3_5_trial,
    "lemma3_6": lemma_3_6_trial,
    "cor3_8": cor_3_8_trial,
    "lemma4_2": lemma_4_2_trial,
    "lemma4_3": lemma_4_3_trial,
    "appendix_a2": appendix_a2_trial,
    "k0_theorems": k0_theorems_trial,
}


def run_suite(name: str, params: GenParams) -> SuiteReport:
    body = SUITES.get(name)
    if body is None:
        raise InvalidInputError(f"unknown suite {name!r}")
    report = SuiteReport(suite=name, ring=params.ring.token,
                         seed=params.seed, trials=params.trials)
    for trial in range(params.trials):
        seed_token = f"{params.ring.token}/{params.seed}/{trial}"
        try:
            body(params, trial)
        except TrialFailure as failure:
            report.failures.append({
                "seed": seed_token,
                "instance": failure.instance,
                "assertion": str(failure),
            })
        except (InvalidInputError, HypothesisNotMetError) as error:
            report.failures.append({
                "seed": seed_token,
                "instance": None,
                "assertion": f"trial aborted: {error}",
            })
    report.failures.sort(key=lambda f: f["seed"])
    return report
