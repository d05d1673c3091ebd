import pytest

from koszulkit.errors import InvalidInputError
from koszulkit.generators import GenParams
from koszulkit.rings import ZZ, fpx
from koszulkit.suites import SUITES, run_suite

EXPECTED_SUITES = {
    "lemma2_4", "lemma2_5", "remark3_2", "prop3_4", "prop3_5", "lemma3_6",
    "cor3_8", "lemma4_2", "lemma4_3", "appendix_a2", "k0_theorems",
}


def test_registry_names():
    assert set(SUITES) == EXPECTED_SUITES


@pytest.mark.parametrize("name", sorted(EXPECTED_SUITES))
def test_suite_passes_over_z(name):
    params = GenParams(ring=ZZ, seed=3, trials=8)
    if name == "prop3_4":
        params = GenParams(ring=ZZ, seed=3, trials=5, max_rank=2, support_width=3)
    report = run_suite(name, params)
    assert report.ok, report.failures[:1]
    assert report.trials == params.trials


@pytest.mark.parametrize("name", ["lemma2_4", "remark3_2", "appendix_a2", "k0_theorems"])
def test_suite_passes_over_f2(name):
    params = GenParams(ring=fpx(2), seed=3, trials=5, max_entry=3)
    report = run_suite(name, params)
    assert report.ok, report.failures[:1]


def test_unknown_suite():
    with pytest.raises(InvalidInputError):
        run_suite("nonsense", GenParams(ring=ZZ, seed=0, trials=1))


def test_report_determinism():
    params = GenParams(ring=ZZ, seed=11, trials=6)
    first = run_suite("cor3_8", params)
    second = run_suite("cor3_8", params)
    assert first.dumps() == second.dumps()


def test_report_payload_shape():
    params = GenParams(ring=ZZ, seed=11, trials=3)
    payload = run_suite("lemma2_4", params).to_json()
    assert payload["suite"] == "lemma2_4"
    assert payload["ring"] == "Z"
    assert payload["seed"] == 11
    assert payload["trials"] == 3
    assert payload["failures"] == []
