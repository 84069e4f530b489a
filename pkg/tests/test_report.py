import pytest

from pairabsorb.absorption import AbsorptionAmplitudes, InitialStateKind, Scenario
from pairabsorb.recoil import RecoilOverlaps
from pairabsorb.report import ScenarioReport, evaluate_scenario

AMPS = AbsorptionAmplitudes.from_excitation(0.1, 0.1)
OV = RecoilOverlaps.from_scalars(0.9, 0.9)


def make(kind, amps=AMPS, ov=OV):
    return evaluate_scenario(Scenario(kind=kind, amplitudes=amps, overlaps=ov))


def test_entangled_report():
    report = make(InitialStateKind.ENTANGLED)
    assert report.p_double == pytest.approx(2.0e-4, abs=1e-12)
    assert report.entropy_initial_bits == pytest.approx(1.0, abs=1e-9)
    assert report.entropy_final_bits == pytest.approx(1.0, abs=1e-9)
    assert report.lambda_spectrum_ok is True
    assert report.classification == "non-product hyperentangled"
    assert not report.beyond_linear_regime


def test_product_report_is_separable():
    report = make(InitialStateKind.PRODUCT)
    assert report.p_double == pytest.approx(1.0e-4, abs=1e-12)
    assert report.entropy_final_bits == pytest.approx(0.0, abs=1e-12)
    assert report.classification == "separable"


def test_mixture_report_uses_branch_weights():
    report = make(InitialStateKind.EQUAL_MIXTURE)
    assert report.p_double == pytest.approx(1.0e-4, abs=1e-12)
    assert report.entropy_initial_bits == 0.0
    assert report.entropy_final_bits == pytest.approx(0.0, abs=1e-12)
    assert report.classification == "separable"


def test_complex_amplitudes_null_lambda_fields():
    amps = AbsorptionAmplitudes.from_excitation(0.1j, 0.1)
    report = make(InitialStateKind.ENTANGLED, amps=amps)
    assert report.k_value is None and report.lambda_spectrum_ok is None
    assert report.p_double == pytest.approx(2.0e-4, abs=1e-12)


def test_record_round_trip():
    report = make(InitialStateKind.ENTANGLED)
    record = report.to_record(coordinates={"scenario.alpha": 0.1})
    assert record["record"] == "scenario"
    assert ScenarioReport.from_record(record) == report
    with pytest.raises(ValueError):
        ScenarioReport.from_record({"record": "meta"})
