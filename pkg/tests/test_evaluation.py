import json
import os

import pytest

from muse_ecc.code import CodeError
from muse_ecc.codecs import get_codec
from muse_ecc.evaluation import (CampaignConfig, EvaluationReport, FaultModel, WeightTally,
                                 inject_into_image, run_bit_error_sweep, run_symbol_error_sweep,
                                 series_csv, wilson_interval)


def small(codec="muse7264", **kw):
    base = dict(weights=(2, 3), patterns_per_weight=40, errors_per_pattern=10, seed=5)
    base.update(kw)
    return CampaignConfig(codec, **base)


def test_same_seed_same_csv():
    assert run_bit_error_sweep(small()).to_csv() == run_bit_error_sweep(small()).to_csv()
    assert run_bit_error_sweep(small()).to_csv() != run_bit_error_sweep(small(seed=6)).to_csv()


def test_worker_count_does_not_change_results():
    one = run_bit_error_sweep(small(workers=1))
    two = run_bit_error_sweep(small(workers=2))
    assert one.to_csv() == two.to_csv()


def test_tallies_add_up():
    rep = run_bit_error_sweep(small())
    for row in rep.rows:
        assert row.samples == 400
        assert row.silent + row.unused + row.aliased == row.samples
        assert 0 <= row.check_caught <= row.aliased
        for mode in ("raw_alias", "contradiction_check", "half_alias"):
            assert 0 <= row.alias_free_rate(mode) <= 100
            assert row.detection_rate(mode) <= row.alias_free_rate(mode) + 1e-9
        assert row.alias_free_rate("raw_alias") <= row.alias_free_rate("contradiction_check")


def test_small_weight_sets_are_swept_exhaustively():
    rep = run_symbol_error_sweep(CampaignConfig("rs4032", (2,), 100, 3))
    assert rep.rows[0].samples == 45 * 3


def test_secded_even_weights_never_alias():
    rep = run_bit_error_sweep(CampaignConfig("hamming7264", (2, 4), 200, 5))
    assert rep.rate(2) == rep.rate(4) == 100.0


def test_baselines_ignore_half_alias():
    rep = run_symbol_error_sweep(CampaignConfig("rs8064", (2,), 100, 20))
    row = rep.rows[0]
    assert row.alias_free_rate("half_alias") == row.alias_free_rate("raw_alias")


def test_report_json_round_trip():
    rep = run_bit_error_sweep(small())
    back = EvaluationReport.from_json(rep.to_json())
    assert back.to_csv() == rep.to_csv()
    doc = json.loads(rep.to_json())
    assert set(doc["rates"]) == {"2", "3"}
    text = series_csv([rep, back])
    assert text.splitlines()[0] == "weight,muse7264,muse7264"
    assert len(text.splitlines()) == 3


def test_balanced_average():
    rep = EvaluationReport("x", "bit", "raw_alias", 0, [
        WeightTally(2, 10, unused=10), WeightTally(3, 10, aliased=10),
        WeightTally(4, 10, unused=10)])
    assert rep.average() == pytest.approx(200 / 3)
    assert rep.balanced_average() == 50


def test_wilson_interval_brackets_the_estimate():
    lo, hi = wilson_interval(78, 100)
    assert lo < 78 < hi
    assert wilson_interval(100, 100)[1] == pytest.approx(100)


def test_config_validation():
    with pytest.raises(CodeError):
        CampaignConfig("muse7264", classification="other")
    with pytest.raises(CodeError):
        CampaignConfig("muse7264", weights=())
    with pytest.raises(CodeError):
        run_symbol_error_sweep(CampaignConfig("rs4032", (11,)))


def test_image_injection_single_bit_faults_are_corrected():
    image = os.urandom(8 * 300)
    codec = get_codec("muse7264")
    out = inject_into_image(image, codec, FaultModel("bit", 1, 0.5), seed=2)
    assert out.data == image
    assert out.tallies["corrected"] == len(out.records) > 0
    assert out.tallies["miscorrected"] == out.tallies["silent"] == 0


def test_image_injection_counts_multi_bit_outcomes():
    image = bytes(range(256)) * 8
    out = inject_into_image(image, get_codec("hamming7264"), FaultModel("bit", 3, 1.0), seed=1)
    assert sum(out.tallies.values()) == len(image) // 8
    assert out.tallies["detected"] > 0 and out.tallies["miscorrected"] > 0


def test_image_injection_framing():
    with pytest.raises(CodeError):
        inject_into_image(b"abc", get_codec("muse7264"), FaultModel())
    with pytest.raises(CodeError):
        FaultModel("row")
