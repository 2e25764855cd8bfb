"""Telemetry record, normalization, and cost accounting tests."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aqua.telemetry import (
    CSV_COLUMNS,
    CostParams,
    MissionReport,
    TelemetrySample,
    compute_errors,
    path_cost,
    report_from_json,
    report_to_json,
    rmse,
    summarize,
    telemetry_from_csv,
    telemetry_to_csv,
)
from aqua.vehicle import wrap_angle


def make_sample(t, e=(1.0, 0.0, 0.0, 0.0)):
    return TelemetrySample(
        t=t, ref=(0.0, 0.0, 0.0, 0.0), pose=tuple(-v for v in e),
        u=(0.1, 0.0, 0.0, 0.0), error=e, norm_error=tuple(abs(v) for v in e),
    )


def test_compute_errors_normalization():
    refs = [(10.0, 0.0, -5.0, 1.0)] * 3
    poses = [(0.0, 0.0, 0.0, 0.0), (5.0, 0.0, -2.5, 0.5), (9.0, 0.0, -4.5, 0.9)]
    errs, norm, unnorm = compute_errors(refs, poses, wrap_yaw=wrap_angle)
    assert errs[0] == pytest.approx((10.0, 0.0, -5.0, 1.0))
    assert norm[0] == pytest.approx((1.0, 0.0, 1.0, 1.0))
    assert norm[1] == pytest.approx((0.5, 0.0, 0.5, 0.5))
    assert norm[2] == pytest.approx((0.1, 0.0, 0.1, 0.1))
    assert unnorm == (1,)  # y starts at zero error: cannot normalize


def test_compute_errors_yaw_wrapped():
    errs, _, _ = compute_errors([(0.0, 0.0, 0.0, 3.0)], [(0.0, 0.0, 0.0, -3.0)],
                                wrap_yaw=wrap_angle)
    assert errs[0][3] == pytest.approx(6.0 - 2 * math.pi)


def test_compute_errors_rejects_mismatch():
    with pytest.raises(ValueError):
        compute_errors([(0, 0, 0, 0)], [])


def test_path_cost_hand_value():
    # Two steps, dt=0.5: ((1+4) + 0.1*(0.25)) + ((9) + 0.1*(1)) each times dt.
    errors = [(1.0, 2.0, 0.0, 0.0), (3.0, 0.0, 0.0, 0.0)]
    controls = [(0.5, 0.0, 0.0, 0.0), (1.0, 0.0, 0.0, 0.0)]
    j = path_cost(errors, controls, dt=0.5, params=CostParams(lam_u=0.1))
    assert j == pytest.approx(0.5 * (5.0 + 0.025) + 0.5 * (9.0 + 0.1))


def test_path_cost_zero_error_zero_cost():
    assert path_cost([(0.0,) * 4] * 10, [(0.0,) * 4] * 10, dt=0.1) == 0.0


@given(n=st.integers(1, 30), k=st.integers(1, 30), dt=st.floats(0.01, 1.0))
@settings(max_examples=100, deadline=None)
def test_path_cost_additive_over_concatenation(n, k, dt):
    errs = [(i * 0.1, -i * 0.2, 0.0, 0.05) for i in range(n + k)]
    ctrls = [(0.1, 0.2, 0.0, 0.0)] * (n + k)
    whole = path_cost(errs, ctrls, dt)
    split = path_cost(errs[:n], ctrls[:n], dt) + path_cost(errs[n:], ctrls[n:], dt)
    assert whole == pytest.approx(split, rel=1e-12)


def test_rmse_hand_value():
    errs = [(3.0, 0.0, 0.0, 0.0), (4.0, 0.0, 0.0, 0.0)]
    assert rmse(errs)[0] == pytest.approx(math.sqrt(12.5))


def test_summarize_shape():
    samples = [make_sample(i * 0.1) for i in range(5)]
    s = summarize(samples)
    assert s["n_samples"] == 5
    assert s["t_final"] == pytest.approx(0.4)
    assert s["rmse"]["x"] == pytest.approx(1.0)
    assert s["final_error"]["x"] == 1.0


def test_csv_round_trip_byte_stable():
    samples = [make_sample(i * 0.1, e=(1.0 / (i + 1), -0.5, 0.25, 0.01)) for i in range(20)]
    text = telemetry_to_csv(samples)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    back = telemetry_from_csv(text)
    assert telemetry_to_csv(back) == text
    assert back == samples


def test_report_json_round_trip():
    r = MissionReport(mission_id="m-1", psr=1.0, exesr=0.8, steps_total=5,
                      steps_succeeded=4, replans_used=1, duration_s=123.4,
                      final_error=(0.01, 0.02, 0.0, 0.001))
    text = report_to_json(r)
    assert report_from_json(text) == r
    assert report_to_json(report_from_json(text)) == text


def test_report_rejects_bad_rates():
    with pytest.raises(ValueError):
        MissionReport(mission_id="m", psr=1.5, exesr=0.0, steps_total=0,
                      steps_succeeded=0, replans_used=0, duration_s=0.0)
