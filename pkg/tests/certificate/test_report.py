import math

import numpy as np
import pytest
from lorentzgas.certificate import (
    NonConvergenceReport,
    Provenance,
    certify_nonconvergence,
    default_horizon,
)
from lorentzgas.certificate.report import positive_runs
from lorentzgas.ensemble import TailBoundsEstimate
from lorentzgas.kinetic import DecayFit
from lorentzgas.serialization import decode_json, encode_json


def tail(c_low: float) -> TailBoundsEstimate:
    return TailBoundsEstimate(window=(2.0, 20.0), c_low=c_low, c_high=2.0, spread=None, n_points=10)


DECAY = DecayFit(c_fit=1.0, gamma_fit=1.0, residual=0.0, window=(0.0, 10.0), n_points=10)


def test_window_for_large_m() -> None:
    report = certify_nonconvergence(tail(1.0), DECAY, 1.0, 2, [16], horizon=10.0)

    assert report.m == 16  # noqa: PLR2004
    assert report.t_window is not None
    assert report.t_window[0] < 5.0 < report.t_window[1]
    assert report.margin_mid is not None
    assert report.margin_mid > 0
    assert report.t_star is None
    assert not report.schedule_exhausted


def test_first_feasible_m_of_schedule() -> None:
    report = certify_nonconvergence(tail(0.05), DECAY, 1.0, 2, [1, 2, 4, 8, 16, 32, 64], horizon=10.0)

    assert report.m == 64  # noqa: PLR2004
    assert report.min_feasible_m == 54  # noqa: PLR2004
    assert report.t_window is not None
    assert 1.0 < report.t_window[0] < report.t_window[1] <= 10.0  # noqa: PLR2004
    assert report.t_star == pytest.approx(4.5, abs=0.1)


def test_window_absent_for_small_m() -> None:
    report = certify_nonconvergence(tail(0.5), DECAY, 1.0, 2, [1], horizon=2.0)

    assert report.schedule_exhausted
    assert report.m is None
    assert report.t_window is None
    assert report.margin_mid is None
    assert report.critical_ratio < 1 / 3
    assert report.min_feasible_m == 3  # noqa: PLR2004


def test_empty_schedule() -> None:
    report = certify_nonconvergence(tail(1.0), DECAY, 1.0, 2, [], horizon=10.0)

    assert report.schedule_exhausted
    assert report.m is None


def test_tail_constant_must_be_positive() -> None:
    with pytest.raises(ValueError, match="positive"):
        certify_nonconvergence(tail(0.0), DECAY, 1.0, 2, [1])


def test_default_horizon() -> None:
    assert default_horizon(None, 1.0, 1.0, 2) == pytest.approx(10.0)
    assert default_horizon(4.5, 1.0, 1.0, 2) == pytest.approx(45.0)
    assert default_horizon(None, 100.0, 0.1, 2) == pytest.approx(100.0)
    assert default_horizon(0.01, 1.0, 1.0, 3) == pytest.approx(2.0)


def test_report_json_field_names() -> None:
    report = certify_nonconvergence(
        tail(1.0),
        DECAY,
        1.0,
        2,
        [16],
        horizon=10.0,
        provenance=Provenance(seeds=[1, 2], n_samples=100, nodes=32, modes=8),
    )

    payload = encode_json(report)

    for key in (b'"C1_emp"', b'"D"', b'"N_nodes"', b'"M_modes"', b'"t_window"', b'"margin_mid"'):
        assert key in payload
    decoded = decode_json(payload, NonConvergenceReport)
    assert decoded == report
    assert decoded.provenance.window == (2.0, 20.0)
    assert not math.isnan(decoded.horizon)


@pytest.mark.parametrize(
    ("mask", "expected"),
    [
        ([False, False], []),
        ([True, True, True], [(0, 2)]),
        ([False, True, True, False, True], [(1, 2), (4, 4)]),
        ([True, False, False, True, True, False], [(0, 0), (3, 4)]),
    ],
)
def test_positive_runs(mask: list[bool], expected: list[tuple[int, int]]) -> None:
    assert positive_runs(np.array(mask)) == expected
