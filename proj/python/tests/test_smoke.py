import math

import pytest

import rabiheat


def test_spectrum_shape_and_ordering():
    sys = rabiheat.solve_junction(rabiheat.JunctionParams(delta=1.0, g=0.1), n_fock=20, n_levels=5)
    assert sys.omega.shape == (5,)
    assert all(b >= a for a, b in zip(sys.omega, sys.omega[1:]))
    assert sys.q_left.shape == (5, 5)
    assert sys.bohr(1, 0) == pytest.approx(sys.omega[1] - sys.omega[0])


def test_equilibrium_current_vanishes():
    res = rabiheat.evaluate_point(rabiheat.JunctionParams(delta=0.8, g=0.2), delta_t=0.0)
    assert abs(res.i_forward) < 1e-12
    assert res.positivity_ok


def test_forward_current_flows_from_hot_to_cold():
    res = rabiheat.evaluate_point(rabiheat.JunctionParams(delta=1.0, g=0.1), delta_t=0.2)
    assert res.i_forward > 0.0
    assert res.i_backward < 0.0
    assert res.i_forward_raw == pytest.approx(1e-3 * res.i_forward)


def test_kms_relation():
    t, w = 0.4, 0.7
    ratio = rabiheat.power_spectrum(w, 1e-3, t) / rabiheat.power_spectrum(-w, 1e-3, t)
    assert ratio == pytest.approx(math.exp(w / t), rel=1e-10)


def test_closed_forms():
    assert rabiheat.gstar_estimate(0.01) == pytest.approx(0.5, rel=1e-2)
    assert rabiheat.tls_current(1.0, 0.1, 0.1, 0.3, 0.3) == 0.0
    assert rabiheat.tls_rectification(0.0, 1.0, 0.3, 0.2) == 0.0


def test_psme_mode_and_bad_mode():
    p = rabiheat.JunctionParams(delta=1.0, g=0.05)
    res = rabiheat.evaluate_point(p, mode="psme")
    assert math.isfinite(res.rectification)
    with pytest.raises(ValueError):
        rabiheat.evaluate_point(p, mode="exact")


def test_invalid_parameters_raise():
    with pytest.raises(ValueError):
        rabiheat.JunctionParams(delta=-1.0)


def test_presets_run_end_to_end():
    names = rabiheat.preset_names()
    assert names
    cfg = rabiheat.preset(names[0])
    report = rabiheat.run(cfg, threads=2)
    assert isinstance(report, dict)
    assert report
