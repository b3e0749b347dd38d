import math

import pytest

import momentflow as mf


def test_version():
    assert mf.__version__ == mf.version()


def test_order2_bracket():
    assert mf.bracket(0, 2, 2, 2) == "4G^{1,2}"


def test_coherent_state_saturates():
    g = mf.coherent_moments(0.3, -0.1, hbar=0.5, n_max=4)
    assert g["G_0_2"] == pytest.approx(0.25)
    assert g["G_0_4"] == pytest.approx(3 * 0.25**2)
    assert mf.uncertainty_margin(g["G_0_2"], g["G_1_2"], g["G_2_2"], 0.5) == pytest.approx(0.0, abs=1e-14)


def test_squeezed_state_saturates():
    g = mf.squeezed_moments([0.3, -0.2, 0.1], 0.0, 0.0, 2, hbar=1.0)
    assert mf.uncertainty_margin(g["G_0_2"], g["G_1_2"], g["G_2_2"]) == pytest.approx(0.0, abs=1e-12)


def test_simulate_harmonic_coherent_is_stationary():
    out = mf.simulate({"model": "harmonic", "n_max": 2, "time": {"t0": 0, "t1": 2 * math.pi, "samples": 11}})
    cols = out["trajectory"]["columns"]
    assert out["trajectory"]["complete"]
    assert len(cols["t"]) == 11
    assert max(abs(v - 0.5) for v in cols["G_0_2"]) < 1e-8
    assert cols["q"][-1] == pytest.approx(1.0, abs=1e-6)


def test_compare_quartic():
    rep = mf.compare({"model": "quartic", "n_max": 3, "oracle": {"D": 60}, "time": {"t1": 1.0, "samples": 11}})
    assert rep["moments"]["q"]["max"] < 1e-2
    assert "improvement_ratio" in rep["adiabatic"]


def test_order_check_harmonic_is_exact():
    assert mf.order_check({"model": "harmonic"})["verdict"] == "exact"


def test_errors_are_typed():
    with pytest.raises(mf.ConfigError, match="paramz"):
        mf.simulate({"paramz": {}})
    with pytest.raises(mf.MomentflowError):
        mf.simulate({"model": "duffing"})
    with pytest.raises(mf.DomainError):
        mf.simulate({"initial": {"type": "moments", "moments": {"G_0_2": 0.01, "G_1_2": 0.0, "G_2_2": 0.01}}})
