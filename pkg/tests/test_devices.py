import dataclasses
import math

import numpy as np
import pytest

from qdcsim.devices import (
    SCENARIO_NAMES,
    Scenario,
    build_hamiltonian,
    config_from_document,
    coupler_controls,
    flip_sign,
    get_scenario,
    run_scenario,
    scenario_catalog,
    switching_sweep,
)
from qdcsim.lattice import DeviceConfig, SiteLabel
from qdcsim.spin import SpinKet, SpinModelConfig, SpinQuantum

from oracles import coupler_by_hand, propagate

TAU = math.pi / 2


def test_catalog_has_all_families_with_defaults():
    catalog = scenario_catalog()
    assert tuple(s.name for s in catalog) == SCENARIO_NAMES
    by_name = {s.name: s for s in catalog}
    drain = by_name["coupler-drain"]
    assert drain.config.n_cols == 7 and drain.config.omega == 1.0
    assert drain.config.g == pytest.approx(math.sqrt(6)) and drain.config.kappa == pytest.approx(math.sqrt(6))
    assert by_name["coupler-source"].config.g == pytest.approx(math.sqrt(12))
    assert by_name["coupler-source"].config.kappa == 0
    assert by_name["spin-yy"].config.k == -4.0
    assert by_name["spin-yy"].expected_time == pytest.approx(TAU / math.sqrt(2))
    for s in catalog:
        assert s.expected_fidelity == 1.0


@pytest.mark.parametrize("n", [5, 7, 9])
def test_every_catalog_scenario_passes(n):
    for s in scenario_catalog(n=n):
        result = run_scenario(s)
        assert result.fidelity >= 1 - 1e-6, s.name
        assert result.passed
        np.testing.assert_allclose(result.trace.probabilities.sum(axis=1), 1, atol=1e-10)


def test_coupler_drain_n7_fig2():
    result = run_scenario(get_scenario("coupler-drain", n=7))
    assert result.fidelity >= 1 - 1e-6
    assert result.trace.times[-1] == pytest.approx(TAU)
    assert result.trace.probabilities[-1, 13] >= 1 - 1e-6  # d7 is the last basis entry


@pytest.mark.parametrize("n", [4, 6, 10])
def test_grid_source_any_n(n):
    assert run_scenario(get_scenario("grid-source", n=n)).fidelity == pytest.approx(1, abs=1e-10)


def test_chain_pst_n2():
    # the catalog's coupler entries need odd N > 3, so build this one directly
    s = Scenario("chain-pst", DeviceConfig("chain", 2), SiteLabel(1, 1), SiteLabel(1, 2), TAU, "two-site swap")
    assert run_scenario(s).fidelity == pytest.approx(1, abs=1e-12)


def test_grid_drain_even_n_brute_force():
    s = get_scenario("grid-drain", n=6)
    result = run_scenario(s)
    h = build_hamiltonian(s.config)
    u = propagate(h.matrix, TAU)
    brute = abs(u[h.index(SiteLabel(2, 6)), h.index(SiteLabel(1, 1))]) ** 2
    assert brute == pytest.approx(1, abs=1e-10)
    assert result.fidelity >= 1 - 1e-10


def test_spin_yy_k0_decoupled_rotation():
    cfg = SpinModelConfig(SpinQuantum(2), SpinQuantum(1), 1.0, 0.0, coupling_form="yy-product")
    s = Scenario("spin-yy", cfg, SpinKet(-1, -2), SpinKet(-1, 2), TAU, "x rotation of spin 1 only")
    assert run_scenario(s).fidelity == pytest.approx(1, abs=1e-12)


def test_spin_yy_sign_report():
    s = get_scenario("spin-yy")
    result = run_scenario(s)
    # the stated sign K = -4 omega already passes, so no flip is taken
    assert result.scenario.config.k == -4.0
    assert result.fidelity == pytest.approx(1, abs=1e-8)
    flipped = run_scenario(dataclasses.replace(flip_sign(s), allow_sign_flip=False))
    assert flipped.scenario.config.k == 4.0
    assert flipped.fidelity == pytest.approx(1, abs=1e-8)


def test_sign_flip_fallback_is_used_when_needed():
    # K = +1 omega at tau/sqrt(2) misses; the flipped sign misses equally, so the original is kept
    cfg = SpinModelConfig(SpinQuantum(2), SpinQuantum(1), 1.0, 1.0, coupling_form="yy-product")
    s = Scenario("x", cfg, SpinKet(-1, -2), SpinKet(1, 2), TAU / math.sqrt(2), "", allow_sign_flip=True)
    result = run_scenario(s)
    assert not result.passed
    assert result.scenario.config.k in (1.0, -1.0)


def test_chain_pst_periodicity():
    s = get_scenario("chain-pst", n=7)
    once = run_scenario(s).fidelity
    thrice = run_scenario(dataclasses.replace(s, expected_time=3 * TAU)).fidelity
    assert abs(once - thrice) < 1e-8


def test_coupler_drain_interference_locality():
    s = get_scenario("coupler-drain", n=7)
    result = run_scenario(s, steps=201)
    probs = result.trace.probabilities
    mid = probs[100]
    assert mid[:7].sum() > 0.05 and mid[7:].sum() > 0.05
    final = probs[-1]
    assert final[13] >= 1 - 1e-6
    assert final[:13].sum() < 1e-6


def test_scenario_validation():
    cfg = DeviceConfig("chain", 3)
    with pytest.raises(ValueError):
        Scenario("bad", cfg, SiteLabel(1, 1), SiteLabel(1, 3), 0.0, "")
    with pytest.raises(ValueError):
        Scenario("bad", cfg, SiteLabel(1, 1), SiteLabel(2, 3), 1.0, "")
    with pytest.raises(KeyError):
        get_scenario("nope")


def test_coupler_controls_endpoints():
    for n in (5, 7, 9):
        g, k = coupler_controls(n, 0.0)
        assert g == pytest.approx(math.sqrt((n * n - 1) / 4)) and k == 0
        g, k = coupler_controls(n, 1.0)
        assert g == pytest.approx(math.sqrt((n * n - 1) / 8)) and k == pytest.approx(g)


def test_grid_sweep_endpoints():
    rows = switching_sweep("grid", 5, [0.0, 1.0])
    assert rows[0].f_source == pytest.approx(1, abs=1e-10) and rows[0].f_drain < 1e-20
    assert rows[1].f_drain == pytest.approx(1, abs=1e-10) and rows[1].f_source < 1e-20


def test_grid_sweep_half_k():
    # K = omega/2 rotates the row spin by pi/2 at tau: the excitation splits evenly
    row = switching_sweep("grid", 5, [0.5])[0]
    assert row.f_source == pytest.approx(0.5, abs=1e-10)
    assert row.f_drain == pytest.approx(0.5, abs=1e-10)
    assert row.f_source < 1 and row.f_drain < 1


# frozen from the Taylor-series oracle on the hand-assembled coupler; they obey
# f_source = ((1-c^2)/(1+c^2))^2, f_drain = (2c/(1+c^2))^2 for both N
COUPLER_BASELINE = [
    (0.0, 1.0, 0.0),
    (0.25, 0.7785467128027699, 0.22145328719723287),
    (0.5, 0.36, 0.64),
    (0.75, 0.0784, 0.9216),
    (1.0, 0.0, 1.0),
]


@pytest.mark.parametrize("n", [5, 7])
def test_coupler_sweep_regression(n):
    controls = [c for c, _, _ in COUPLER_BASELINE]
    rows = switching_sweep("coupler", n, controls)
    for row, (c, fs, fd) in zip(rows, COUPLER_BASELINE):
        assert row.control == c
        assert row.f_source == pytest.approx(fs, abs=1e-10)
        assert row.f_drain == pytest.approx(fd, abs=1e-10)
        assert row.f_drain == pytest.approx((2 * c / (1 + c * c)) ** 2, abs=1e-10)


def test_coupler_sweep_baseline_is_oracle_consistent():
    for c, fs, fd in COUPLER_BASELINE[1:4]:
        g, k = coupler_controls(5, c)
        u = propagate(coupler_by_hand(5, g, k), TAU)
        assert abs(u[4, 0]) ** 2 == pytest.approx(fs, abs=1e-10)
        assert abs(u[9, 0]) ** 2 == pytest.approx(fd, abs=1e-10)


def test_sweep_errors():
    with pytest.raises(ValueError):
        switching_sweep("grid", 5, [])
    with pytest.raises(ValueError):
        switching_sweep("grid", 5, [math.nan])
    with pytest.raises(ValueError):
        switching_sweep("ladder", 5, [0.0])


def test_config_from_document_dispatch():
    assert isinstance(config_from_document({"device": "am-separable", "n_cols": 4}), SpinModelConfig)
    assert isinstance(config_from_document({"device": "grid", "n_cols": 4, "K": 1.0}), DeviceConfig)
