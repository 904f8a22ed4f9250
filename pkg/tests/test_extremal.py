"""Quasi-extremal trials and the derivative-free constant estimation."""

import numpy as np
import pytest

from hardylp.extremal import (
    ESTIMATE_IDENTITIES,
    estimate_constant,
    evaluate_trial,
    quasi_extremal,
)
from hardylp.hardy import fractional_hardy_quotient
from hardylp.spectral_core import boundary_decay, make_grid

GAUSS_QUOTIENT = 1.1547005383792517  # 2/sqrt(3), radial quadrature oracle


@pytest.fixture(scope="module")
def grid3f():
    return make_grid(3, 64, 20.0)


# --- quasi-extremal family -------------------------------------------------


def test_quasi_extremal_grid_too_coarse():
    g = make_grid(3, 32, 20.0)  # 8h = L/4: cutoffs collapse
    with pytest.raises(ValueError, match="collapse"):
        quasi_extremal(g, 1.0, 2.0, 0.2)


def test_quasi_extremal_rejects_bad_exponent(grid3f):
    with pytest.raises(ValueError):
        quasi_extremal(grid3f, 1.0, 2.0, 0.6)  # a <= 0
    with pytest.raises(ValueError):
        quasi_extremal(grid3f, 0.0, 2.0, -0.1)  # a >= d/q


def test_quasi_extremal_large_epsilon_small_quotient(grid3f):
    # a -> 0: nearly a smooth bump, quotient well below the near-extremal one
    bump = quasi_extremal(grid3f, 1.0, 2.0, 0.45)
    near = quasi_extremal(grid3f, 1.0, 2.0, 0.05)
    q_bump = fractional_hardy_quotient(bump, 1.0, 2.0).quotient
    q_near = fractional_hardy_quotient(near, 1.0, 2.0).quotient
    assert q_bump < q_near


def test_quasi_extremal_quotient_increases_as_epsilon_drops(grid3f):
    values = []
    for eps in (0.4, 0.2, 0.1):
        f = quasi_extremal(grid3f, 1.0, 2.0, eps)
        values.append(fractional_hardy_quotient(f, 1.0, 2.0).quotient)
    assert values[0] < values[1] < values[2]


def test_quasi_extremal_amplitude_invariance(grid3f):
    f = quasi_extremal(grid3f, 1.0, 2.0, 0.2)
    base = fractional_hardy_quotient(f, 1.0, 2.0).quotient
    scaled = fractional_hardy_quotient(f.with_values(11.0 * f.values), 1.0, 2.0)
    assert scaled.quotient == pytest.approx(base, rel=1e-12)


# --- estimation ---------------------------------------------------------------


def test_estimate_budget_one_is_default_gaussian(grid3f):
    est = estimate_constant("fractional", 3, 1.0, 2.0, budget=1, n=64)
    assert est.evaluations == 1
    assert est.params["family"] == "gaussian"
    assert est.best == pytest.approx(GAUSS_QUOTIENT, rel=0.02)


def test_estimate_monotone_in_budget():
    prev = 0.0
    for budget in (1, 10, 30, 60):
        est = estimate_constant("fractional", 3, 1.0, 2.0, budget=budget, n=32)
        assert est.best >= prev
        prev = est.best


def test_estimate_reports_trend(grid3f):
    est = estimate_constant("fractional", 3, 1.0, 2.0, budget=8, n=32)
    assert [t["n"] for t in est.trend] == [32, 64]
    assert all(np.isfinite(t["best"]) for t in est.trend)


def test_estimate_replayable(grid3f):
    est = estimate_constant("fractional", 3, 1.0, 2.0, budget=25, n=32)
    replay = evaluate_trial(
        "fractional", 3, 1.0, 2.0, est.params, est.n, est.L, est.seed
    )
    assert replay == pytest.approx(est.best, rel=1e-12)


def test_estimate_witness_respects_decay_rule(grid3f):
    from hardylp.extremal import _trial_field

    est = estimate_constant("fractional", 3, 1.0, 2.0, budget=100, n=64)
    grid = make_grid(3, 64, 20.0)
    witness = _trial_field(grid, 1.0, 2.0, est.seed, est.params)
    if est.params["family"] != "random-band-limited":
        assert boundary_decay(witness) < 1e-7


def test_estimate_rejects_bad_identity():
    with pytest.raises(ValueError):
        estimate_constant("classical", 3, 1.0, 2.0, budget=4)
    with pytest.raises(ValueError):
        estimate_constant("refined", 3, 0.5, 2.0, budget=4)  # refined needs q > 2


def test_estimate_other_identities_run():
    for identity, q in (("besov", 2.0), ("refined", 4.0)):
        est = estimate_constant(identity, 2, 0.3, q, budget=5, n=64)
        assert identity in ESTIMATE_IDENTITIES
        assert est.best > 0
