import math

import numpy as np
import pytest

from spillnet import (
    NegativeProductivityError,
    Trajectory,
    builtin_scenario,
    builtin_scenarios,
    detect_convergence,
    detect_transitions,
    growth_series,
    sector_growth_rate,
    simulate,
    solve_support_system,
    validate_model,
)

SQRT_HALF = math.sqrt(0.5)


def test_symmetric_two_cycle_closed_form(model_factory):
    model = model_factory([[0, 1], [1, 0]])
    traj = simulate(model, 20.0)
    np.testing.assert_allclose(traj.shares, 0.5, atol=1e-12)
    assert abs(traj.sector_growth[-1] - SQRT_HALF) < 1e-4
    np.testing.assert_allclose(traj.tech_growth[-1], SQRT_HALF, atol=1e-4)


def test_no_spillovers_linear_growth_exact(model_factory):
    # uniform shares by symmetry: q_i(t) = 1 + (S/2)^nu * t
    model = model_factory([[0, 0], [0, 0]], alpha=1.0)
    traj = simulate(model, 10.0)
    expected = np.repeat((1.0 + 0.5**0.5 * traj.times)[:, None], 2, axis=1)
    q = traj.qualities()
    np.testing.assert_allclose(q, expected, rtol=1e-10)
    assert traj.sector_growth[-1] < 0.1
    assert traj.sector_growth[-1] < traj.sector_growth[0]


def test_circular_chain_common_growth_constant(model_factory):
    model = model_factory(
        [[0, 0, 0, 1], [1, 0, 1, 0], [1, 0, 0, 0], [1, 1, 0, 0]], alpha=1.0
    )
    traj = simulate(model, 60.0)
    rates = traj.tech_growth[-1]
    assert np.all(rates > 0)
    assert rates.max() - rates.min() < 1e-6
    sols = solve_support_system(model.matrix, model.params)
    assert len(sols) == 1
    assert abs(traj.sector_growth[-1] - sols[0].growth_rate) < 1e-3 * sols[0].growth_rate


@pytest.mark.parametrize(
    "rows, alpha, q0",
    [
        ([[0, 0, 0, 1], [1, 0, 1, 0], [1, 0, 0, 0], [1, 1, 0, 0]], 1.0, [1, 1, 1, 1]),
        ([[3 / 4, 0, 0, 1], [1 / 2, 1 / 2, 0, 0], [0, 1 / 3, 0, 1], [0, 0, 3, 0]], 0.0, [1, 0.1, 0.1, 0.1]),
        ([[1, 1, 1, 1], [1, 1, 1, 1], [-1, 1, 1, 1], [1, 0, 1, 1]], 1.0, [1, 1, 1, 1]),
    ],
)
def test_scale_free_state_matches_raw_integration(model_factory, raw_rk4, rows, alpha, q0):
    # the (z, log-sum) field must be the exact rewrite of the raw dynamics
    model = model_factory(rows, alpha=alpha, q0=q0)
    traj = simulate(model, 5.0, step=1e-3, sample_every=5000)
    q_ref = raw_rk4(
        np.array(rows, float), q0, model.params.nu, alpha, model.params.s_total,
        5.0, 1e-3,
    )
    np.testing.assert_allclose(traj.z[-1], q_ref / q_ref.sum(), atol=1e-10)
    assert traj.logsum[-1] == pytest.approx(math.log(q_ref.sum()), abs=1e-10)


def test_qualities_monotone_under_nonnegative_field(rng, model_factory):
    for _ in range(20):
        n = int(rng.integers(2, 5))
        f = rng.uniform(0, 1, (n, n)) * (rng.uniform(0, 1, (n, n)) < 0.5)
        q0 = rng.uniform(0.1, 2.0, n)
        model = model_factory(f, alpha=float(rng.uniform(0, 1)), q0=q0)
        traj = simulate(model, 8.0, step=0.02)
        logq = np.where(traj.z > 0, np.log(np.maximum(traj.z, 1e-300)), -np.inf)
        logq = logq + traj.logsum[:, None]
        assert np.all(np.diff(logq, axis=0) >= -1e-9)
        assert np.all(np.diff(traj.logsum) >= -1e-12)
        # the integrator preserves the simplex exactly up to roundoff
        np.testing.assert_allclose(traj.z.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(traj.z >= -1e-12)
        assert np.isfinite(traj.logsum).all()


def test_consistency_check_halving_reduces_discrepancy_4x(model_factory):
    model = model_factory(
        [[0, 0, 0, 1], [1, 0, 1, 0], [1, 0, 0, 0], [1, 1, 0, 0]], alpha=1.0
    )

    def discrepancy(h):
        traj = simulate(model, 8.0, step=h, sample_every=1)
        gs = growth_series(traj)
        mid = 0.5 * (gs.sector_growth[:-1] + gs.sector_growth[1:])
        return np.abs(gs.logsum_rate - mid).max()

    ratio = discrepancy(0.02) / discrepancy(0.01)
    assert 3.2 < ratio < 4.8


def test_step_size_robustness_on_builtins():
    for scenario in builtin_scenarios():
        model = validate_model(scenario.matrix, scenario.params, scenario.q0)
        a = simulate(model, scenario.horizon, step=scenario.step)
        b = simulate(model, scenario.horizon, step=scenario.step / 2)
        assert np.abs(a.z[-1] - b.z[-1]).max() < 1e-6, scenario.name


def test_nonreceivers_lose_all_scientists(model_factory):
    # two separated cycles, the heavier one wins; the losing block receives
    # nothing from the winners so its shares collapse
    model = model_factory([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2], [0, 0, 2, 0]])
    traj = simulate(model, 60.0)
    conv = detect_convergence(traj, eps=1e-4, window=5.0)
    assert conv.converged
    assert traj.shares[-1][:2].max() < 1e-3


def test_sector_growth_weighted_average_examples():
    assert sector_growth_rate([1.0, 3.0], [0.2, 0.1]) == pytest.approx(0.125)
    # equal growth rates collapse the average onto that rate
    assert sector_growth_rate([0.3, 0.9, 2.0], [0.4, 0.4, 0.4]) == pytest.approx(0.4)
    # a single grower's weight pulls the average up to its rate
    for w in (0.5, 0.9, 0.999):
        avg = sector_growth_rate([w, 1 - w], [0.7, 0.0])
        assert avg < 0.7
        assert avg == pytest.approx(0.7 * w)


def test_growth_series_matches_logsum_differencing(model_factory):
    model = model_factory([[0, 1], [1, 0]], alpha=0.5)
    traj = simulate(model, 10.0, step=0.01, sample_every=1)
    gs = growth_series(traj)
    mid = 0.5 * (gs.sector_growth[:-1] + gs.sector_growth[1:])
    assert np.abs(gs.logsum_rate - mid).max() < 1e-5
    assert gs.interval_times.shape == (traj.times.size - 1,)


def test_undefined_growth_flagged_at_zero_quality(model_factory):
    model = model_factory([[0, 0], [0, 0]], alpha=1.0, q0=[1.0, 0.0])
    traj = simulate(model, 1.0)
    assert math.isnan(traj.tech_growth[0][1])
    assert not math.isnan(traj.tech_growth[-1][1])  # alpha lifts it off zero
    assert np.isfinite(traj.sector_growth).all()


def _synthetic_trajectory(times, shares):
    times = np.asarray(times, float)
    shares = np.asarray(shares, float)
    m, n = shares.shape
    z = shares.copy()
    return Trajectory(
        times=times,
        z=z,
        logsum=np.zeros(m),
        shares=shares,
        tech_growth=np.zeros((m, n)),
        sector_growth=np.zeros(m),
    )


def test_transition_debounce_suppresses_blips():
    times = np.arange(0.0, 10.0, 0.1)
    shares = np.tile([0.8, 0.2], (times.size, 1))
    # a 0.3-long blip toward technology 2, then a sustained switch at t = 5
    blip = (times >= 2.0) & (times < 2.3)
    shares[blip] = [0.2, 0.8]
    shares[times >= 5.0] = [0.2, 0.8]
    traj = _synthetic_trajectory(times, shares)
    events = detect_transitions(traj, theta=0.6, hold=1.0)
    assert len(events) == 1
    assert events[0].old_leaders == frozenset({0})
    assert events[0].new_leaders == frozenset({1})
    assert events[0].time == pytest.approx(5.0)


def test_constant_shares_no_events():
    times = np.arange(0.0, 5.0, 0.1)
    shares = np.tile([0.5, 0.3, 0.2], (times.size, 1))
    assert detect_transitions(_synthetic_trajectory(times, shares), theta=0.6) == []


def test_winner_from_start_no_events(model_factory):
    model = model_factory([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2], [0, 0, 2, 0]])
    traj = simulate(model, 40.0)
    assert detect_transitions(traj, theta=0.6, hold=1.0) == []


def test_convergence_symmetric_cycle(model_factory):
    traj = simulate(model_factory([[0, 1], [1, 0]]), 20.0)
    conv = detect_convergence(traj, eps=1e-4, window=5.0)
    assert conv.converged
    np.testing.assert_allclose(conv.shares, 0.5, atol=1e-9)
    assert conv.growth_rate == pytest.approx(SQRT_HALF, abs=1e-4)


def test_convergence_oneway_shares_settle_before_growth():
    scenario = builtin_scenario("fig12-oneway")
    model = validate_model(scenario.matrix, scenario.params, scenario.q0)
    traj = simulate(model, 50.0)
    conv = detect_convergence(traj, eps=3e-3, window=5.0)
    assert conv.shares_converged
    assert not conv.growth_converged  # rates still decaying toward zero
    idx = traj.times >= 25.0
    assert traj.sector_growth[-1] < traj.sector_growth[idx][0]
    assert conv.growth_rate > 0


def test_zero_initial_quality_sum_rejected(model_factory):
    model = model_factory([[0, 0], [0, 0]], alpha=1.0, q0=[0.0, 0.0])
    with pytest.raises(NegativeProductivityError):
        simulate(model, 1.0)


def test_blowup_error_carries_last_good_time():
    from spillnet import IntegrationBlowupError

    err = IntegrationBlowupError("boom", last_good_time=3.5)
    assert err.last_good_time == 3.5


def test_simulate_argument_validation(model_factory):
    model = model_factory([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        simulate(model, -1.0)
    with pytest.raises(ValueError):
        simulate(model, 1.0, step=0.0)
    with pytest.raises(ValueError):
        simulate(model, 1.0, sample_every=0)


@pytest.mark.parametrize(
    "t_end, step, sample_every",
    [
        (1.05, 0.01, 10),   # fractional remainder step
        (0.3, 0.1, 1),      # k*step lands one ulp past t_end
        (0.25, 0.1, 3),     # only the endpoints get sampled
        (10.0, 0.3, 7),
    ],
)
def test_final_time_always_sampled(model_factory, t_end, step, sample_every):
    model = model_factory([[0, 1], [1, 0]])
    traj = simulate(model, t_end, step=step, sample_every=sample_every)
    assert traj.times[-1] == t_end
    assert np.all(np.diff(traj.times) > 0)
