"""Chain driver tests.

Independent oracles used here:
  - geometric-series closed forms for scalar affine chains,
  - the package Lyapunov solver (itself cross-checked against scipy in the
    numerics suite) for stationary covariances,
  - scipy.optimize for the potential minimizer,
  - central finite differences for Hessians,
  - Monte Carlo with CLT-width bands for draw statistics.
"""
from __future__ import annotations

from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize as scipy_minimize

from conftest import random_spd
from holmc import tolerances as tol
from holmc.errors import (
    MinimizerNotConverged,
    NotContractive,
    NotFactorizable,
)
from holmc.kernel4 import step_law
from holmc.kernel_general import transition_quadratic
from holmc.numerics import cholesky_with_jitter
from holmc.potentials import LogisticPotential, QuadraticPotential
from holmc.sampler import (
    ChainConfig,
    Trajectory,
    chain_rng,
    draw_mvn,
    minimize_potential,
    run_chain,
    stationary_law_affine,
)

A2 = np.array([[2.0, 0.3], [0.3, 1.0]])
B2 = np.array([0.5, -0.2])


def make_logistic(seed: int = 5, n: int = 30, d: int = 3) -> LogisticPotential:
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = (rng.random(n) > 0.5).astype(float)
    return LogisticPotential(X, y, 2.0)


class TestChainConfig:
    def test_rejects_zero_iterations(self):
        with pytest.raises(ValueError, match="N"):
            ChainConfig(P=4, gamma=1.0, eta=0.1, N=0, seed=1)

    @pytest.mark.parametrize("eta", [0.0, -0.1])
    def test_rejects_nonpositive_stepsize(self, eta):
        with pytest.raises(ValueError, match="eta"):
            ChainConfig(P=4, gamma=1.0, eta=eta, N=5, seed=1)

    def test_rejects_unknown_init_policy(self):
        with pytest.raises(ValueError, match="init_policy"):
            ChainConfig(P=4, gamma=1.0, eta=0.1, N=5, seed=1,
                        init_policy="warm")

    def test_rejects_burn_in_at_or_past_n(self):
        with pytest.raises(ValueError, match="burn_in"):
            ChainConfig(P=4, gamma=1.0, eta=0.1, N=5, seed=1, burn_in=5)

    def test_defaults(self):
        cfg = ChainConfig(P=4, gamma=1.0, eta=0.1, N=5, seed=1)
        assert cfg.init_policy == "minimizer_zero"
        assert cfg.jitter0 == tol.CHOLESKY_JITTER_BASE
        assert cfg.burn_in == 0


class TestChainRng:
    def test_counter_based_generator(self):
        assert type(chain_rng(1).bit_generator).__name__ == "Philox"

    def test_streams_differ_across_chain_indices(self):
        a = chain_rng(42, 0).standard_normal(8)
        b = chain_rng(42, 1).standard_normal(8)
        assert not np.array_equal(a, b)

    def test_stream_independent_of_sibling_creation(self):
        # stream 3 must be the same whether or not streams 0..2 were built
        direct = chain_rng(42, 3).standard_normal(8)
        _ = [chain_rng(42, k).standard_normal(2) for k in range(3)]
        again = chain_rng(42, 3).standard_normal(8)
        assert np.array_equal(direct, again)


class TestMinimizer:
    def test_quadratic_lands_on_linear_solve(self, rng):
        A = random_spd(rng, 4)
        b = rng.normal(size=4)
        theta = minimize_potential(QuadraticPotential(A, b))
        assert np.abs(theta - np.linalg.solve(A, b)).max() < 1e-9

    def test_logistic_gradient_below_tolerance(self):
        pot = make_logistic()
        theta = minimize_potential(pot)
        assert np.linalg.norm(pot.gradient(theta)) <= tol.NEWTON_GRAD_TOL

    def test_logistic_matches_scipy(self):
        pot = make_logistic()
        theta = minimize_potential(pot)
        ref = scipy_minimize(pot.value, np.zeros(pot.dim), jac=pot.gradient,
                             method="BFGS", options={"gtol": 1e-12}).x
        assert np.abs(theta - ref).max() < 1e-7

    def test_unreachable_tolerance_raises(self):
        pot = QuadraticPotential(A2, B2)
        with pytest.raises(MinimizerNotConverged):
            minimize_potential(pot, max_iter=0)


class TestHessian:
    def test_quadratic_returns_curvature_matrix(self):
        pot = QuadraticPotential(A2, B2)
        assert np.array_equal(pot.hessian(np.array([0.3, -1.0])), A2)

    def test_logistic_matches_central_differences(self):
        pot = make_logistic()
        theta = np.array([0.2, -0.4, 0.7])
        H = pot.hessian(theta)
        h = 1e-6
        fd = np.empty_like(H)
        for j in range(3):
            e = np.zeros(3)
            e[j] = h
            fd[:, j] = (pot.gradient(theta + e) - pot.gradient(theta - e)) / (2 * h)
        assert np.abs(H - fd).max() < 1e-7
        assert np.abs(H - H.T).max() < 1e-14

    def test_empty_design_is_pure_ridge(self):
        pot = LogisticPotential(np.zeros((0, 2)), np.zeros(0), 3.0)
        assert np.array_equal(pot.hessian(np.ones(2)), 3.0 * np.eye(2))


class TestDrawMvn:
    def test_zero_covariance_is_mean_only_at_jitter_scale(self):
        # the all-zero matrix lands on the first nonzero jitter rung ...
        _, delta = cholesky_with_jitter(np.zeros((3, 3)),
                                        jitter0=tol.CHOLESKY_JITTER_BASE)
        assert delta == tol.CHOLESKY_JITTER_BASE
        # ... so the draw deviates from the mean by O(sqrt(jitter)) only
        mean = np.array([1.0, -2.0, 0.5])
        rng = np.random.default_rng(3)
        samples = np.array([draw_mvn(mean, np.zeros((3, 3)), rng)
                            for _ in range(500)])
        dev = samples - mean
        assert np.abs(dev).max() < 6e-3
        assert np.allclose(dev.std(axis=0), 1e-3, rtol=0.3)

    def test_scalar_variance_within_clt_band(self):
        rng = np.random.default_rng(8)
        draws = np.array([draw_mvn(np.zeros(1), np.eye(1), rng)[0]
                          for _ in range(100_000)])
        assert abs(draws.var() - 1.0) < 0.02

    def test_fixed_seed_reproducible(self):
        cov = random_spd(np.random.default_rng(1), 3)
        a = draw_mvn(np.zeros(3), cov, np.random.default_rng(99))
        b = draw_mvn(np.zeros(3), cov, np.random.default_rng(99))
        assert a.tobytes() == b.tobytes()

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError, match="covariance"):
            draw_mvn(np.zeros(3), np.eye(2), np.random.default_rng(0))

    def test_unfixable_covariance_propagates(self):
        cov = np.diag([1.0, -1.0])
        with pytest.raises(NotFactorizable):
            draw_mvn(np.zeros(2), cov, np.random.default_rng(0))


class TestRunChain:
    def test_single_step_free_dynamics_stays_put(self):
        ker = transition_quadratic(4, 1.0, 1e-3, d=2)
        cfg = ChainConfig(P=4, gamma=1.0, eta=1e-3, N=1, seed=3,
                          init_policy="standard_normal")
        tr = run_chain(ker, cfg, d=2)
        gap = np.linalg.norm(tr.states[0] - tr.initial_state)
        assert gap <= 3.0 * np.sqrt(np.trace(ker.Sigma))

    def test_minimizer_zero_init_layout(self):
        pot = QuadraticPotential(A2, B2)
        ker = transition_quadratic(4, 1.0, 0.05, A=A2, b=B2)
        cfg = ChainConfig(P=4, gamma=1.0, eta=0.05, N=1, seed=3)
        tr = run_chain(ker, cfg, potential=pot)
        assert np.abs(tr.initial_state[:2] - np.linalg.solve(A2, B2)).max() < 1e-9
        assert np.array_equal(tr.initial_state[2:], np.zeros(6))

    def test_minimizer_zero_without_potential_rejected(self):
        ker = transition_quadratic(4, 1.0, 0.05, d=2)
        cfg = ChainConfig(P=4, gamma=1.0, eta=0.05, N=1, seed=3)
        with pytest.raises(ValueError, match="potential"):
            run_chain(ker, cfg, d=2)

    def test_affine_and_callable_providers_share_noise(self):
        # same seed, same step law from two engines: trajectories agree to
        # the cross-engine mean accuracy, far below the noise scale
        pot = QuadraticPotential(A2, B2)
        ker = transition_quadratic(4, 1.0, 0.05, A=A2, b=B2)
        cfg = ChainConfig(P=4, gamma=1.0, eta=0.05, N=40, seed=11)
        tr_affine = run_chain(ker, cfg, potential=pot)
        tr_callable = run_chain(lambda x: step_law(x, pot, 1.0, 0.05), cfg,
                                potential=pot)
        assert np.abs(tr_affine.states - tr_callable.states).max() < 1e-9

    def test_tail_half_covariance_matches_lyapunov(self):
        gamma, eta = 3.0, 0.2
        pot = QuadraticPotential(A2, B2)
        ker = transition_quadratic(4, gamma, eta, A=A2, b=B2)
        _, S_inf = stationary_law_affine(ker)
        cfg = ChainConfig(P=4, gamma=gamma, eta=eta, N=10_000, seed=2026)
        tr = run_chain(ker, cfg, potential=pot)
        emp = np.cov(tr.states[5000:].T)
        rel = np.linalg.norm(emp - S_inf) / np.linalg.norm(S_inf)
        assert rel < 0.10

    def test_same_seed_identical_bytes_distinct_seeds_differ(self):
        pot = QuadraticPotential(A2, B2)
        ker = transition_quadratic(4, 1.0, 0.05, A=A2, b=B2)
        cfg = ChainConfig(P=4, gamma=1.0, eta=0.05, N=25, seed=7)
        one = run_chain(ker, cfg, potential=pot)
        two = run_chain(ker, cfg, potential=pot)
        other = run_chain(
            ker,
            ChainConfig(P=4, gamma=1.0, eta=0.05, N=25, seed=8),
            potential=pot,
        )
        assert one.states.tobytes() == two.states.tobytes()
        assert one.rng_fingerprint == two.rng_fingerprint
        assert one.states.tobytes() != other.states.tobytes()
        assert one.rng_fingerprint != other.rng_fingerprint

    def test_chain_index_switches_stream_only(self):
        pot = QuadraticPotential(A2, B2)
        ker = transition_quadratic(4, 1.0, 0.05, A=A2, b=B2)
        cfg = ChainConfig(P=4, gamma=1.0, eta=0.05, N=25, seed=7)
        zero = run_chain(ker, cfg, potential=pot, chain_index=0)
        three = run_chain(ker, cfg, potential=pot, chain_index=3)
        assert zero.states.tobytes() != three.states.tobytes()
        assert np.array_equal(zero.initial_state, three.initial_state)

    def test_provider_error_carries_iteration_index(self):
        calls = {"n": 0}

        def flaky(x):
            if calls["n"] == 2:
                raise NotFactorizable("synthetic failure")
            calls["n"] += 1
            return x, np.eye(x.size)

        cfg = ChainConfig(P=4, gamma=1.0, eta=0.05, N=10, seed=1,
                          init_policy="standard_normal")
        with pytest.raises(NotFactorizable, match="iteration 2"):
            run_chain(flaky, cfg, d=1)

    def test_non_provider_rejected(self):
        cfg = ChainConfig(P=4, gamma=1.0, eta=0.05, N=1, seed=1,
                          init_policy="standard_normal")
        with pytest.raises(TypeError, match="provider"):
            run_chain("not a kernel", cfg, d=1)

    def test_trajectory_views(self):
        pot = QuadraticPotential(A2, B2)
        ker = transition_quadratic(4, 1.0, 0.05, A=A2, b=B2)
        cfg = ChainConfig(P=4, gamma=1.0, eta=0.05, N=10, seed=7, burn_in=4)
        tr = run_chain(ker, cfg, potential=pot)
        assert tr.states.shape == (10, 8)
        assert np.array_equal(tr.theta, tr.states[:, :2])
        assert np.array_equal(tr.kept_theta, tr.states[4:, :2])

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**63 - 1))
    def test_determinism_over_seeds(self, seed):
        ker = transition_quadratic(4, 1.0, 0.05, d=1)
        cfg = ChainConfig(P=4, gamma=1.0, eta=0.05, N=5, seed=seed,
                          init_policy="standard_normal")
        assert (run_chain(ker, cfg, d=1).states.tobytes()
                == run_chain(ker, cfg, d=1).states.tobytes())


class TestStationaryLaw:
    def test_zero_transition_returns_inputs(self):
        Sigma = random_spd(np.random.default_rng(2), 3)
        c = np.array([1.0, -2.0, 0.5])
        kernel = SimpleNamespace(T=np.zeros((3, 3)), c=c, Sigma=Sigma)
        m, S = stationary_law_affine(kernel)
        assert np.abs(m - c).max() < 1e-14
        assert np.abs(S - Sigma).max() < 1e-14

    def test_scalar_geometric_chain(self):
        kernel = SimpleNamespace(T=np.array([[0.5]]), c=np.array([1.0]),
                                 Sigma=np.array([[0.75]]))
        m, S = stationary_law_affine(kernel)
        assert abs(m[0] - 2.0) < 1e-12
        assert abs(S[0, 0] - 1.0) < 1e-12

    def test_fixed_point_residuals(self):
        ker = transition_quadratic(4, 1.0, 0.1, A=A2, b=B2)
        m, S = stationary_law_affine(ker)
        scale = max(1.0, np.linalg.norm(S))
        assert np.abs(ker.T @ m + ker.c - m).max() <= 1e-10
        assert (np.linalg.norm(ker.T @ S @ ker.T.T + ker.Sigma - S)
                <= tol.LYAPUNOV_RESIDUAL_RTOL * scale)

    def test_not_contractive_raises(self):
        kernel = SimpleNamespace(T=np.eye(2), c=np.zeros(2), Sigma=np.eye(2))
        with pytest.raises(NotContractive):
            stationary_law_affine(kernel)

    def test_long_run_moments_match(self):
        gamma, eta = 3.0, 0.2
        pot = QuadraticPotential(A2, B2)
        ker = transition_quadratic(4, gamma, eta, A=A2, b=B2)
        m_inf, S_inf = stationary_law_affine(ker)
        cfg = ChainConfig(P=4, gamma=gamma, eta=eta, N=20_000, seed=17)
        tail = run_chain(ker, cfg, potential=pot).states[10_000:]
        assert np.abs(tail.mean(axis=0) - m_inf).max() < 0.1
        assert np.abs(np.diag(np.cov(tail.T)) / np.diag(S_inf) - 1.0).max() < 0.15

    def test_mean_recursion_decays_geometrically(self):
        # analytic mean propagation, no sampling noise; the per-run
        # geometric-mean ratio must respect the spectral radius bound
        ker = transition_quadratic(4, 1.0, 0.1, A=A2, b=B2)
        m_inf, _ = stationary_law_affine(ker)
        rho = max(abs(np.linalg.eigvals(ker.T)))
        x = np.zeros(8)
        x[:2] = [5.0, -3.0]
        start = np.linalg.norm(x - m_inf)
        steps = 400
        for _ in range(steps):
            x = ker.T @ x + ker.c
        ratio = (np.linalg.norm(x - m_inf) / start) ** (1.0 / steps)
        assert ratio <= rho + 0.05
