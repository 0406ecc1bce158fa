"""Diagnostics tests.

Independent oracles used here:
  - hand-evaluated scalar conjugate posterior (exact fractions),
  - 1-d and simultaneous-diagonalization closed forms for Gaussian W2,
  - numpy least squares for the flat-prior limit,
  - Monte Carlo draws from known Gaussians,
  - exact power laws for slope fits.
"""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from conftest import random_spd
from holmc import tolerances as tol
from holmc.diagnostics import (
    GaussianLaw,
    SlopeFit,
    W2Curve,
    classification_accuracy,
    default_checkpoints,
    fit_gaussian,
    fit_order_slope,
    ridge_posterior,
    w2_gaussians,
    w2_trace,
)
from holmc.errors import (
    DegenerateFit,
    EmptyTestSet,
    NonBinaryTarget,
    NonPositiveError,
    NotPSD,
    SingularPrior,
)
from holmc.sampler import Trajectory


def make_trajectory(theta: np.ndarray) -> Trajectory:
    theta = np.atleast_2d(np.asarray(theta, dtype=float))
    return Trajectory(
        states=theta,
        initial_state=theta[0],
        d=theta.shape[1],
        burn_in=0,
        rng_fingerprint="synthetic",
    )


class TestGaussianLaw:
    def test_accepts_and_symmetrizes(self):
        law = GaussianLaw([1.0, 2.0], [[2.0, 0.5 + 1e-14], [0.5, 1.0]])
        assert law.dim == 2
        assert np.array_equal(law.covariance, law.covariance.T)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            GaussianLaw([0.0, 0.0], [[1.0, 0.3], [0.0, 1.0]])

    def test_rejects_indefinite(self):
        with pytest.raises(NotPSD):
            GaussianLaw([0.0, 0.0], [[1.0, 0.0], [0.0, -0.1]])

    def test_accepts_within_negative_band(self):
        law = GaussianLaw([0.0, 0.0], np.diag([1.0, -0.5e-10]))
        assert law.dim == 2

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            GaussianLaw([0.0, 0.0], np.eye(3))


class TestRidgePosterior:
    def test_scalar_hand_values(self):
        law = ridge_posterior(
            np.array([[1.0]]), np.array([2.0]),
            prior_cov=np.array([[10.0]]), noise_var=1.0,
        )
        assert abs(law.mean[0] - 20.0 / 11.0) < 1e-14
        assert abs(law.covariance[0, 0] - 10.0 / 11.0) < 1e-14

    def test_zero_design_returns_prior(self):
        prior = random_spd(np.random.default_rng(0), 3)
        law = ridge_posterior(np.zeros((5, 3)), np.zeros(5), prior_cov=prior,
                              noise_var=2.0)
        assert np.abs(law.mean).max() < 1e-14
        assert np.abs(law.covariance - prior).max() < 1e-12

    def test_default_prior_is_ten_eye(self):
        law = ridge_posterior(np.zeros((2, 4)), np.zeros(2))
        assert np.abs(law.covariance - 10.0 * np.eye(4)).max() < 1e-10

    def test_information_never_hurts(self, rng):
        X = rng.normal(size=(20, 3))
        y = rng.normal(size=20)
        prior = random_spd(rng, 3)
        law = ridge_posterior(X, y, prior_cov=prior, noise_var=0.5)
        gap = np.linalg.eigvalsh(prior - law.covariance)
        assert gap.min() > -1e-12

    def test_flat_prior_limit_is_least_squares(self, rng):
        X = rng.normal(size=(40, 3))
        y = rng.normal(size=40)
        law = ridge_posterior(X, y, prior_cov=1e8 * np.eye(3), noise_var=1.0)
        ls = np.linalg.lstsq(X, y, rcond=None)[0]
        assert np.abs(law.mean - ls).max() < 1e-4 * max(1.0, np.abs(ls).max())

    def test_singular_prior_rejected(self):
        with pytest.raises(SingularPrior):
            ridge_posterior(np.ones((2, 2)), np.ones(2),
                            prior_cov=np.zeros((2, 2)))

    def test_nonpositive_noise_rejected(self):
        with pytest.raises(NonPositiveError):
            ridge_posterior(np.ones((2, 2)), np.ones(2), noise_var=0.0)


class TestW2Gaussians:
    def test_identical_laws_zero(self, rng):
        # the trace gap carries eps-level rounding; the square root puts
        # the observable floor near sqrt(eps)
        cov = random_spd(rng, 3)
        law = GaussianLaw(rng.normal(size=3), cov)
        assert w2_gaussians(law, law) < 1e-7

    def test_scalar_closed_form(self):
        g1 = GaussianLaw([0.0], [[1.0]])
        g2 = GaussianLaw([1.0], [[4.0]])
        # 1-d: W2^2 = (dm)^2 + (sigma1 - sigma2)^2 = 1 + 1
        assert abs(w2_gaussians(g1, g2) - np.sqrt(2.0)) < 1e-12

    def test_commuting_covariances_eigenwise(self, rng):
        # diagonal covariances commute; W2^2 = |dm|^2 + sum (sqrt l1 - sqrt l2)^2
        l1 = rng.uniform(0.5, 2.0, size=4)
        l2 = rng.uniform(0.5, 2.0, size=4)
        m1, m2 = rng.normal(size=4), rng.normal(size=4)
        expected = np.sqrt(
            np.sum((m1 - m2) ** 2) + np.sum((np.sqrt(l1) - np.sqrt(l2)) ** 2)
        )
        got = w2_gaussians(GaussianLaw(m1, np.diag(l1)),
                           GaussianLaw(m2, np.diag(l2)))
        assert abs(got - expected) < 1e-12

    def test_symmetry(self, rng):
        for _ in range(20):
            g1 = GaussianLaw(rng.normal(size=3), random_spd(rng, 3))
            g2 = GaussianLaw(rng.normal(size=3), random_spd(rng, 3))
            assert abs(w2_gaussians(g1, g2) - w2_gaussians(g2, g1)) < 1e-10

    def test_triangle_inequality_on_seeded_triples(self):
        rng = np.random.default_rng(123)
        for _ in range(100):
            laws = [GaussianLaw(rng.normal(size=2), random_spd(rng, 2))
                    for _ in range(3)]
            d01 = w2_gaussians(laws[0], laws[1])
            d12 = w2_gaussians(laws[1], laws[2])
            d02 = w2_gaussians(laws[0], laws[2])
            assert d02 <= d01 + d12 + 1e-8

    def test_rank_deficient_covariances(self):
        g1 = GaussianLaw([0.0, 0.0], np.diag([1.0, 0.0]))
        g2 = GaussianLaw([3.0, 4.0], np.diag([1.0, 0.0]))
        assert abs(w2_gaussians(g1, g2) - 5.0) < 1e-8

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            w2_gaussians(GaussianLaw([0.0], [[1.0]]),
                         GaussianLaw([0.0, 0.0], np.eye(2)))

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_nonnegative(self, seed):
        rng = np.random.default_rng(seed)
        g1 = GaussianLaw(rng.normal(size=2), random_spd(rng, 2))
        g2 = GaussianLaw(rng.normal(size=2), random_spd(rng, 2))
        assert w2_gaussians(g1, g2) >= 0.0


class TestFitGaussian:
    def test_recovers_moments(self):
        rng = np.random.default_rng(5)
        cov = np.array([[2.0, 0.7], [0.7, 1.0]])
        mean = np.array([1.0, -2.0])
        samples = rng.multivariate_normal(mean, cov, size=60_000)
        law = fit_gaussian(samples)
        assert np.abs(law.mean - mean).max() < 0.05
        assert np.abs(law.covariance - cov).max() < 0.05

    def test_too_few_samples(self):
        with pytest.raises(DegenerateFit):
            fit_gaussian(np.zeros((3, 3)))

    def test_ridge_applied(self):
        samples = np.zeros((10, 2))
        law = fit_gaussian(samples)
        assert np.abs(law.covariance
                      - tol.W2_EIGENVALUE_RIDGE * np.eye(2)).max() < 1e-18


class TestW2Trace:
    def target(self) -> GaussianLaw:
        return GaussianLaw([0.5, -1.0], np.array([[1.5, 0.4], [0.4, 0.8]]))

    def iid_trajectories(self, n: int = 10_000) -> dict:
        target = self.target()
        return {
            seed: make_trajectory(
                np.random.default_rng(seed).multivariate_normal(
                    target.mean, target.covariance, size=n
                )
            )
            for seed in (1, 2, 3)
        }

    def test_iid_target_samples_converge(self):
        curve = w2_trace(self.iid_trajectories(), self.target())
        assert curve.mean[-1] <= 0.1

    def test_monotone_trend_on_iid_samples(self):
        curve = w2_trace(self.iid_trajectories(), self.target())
        rho = stats.spearmanr(curve.checkpoints, curve.mean).statistic
        assert rho <= -0.8

    def test_constant_trajectory_bounded_below_by_mean_gap(self):
        target = self.target()
        const = {s: make_trajectory(np.tile([2.0, 1.0], (500, 1)))
                 for s in (0, 1)}
        curve = w2_trace(const, target)
        gap = np.linalg.norm(np.array([2.0, 1.0]) - target.mean)
        assert (curve.per_seed >= gap - 1e-6).all()

    def test_short_checkpoints_skipped_and_recorded(self):
        trajs = {s: make_trajectory(np.random.default_rng(s).normal(size=(50, 3)))
                 for s in (0, 1)}
        target = GaussianLaw(np.zeros(3), np.eye(3))
        curve = w2_trace(trajs, target, checkpoints=[2, 3, 10, 50])
        assert curve.skipped == (2, 3)
        assert curve.checkpoints.tolist() == [10, 50]

    def test_band_is_half_std(self):
        curve = w2_trace(self.iid_trajectories(n=500), self.target())
        expected = 0.5 * curve.per_seed.std(axis=1, ddof=1)
        assert np.array_equal(curve.half_std, expected)

    def test_provider_callable_matches_mapping(self):
        trajs = self.iid_trajectories(n=300)
        by_call = w2_trace(lambda s: trajs[s], self.target(),
                           seeds=[1, 2, 3], checkpoints=[100, 300])
        by_map = w2_trace(trajs, self.target(), checkpoints=[100, 300])
        assert np.array_equal(by_call.per_seed, by_map.per_seed)

    def test_deterministic(self):
        trajs = self.iid_trajectories(n=300)
        a = w2_trace(trajs, self.target(), checkpoints=[100, 300])
        b = w2_trace(trajs, self.target(), checkpoints=[100, 300])
        assert a.per_seed.tobytes() == b.per_seed.tobytes()

    def test_single_seed_rejected(self):
        with pytest.raises(ValueError, match="seed"):
            w2_trace({0: make_trajectory(np.zeros((10, 2)))}, self.target())

    def test_unknown_window_policy_rejected(self):
        with pytest.raises(ValueError, match="window_policy"):
            w2_trace(self.iid_trajectories(n=100), self.target(),
                     window_policy="sliding")

    def test_default_checkpoint_rule(self):
        ks = default_checkpoints(1000)
        assert ks[0] == 5 and ks[-1] == 1000 and len(ks) == 200
        assert default_checkpoints(7).tolist() == [1, 2, 3, 4, 5, 6, 7]


class TestClassificationAccuracy:
    def test_true_separator_is_perfect(self):
        rng = np.random.default_rng(9)
        theta_true = np.array([2.0, -1.5, 0.5])
        X = rng.normal(size=(200, 3))
        margin = X @ theta_true
        keep = np.abs(margin) > 0.3
        X, y = X[keep], (margin[keep] > 0).astype(float)
        acc = classification_accuracy(theta_true[None, :], X, y, [1])
        assert acc[0] == 1.0

    def test_half_probability_tie_goes_to_class_one(self):
        X = np.ones((4, 2))
        y = np.ones(4)
        theta = np.zeros((1, 2))  # sigmoid(0) = 0.5 exactly
        acc = classification_accuracy(theta, X, y, [1])
        assert acc[0] == 1.0

    def test_random_predictor_near_half(self):
        rng = np.random.default_rng(77)
        X = rng.normal(size=(400, 3))
        y = (rng.random(400) > 0.5).astype(float)
        accs = [
            classification_accuracy(rng.normal(size=(1, 3)), X, y, [1])[0]
            for _ in range(20)
        ]
        assert abs(float(np.mean(accs)) - 0.5) < 0.1

    def test_prefix_averaging(self):
        # two samples averaging to the true separator beat either alone
        X = np.array([[1.0, 0.0], [-1.0, 0.0]])
        y = np.array([1.0, 0.0])
        samples = np.array([[4.0, 0.0], [-2.0, 0.0]])
        accs = classification_accuracy(samples, X, y, [1, 2])
        assert accs.tolist() == [1.0, 1.0]

    def test_empty_test_set(self):
        with pytest.raises(EmptyTestSet):
            classification_accuracy(np.zeros((1, 2)), np.zeros((0, 2)),
                                    np.zeros(0), [1])

    def test_non_binary_labels(self):
        with pytest.raises(NonBinaryTarget):
            classification_accuracy(np.zeros((1, 2)), np.ones((3, 2)),
                                    np.array([0.0, 1.0, 2.0]), [1])

    def test_prefix_out_of_range(self):
        with pytest.raises(ValueError, match="prefix"):
            classification_accuracy(np.zeros((2, 2)), np.ones((3, 2)),
                                    np.ones(3), [5])


class TestFitOrderSlope:
    def test_exact_square_law(self):
        etas = np.array([0.01, 0.02, 0.05, 0.1, 0.2])
        fit = fit_order_slope(etas, etas ** 2)
        assert abs(fit.slope - 2.0) < 1e-9
        assert fit.half_width < 1e-8

    def test_exact_three_and_a_half(self):
        etas = np.array([0.01, 0.03, 0.06, 0.1])
        fit = fit_order_slope(etas, 3.0 * etas ** 3.5)
        assert abs(fit.slope - 3.5) < 1e-9
        assert abs(fit.intercept - np.log(3.0)) < 1e-9

    def test_octave_grid_accepted(self):
        # the order-study grid spans a factor 8; it must be admissible
        etas = np.array([0.02, 0.04, 0.08, 0.16])
        fit = fit_order_slope(etas, etas ** 4)
        assert abs(fit.slope - 4.0) < 1e-9

    def test_noisy_band_contains_truth(self):
        rng = np.random.default_rng(3)
        etas = np.geomspace(0.01, 0.2, 8)
        errors = etas ** 2 * np.exp(rng.normal(scale=0.05, size=8))
        fit = fit_order_slope(etas, errors)
        assert fit.half_width > 0
        assert fit.lower <= 2.0 <= fit.upper

    def test_too_few_points(self):
        with pytest.raises(DegenerateFit):
            fit_order_slope([0.01, 0.05, 0.2], [1e-4, 2e-3, 4e-2])

    def test_narrow_span_rejected(self):
        with pytest.raises(DegenerateFit, match="span"):
            fit_order_slope([0.1, 0.2, 0.3, 0.4],
                            [0.01, 0.04, 0.09, 0.16])

    def test_nonpositive_errors_rejected(self):
        with pytest.raises(NonPositiveError):
            fit_order_slope([0.01, 0.02, 0.05, 0.1], [1.0, 2.0, 0.0, 3.0])

    def test_nonpositive_stepsizes_rejected(self):
        with pytest.raises(NonPositiveError):
            fit_order_slope([0.0, 0.02, 0.05, 0.2], [1.0, 2.0, 1.0, 3.0])


class TestCurveContainer:
    def test_shape_validation(self):
        with pytest.raises(ValueError, match="per_seed"):
            W2Curve(checkpoints=[1, 2], per_seed=np.zeros((3, 2)),
                    seeds=(0, 1), skipped=())

    def test_as_dict_round_trip_fields(self):
        curve = W2Curve(checkpoints=[5, 10], per_seed=[[1.0, 2.0], [0.5, 1.5]],
                        seeds=(3, 4), skipped=(1,))
        blob = curve.as_dict()
        assert blob["checkpoints"] == [5, 10]
        assert blob["seeds"] == [3, 4]
        assert blob["skipped"] == [1]
        assert blob["mean"] == [1.5, 1.0]
