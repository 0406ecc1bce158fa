"""Exact posteriors, Gaussian Wasserstein-2 metrics, and slope fits.

Curve conventions: a trajectory's running quality is summarised at sparse
checkpoints; at checkpoint k a Gaussian is fitted to the first k position
samples (prefix window) and compared to the target law; across seeds the
band is mean +/- half the standard deviation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import stats

from . import tolerances as tol
from .errors import (
    DegenerateFit,
    EmptyTestSet,
    NonBinaryTarget,
    NonPositiveError,
    NotPSD,
    SingularPrior,
)
from .numerics import sqrtm_spd
from .potentials import stable_sigmoid
from .sampler import Trajectory

WINDOW_POLICIES = ("prefix",)


@dataclass(frozen=True)
class GaussianLaw:
    """Mean vector plus symmetric PSD covariance."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.atleast_2d(np.asarray(self.covariance, dtype=float))
        if cov.shape != (mean.size, mean.size):
            raise ValueError(
                f"covariance shape {cov.shape} does not match mean "
                f"length {mean.size}"
            )
        scale = max(float(np.abs(cov).max()), 1.0)
        if np.abs(cov - cov.T).max() > 1e-10 * scale:
            raise ValueError("covariance must be symmetric")
        cov = 0.5 * (cov + cov.T)
        lam_min = float(np.linalg.eigvalsh(cov).min())
        if lam_min < -tol.PSD_NEGATIVE_BAND * scale:
            raise NotPSD(
                f"covariance indefinite: min eigenvalue {lam_min:.3e}"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class W2Curve:
    """Checkpointed per-seed distances with the mean +/- half-std band."""

    checkpoints: np.ndarray
    per_seed: np.ndarray
    seeds: tuple[int, ...]
    skipped: tuple[int, ...]

    def __post_init__(self) -> None:
        checkpoints = np.asarray(self.checkpoints, dtype=int).reshape(-1)
        per_seed = np.atleast_2d(np.asarray(self.per_seed, dtype=float))
        if per_seed.shape != (checkpoints.size, len(self.seeds)):
            raise ValueError(
                f"per_seed shape {per_seed.shape} does not match "
                f"{checkpoints.size} checkpoints x {len(self.seeds)} seeds"
            )
        object.__setattr__(self, "checkpoints", checkpoints)
        object.__setattr__(self, "per_seed", per_seed)
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "skipped", tuple(int(s) for s in self.skipped))

    @property
    def mean(self) -> np.ndarray:
        return self.per_seed.mean(axis=1)

    @property
    def half_std(self) -> np.ndarray:
        if len(self.seeds) < 2:
            return np.zeros(self.checkpoints.size)
        return 0.5 * self.per_seed.std(axis=1, ddof=1)

    def as_dict(self) -> dict:
        return {
            "checkpoints": self.checkpoints.tolist(),
            "seeds": list(self.seeds),
            "skipped": list(self.skipped),
            "per_seed": self.per_seed.tolist(),
            "mean": self.mean.tolist(),
            "half_std": self.half_std.tolist(),
        }


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares slope of log error versus log stepsize."""

    slope: float
    intercept: float
    half_width: float
    n_points: int

    @property
    def lower(self) -> float:
        return self.slope - self.half_width

    @property
    def upper(self) -> float:
        return self.slope + self.half_width


def ridge_posterior(
    X: np.ndarray,
    y: np.ndarray,
    prior_cov: np.ndarray | None = None,
    noise_var: float = 1.0,
) -> GaussianLaw:
    """Conjugate Gaussian posterior of a linear model with Gaussian prior.

    ``V = (prior^-1 + X'X/noise_var)^-1`` and ``m = V X'y / noise_var``;
    ``prior_cov`` defaults to ``10 I``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).reshape(-1)
    n, d = X.shape
    if y.size != n:
        raise ValueError(f"X has {n} rows but y has {y.size} entries")
    if not noise_var > 0:
        raise NonPositiveError(f"noise_var must be positive, got {noise_var}")
    if prior_cov is None:
        prior_cov = 10.0 * np.eye(d)
    prior_cov = np.atleast_2d(np.asarray(prior_cov, dtype=float))
    if prior_cov.shape != (d, d):
        raise ValueError(
            f"prior covariance shape {prior_cov.shape}, expected {(d, d)}"
        )
    try:
        chol = np.linalg.cholesky(prior_cov)
    except np.linalg.LinAlgError as exc:
        raise SingularPrior(
            "prior covariance is not symmetric positive definite"
        ) from exc
    eye = np.eye(d)
    prior_inv = np.linalg.solve(chol.T, np.linalg.solve(chol, eye))
    precision = prior_inv + X.T @ X / noise_var
    V = np.linalg.solve(precision, eye)
    V = 0.5 * (V + V.T)
    m = V @ (X.T @ y / noise_var)
    return GaussianLaw(m, V)


def w2_gaussians(g1: GaussianLaw, g2: GaussianLaw) -> float:
    """Exact Wasserstein-2 distance between two Gaussian laws.

    ``W2^2 = |m1 - m2|^2 + tr(S1 + S2 - 2 (S2^1/2 S1 S2^1/2)^1/2)``; the
    trace term is clamped at zero against rounding.
    """
    if g1.dim != g2.dim:
        raise ValueError(f"dimension mismatch: {g1.dim} vs {g2.dim}")
    root2 = sqrtm_spd(g2.covariance)
    cross = sqrtm_spd(root2 @ g1.covariance @ root2)
    gap = float(
        np.trace(g1.covariance) + np.trace(g2.covariance)
        - 2.0 * np.trace(cross)
    )
    delta = g1.mean - g2.mean
    return float(np.sqrt(max(float(delta @ delta) + gap, 0.0)))


def fit_gaussian(
    samples: np.ndarray,
    ridge: float = tol.W2_EIGENVALUE_RIDGE,
) -> GaussianLaw:
    """Gaussian fit (sample mean, ridge-stabilised sample covariance)."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    n, d = samples.shape
    if n < d + 1:
        raise DegenerateFit(
            f"need at least d+1 = {d + 1} samples for a covariance fit, "
            f"got {n}"
        )
    cov = np.atleast_2d(np.cov(samples, rowvar=False, ddof=1))
    return GaussianLaw(samples.mean(axis=0), cov + ridge * np.eye(d))


def default_checkpoints(n_iterations: int) -> np.ndarray:
    """Sparse checkpoint grid: every ``max(1, N // 200)`` iterations."""
    step = max(1, n_iterations // 200)
    ks = list(range(step, n_iterations + 1, step))
    if ks[-1] != n_iterations:
        ks.append(n_iterations)
    return np.asarray(ks, dtype=int)


def w2_trace(
    trajectories: Mapping[int, Trajectory] | Callable[[int], Trajectory],
    target: GaussianLaw,
    seeds: Sequence[int] | None = None,
    checkpoints: Sequence[int] | None = None,
    window_policy: str = "prefix",
) -> W2Curve:
    """Wasserstein-2 distance of the running position cloud to a target.

    At each checkpoint k a Gaussian is fitted to the first k position
    samples of every seed's trajectory and compared to ``target``;
    checkpoints with fewer than d+1 samples are skipped and recorded.
    ``trajectories`` is a seed-keyed mapping or a callable ``seed ->
    Trajectory`` (then ``seeds`` is required).
    """
    if window_policy not in WINDOW_POLICIES:
        raise ValueError(
            f"window_policy must be one of {WINDOW_POLICIES}, "
            f"got {window_policy!r} (prefix windows are the pinned choice)"
        )
    if callable(trajectories):
        if seeds is None:
            raise ValueError("a trajectory provider needs an explicit seed list")
        by_seed = {int(s): trajectories(int(s)) for s in seeds}
    else:
        by_seed = {int(s): t for s, t in trajectories.items()}
    if len(by_seed) < 2:
        raise ValueError("need at least two seeds for a mean/half-std band")

    lengths = {t.theta.shape[0] for t in by_seed.values()}
    dims = {t.d for t in by_seed.values()}
    if len(lengths) != 1 or len(dims) != 1:
        raise ValueError("trajectories must share length and dimension")
    n_iter, d = lengths.pop(), dims.pop()
    if d != target.dim:
        raise ValueError(
            f"trajectory dimension {d} does not match target {target.dim}"
        )
    if checkpoints is None:
        checkpoints = default_checkpoints(n_iter)
    checkpoints = np.asarray(sorted(set(int(k) for k in checkpoints)), dtype=int)
    if checkpoints.size == 0 or checkpoints[0] < 1 or checkpoints[-1] > n_iter:
        raise ValueError("checkpoints must lie in [1, N]")

    kept = [int(k) for k in checkpoints if k >= d + 1]
    skipped = tuple(int(k) for k in checkpoints if k < d + 1)
    seed_list = sorted(by_seed)
    values = np.empty((len(kept), len(seed_list)))
    for col, seed in enumerate(seed_list):
        theta = by_seed[seed].theta
        for row, k in enumerate(kept):
            values[row, col] = w2_gaussians(fit_gaussian(theta[:k]), target)
    return W2Curve(
        checkpoints=np.asarray(kept, dtype=int),
        per_seed=values,
        seeds=tuple(seed_list),
        skipped=skipped,
    )


def classification_accuracy(
    theta_samples: np.ndarray,
    X_test: np.ndarray,
    y_test: np.ndarray,
    k_prefixes: Sequence[int],
) -> np.ndarray:
    """Held-out accuracy of the prefix posterior-mean predictor.

    For each prefix size k the predictor is ``sigmoid(X theta_bar_k) >=
    0.5`` with ``theta_bar_k`` the mean of the first k samples; the 0.5
    tie maps to class 1.
    """
    theta_samples = np.atleast_2d(np.asarray(theta_samples, dtype=float))
    X_test = np.atleast_2d(np.asarray(X_test, dtype=float))
    y_test = np.asarray(y_test, dtype=float).reshape(-1)
    if X_test.shape[0] == 0:
        raise EmptyTestSet("accuracy needs at least one held-out row")
    if X_test.shape[0] != y_test.size:
        raise ValueError(
            f"X_test has {X_test.shape[0]} rows but y_test has {y_test.size}"
        )
    if not np.isin(y_test, (0.0, 1.0)).all():
        raise NonBinaryTarget("test labels must be 0/1")
    if X_test.shape[1] != theta_samples.shape[1]:
        raise ValueError(
            f"feature dimension mismatch: samples {theta_samples.shape[1]}, "
            f"test {X_test.shape[1]}"
        )
    n = theta_samples.shape[0]
    out = np.empty(len(k_prefixes))
    for i, k in enumerate(k_prefixes):
        k = int(k)
        if not 1 <= k <= n:
            raise ValueError(f"prefix {k} outside [1, {n}]")
        theta_bar = theta_samples[:k].mean(axis=0)
        predicted = stable_sigmoid(X_test @ theta_bar) >= 0.5
        out[i] = float(np.mean(predicted == (y_test == 1.0)))
    return out


def fit_order_slope(eta_list, error_list) -> SlopeFit:
    """Least-squares slope of log error versus log stepsize with 95% band.

    Requires at least four points whose stepsizes span close to a decade
    (span >= 10**0.9, admitting octave grids like {h, 2h, 4h, 8h}) and
    strictly positive errors.
    """
    etas = np.asarray(list(eta_list), dtype=float)
    errors = np.asarray(list(error_list), dtype=float)
    if etas.shape != errors.shape or etas.ndim != 1:
        raise ValueError("eta and error lists must be equal-length vectors")
    if np.any(etas <= 0):
        raise NonPositiveError("stepsizes must be strictly positive")
    if np.any(errors <= 0):
        raise NonPositiveError("errors must be strictly positive")
    if etas.size < 4:
        raise DegenerateFit(f"need at least 4 points, got {etas.size}")
    if np.unique(etas).size < 2:
        raise DegenerateFit("need at least two distinct stepsizes")
    if etas.max() / etas.min() < 10.0 ** 0.9:
        raise DegenerateFit(
            f"stepsizes span a factor {etas.max() / etas.min():.3g}; "
            "need close to a decade"
        )
    fit = stats.linregress(np.log(etas), np.log(errors))
    stderr = float(fit.stderr) if np.isfinite(fit.stderr) else 0.0
    half = float(stats.t.ppf(0.975, etas.size - 2)) * stderr
    return SlopeFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        half_width=half,
        n_points=int(etas.size),
    )
