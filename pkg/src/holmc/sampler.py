"""Chain driver: composes one-step Gaussian laws into seeded trajectories.

The transition law is supplied by the caller, either as a frozen affine
kernel (``x' = T x + c + xi``) or as a callable returning the conditional
law at the current state.  Both paths consume exactly one block of standard
normals per step from the same counter-based stream, so a closed-form
kernel and its stacked-system twin produce bit-identical trajectories under
the same seed.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import MinimizerNotConverged
from .numerics import cholesky_with_jitter, solve_discrete_lyapunov
from .potentials import PotentialModel

INIT_POLICIES = ("minimizer_zero", "standard_normal")


@dataclass(frozen=True)
class ChainConfig:
    """Static description of one chain run.

    ``init_policy`` selects the starting state: ``minimizer_zero`` puts the
    position block at the potential minimizer with all velocity blocks at
    zero; ``standard_normal`` draws the whole state from the chain's own
    stream before the first step.
    """

    P: int
    gamma: float
    eta: float
    N: int
    seed: int
    init_policy: str = "minimizer_zero"
    jitter0: float = tol.CHOLESKY_JITTER_BASE
    burn_in: int = 0

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.init_policy not in INIT_POLICIES:
            raise ValueError(
                f"init_policy must be one of {INIT_POLICIES}, "
                f"got {self.init_policy!r}"
            )
        if not 0 <= self.burn_in < self.N:
            raise ValueError(
                f"burn_in must lie in [0, N), got {self.burn_in}"
            )


@dataclass(frozen=True)
class Trajectory:
    """Recorded chain output.

    ``states`` holds one row per completed step (``N`` rows of length
    ``P d``); the pre-step starting point is kept separately so the rows
    are homogeneous. ``burn_in`` only marks how many leading rows summary
    consumers should drop; nothing is deleted here.
    """

    states: np.ndarray
    initial_state: np.ndarray
    d: int
    burn_in: int
    rng_fingerprint: str

    @property
    def theta(self) -> np.ndarray:
        """Position-block view, shape ``(N, d)``."""
        return self.states[:, : self.d]

    @property
    def kept_theta(self) -> np.ndarray:
        """Position block with the burn-in prefix dropped."""
        return self.states[self.burn_in:, : self.d]


def chain_rng(master_seed: int, chain_index: int = 0) -> np.random.Generator:
    """Counter-based stream for one chain.

    Philox keyed by ``(master_seed, chain_index)`` gives every chain its
    own stream whose draws do not depend on how many sibling chains exist
    or in which order they run.
    """
    ss = np.random.SeedSequence(
        entropy=int(master_seed), spawn_key=(int(chain_index),)
    )
    return np.random.Generator(np.random.Philox(ss))


def _fingerprint(master_seed: int, chain_index: int) -> str:
    material = f"philox:{int(master_seed)}:{int(chain_index)}"
    return hashlib.sha256(material.encode()).hexdigest()[:16]


def minimize_potential(
    potential: PotentialModel,
    theta0: np.ndarray | None = None,
    grad_tol: float = tol.NEWTON_GRAD_TOL,
    max_iter: int = tol.NEWTON_MAX_ITER,
) -> np.ndarray:
    """Damped Newton minimizer for a smooth convex potential.

    Full Newton steps with Armijo backtracking; the supported potentials
    have positive-definite Hessians, so the Newton direction is always a
    descent direction.
    """
    theta = (
        np.zeros(potential.dim)
        if theta0 is None
        else np.asarray(theta0, dtype=float).reshape(-1).copy()
    )
    for _ in range(max_iter):
        grad = potential.gradient(theta)
        if float(np.linalg.norm(grad)) <= grad_tol:
            return theta
        step = np.linalg.solve(potential.hessian(theta), grad)
        slope = float(grad @ step)
        base = potential.value(theta)
        alpha = 1.0
        while alpha > 1e-12:
            candidate = theta - alpha * step
            if potential.value(candidate) <= base - 1e-4 * alpha * slope:
                break
            alpha *= 0.5
        theta = theta - alpha * step
    if float(np.linalg.norm(potential.gradient(theta))) > grad_tol:
        raise MinimizerNotConverged(
            f"gradient norm {np.linalg.norm(potential.gradient(theta)):.3e} "
            f"> {grad_tol:.1e} after {max_iter} Newton iterations"
        )
    return theta


def draw_mvn(
    mean: np.ndarray,
    covariance: np.ndarray,
    rng: np.random.Generator,
    jitter0: float = tol.CHOLESKY_JITTER_BASE,
) -> np.ndarray:
    """One multivariate normal draw via the jittered Cholesky factor.

    A semidefinite covariance lands on the first nonzero jitter rung, so
    the sample stays within ``O(sqrt(jitter0))`` of the mean instead of
    failing; a covariance broken beyond the ladder propagates
    ``NotFactorizable``.
    """
    mean = np.asarray(mean, dtype=float).reshape(-1)
    covariance = np.atleast_2d(np.asarray(covariance, dtype=float))
    if covariance.shape != (mean.size, mean.size):
        raise ValueError(
            f"covariance shape {covariance.shape} does not match "
            f"mean length {mean.size}"
        )
    factor, _ = cholesky_with_jitter(covariance, jitter0=jitter0)
    return mean + factor @ rng.standard_normal(mean.size)


def _initial_state(
    config: ChainConfig,
    potential: PotentialModel | None,
    d: int,
    rng: np.random.Generator,
) -> np.ndarray:
    if config.init_policy == "standard_normal":
        return rng.standard_normal(config.P * d)
    if potential is None:
        raise ValueError(
            "init_policy 'minimizer_zero' needs the potential to minimize"
        )
    x0 = np.zeros(config.P * d)
    x0[:d] = minimize_potential(potential)
    return x0


def _resolve_dimension(
    provider,
    config: ChainConfig,
    potential: PotentialModel | None,
    d: int | None,
) -> int:
    if d is not None:
        return int(d)
    T = getattr(provider, "T", None)
    if T is not None:
        return T.shape[0] // config.P
    if potential is not None:
        return potential.dim
    raise ValueError(
        "cannot infer the state dimension; pass d= explicitly"
    )


def _conditional_law(law) -> tuple[np.ndarray, np.ndarray]:
    mean = getattr(law, "mean", None)
    if mean is not None and not callable(mean):
        return np.asarray(mean, dtype=float).reshape(-1), law.dense_covariance()
    mean, covariance = law
    return (
        np.asarray(mean, dtype=float).reshape(-1),
        np.atleast_2d(np.asarray(covariance, dtype=float)),
    )


def run_chain(
    provider,
    config: ChainConfig,
    potential: PotentialModel | None = None,
    d: int | None = None,
    chain_index: int = 0,
) -> Trajectory:
    """Run one chain of ``config.N`` steps and record every state.

    ``provider`` is either an affine kernel (attributes ``T``, ``c``,
    ``Sigma``; the covariance factor is computed once) or a callable
    ``x -> law`` where the law exposes ``mean``/``dense_covariance()`` or
    is a plain ``(mean, covariance)`` pair.  Provider failures are
    re-raised with the iteration index attached.
    """
    affine = all(hasattr(provider, name) for name in ("T", "c", "Sigma"))
    if not affine and not callable(provider):
        raise TypeError(
            "provider must be an affine kernel or a callable x -> law"
        )
    if potential is None:
        potential = getattr(provider, "potential", None)
    dim = _resolve_dimension(provider, config, potential, d)
    rng = chain_rng(config.seed, chain_index)
    x = _initial_state(config, potential, dim, rng)
    x0 = x.copy()

    n = config.P * dim
    states = np.empty((config.N, n))
    if affine:
        factor, _ = cholesky_with_jitter(provider.Sigma, jitter0=config.jitter0)
    for k in range(config.N):
        if affine:
            x = provider.T @ x + provider.c + factor @ rng.standard_normal(n)
        else:
            try:
                mean, covariance = _conditional_law(provider(x))
                step_factor, _ = cholesky_with_jitter(
                    covariance, jitter0=config.jitter0
                )
            except Exception as exc:
                # keep the concrete type so callers can still branch on it
                exc.args = (f"iteration {k}: {exc}",)
                raise
            x = mean + step_factor @ rng.standard_normal(n)
        states[k] = x
    return Trajectory(
        states=states,
        initial_state=x0,
        d=dim,
        burn_in=config.burn_in,
        rng_fingerprint=_fingerprint(config.seed, chain_index),
    )


def stationary_law_affine(kernel) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-point law of ``x' = T x + c + N(0, Sigma)``.

    Returns ``(m, S)`` with ``m = (I - T)^{-1} c`` and ``S`` solving
    ``S = T S T' + Sigma``; requires spectral radius below one
    (``NotContractive`` otherwise, raised by the Lyapunov solver).
    """
    T = np.atleast_2d(np.asarray(kernel.T, dtype=float))
    c = np.asarray(kernel.c, dtype=float).reshape(-1)
    Sigma = np.atleast_2d(np.asarray(kernel.Sigma, dtype=float))
    S = solve_discrete_lyapunov(T, Sigma)
    m = np.linalg.solve(np.eye(T.shape[0]) - T, c)
    return m, S
