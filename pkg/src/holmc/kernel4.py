"""Closed-form one-step transition of the fourth-order splitting scheme.

One step of length ``eta`` advances the state ``x = (theta, v1, v2, v3)``
through three cascaded stage solves sharing a single Brownian path.
Conditioned on ``x`` the result is Gaussian and its law splits into

* a 4x4 table ``mu_ij(gamma, eta)`` acting blockwise on ``x``,
* force contributions: monomial moments of the two stage response kernels
  against the surrogate gradients (degree <= 3 along the straight line,
  degree <= 5 along the curved second-stage path),
* a potential-independent symmetric 4x4 covariance table
  ``sigma_ij(gamma, eta)``.

Every coefficient is an exponential polynomial ``q * gamma^a * eta^b *
exp(-c*gamma*eta)`` with rational ``q``, frozen in ``_order4_tables`` by
``tools/derive_closed_forms.py``.  The script re-derives the tables from
the stage structure, validates them against the stacked-generator oracles
in :mod:`holmc.kernel_general`, and diffs them against hand-maintained
reference transcriptions; the entries where the references lose (and the
derived forms are kept) are listed in the package README.

Evaluation runs in 60-digit decimal arithmetic.  Several entries cancel
down to order ``(gamma*eta)^7`` relative to their individual terms -- the
position variance is ``~gamma^5 eta^7 / 126`` assembled from
``O(gamma^-2)`` pieces -- which double precision cannot survive on small
steps.  Below ``gamma*eta = 1e-4`` the stored Taylor series (six orders
past each entry's leading power) take over; the two paths agree to 1e-9
relative at ``gamma*eta = 1e-3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache

import numpy as np

from ._order4_tables import (
    GBAR_MOMENT_SERIES,
    GBAR_MOMENT_TERMS,
    GTILDE_MOMENT_SERIES,
    GTILDE_MOMENT_TERMS,
    MU_SERIES,
    MU_TERMS,
    SIGMA_SERIES,
    SIGMA_TERMS,
)
from .errors import UnsupportedPotential
from .kernel_general import lift_block_table
from .potentials import LogisticPotential, QuadraticPotential
from . import tolerances as tol

__all__ = [
    "MuTable",
    "SigmaTable",
    "StepLaw4",
    "mu_coefficients",
    "sigma_entries",
    "mean_quadratic",
    "mean_logistic",
    "step_law",
]

# 4x4 float arrays; row i of a MuTable holds the coefficients of final
# component i in the initial coordinates, a SigmaTable is the symmetric
# scalar covariance table whose Kronecker lift is the step covariance.
MuTable = np.ndarray
SigmaTable = np.ndarray

_PRECISION = 60


def _check_step(gamma: float, eta: float) -> tuple[float, float]:
    gamma = float(gamma)
    eta = float(eta)
    if not gamma > 0.0:
        raise ValueError(f"friction gamma must be positive, got {gamma}")
    if not eta >= 0.0:
        raise ValueError(f"step size eta must be nonnegative, got {eta}")
    return gamma, eta


def _closed_form(terms, gamma: float, eta: float) -> float:
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        gd = Decimal(gamma)
        ed = Decimal(eta)
        u = gd * ed
        # both exponentials are shared across all terms of an entry
        expo = {0: Decimal(1), 1: (-u).exp(), 2: (-2 * u).exp()}
        total = Decimal(0)
        for num, den, a, b, c in terms:
            term = Decimal(num) / Decimal(den)
            if a:
                term *= gd**a
            if b:
                term *= ed**b
            if c:
                term *= expo[c]
            total += term
        return float(total)


def _series_form(series, gamma: float, eta: float) -> float:
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        gd = Decimal(gamma)
        ed = Decimal(eta)
        total = Decimal(0)
        for num, den, a, b in series:
            term = Decimal(num) / Decimal(den)
            if a:
                term *= gd**a
            if b:
                term *= ed**b
            total += term
        return float(total)


def _entry(key, closed, series, gamma: float, eta: float) -> float:
    if gamma * eta < tol.KERNEL_SERIES_THRESHOLD:
        return _series_form(series[key], gamma, eta)
    return _closed_form(closed[key], gamma, eta)


@lru_cache(maxsize=128)
def _coefficient_bundle(
    gamma: float, eta: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(mu table, curved-path moments (4,6), line moments (4,4)) as floats."""
    mu = np.zeros((4, 4))
    for (i, j), terms in MU_TERMS.items():
        mu[i, j] = _entry((i, j), MU_TERMS, MU_SERIES, gamma, eta)
    gbar = np.zeros((4, 6))
    for (i, k) in GBAR_MOMENT_TERMS:
        gbar[i, k] = _entry((i, k), GBAR_MOMENT_TERMS, GBAR_MOMENT_SERIES,
                            gamma, eta)
    gtilde = np.zeros((4, 4))
    for (i, k) in GTILDE_MOMENT_TERMS:
        gtilde[i, k] = _entry((i, k), GTILDE_MOMENT_TERMS,
                              GTILDE_MOMENT_SERIES, gamma, eta)
    mu.setflags(write=False)
    gbar.setflags(write=False)
    gtilde.setflags(write=False)
    return mu, gbar, gtilde


@lru_cache(maxsize=128)
def _sigma_table(gamma: float, eta: float) -> np.ndarray:
    sig = np.zeros((4, 4))
    for i in range(4):
        for j in range(i, 4):
            val = _entry((i, j), SIGMA_TERMS, SIGMA_SERIES, gamma, eta)
            sig[i, j] = sig[j, i] = val
    sig.setflags(write=False)
    return sig


def mu_coefficients(gamma: float, eta: float) -> MuTable:
    """Homogeneous 4x4 coefficient table of the one-step mean.

    Row ``i`` gives the dependence of final component ``i`` on the initial
    ``(theta, v1, v2, v3)`` blocks.  The first column is ``(1, 0, 0, 0)``:
    only the position keeps a direct unit carry-over of ``theta``.
    """
    gamma, eta = _check_step(gamma, eta)
    return _coefficient_bundle(gamma, eta)[0].copy()


def sigma_entries(gamma: float, eta: float) -> SigmaTable:
    """Symmetric 4x4 covariance table of the one-step noise.

    The covariance of the full ``4d`` state is the Kronecker lift
    ``sigma_ij * I_d``; it does not depend on the potential because every
    stage is driven by the same Brownian increments through constant
    couplings.  Entries ``sigma_ij(gamma, 0) = 0``.
    """
    gamma, eta = _check_step(gamma, eta)
    return _sigma_table(gamma, eta).copy()


def _mean_from_surrogate(
    x: np.ndarray,
    omega: np.ndarray,
    lin: np.ndarray,
    gamma: float,
    eta: float,
) -> np.ndarray:
    """Combine the mu action with the response-kernel moments.

    ``omega`` is the ``(4, d)`` line expansion of the gradient along
    ``theta + t v1`` (coefficient of ``t^k`` in row ``k``); ``lin`` is the
    exactly-linear ``(d, d)`` part of the gradient map, which the third
    stage evaluates on the curved second-stage path.  That path deviates
    from the line by ``gamma v2 t^2/2 + gamma^2 (v3 - v1) t^3/6`` minus the
    double time integral of ``omega``, so the curved-path gradient is a
    degree-5 polynomial whose extra rows live entirely in ``range(lin)``.
    """
    mu, gbar_moments, gtilde_moments = _coefficient_bundle(gamma, eta)
    d = omega.shape[1]
    theta, v1, v2, v3 = (x[k * d:(k + 1) * d] for k in range(4))

    gbar = np.zeros((6, d))
    gbar[:4] = omega
    gbar[2] += lin @ (0.5 * gamma * v2 - 0.5 * omega[0])
    gbar[3] += lin @ ((gamma * gamma / 6.0) * (v3 - v1) - omega[1] / 6.0)
    gbar[4] -= lin @ omega[2] / 12.0
    gbar[5] -= lin @ omega[3] / 20.0

    out = np.empty(4 * d)
    for i in range(4):
        acc = mu[i, 0] * theta + mu[i, 1] * v1 + mu[i, 2] * v2 + mu[i, 3] * v3
        acc = acc + gbar_moments[i] @ gbar + gtilde_moments[i] @ omega
        out[i * d:(i + 1) * d] = acc
    return out


def mean_quadratic(
    x: np.ndarray,
    A: np.ndarray,
    b: np.ndarray,
    gamma: float,
    eta: float,
) -> np.ndarray:
    """One-step mean under the gradient ``A theta - b``.

    Returns the stacked ``(4d,)`` mean ``(m0, m1, m2, m3)``.  ``A`` is any
    square matrix (zero included, which reduces the step to the pure mu
    action); no definiteness is required because the mean formula is an
    affine map for every ``A``.
    """
    gamma, eta = _check_step(gamma, eta)
    x = np.asarray(x, dtype=float).reshape(-1)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    d = A.shape[0]
    if A.shape != (d, d):
        raise ValueError("A must be square")
    if b.shape != (d,) or x.shape != (4 * d,):
        raise ValueError(
            f"state/coefficient shapes disagree: x {x.shape}, A {A.shape}, "
            f"b {b.shape}"
        )
    omega = np.zeros((4, d))
    omega[0] = A @ x[:d] - b
    omega[1] = A @ x[d:2 * d]
    return _mean_from_surrogate(x, omega, A, gamma, eta)


def mean_logistic(
    x: np.ndarray,
    pot: LogisticPotential,
    gamma: float,
    eta: float,
) -> np.ndarray:
    """One-step mean under the ridge-regularised logistic potential.

    The data part of the gradient enters through its degree-3 expansion
    along ``theta + t v1``; the ridge part is exactly linear and rides the
    curved second-stage path.  With ``v1 = 0`` every data coefficient
    beyond the constant vanishes and the mean depends on the dataset only
    through the gradient at ``theta``.
    """
    gamma, eta = _check_step(gamma, eta)
    x = np.asarray(x, dtype=float).reshape(-1)
    d = pot.dim
    if x.shape != (4 * d,):
        raise ValueError(f"state has {x.shape[0]} entries, expected {4 * d}")
    omega = pot.taylor_line(x[:d], x[d:2 * d])
    return _mean_from_surrogate(x, omega, pot.linear_term(), gamma, eta)


@dataclass(frozen=True)
class StepLaw4:
    """Conditional one-step law: ``N(mean, kron(covariance, I_d))``.

    ``covariance`` is the scalar 4x4 table; the dense ``4d x 4d`` matrix is
    materialised on demand since samplers only need the 4x4 factor.
    """

    mean: np.ndarray
    covariance: SigmaTable
    d: int

    def dense_covariance(self) -> np.ndarray:
        return lift_block_table(self.covariance, self.d)


def step_law(
    x: np.ndarray,
    potential,
    gamma: float,
    eta: float,
) -> StepLaw4:
    """Assemble the full Gaussian one-step law for a supported potential."""
    if isinstance(potential, QuadraticPotential):
        mean = mean_quadratic(x, potential.A, potential.b, gamma, eta)
    elif isinstance(potential, LogisticPotential):
        mean = mean_logistic(x, potential, gamma, eta)
    else:
        raise UnsupportedPotential(
            "closed-form order-4 law covers quadratic and logistic "
            f"potentials, got {type(potential).__name__}"
        )
    return StepLaw4(
        mean=mean,
        covariance=sigma_entries(gamma, eta),
        d=potential.dim,
    )
