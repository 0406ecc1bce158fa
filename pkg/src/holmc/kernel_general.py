"""Order-generic one-step kernels for the staged integrator.

The integrator refines one step of the order-P dynamics through P-1 stages.
Every stage restarts from the current iterate and re-solves the step; stage
j replaces the gradient with a surrogate evaluated on stage j-1's position
path and couples its remaining rows to stage j-1's velocity paths.  The
final iterate is the last stage's state at the end of the step.

Two evaluation routes are provided.

* For quadratic potentials the gradient surrogate is the gradient itself,
  so all stages together form one constant-coefficient linear SDE on a
  stacked state (a frozen copy of the current iterate, one block per stage,
  and an affine slot).  ``transition_quadratic`` reads the exact Gaussian
  one-step kernel off a matrix exponential and a Van Loan Gramian.  This is
  also the reference oracle for the hand-expanded order-4 formulas.

* For general potentials only the step mean needs the surrogate;
  ``mean_general`` integrates the deterministic stage recursion with
  composite Gauss-Legendre collocation, evaluating the surrogate pointwise
  at quadrature nodes.  A built-in Richardson check doubles the panel count
  and fails loudly when the two refinements disagree.

The noise path never touches the gradient, so the one-step covariance
depends only on (P, gamma, eta); ``covariance_universal`` exposes it as a
P x P scalar block table.

State blocks are ordered (theta, velocity_1, ..., velocity_{P-1}) with d
components each.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import tolerances as tol
from .errors import DegreeUnsupported, InvalidOrder, Overflow, QuadratureNotConverged
from .numerics import expm, van_loan_gramian
from .potentials import QuadraticPotential

__all__ = [
    "StackedSystem",
    "AffineGaussianKernel",
    "build_stacked_system",
    "transition_quadratic",
    "covariance_universal",
    "lift_block_table",
    "mean_general",
    "stage_difference_orders",
    "CENTER_POLICIES",
]

CENTER_POLICIES = ("iterate", "origin", "line")


def _validate_order(P: int) -> int:
    if not isinstance(P, (int, np.integer)) or isinstance(P, bool):
        raise InvalidOrder(f"order must be an integer, got {P!r}")
    if P < 3:
        raise InvalidOrder(f"the staged scheme needs order >= 3, got {P}")
    return int(P)


@dataclass(frozen=True)
class StackedSystem:
    """Constant-coefficient linear SDE covering all stages of one step.

    The state stacks P+... blocks of size d in the order: a frozen copy of
    the current iterate (P blocks), stage groups 1..P-1 (P blocks each),
    and a trailing affine slot that stays at 1.  ``generator`` is the drift
    matrix, ``noise`` the column map of the shared Brownian increment.
    """

    P: int
    gamma: float
    d: int
    generator: np.ndarray
    noise: np.ndarray

    @property
    def dim(self) -> int:
        return self.P * self.P * self.d + 1

    def block(self, group: int, var: int) -> slice:
        """Row slice of variable ``var`` (0 is position, n is velocity_n)
        inside ``group`` (0 is the frozen copy, j >= 1 is stage j)."""
        start = (group * self.P + var) * self.d
        return slice(start, start + self.d)

    def initial_map(self) -> np.ndarray:
        """Matrix E with X(0) = E @ (x, 1): every group starts at the
        current iterate and the affine slot at one."""
        n, pd = self.dim, self.P * self.d
        E = np.zeros((n, pd + 1))
        for g in range(self.P):
            E[g * pd : (g + 1) * pd, :pd] = np.eye(pd)
        E[-1, pd] = 1.0
        return E


@dataclass(frozen=True)
class AffineGaussianKernel:
    """One-step law x' = T x + c + xi with xi ~ N(0, Sigma)."""

    T: np.ndarray
    c: np.ndarray
    Sigma: np.ndarray
    P: int
    gamma: float
    eta: float
    potential_id: str = "quadratic"

    def mean(self, x: np.ndarray) -> np.ndarray:
        return self.T @ np.asarray(x, dtype=float).reshape(-1) + self.c


def build_stacked_system(
    P: int,
    gamma: float,
    potential: QuadraticPotential | tuple | None = None,
    d: int | None = None,
) -> StackedSystem:
    """Assemble the stacked linear SDE for a quadratic (or zero) potential.

    ``potential`` is a ``QuadraticPotential``, a raw ``(A, b)`` pair, or
    None for the zero potential (then ``d`` is required).
    """
    P = _validate_order(P)
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if potential is None:
        if d is None:
            raise ValueError("zero potential needs an explicit dimension d")
        A = np.zeros((d, d))
        b = np.zeros(d)
    elif isinstance(potential, tuple):
        A, b = (np.asarray(part, dtype=float) for part in potential)
        d = A.shape[0]
    else:
        A, b, d = potential.A, potential.b, potential.dim

    n = P * P * d + 1
    G = np.zeros((n, n))
    S = np.zeros((n, d))
    eye = np.eye(d)
    root = np.sqrt(2.0 * gamma)

    def blk(group: int, var: int) -> slice:
        start = (group * P + var) * d
        return slice(start, start + d)

    for j in range(1, P):
        prev = j - 1  # group 0 is the frozen copy; it has zero dynamics
        # position integrates the stage's own velocity_1
        G[blk(j, 0), blk(j, 1)] = eye
        if j >= 2:
            # velocity_1 sees the surrogate on stage j-1's position path
            # and stage j-1's velocity_2; for affine gradients the
            # surrogate is A theta - b exactly.
            G[blk(j, 1), blk(prev, 0)] = -A
            G[blk(j, 1), -1] = b
            G[blk(j, 1), blk(prev, 2)] = gamma * eye
        # stage 1 freezes velocity_1, so its row stays zero
        for m in range(2, P - 1):
            G[blk(j, m), blk(j, m - 1)] = -gamma * eye
            up = blk(0, m + 1) if j == 1 else blk(prev, m + 1)
            G[blk(j, m), up] = gamma * eye
        G[blk(j, P - 1), blk(j, P - 2)] = -gamma * eye
        G[blk(j, P - 1), blk(j, P - 1)] += -gamma * eye
        S[blk(j, P - 1), :] = root * eye

    return StackedSystem(P=P, gamma=float(gamma), d=int(d), generator=G, noise=S)


def transition_quadratic(
    P: int,
    gamma: float,
    eta: float,
    A: np.ndarray | None = None,
    b: np.ndarray | None = None,
    d: int | None = None,
) -> AffineGaussianKernel:
    """Exact one-step Gaussian kernel under a quadratic (or zero) potential.

    ``A`` may be None (zero potential, ``d`` required) or a symmetric PSD
    matrix; ``b`` defaults to zero.
    """
    P = _validate_order(P)
    if not eta > 0:
        raise ValueError("step size eta must be positive")
    if A is None:
        potential = None
        if d is None:
            raise ValueError("zero potential needs an explicit dimension d")
        pot_id = "zero"
    else:
        A = np.atleast_2d(np.asarray(A, dtype=float))
        d = A.shape[0]
        if b is None:
            b = np.zeros(d)
        if not np.allclose(A, A.T, rtol=1e-10, atol=1e-12):
            raise ValueError("A must be symmetric")
        scale = max(float(np.linalg.norm(A, 2)), 1.0)
        if np.linalg.eigvalsh(0.5 * (A + A.T))[0] < -1e-10 * scale:
            raise ValueError("A must be positive semidefinite")
        potential = (A, np.asarray(b, dtype=float))
        pot_id = "quadratic" if (np.any(A) or np.any(b)) else "zero"

    system = build_stacked_system(P, gamma, potential, d=d)
    try:
        M = expm(system.generator * eta)
    except Overflow as exc:
        raise Overflow(
            f"{exc}; gamma*eta={gamma * eta:.3g} is too stiff for a single "
            "exponential, substep the interval (smaller eta) instead"
        ) from exc

    last = system.block(P - 1, 0).start
    rows = slice(last, last + P * d)
    full = M[rows, :] @ system.initial_map()
    T = full[:, : P * d]
    c = full[:, P * d]
    Q = system.noise @ system.noise.T
    W = van_loan_gramian(system.generator, Q, eta)
    Sigma = W[rows, rows]
    Sigma = 0.5 * (Sigma + Sigma.T)
    return AffineGaussianKernel(
        T=T, c=c, Sigma=Sigma, P=P, gamma=float(gamma), eta=float(eta),
        potential_id=pot_id,
    )


def covariance_universal(P: int, gamma: float, eta: float) -> np.ndarray:
    """The P x P scalar block table of the one-step covariance.

    The noise path is potential-free, so this table times the identity is
    the covariance for every potential and dimension.
    """
    kernel = transition_quadratic(P, gamma, eta, A=None, d=1)
    return kernel.Sigma


def lift_block_table(table: np.ndarray, d: int) -> np.ndarray:
    """Expand a P x P scalar block table to the full Pd x Pd matrix."""
    return np.kron(np.asarray(table, dtype=float), np.eye(d))


@lru_cache(maxsize=None)
def _collocation_rule(q: int = tol.MEAN_QUADRATURE_NODES):
    """Gauss-Legendre nodes on [0,1] with the node-to-node cumulative
    integration matrix C (C[a, b] = integral of Lagrange basis b from 0 to
    node a) and full-panel weights."""
    xs, ws = np.polynomial.legendre.leggauss(q)
    nodes = 0.5 * (xs + 1.0)
    weights = 0.5 * ws
    V = np.vander(nodes, q, increasing=True)
    coeffs = np.linalg.inv(V)  # column b holds basis-b monomial coefficients
    powers = nodes[:, None] ** (np.arange(1, q + 1)[None, :]) / np.arange(1, q + 1)
    C = powers @ coeffs
    return nodes, weights, C


class _StagePaths:
    """Deterministic mean paths of every stage at the collocation nodes."""

    def __init__(self, P: int, d: int, panels: int, q: int):
        self.P, self.d, self.panels, self.q = P, d, panels, q
        # values[stage][var] has shape (panels, q, d); stage keys 1..P-1
        self.values: dict[int, list[np.ndarray]] = {}
        self.finals: dict[int, np.ndarray] = {}


def _integrate_stages(
    P: int,
    gamma: float,
    eta: float,
    x: np.ndarray,
    g_eval,
    panels: int,
) -> _StagePaths:
    """March the stage recursion with composite collocation panels.

    ``g_eval(theta_nodes, t_nodes)`` returns the gradient surrogate on the
    previous stage's position path; it is None for gradient-free systems.
    """
    q = tol.MEAN_QUADRATURE_NODES
    nodes, weights, C = _collocation_rule(q)
    h = eta / panels
    t_nodes = (np.arange(panels)[:, None] + nodes[None, :]) * h

    d = x.shape[0] // P
    xb = x.reshape(P, d)
    out = _StagePaths(P, d, panels, q)

    # constant matrix of the implicit damped row
    M_imp = np.eye(q) + gamma * h * C

    prev: list[np.ndarray] | None = None
    for j in range(1, P):
        g_nodes = None
        if j >= 2 and g_eval is not None:
            theta_prev = out.values[j - 1][0]
            g_nodes = g_eval(theta_prev.reshape(-1, d), t_nodes.reshape(-1))
            g_nodes = np.asarray(g_nodes, dtype=float).reshape(panels, q, d)
        vals = [np.empty((panels, q, d)) for _ in range(P)]
        start = [xb[v].copy() for v in range(P)]
        for i in range(panels):
            if j == 1:
                v1 = np.broadcast_to(start[1], (q, d)).copy()
                f1 = np.zeros((q, d))
            else:
                f1 = gamma * prev[2][i]
                if g_nodes is not None:
                    f1 = f1 - g_nodes[i]
                v1 = start[1] + h * (C @ f1)
            theta = start[0] + h * (C @ v1)
            vals[0][i], vals[1][i] = theta, v1
            lower = v1
            for m in range(2, P - 1):
                up = np.broadcast_to(xb[m + 1], (q, d)) if j == 1 else prev[m + 1][i]
                fm = -gamma * lower + gamma * up
                vm = start[m] + h * (C @ fm)
                vals[m][i] = vm
                start[m] = start[m] + h * (weights @ fm)
                lower = vm
            rhs = np.broadcast_to(start[P - 1], (q, d)) - gamma * h * (C @ lower)
            vlast = np.linalg.solve(M_imp, rhs)
            vals[P - 1][i] = vlast
            # panel-end updates for the explicit rows
            start[0] = start[0] + h * (weights @ v1)
            start[1] = start[1] + h * (weights @ f1)
            start[P - 1] = start[P - 1] + h * (
                weights @ (-gamma * lower - gamma * vlast)
            )
        out.values[j] = vals
        out.finals[j] = np.concatenate(start)
        prev = vals
    return out


def _make_surrogate(potential, x: np.ndarray, center_policy: str):
    d = potential.dim
    theta0 = x[:d]
    v10 = x[d : 2 * d]
    if center_policy == "iterate":
        return lambda pts, ts: potential.evaluate_taylor_at(theta0, pts)
    if center_policy == "origin":
        zero = np.zeros(d)
        return lambda pts, ts: potential.evaluate_taylor_at(zero, pts)
    if center_policy == "line":
        lam = potential.linear_term()

        def surrogate(pts: np.ndarray, ts: np.ndarray) -> np.ndarray:
            line = theta0[None, :] + ts[:, None] * v10[None, :]
            return potential.evaluate_taylor_at(theta0, line) + (pts - line) @ lam.T

        return surrogate
    raise ValueError(f"unknown center policy {center_policy!r}")


def mean_general(
    P: int,
    gamma: float,
    eta: float,
    x: np.ndarray,
    potential,
    degree: int = 3,
    center_policy: str = "iterate",
    substeps: int = tol.MEAN_QUADRATURE_PANELS,
) -> np.ndarray:
    """One-step mean under a general potential via stage quadrature.

    The result is the full (theta, velocities) mean vector of the last
    stage at the end of the step.  The panel count is doubled once as a
    Richardson check; a relative gap above the warn threshold attaches an
    accuracy warning and above the fail threshold raises
    ``QuadratureNotConverged``.
    """
    P = _validate_order(P)
    if not eta > 0:
        raise ValueError("step size eta must be positive")
    if substeps < tol.MEAN_QUADRATURE_MIN_PANELS:
        raise ValueError(
            f"substeps must be at least {tol.MEAN_QUADRATURE_MIN_PANELS}"
        )
    if degree != 3 and not isinstance(potential, QuadraticPotential):
        raise DegreeUnsupported(
            f"general-potential surrogates are cubic only, got degree {degree}"
        )
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != P * potential.dim:
        raise ValueError("state length must be P * dim")
    surrogate = _make_surrogate(potential, x, center_policy)

    coarse = _integrate_stages(P, gamma, eta, x, surrogate, panels=substeps)
    fine = _integrate_stages(P, gamma, eta, x, surrogate, panels=2 * substeps)
    got, ref = coarse.finals[P - 1], fine.finals[P - 1]
    gap = float(np.linalg.norm(got - ref)) / max(float(np.linalg.norm(ref)), 1.0)
    if gap > tol.MEAN_QUADRATURE_FAIL:
        raise QuadratureNotConverged(
            f"stage quadrature Richardson gap {gap:.3e} exceeds "
            f"{tol.MEAN_QUADRATURE_FAIL:.0e}"
        )
    if gap > tol.MEAN_QUADRATURE_WARN:
        warnings.warn(
            f"stage quadrature Richardson gap {gap:.3e} above "
            f"{tol.MEAN_QUADRATURE_WARN:.0e}; result may be less accurate",
            RuntimeWarning,
            stacklevel=2,
        )
    return ref


def stage_difference_orders(
    P: int,
    gamma: float,
    eta_list,
    potential,
    x: np.ndarray | None = None,
    substeps: int = tol.MEAN_QUADRATURE_MIN_PANELS,
) -> dict[tuple[int, str], float]:
    """Fitted log-log slopes of squared stage-path differences versus eta.

    For each stage j >= 2 and each variable, the deterministic paths of
    stages j and j-1 are compared in squared sup norm over the step; the
    returned table maps (stage, variable name) to the fitted exponent.
    """
    P = _validate_order(P)
    etas = np.asarray(list(eta_list), dtype=float)
    if etas.size < 2 or not (etas.max() / etas.min() >= 10.0 - 1e-9):
        raise ValueError("eta list must span at least one decade")
    d = potential.dim
    if x is None:
        x = np.cos(1.0 + np.arange(P * d))
    x = np.asarray(x, dtype=float).reshape(-1)
    surrogate = _make_surrogate(potential, x, "iterate")

    names = ["theta"] + [f"v{n}" for n in range(1, P)]
    sups: dict[tuple[int, str], list[float]] = {
        (j, nm): [] for j in range(2, P) for nm in names
    }
    for eta in etas:
        paths = _integrate_stages(P, gamma, float(eta), x, surrogate, substeps)
        for j in range(2, P):
            for v, nm in enumerate(names):
                diff = paths.values[j][v] - paths.values[j - 1][v]
                sup = float(np.max(np.sum(diff * diff, axis=-1)))
                sups[(j, nm)].append(sup)
    out: dict[tuple[int, str], float] = {}
    logx = np.log(etas)
    for key, vals in sups.items():
        arr = np.asarray(vals)
        if np.any(arr <= 0):
            out[key] = float("nan")
        else:
            out[key] = float(np.polyfit(logx, np.log(arr), 1)[0])
    return out
