"""Target potentials and their directional Taylor data.

Two concrete models are provided.  ``QuadraticPotential`` covers Gaussian
targets and ridge-regression posteriors; its gradient is affine, so every
Taylor object it hands out is exact.  ``LogisticPotential`` covers
ridge-regularised logistic regression; its gradient is expanded to third
order along a line, which is the input the closed-form integrator consumes.

The line expansion of a gradient along direction ``v`` is the map
``t -> grad U(theta + t v)``.  Both models return its cubic Taylor
polynomial as coefficient rows ``(p0, p1, p2, p3)`` with
``omega(t) ~= p0 + p1 t + p2 t^2 + p3 t^3``, i.e. the derivative factors
``1/k!`` are already folded in.

Logistic sigmoids are evaluated in the split form that never exponentiates
a positive argument, with inputs clamped to +-500; both guards keep the
weight vectors finite for arbitrarily large iterates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeUnsupported, EmptyDataset

__all__ = [
    "PotentialModel",
    "QuadraticPotential",
    "LogisticPotential",
    "quadratic_from_dataset",
    "logistic_gradient",
    "logistic_taylor_line",
    "stable_sigmoid",
]

SIGMOID_CLAMP = 500.0


def stable_sigmoid(z: np.ndarray) -> np.ndarray:
    """Elementwise logistic function, safe for large ``|z|``.

    Arguments are clamped to +-500 and the two branches are arranged so
    that ``exp`` only ever sees non-positive inputs.
    """
    z = np.clip(np.asarray(z, dtype=float), -SIGMOID_CLAMP, SIGMOID_CLAMP)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class PotentialModel:
    """Interface shared by all potentials.

    Subclasses implement ``value``, ``gradient``, ``hessian_bounds``,
    ``taylor_line`` and ``evaluate_taylor_at``.  ``dim`` is the parameter
    dimension.
    """

    def __post_init__(self) -> None:
        if type(self) is PotentialModel:
            raise TypeError("PotentialModel is abstract; use a concrete model")

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def value(self, theta: np.ndarray) -> float:
        raise NotImplementedError

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def hessian_bounds(self) -> tuple[float, float]:
        """Global curvature bounds ``(m, L)`` with ``m I <= hess U <= L I``."""
        raise NotImplementedError

    def hessian(self, theta: np.ndarray) -> np.ndarray:
        """Exact ``d x d`` Hessian of ``U`` at ``theta`` (used by the
        damped Newton minimizer)."""
        raise NotImplementedError

    def taylor_line(
        self, theta: np.ndarray, v: np.ndarray, degree: int = 3
    ) -> np.ndarray:
        """Cubic polynomial coefficients of ``t -> grad U(theta + t v)``.

        Returns an array of shape ``(degree + 1, dim)`` whose row ``k`` is
        the coefficient of ``t**k``.
        """
        raise NotImplementedError

    def evaluate_taylor_at(
        self, center: np.ndarray, x: np.ndarray
    ) -> np.ndarray:
        """Multivariate cubic Taylor model of the gradient about ``center``,
        evaluated at ``x``.  ``x`` may be a single point ``(d,)`` or a batch
        ``(m, d)``; the output matches the input shape."""
        raise NotImplementedError

    def linear_term(self) -> np.ndarray:
        """The exactly-linear ``d x d`` component of the gradient map.

        This is the part of ``grad U`` that stage integrators may evaluate
        on a curved path while the remainder stays on a straight line.
        """
        raise NotImplementedError


@dataclass(frozen=True)
class QuadraticPotential(PotentialModel):
    """Potential ``U(theta) = theta' A theta / 2 - b' theta``.

    ``A`` must be symmetric positive definite.  ``provenance`` records how
    the instance was built ("explicit" or "from_dataset").
    """

    A: np.ndarray
    b: np.ndarray
    provenance: str = "explicit"

    def __post_init__(self) -> None:
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape[0] != A.shape[1]:
            raise ValueError("A must be square")
        if A.shape[0] != b.shape[0]:
            raise ValueError("A and b dimensions disagree")
        if not np.allclose(A, A.T, rtol=1e-12, atol=1e-12):
            raise ValueError("A must be symmetric")
        evals = np.linalg.eigvalsh(0.5 * (A + A.T))
        if evals[0] <= 0:
            raise ValueError("A must be positive definite")
        object.__setattr__(self, "A", 0.5 * (A + A.T))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "_bounds", (float(evals[0]), float(evals[-1])))

    _bounds: tuple[float, float] = field(init=False, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def value(self, theta: np.ndarray) -> float:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        return float(0.5 * theta @ self.A @ theta - self.b @ theta)

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        return self.A @ theta - self.b

    def hessian_bounds(self) -> tuple[float, float]:
        return self._bounds

    def hessian(self, theta: np.ndarray) -> np.ndarray:
        return self.A.copy()

    def taylor_line(
        self, theta: np.ndarray, v: np.ndarray, degree: int = 3
    ) -> np.ndarray:
        if degree < 1:
            raise DegreeUnsupported(f"degree must be >= 1, got {degree}")
        theta = np.asarray(theta, dtype=float).reshape(-1)
        v = np.asarray(v, dtype=float).reshape(-1)
        coeffs = np.zeros((degree + 1, self.dim))
        coeffs[0] = self.gradient(theta)
        coeffs[1] = self.A @ v
        return coeffs

    def evaluate_taylor_at(
        self, center: np.ndarray, x: np.ndarray
    ) -> np.ndarray:
        # The gradient is affine, so the model is exact for any center.
        x = np.asarray(x, dtype=float)
        return x @ self.A.T - self.b

    def linear_term(self) -> np.ndarray:
        return self.A


@dataclass(frozen=True)
class LogisticPotential(PotentialModel):
    """Ridge-regularised logistic regression potential.

    ``U(theta) = sum_i log(1 + exp(x_i' theta)) - y_i x_i' theta
    + lam |theta|^2 / 2`` with labels ``y`` in {0, 1}.  The data term is a
    plain sum over rows; an empty design matrix leaves the pure ridge
    potential.
    """

    X: np.ndarray
    y: np.ndarray
    lam: float

    def __post_init__(self) -> None:
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if X.size == 0:
            X = X.reshape(0, X.shape[1] if X.ndim == 2 and X.shape[1] else 0)
        if X.shape[0] != y.shape[0]:
            raise ValueError("X and y row counts disagree")
        if y.size and not np.all((y == 0.0) | (y == 1.0)):
            raise ValueError("labels must be 0 or 1")
        if not self.lam > 0:
            raise ValueError("ridge weight lam must be positive")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def value(self, theta: np.ndarray) -> float:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        ridge = 0.5 * self.lam * float(theta @ theta)
        if self.X.shape[0] == 0:
            return ridge
        z = np.clip(self.X @ theta, -SIGMOID_CLAMP, SIGMOID_CLAMP)
        # log(1 + e^z) computed as max(z, 0) + log1p(exp(-|z|)) to avoid
        # overflow on the positive branch.
        soft = np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))
        return float(np.sum(soft - self.y * z)) + ridge

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        out = self.lam * theta
        if self.X.shape[0]:
            s = stable_sigmoid(self.X @ theta)
            out = out + self.X.T @ (s - self.y)
        return out

    def hessian_bounds(self) -> tuple[float, float]:
        # hess U = lam I + X' diag(s(1-s)) X and s(1-s) <= 1/4.
        if self.X.shape[0] == 0:
            return self.lam, self.lam
        op = float(np.linalg.norm(self.X, ord=2))
        return self.lam, self.lam + 0.25 * op * op

    def hessian(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        out = self.lam * np.eye(self.dim)
        if self.X.shape[0]:
            s = stable_sigmoid(self.X @ theta)
            out = out + (self.X.T * (s * (1.0 - s))) @ self.X
        return out

    def _line_weights(
        self, theta: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        s = stable_sigmoid(self.X @ theta)
        w1 = s * (1.0 - s)
        w2 = w1 * (1.0 - 2.0 * s)
        w3 = w1 * (1.0 - 6.0 * s + 6.0 * s * s)
        return s, w1, w2, w3

    def taylor_line(
        self, theta: np.ndarray, v: np.ndarray, degree: int = 3
    ) -> np.ndarray:
        if degree != 3:
            raise DegreeUnsupported(
                f"logistic line expansion is implemented for degree 3 only, got {degree}"
            )
        theta = np.asarray(theta, dtype=float).reshape(-1)
        v = np.asarray(v, dtype=float).reshape(-1)
        coeffs = np.zeros((4, self.dim))
        coeffs[0] = self.lam * theta
        coeffs[1] = self.lam * v
        if self.X.shape[0]:
            s, w1, w2, w3 = self._line_weights(theta)
            u = self.X @ v
            coeffs[0] += self.X.T @ (s - self.y)
            coeffs[1] += self.X.T @ (w1 * u)
            coeffs[2] = self.X.T @ (w2 * u * u) / 2.0
            coeffs[3] = self.X.T @ (w3 * u * u * u) / 6.0
        return coeffs

    def evaluate_taylor_at(
        self, center: np.ndarray, x: np.ndarray
    ) -> np.ndarray:
        center = np.asarray(center, dtype=float).reshape(-1)
        x = np.asarray(x, dtype=float)
        # The ridge part is affine, hence kept exact rather than expanded.
        out = self.lam * x
        if self.X.shape[0]:
            s, w1, w2, w3 = self._line_weights(center)
            delta = (x - center) @ self.X.T
            out = out + (
                (s - self.y)
                + w1 * delta
                + w2 * delta * delta / 2.0
                + w3 * delta * delta * delta / 6.0
            ) @ self.X
        return out

    def linear_term(self) -> np.ndarray:
        return self.lam * np.eye(self.dim)


def quadratic_from_dataset(
    X: np.ndarray, y: np.ndarray, lam: float
) -> QuadraticPotential:
    """Ridge-regression posterior potential ``A = X'X/n + lam I``,
    ``b = X'y/n``.

    Raises ``EmptyDataset`` when the design matrix has no rows.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).reshape(-1)
    n = X.shape[0]
    if n < 1 or X.size == 0:
        raise EmptyDataset("need at least one observation")
    if y.shape[0] != n:
        raise ValueError("X and y row counts disagree")
    if not lam > 0:
        raise ValueError("ridge weight lam must be positive")
    d = X.shape[1]
    A = X.T @ X / n + lam * np.eye(d)
    b = X.T @ y / n
    return QuadraticPotential(A=A, b=b, provenance="from_dataset")


def logistic_gradient(
    X: np.ndarray, y: np.ndarray, lam: float, theta: np.ndarray
) -> np.ndarray:
    """Gradient of the ridge-regularised logistic potential at ``theta``."""
    theta = np.asarray(theta, dtype=float).reshape(-1)
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return lam * theta
    return LogisticPotential(X=X, y=y, lam=lam).gradient(theta)


def logistic_taylor_line(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    theta: np.ndarray,
    v: np.ndarray,
    degree: int = 3,
) -> np.ndarray:
    """Cubic line expansion of the logistic gradient; see
    ``LogisticPotential.taylor_line``."""
    return LogisticPotential(X=X, y=y, lam=lam).taylor_line(theta, v, degree)
