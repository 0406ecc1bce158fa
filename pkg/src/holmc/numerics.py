"""Dense linear-algebra primitives shared by every other module.

Thin, contract-enforcing wrappers over LAPACK-backed numpy/scipy routines.
All functions are pure and operate on immutable inputs, so any number of
worker processes or threads may call them concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import tolerances as tol
from .errors import NotContractive, NotFactorizable, NotPSD, Overflow

__all__ = [
    "EigenDecomposition",
    "complex_eig",
    "cholesky_with_jitter",
    "sqrtm_spd",
    "expm",
    "van_loan_gramian",
    "solve_discrete_lyapunov",
]


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectrum of a real square matrix with unit-norm eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    condition_estimate: float


def complex_eig(B: np.ndarray) -> EigenDecomposition:
    """Balanced QR eigendecomposition with unit-norm columns.

    The condition estimate is that of the eigenvector matrix; values above
    ``tolerances.EIG_CONDITION_LIMIT`` mean the basis is numerically unusable
    and callers should treat the matrix as non-diagonalizable.
    """
    B = np.asarray(B, dtype=float)
    lam, V = np.linalg.eig(B)
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    try:
        cond = float(np.linalg.cond(V))
    except np.linalg.LinAlgError:
        cond = float("inf")
    return EigenDecomposition(eigenvalues=lam, eigenvectors=V, condition_estimate=cond)


def cholesky_with_jitter(
    M: np.ndarray, jitter0: float = tol.CHOLESKY_JITTER_BASE
) -> tuple[np.ndarray, float]:
    """Lower-triangular L with L @ L.T = M + delta*I for the smallest working delta.

    The ladder is {0, jitter0, 10*jitter0, ...} capped at
    ``tolerances.CHOLESKY_JITTER_MAX``. Returns (L, delta).
    """
    M = np.asarray(M, dtype=float)
    M = (M + M.T) / 2.0
    n = M.shape[0]
    ladder = [0.0]
    k = 0
    while (delta := float(jitter0) * 10.0**k) <= tol.CHOLESKY_JITTER_MAX * (1 + 1e-12):
        ladder.append(delta)
        k += 1
    for delta in ladder:
        try:
            L = np.linalg.cholesky(M + delta * np.eye(n))
        except np.linalg.LinAlgError:
            continue
        return L, delta
    raise NotFactorizable(
        f"not factorizable even with jitter {ladder[-1]:g}; covariance is broken"
    )


def sqrtm_spd(M: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition.

    Eigenvalues within the small negative band -PSD_NEGATIVE_BAND*|M| are
    clamped to zero; anything lower raises NotPSD.
    """
    M = np.asarray(M, dtype=float)
    M = (M + M.T) / 2.0
    w, V = np.linalg.eigh(M)
    scale = max(abs(w[0]), abs(w[-1]), 1e-300)
    if w[0] < -tol.PSD_NEGATIVE_BAND * scale:
        raise NotPSD(f"min eigenvalue {w[0]:g} below -{tol.PSD_NEGATIVE_BAND:g}*{scale:g}")
    w = np.clip(w, 0.0, None)
    S = (V * np.sqrt(w)) @ V.T
    return (S + S.T) / 2.0


def expm(G: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with a Pade core)."""
    G = np.asarray(G, dtype=float)
    if not np.all(np.isfinite(G)):
        raise Overflow("non-finite entries in expm input")
    if np.linalg.norm(G, 1) > tol.EXPM_INPUT_NORM_LIMIT:
        raise Overflow(
            f"|G|_1 = {np.linalg.norm(G, 1):g} exceeds {tol.EXPM_INPUT_NORM_LIMIT:g}"
        )
    E = scipy.linalg.expm(G)
    if not np.all(np.isfinite(E)):
        raise Overflow("matrix exponential overflowed")
    return E


def van_loan_gramian(G: np.ndarray, Q: np.ndarray, t: float) -> np.ndarray:
    """Controllability-style Gramian  integral_0^t e^{G(t-s)} Q e^{G'(t-s)} ds.

    Uses the block-exponential identity: with C = [[-G, Q], [0, G']],
    e^{Ct} = [[*, E12], [0, E22]] and the Gramian equals E22' @ E12.
    """
    G = np.asarray(G, dtype=float)
    Q = np.asarray(Q, dtype=float)
    n = G.shape[0]
    C = np.zeros((2 * n, 2 * n))
    C[:n, :n] = -G
    C[:n, n:] = Q
    C[n:, n:] = G.T
    E = expm(C * float(t))
    W = E[n:, n:].T @ E[:n, n:]
    return (W + W.T) / 2.0


def solve_discrete_lyapunov(T: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Solve S = T S T' + Q by the doubling iteration.

    Requires spectral radius(T) < 1 - CONTRACTIVE_MARGIN; the iterate
    S_k = sum_{j<2^k} T^j Q T'^j converges quadratically in k.
    """
    T = np.asarray(T, dtype=float)
    Q = np.asarray(Q, dtype=float)
    radius = max(abs(np.linalg.eigvals(T)), default=0.0)
    if radius >= 1.0 - tol.CONTRACTIVE_MARGIN:
        raise NotContractive(f"spectral radius {radius:.17g} is not below 1")
    S = (Q + Q.T) / 2.0
    A = T.copy()
    for _ in range(200):
        S = S + A @ S @ A.T
        A = A @ A
        # |T^{2^k}|_F^2 bounds the size of every remaining term relative to S
        if np.linalg.norm(A, "fro") ** 2 * max(np.linalg.norm(S, "fro"), 1.0) < 1e-18:
            break
    return (S + S.T) / 2.0
