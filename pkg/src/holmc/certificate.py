"""Friction / contraction certificate for the P-th order Langevin dynamics.

Given the chain order P and curvature bounds m <= L of the potential, this
module constructs the spectral constants (kappa, h1..h5), the minimal
friction gamma_0, the contraction rate rho, the positive definite weight
matrix M certifying  M J_b + J_b' M <= -2 rho M  for the drift Jacobian J_b,
and the stepsize threshold eta_star.

Construction notes, pinned for reproducibility:

* H is assembled from the eigenvectors of B_sim' (left eigenvectors of
  B_sim). Only that orientation satisfies the Lyapunov inequality
  H B_sim + B_sim' H >= 2*lambda_hat*H that the certificate rests on; the
  right-eigenvector orientation fails it badly for every P.
* Each eigenvector is taken with unit Euclidean norm and phase fixed so its
  last component is real positive; its rank-one term is then rescaled by the
  squared norm of the last-component-1 representative. Net effect: vectors
  scaled so the last component equals exactly 1 (it is provably nonzero).
* In the defective fallback, the weights b^j = c_j t^(2(1-j)) with
  c_{j+1} = 1 + c_j^2 are applied in reverse chain order (largest weight on
  the eigenvector); that order is what makes the block minors collapse to +1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import DegenerateSpectrum, FrictionTooSmall, InvalidOrder
from .numerics import complex_eig

__all__ = [
    "CertificateInputs",
    "ContractionCertificate",
    "LmiReport",
    "build_bsim",
    "spectrum_bsim",
    "compute_H",
    "compute_h_constants",
    "gamma_zero",
    "assemble_msim",
    "build_certificate",
    "build_drift_jacobian",
    "verify_contraction_lmi",
]

KAPPA_CONVENTIONS = ("theory", "example-compat")


@dataclass(frozen=True)
class CertificateInputs:
    P: int
    m: float
    L: float
    gamma: float | str = "auto"
    epsilon_policy: float = tol.EPSILON_POLICY_DEFAULT
    kappa_convention: str = "theory"

    def __post_init__(self) -> None:
        if int(self.P) != self.P or self.P < 3:
            raise InvalidOrder(f"order P must be an integer >= 3, got {self.P}")
        if not (0 < self.m <= self.L):
            raise ValueError(f"need 0 < m <= L, got m={self.m}, L={self.L}")
        if not (0 < self.epsilon_policy < 1):
            raise ValueError(f"epsilon_policy must lie in (0,1), got {self.epsilon_policy}")
        if self.kappa_convention not in KAPPA_CONVENTIONS:
            raise ValueError(f"unknown kappa convention {self.kappa_convention!r}")
        if self.gamma != "auto" and float(self.gamma) <= 0:
            raise ValueError("gamma must be positive or 'auto'")


@dataclass(frozen=True)
class ContractionCertificate:
    P: int
    m: float
    L: float
    kappa: float
    lambda_hat: float
    H: np.ndarray
    h1: float
    h2: float
    h3: float
    h4: float
    h5: float
    gamma0: float
    gamma: float
    rho: float
    M_sim: np.ndarray
    lambda_min_M: float
    lambda_max_M: float
    eta_star: float
    kappa_convention: str
    diagonalizable: bool
    eigenvector_rescale: tuple[float, ...]


@dataclass(frozen=True)
class LmiReport:
    max_eigenvalue: float
    feasible: bool
    norm_M: float
    rho: float


def build_bsim(P: int) -> np.ndarray:
    """(P-1)x(P-1) velocity-drift factor: zero diagonal except a trailing 1,
    superdiagonal -1, subdiagonal +1."""
    if int(P) != P or P < 3:
        raise InvalidOrder(f"order P must be an integer >= 3, got {P}")
    n = P - 1
    B = np.zeros((n, n))
    for i in range(n - 1):
        B[i, i + 1] = -1.0
        B[i + 1, i] = 1.0
    B[n - 1, n - 1] = 1.0
    return B


def spectrum_bsim(P: int) -> tuple[np.ndarray, float]:
    """Eigenvalues of B_sim sorted by real part, plus lambda_hat = min Re."""
    lam = np.linalg.eigvals(build_bsim(P))
    lam = lam[np.argsort(lam.real)]
    return lam, float(lam.real.min())


def _chain_weights(length: int, t: float) -> np.ndarray:
    """b-coefficients of one Jordan block, reverse-ordered along the chain."""
    c = [1.0]
    while len(c) < length:
        c.append(1.0 + c[-1] ** 2)
    b = np.array([c[j] * t ** (2 * (1 - (j + 1))) for j in range(length)])
    return b[::-1]  # largest weight lands on the eigenvector


def _h_from_generator(
    Bt: np.ndarray, epsilon_policy: float
) -> tuple[np.ndarray, bool, float, tuple[float, ...]]:
    """H from the (possibly defective) generator transpose Bt.

    Returns (H, diagonalizable, kappa_theory, rescale_weights).
    """
    n = Bt.shape[0]
    dec = complex_eig(Bt)
    lam_hat = float(dec.eigenvalues.real.min())

    if dec.condition_estimate <= tol.EIG_CONDITION_LIMIT:
        # diagonalizable path: last components are provably nonzero for B_sim
        last = dec.eigenvectors[-1, :]
        if np.abs(last).min() < 1e-12:
            raise DegenerateSpectrum("eigenvector with vanishing last component")
        W = dec.eigenvectors / last
        H = (W @ W.conj().T).real
        weights = tuple(float(np.linalg.norm(W[:, k]) ** 2) for k in range(n))
        return (H + H.T) / 2.0, True, lam_hat, weights

    # defective fallback: cluster repeated eigenvalues, build epsilon-shifted chains
    lam = dec.eigenvalues
    scale = max(1.0, float(np.abs(lam).max()))
    order = np.argsort(lam.real)
    unused = list(order)
    H = np.zeros((n, n))
    weights: list[float] = []
    epsilon = epsilon_policy * lam_hat
    kappa_theory = lam_hat
    while unused:
        k = unused.pop(0)
        cluster = [k]
        for j in list(unused):
            if abs(lam[j] - lam[k]) <= tol.EIGENVALUE_CLUSTER_RTOL * scale:
                cluster.append(j)
                unused.remove(j)
        mu = lam[cluster].mean()
        length = len(cluster)
        A = Bt.astype(complex) - mu * np.eye(n)
        # geometric multiplicity from the singular spectrum
        svals = np.linalg.svd(A, compute_uv=False)
        geo = int(np.sum(svals <= tol.EIGENVALUE_CLUSTER_RTOL * max(svals.max(), 1.0)))
        if geo == length:
            # semisimple cluster: plain rank-one terms
            for j in cluster:
                v = dec.eigenvectors[:, j]
                H += np.outer(v, v.conj()).real
                weights.append(1.0)
            continue
        if geo != 1:
            raise DegenerateSpectrum(
                f"cluster at {mu:g}: {geo} chains of mixed length are unsupported"
            )
        at_bottom = abs(mu.real - lam_hat) <= tol.EIGENVALUE_CLUSTER_RTOL * scale
        if at_bottom:
            t = 2.0 * epsilon
            kappa_theory = lam_hat - epsilon
        else:
            t = 2.0 * (mu.real - lam_hat)
        chain = _jordan_chain(A, length)
        b = _chain_weights(length, t)
        for v, w in zip(chain, b):
            H += w * np.outer(v, v.conj()).real
            weights.append(float(w))
    H = (H + H.T) / 2.0
    if np.linalg.eigvalsh(H).min() <= 0:
        raise DegenerateSpectrum("defective fallback produced a non-PD H")
    return H, False, kappa_theory, tuple(weights)


def _jordan_chain(A: np.ndarray, length: int) -> list[np.ndarray]:
    """Chain v1..vl with A v1 = 0 and A vj = v_{j-1}, v1 the eigenvector."""
    _, _, Vh = np.linalg.svd(A)
    v = Vh[-1].conj()
    chain = [v]
    for _ in range(1, length):
        w, res, _, _ = np.linalg.lstsq(A, chain[-1], rcond=None)
        if np.linalg.norm(A @ w - chain[-1]) > 1e-8 * max(1.0, np.linalg.norm(chain[-1])):
            raise DegenerateSpectrum("generalized eigenvector solve failed")
        chain.append(w)
    return chain


def compute_H(P: int, epsilon_policy: float = tol.EPSILON_POLICY_DEFAULT) -> tuple[np.ndarray, bool]:
    """Positive definite H with H B_sim + B_sim' H >= 2*kappa*H, plus the
    diagonalizability flag."""
    H, diagonalizable, _, _ = _h_from_generator(build_bsim(P).T, epsilon_policy)
    return H, diagonalizable


def compute_h_constants(
    H: np.ndarray,
    P: int,
    lambda_hat: float,
    kappa_convention: str = "theory",
) -> tuple[float, float, float, float, float, float]:
    """(h1, h2, h3, h4, h5, kappa).

    lambda_hat must already carry the epsilon shift when H came from the
    defective fallback. The example-compat convention replaces kappa by
    lambda_min(H), matching the worked P=4 example's printed M.
    """
    eigs = np.linalg.eigvalsh(H)
    E11 = np.zeros_like(H)
    E11[0, 0] = 1.0
    h1 = float(np.linalg.norm(H @ E11, 2))
    h2 = 1.0
    h3 = 1.0
    inv_norm = 1.0 / float(eigs[0])
    h4 = (1.0 + (P - 1) / 2.0) * inv_norm
    h5 = (1.0 + P) * inv_norm
    if kappa_convention == "theory":
        kappa = float(lambda_hat)
    elif kappa_convention == "example-compat":
        kappa = float(eigs[0])
    else:
        raise ValueError(f"unknown kappa convention {kappa_convention!r}")
    return h1, h2, h3, h4, h5, kappa


def gamma_zero(L: float, h1: float, h2: float, h4: float, h5: float, kappa: float) -> float:
    """Minimal certified friction 2*sqrt(h1*L/kappa)*max(sqrt(h2*h5), sqrt(h4/kappa))."""
    if min(L, h1, h2, h4, h5, kappa) <= 0:
        raise ValueError("gamma_zero needs strictly positive inputs")
    return 2.0 * np.sqrt(h1 * L / kappa) * max(np.sqrt(h2 * h5), np.sqrt(h4 / kappa))


def assemble_msim(H: np.ndarray, kappa: float, L: float, h1: float, gamma: float) -> np.ndarray:
    """P x P weight-matrix factor [[1, (1/gamma) 1'], [(1/gamma) 1, (kappa/(L h1)) H]].

    Valid as a display for any gamma; positive definiteness is certified only
    for gamma >= gamma_0, which build_certificate enforces.
    """
    P = H.shape[0] + 1
    M_sim = np.zeros((P, P))
    M_sim[0, 0] = 1.0
    M_sim[0, 1:] = 1.0 / gamma
    M_sim[1:, 0] = 1.0 / gamma
    M_sim[1:, 1:] = (kappa / (L * h1)) * H
    return M_sim


def build_certificate(inputs: CertificateInputs) -> ContractionCertificate:
    """Assemble the full certificate for (P, m, L, gamma)."""
    P = int(inputs.P)
    H, diagonalizable, kappa_theory, rescale = _h_from_generator(
        build_bsim(P).T, inputs.epsilon_policy
    )
    _, lambda_hat = spectrum_bsim(P)
    h1, h2, h3, h4, h5, kappa = compute_h_constants(
        H, P, kappa_theory, inputs.kappa_convention
    )
    gamma0 = gamma_zero(inputs.L, h1, h2, h4, h5, kappa)
    if inputs.gamma == "auto":
        gamma = gamma0
    else:
        gamma = float(inputs.gamma)
        if gamma < gamma0:
            raise FrictionTooSmall(f"gamma={gamma:g} is below gamma0={gamma0:g}")
    rho = min(inputs.m / (3.0 * h3 * gamma), gamma * kappa / 6.0)

    M_sim = assemble_msim(H, kappa, inputs.L, h1, gamma)
    eigs_M = np.linalg.eigvalsh(M_sim)
    lambda_min_M, lambda_max_M = float(eigs_M[0]), float(eigs_M[-1])

    # eta threshold: (rho/2) |M|^-1 |M^-1|^-1 / (1 + (1+2(P-2)) gamma^2 + L^2)
    denom = 1.0 + (1.0 + 2.0 * (P - 2)) * gamma**2 + inputs.L**2
    eta_star = (rho / 2.0) * (lambda_min_M / lambda_max_M) / denom

    return ContractionCertificate(
        P=P,
        m=float(inputs.m),
        L=float(inputs.L),
        kappa=kappa,
        lambda_hat=float(lambda_hat),
        H=H,
        h1=h1,
        h2=h2,
        h3=h3,
        h4=h4,
        h5=h5,
        gamma0=float(gamma0),
        gamma=float(gamma),
        rho=float(rho),
        M_sim=M_sim,
        lambda_min_M=lambda_min_M,
        lambda_max_M=lambda_max_M,
        eta_star=float(eta_star),
        kappa_convention=inputs.kappa_convention,
        diagonalizable=diagonalizable,
        eigenvector_rescale=rescale,
    )


def build_drift_jacobian(P: int, hessian: np.ndarray, gamma: float) -> np.ndarray:
    """Jacobian of the continuous drift on (theta, v1..v_{P-1}) at a point with
    the given potential Hessian."""
    A = np.asarray(hessian, dtype=float)
    d = A.shape[0]
    J = np.zeros((P * d, P * d))
    J[0:d, d : 2 * d] = np.eye(d)          # d theta = v1 dt
    J[d : 2 * d, 0:d] = -A                 # v1 row carries -grad U
    J[d:, d:] -= gamma * np.kron(build_bsim(P), np.eye(d))
    return J


def verify_contraction_lmi(cert: ContractionCertificate, hessian: np.ndarray) -> LmiReport:
    """Check lambda_max(M J_b + J_b' M + 2 rho M) <= LMI_FEASIBILITY_RTOL * |M|."""
    A = np.asarray(hessian, dtype=float)
    A = (A + A.T) / 2.0
    spec = np.linalg.eigvalsh(A)
    band = 1e-9 * max(1.0, cert.L)
    if spec[0] < cert.m - band or spec[-1] > cert.L + band:
        raise ValueError(
            f"hessian spectrum [{spec[0]:g}, {spec[-1]:g}] outside certified [m, L]="
            f"[{cert.m:g}, {cert.L:g}]"
        )
    d = A.shape[0]
    J = build_drift_jacobian(cert.P, A, cert.gamma)
    M = np.kron(cert.M_sim, np.eye(d))
    S = M @ J + J.T @ M + 2.0 * cert.rho * M
    max_eig = float(np.linalg.eigvalsh((S + S.T) / 2.0).max())
    norm_M = float(np.linalg.norm(M, 2))
    return LmiReport(
        max_eigenvalue=max_eig,
        feasible=max_eig <= tol.LMI_FEASIBILITY_RTOL * norm_M,
        norm_M=norm_M,
        rho=cert.rho,
    )
