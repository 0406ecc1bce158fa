from __future__ import annotations

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holmc import certificate as cert_mod
from holmc import tolerances as tol
from holmc.certificate import (
    CertificateInputs,
    assemble_msim,
    build_bsim,
    build_certificate,
    build_drift_jacobian,
    compute_H,
    compute_h_constants,
    gamma_zero,
    spectrum_bsim,
    verify_contraction_lmi,
)
from holmc.errors import DegenerateSpectrum, FrictionTooSmall, InvalidOrder

from conftest import random_spd

# frozen by the eigendecomposition oracle; see the module docstring for the
# normalization that pins these numbers bit-for-bit
H3_EXPECTED = np.array([[2.0, 1.0], [1.0, 2.0]])
H4_EXPECTED = np.array(
    [
        [3.219276205488, 0.894558248243, -1.0],
        [0.894558248243, 4.834473289738, 2.0],
        [-1.0, 2.0, 3.0],
    ]
)
H4_EIGS = np.array([0.943009691994, 3.975197870898, 6.135541932334])
LAMBDA_HAT = {3: 0.5, 4: 0.215079854501, 5: 0.104876617740}


class TestBuildBsim:
    def test_p3(self):
        np.testing.assert_array_equal(build_bsim(3), [[0.0, -1.0], [1.0, 1.0]])

    def test_p4(self):
        np.testing.assert_array_equal(
            build_bsim(4), [[0.0, -1.0, 0.0], [1.0, 0.0, -1.0], [0.0, 1.0, 1.0]]
        )

    def test_p5_band_pattern(self):
        B = build_bsim(5)
        assert B.shape == (4, 4)
        np.testing.assert_array_equal(np.diag(B), [0.0, 0.0, 0.0, 1.0])
        np.testing.assert_array_equal(np.diag(B, 1), [-1.0, -1.0, -1.0])
        np.testing.assert_array_equal(np.diag(B, -1), [1.0, 1.0, 1.0])

    def test_rejects_low_order(self):
        with pytest.raises(InvalidOrder):
            build_bsim(2)
        with pytest.raises(InvalidOrder):
            build_bsim(3.5)


class TestSpectrum:
    def test_p3_closed_form(self):
        lam, lhat = spectrum_bsim(3)
        np.testing.assert_allclose(sorted(lam.real), [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(sorted(lam.imag), [-np.sqrt(3) / 2, np.sqrt(3) / 2], atol=1e-12)
        assert lhat == pytest.approx(0.5, abs=1e-12)

    def test_p4(self):
        lam, lhat = spectrum_bsim(4)
        assert lhat == pytest.approx(LAMBDA_HAT[4], abs=1e-9)
        reals = sorted(set(np.round(lam.real, 9)))
        assert reals == pytest.approx([0.215079855, 0.569840291], abs=1e-9)

    def test_positive_real_parts_all_orders(self):
        for P in range(3, 9):
            lam, lhat = spectrum_bsim(P)
            assert lhat > 0
            assert np.all(np.diff(lam.real) >= -1e-14)  # sorted by real part


class TestComputeH:
    def test_p3_frozen(self):
        H, diag = compute_H(3)
        assert diag is True
        np.testing.assert_allclose(H, H3_EXPECTED, atol=1e-10)

    def test_p4_frozen(self):
        H, diag = compute_H(4)
        assert diag is True
        np.testing.assert_allclose(H, H4_EXPECTED, atol=1e-9)
        np.testing.assert_allclose(np.linalg.eigvalsh(H), H4_EIGS, atol=1e-9)

    def test_contraction_inequality_all_orders(self):
        # H B + B'H - 2 lambda_hat H must be PSD up to roundoff
        for P in range(3, 9):
            H, _ = compute_H(P)
            B = build_bsim(P)
            _, lhat = spectrum_bsim(P)
            S = H @ B + B.T @ H - 2 * lhat * H
            assert np.linalg.eigvalsh(S).min() >= -tol.H_CONTRACTION_RTOL * np.linalg.norm(H, 2)

    def test_supported_kappa_never_below_theory(self):
        # lambda_min(H^-1/2 (HB+B'H) H^-1/2)/2 >= kappa_theory - 1e-8
        from holmc.numerics import sqrtm_spd

        for P in range(3, 9):
            H, _ = compute_H(P)
            B = build_bsim(P)
            _, lhat = spectrum_bsim(P)
            R = np.linalg.inv(sqrtm_spd(H))
            kappa_lmi = np.linalg.eigvalsh(R @ (H @ B + B.T @ H) @ R).min() / 2.0
            assert kappa_lmi >= lhat - 1e-8

    def test_symmetric_pd(self):
        for P in (3, 5, 7):
            H, _ = compute_H(P)
            assert np.allclose(H, H.T)
            assert np.linalg.eigvalsh(H).min() > 0


class TestJordanFallback:
    def test_defective_2x2(self):
        G = np.array([[1.0, 1.0], [0.0, 1.0]])
        H, diag, kappa_theory, _ = cert_mod._h_from_generator(G.T, epsilon_policy=0.5)
        assert diag is False
        assert kappa_theory == pytest.approx(0.5)  # lambda_hat - eps = 1 - 0.5
        np.testing.assert_allclose(H, np.diag([1.0, 2.0]), atol=1e-9)
        S = H @ G + G.T @ H - 2 * kappa_theory * H
        assert np.linalg.eigvalsh(S).min() >= -1e-10

    def test_defective_3x3_minor_collapse(self):
        # single length-3 chain; weights [5, 2, 1] land on diag(1, 2, 5)
        G = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]])
        H, diag, kappa_theory, _ = cert_mod._h_from_generator(G.T, epsilon_policy=0.5)
        assert diag is False
        np.testing.assert_allclose(H, np.diag([1.0, 2.0, 5.0]), atol=1e-8)
        S = H @ G + G.T @ H - 2 * kappa_theory * H
        assert np.linalg.eigvalsh(S).min() >= -1e-10

    def test_mixed_block_not_at_bottom(self):
        # defective block at 2.0 plus a simple eigenvalue at 0.7 (the bottom)
        G = np.zeros((3, 3))
        G[:2, :2] = [[2.0, 1.0], [0.0, 2.0]]
        G[2, 2] = 0.7
        H, diag, kappa_theory, _ = cert_mod._h_from_generator(G.T, epsilon_policy=0.5)
        assert diag is False
        assert kappa_theory == pytest.approx(0.7)  # no shift: the defect is not at bottom
        S = H @ G + G.T @ H - 2 * kappa_theory * H
        assert np.linalg.eigvalsh(S).min() >= -1e-10

    def test_unsupported_chain_structure_raises(self):
        # eigenvalue 1 with algebraic multiplicity 3, geometric 2
        G = np.zeros((3, 3))
        G[:2, :2] = [[1.0, 1.0], [0.0, 1.0]]
        G[2, 2] = 1.0
        with pytest.raises(DegenerateSpectrum):
            cert_mod._h_from_generator(G.T, epsilon_policy=0.5)

    def test_vanishing_last_component_raises(self):
        with pytest.raises(DegenerateSpectrum):
            cert_mod._h_from_generator(np.diag([1.0, 2.0]), epsilon_policy=0.5)


class TestHConstants:
    def test_p3_frozen(self):
        h1, h2, h3, h4, h5, kappa = compute_h_constants(H3_EXPECTED, 3, LAMBDA_HAT[3])
        assert h1 == pytest.approx(np.sqrt(5.0), abs=1e-12)
        assert (h2, h3) == (1.0, 1.0)
        assert h4 == pytest.approx(2.0, abs=1e-12)
        assert h5 == pytest.approx(4.0, abs=1e-12)
        assert kappa == pytest.approx(0.5)

    def test_p4_frozen_both_conventions(self):
        H, _ = compute_H(4)
        h1, _, _, h4, h5, kappa_th = compute_h_constants(H, 4, LAMBDA_HAT[4], "theory")
        assert h1 == pytest.approx(3.487688883303, abs=1e-9)
        assert h4 == pytest.approx(2.651086220241, abs=1e-9)
        assert h5 == pytest.approx(5.302172440482, abs=1e-9)
        assert kappa_th == pytest.approx(LAMBDA_HAT[4], abs=1e-9)
        *_, kappa_ec = compute_h_constants(H, 4, LAMBDA_HAT[4], "example-compat")
        assert kappa_ec == pytest.approx(0.943009691994, abs=1e-9)


class TestGammaZero:
    def test_unit_inputs(self):
        assert gamma_zero(1, 1, 1, 1, 1, 1) == pytest.approx(2.0)

    def test_p4_frozen(self):
        g0 = gamma_zero(1.0, 3.487688883303, 1.0, 2.651086220241, 5.302172440482, LAMBDA_HAT[4])
        assert g0 == pytest.approx(28.275549676799, rel=1e-9)

    @given(st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=1.01, max_value=4.0))
    @settings(max_examples=30, deadline=None)
    def test_monotone_in_L(self, L, factor):
        lo = gamma_zero(L, 2.0, 1.0, 1.5, 3.0, 0.4)
        hi = gamma_zero(L * factor, 2.0, 1.0, 1.5, 3.0, 0.4)
        assert hi > lo


class TestBuildCertificate:
    def test_auto_gamma_and_rho_branches(self):
        cert = build_certificate(CertificateInputs(P=4, m=0.5, L=2.0))
        assert cert.gamma == pytest.approx(cert.gamma0)
        assert cert.rho == pytest.approx(
            min(cert.m / (3 * cert.h3 * cert.gamma), cert.gamma * cert.kappa / 6.0)
        )
        assert cert.eta_star > 0
        denom = 1 + (1 + 2 * (cert.P - 2)) * cert.gamma**2 + cert.L**2
        assert cert.eta_star == pytest.approx(
            (cert.rho / 2) * (cert.lambda_min_M / cert.lambda_max_M) / denom
        )

    def test_msim_structure(self):
        cert = build_certificate(CertificateInputs(P=5, m=1.0, L=1.0, gamma="auto"))
        P, gamma = cert.P, cert.gamma
        assert cert.M_sim.shape == (P, P)
        assert cert.M_sim[0, 0] == 1.0
        np.testing.assert_allclose(cert.M_sim[0, 1:], np.full(P - 1, 1 / gamma))
        np.testing.assert_allclose(
            cert.M_sim[1:, 1:], (cert.kappa / (cert.L * cert.h1)) * cert.H
        )
        assert cert.lambda_min_M > 0
        assert np.allclose(cert.M_sim, cert.M_sim.T)

    def test_friction_too_small(self):
        with pytest.raises(FrictionTooSmall):
            build_certificate(CertificateInputs(P=4, m=0.5, L=1.0, gamma=1.0))

    def test_example_compat_kappa(self):
        cert = build_certificate(
            CertificateInputs(P=4, m=1.0, L=1.0, kappa_convention="example-compat")
        )
        assert cert.kappa == pytest.approx(0.943009691994, abs=1e-9)

    def test_input_validation(self):
        with pytest.raises(InvalidOrder):
            CertificateInputs(P=2, m=1.0, L=1.0)
        with pytest.raises(ValueError):
            CertificateInputs(P=3, m=2.0, L=1.0)
        with pytest.raises(ValueError):
            CertificateInputs(P=3, m=1.0, L=1.0, epsilon_policy=1.5)
        with pytest.raises(ValueError):
            CertificateInputs(P=3, m=1.0, L=1.0, kappa_convention="printed")

    def test_independent_of_dimension(self):
        # nothing in the construction sees d; two calls agree bit for bit
        a = build_certificate(CertificateInputs(P=4, m=0.7, L=1.9))
        b = build_certificate(CertificateInputs(P=4, m=0.7, L=1.9))
        assert a.gamma0 == b.gamma0
        np.testing.assert_array_equal(a.M_sim, b.M_sim)


class TestContractionLmi:
    def test_feasible_at_twice_gamma0(self, rng):
        for P in (3, 4, 5):
            for _ in range(4):
                d = int(rng.integers(1, 4))
                A = random_spd(rng, d, lo=0.5, hi=2.0)
                spec = np.linalg.eigvalsh(A)
                cert = build_certificate(
                    CertificateInputs(P=P, m=float(spec[0]), L=float(spec[-1]))
                )
                cert = dataclasses.replace(cert, gamma=2 * cert.gamma0)
                cert = dataclasses.replace(
                    cert,
                    rho=min(cert.m / (3 * cert.h3 * cert.gamma), cert.gamma * cert.kappa / 6),
                    M_sim=assemble_msim(cert.H, cert.kappa, cert.L, cert.h1, cert.gamma),
                )
                report = verify_contraction_lmi(cert, A)
                assert report.feasible, (P, d, report.max_eigenvalue)

    def test_zero_rho_weaker_inequality(self):
        cert = build_certificate(CertificateInputs(P=4, m=0.5, L=2.0))
        weak = dataclasses.replace(cert, rho=0.0)
        A = np.diag([0.5, 2.0])
        report = verify_contraction_lmi(weak, A)
        assert report.max_eigenvalue <= 1e-10 * report.norm_M

    def test_low_friction_recorded_not_asserted(self, capsys):
        cert = build_certificate(CertificateInputs(P=4, m=0.5, L=2.0))
        low = dataclasses.replace(
            cert,
            gamma=cert.gamma0 / 10,
            M_sim=assemble_msim(cert.H, cert.kappa, cert.L, cert.h1, cert.gamma0 / 10),
        )
        report = verify_contraction_lmi(low, np.diag([0.5, 2.0]))
        print(f"gamma0/10 LMI residual {report.max_eigenvalue:+.3e} (recorded, not asserted)")

    def test_hessian_outside_band_rejected(self):
        cert = build_certificate(CertificateInputs(P=3, m=0.5, L=1.0))
        with pytest.raises(ValueError):
            verify_contraction_lmi(cert, np.diag([0.5, 3.0]))

    def test_drift_jacobian_blocks(self):
        A = np.diag([1.0, 2.0])
        J = build_drift_jacobian(4, A, gamma=3.0)
        d = 2
        np.testing.assert_array_equal(J[:d, d : 2 * d], np.eye(d))
        np.testing.assert_array_equal(J[d : 2 * d, :d], -A)
        np.testing.assert_array_equal(J[d:, d:], -3.0 * np.kron(build_bsim(4), np.eye(d)))
