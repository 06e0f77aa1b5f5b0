from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import loop_partial_transpose
from sepball.bipartite import embedded_bell, maximally_entangled, product_state
from sepball.criteria import analyze, ppt_test, scaling_score
from sepball.exceptions import InvalidInputError, InvalidParameterError, NotAProjectorError
from sepball.extremal import (
    antisymmetric_projector,
    ball_radius,
    estimate_projector_negativity,
    estimate_pure_negativity,
    interior_boundary_delta,
    npt_witness,
    projector_negativity,
    pseudopure_bounds,
    pure_perturbation_thresholds,
    pure_pt_negativity,
    symmetric_projector,
    witness_pt_min,
)
from sepball.linalg import spectral_p_norm
from sepball.stategen import Stream, random_pure

INF = math.inf


def exact_score(d, k, a):
    """S for the spectrum of I + a P with rank(P) = k, in exact arithmetic."""
    s1 = (d - k) + k * (1 + a)
    s2 = (d - k) + k * (1 + a) ** 2
    return d - s1 * s1 / s2


def wedge(N, i, j):
    v = np.zeros(N * N)
    v[i * N + j], v[j * N + i] = 1, -1
    return v / math.sqrt(2)


class TestBallRadius:
    def test_values(self):
        assert ball_radius(3, INF).radius == 1 / 3
        assert ball_radius(2, 4).radius == 2**-0.5
        assert ball_radius(5, 2).radius == 1.0
        assert ball_radius(4, 1.3).radius == 1.0

    def test_continuity_at_two(self):
        assert ball_radius(4, 2 + 1e-9).radius == pytest.approx(1.0, abs=1e-8)

    def test_errors(self):
        with pytest.raises(InvalidParameterError):
            ball_radius(3, 0.9)
        with pytest.raises(InvalidParameterError):
            ball_radius(1, 2)


class TestWitness:
    @pytest.mark.parametrize("N", [2, 3, 4])
    @pytest.mark.parametrize("p", [1, 2, 3, 7, INF])
    def test_norm_and_pt_spectrum(self, N, p):
        a = 0.37
        D = npt_witness(N, p, a)
        assert spectral_p_norm(D, p) == pytest.approx(a, rel=1e-12)
        w = np.linalg.eigvalsh(loop_partial_transpose(np.eye(N * N) + D, N, N))
        assert w[0] == pytest.approx(witness_pt_min(N, p, a), abs=1e-12)

    def test_n2_inf_boundary(self):
        D = npt_witness(2, INF, 0.5)
        assert ppt_test(np.eye(4) + D)[0] == pytest.approx(0.0, abs=1e-14)

    def test_n3_p2_outside(self):
        m, ok = ppt_test(np.eye(9) + npt_witness(3, 2, 1.01))
        assert not ok and m == pytest.approx(-0.01, abs=1e-12)

    def test_n3_inf_inside(self):
        rep = analyze(np.eye(9) + npt_witness(3, INF, 1 / 3 - 0.01))
        assert rep.is_separable and rep.passes["pball_inf"]

    @pytest.mark.parametrize("N", [2, 3, 4])
    @pytest.mark.parametrize("p", [2, 3, INF])
    def test_tightness(self, N, p):
        B = ball_radius(N, p).radius
        assert ppt_test(np.eye(N * N) + npt_witness(N, p, B - 0.01))[1]
        assert not ppt_test(np.eye(N * N) + npt_witness(N, p, B + 0.01))[1]

    @pytest.mark.parametrize("a", [0, -1, INF, float("nan")])
    def test_bad_a(self, a):
        with pytest.raises(InvalidParameterError):
            npt_witness(2, 2, a)


class TestNegativity:
    def test_values(self):
        assert pure_pt_negativity([1, 0, 0]) == 0
        assert pure_pt_negativity([2**-0.5, 2**-0.5]) == pytest.approx(0.5)
        assert pure_pt_negativity([3**-0.5] * 3) == pytest.approx(1 / 3)
        assert pure_pt_negativity([1.0]) == 0

    def test_unnormalized(self):
        with pytest.raises(InvalidInputError):
            pure_pt_negativity([1, 1])

    def test_pure_state_bound(self):
        est = estimate_pure_negativity(4, 500, seed=1)
        assert est.is_lower_estimate and est.n_samples == 500
        assert 0 < est.value <= 0.5


class TestThresholds:
    def test_bell(self):
        assert pure_perturbation_thresholds(embedded_bell(2)) == pytest.approx((2, 2))

    def test_maxent3(self):
        s, p = pure_perturbation_thresholds(maximally_entangled(3))
        assert s == pytest.approx(9 / 7) and p == pytest.approx(3)

    @pytest.mark.parametrize("N", [2, 3, 5])
    def test_product(self, N):
        e = np.zeros(N)
        e[0] = 1
        s, p = pure_perturbation_thresholds(product_state(e, e))
        assert s == pytest.approx(N**2 / (N**2 - 2)) and p == INF

    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_scaling_boundary(self, N):
        rho = random_pure((N, N), seed=N).density_matrix()
        a = N**2 / (N**2 - 2)
        rep = analyze(np.eye(N * N) + a * rho)
        assert rep.is_separable and rep.passes["scaling"]
        assert analyze(np.eye(N * N) + (a + 0.01) * rho).scaling_score > 1


class TestProjectors:
    @pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
    def test_antisymmetric(self, N):
        P = antisymmetric_projector(N)
        np.testing.assert_allclose(P @ P, P, atol=1e-14)
        assert round(np.trace(P).real) == N * (N - 1) // 2
        assert projector_negativity(P) == pytest.approx((N - 1) / 2, abs=1e-10)

    def test_singlet(self):
        P = antisymmetric_projector(2)
        v = wedge(2, 0, 1)
        np.testing.assert_allclose(P, np.outer(v, v), atol=1e-15)

    def test_symmetric_complement(self):
        N = 3
        np.testing.assert_allclose(symmetric_projector(N) + antisymmetric_projector(N), np.eye(9))

    def test_identity(self):
        assert projector_negativity(np.eye(9)) == 0.0

    @pytest.mark.parametrize("N", [3, 4])
    def test_product_projectors(self, N):
        for rank in (N - 1, N):
            vecs = [np.kron(np.eye(N)[i], np.eye(N)[(i + 1) % N]) for i in range(rank)]
            P = sum(np.outer(v, v) for v in vecs)
            assert projector_negativity(P) == 0.0

    def test_not_projector(self):
        with pytest.raises(NotAProjectorError):
            projector_negativity(0.5 * np.eye(4))

    @pytest.mark.parametrize("N", [2, 3])
    def test_scaling_boundary(self, N):
        P = antisymmetric_projector(N)
        a = 2 / (N - 1)
        d = N * N
        assert analyze(np.eye(d) + a * P).scaling_score == pytest.approx(1.0, abs=1e-12)
        assert ppt_test(np.eye(d) + a * P)[0] == pytest.approx(0.0, abs=1e-12)
        assert not ppt_test(np.eye(d) + (a + 0.01) * P)[1]


class TestRankScan:
    @pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
    def test_exact(self, N):
        d, a = N * N, Fraction(2, N - 1)
        special = N * (N - 1) // 2
        for k in range(1, d + 1):
            s = exact_score(d, k, a)
            if k == special:
                assert s == 1
            else:
                assert s < 1
            lam = np.r_[np.ones(d - k), np.full(k, 1 + float(a))]
            assert scaling_score(lam) == pytest.approx(float(s), abs=1e-12)


class TestInteriorBoundary:
    @pytest.mark.parametrize("N", [2, 3, 4, 5])
    def test_spectrum(self, N):
        D = interior_boundary_delta(N)
        w = np.linalg.eigvalsh(D)
        n_minus = N * (N + 1) // 2
        np.testing.assert_allclose(w[:n_minus], -1 / N, atol=1e-14)
        np.testing.assert_allclose(w[n_minus:], 1 / N, atol=1e-14)
        assert spectral_p_norm(D, 2) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(np.eye(N * N) + D)[0] == pytest.approx(1 - 1 / N)

    def test_n3_outside(self):
        assert not ppt_test(np.eye(9) + 1.02 * interior_boundary_delta(3))[1]


class TestPseudopure:
    def test_n2(self):
        prof = pseudopure_bounds(2)
        assert prof.pseudopure_lower == pytest.approx(1 / 3)
        assert prof.pseudopure_upper == pytest.approx(1 / 3)
        assert prof.prior_lower == pytest.approx(1 / 9) and prof.prior_upper == pytest.approx(1 / 3)
        assert prof.pure_scaling_threshold == prof.pure_ppt_threshold_bell == 2

    def test_n3(self):
        prof = pseudopure_bounds(3)
        assert prof.pseudopure_lower == 1 / 8
        assert prof.pseudopure_upper == pytest.approx(2 / 11)
        assert prof.projector_negativity_max == 1.0

    @pytest.mark.parametrize("N", range(2, 8))
    def test_ordering_and_refine(self, N):
        prof = pseudopure_bounds(N)
        if N == 2:
            assert prof.pseudopure_lower == pytest.approx(prof.pseudopure_upper)
        else:
            assert prof.pseudopure_lower < prof.pseudopure_upper
        assert prof.prior_lower <= prof.pseudopure_lower
        ref = pseudopure_bounds(N, refine=True).pseudopure_lower
        assert ref == pytest.approx(prof.pseudopure_lower, rel=1e-12)

    def test_upper_realized_by_bell_mixture(self):
        for N in (2, 3, 4):
            d = N * N
            eps = 2 / (2 + d)
            sigma = lambda e: (1 - e) * np.eye(d) / d + e * embedded_bell(N).density_matrix()
            assert ppt_test(sigma(eps))[0] == pytest.approx(0, abs=1e-12)
            assert not ppt_test(sigma(eps + 1e-3))[1]


class TestLadder:
    """Negativity per unit rank decreases along rank multiples."""

    def test_wedge_families(self):
        N = 4
        W6 = projector_negativity(antisymmetric_projector(N))
        # Rank 1: embedded singlet.
        v = wedge(N, 0, 1)
        W1 = projector_negativity(np.outer(v, v))
        # Rank 2: two disjoint singlets.
        P2 = sum(np.outer(w, w) for w in (wedge(N, 0, 1), wedge(N, 2, 3)))
        W2 = projector_negativity(P2)
        # Rank 3: antisymmetric subspace of C^3 inside C^4.
        P3 = sum(np.outer(w, w) for w in (wedge(N, 0, 1), wedge(N, 0, 2), wedge(N, 1, 2)))
        W3 = projector_negativity(P3)
        assert (W1, W2, W3, W6) == pytest.approx((0.5, 0.5, 1.0, 1.5))
        for L, WL in ((1, W1), (2, W2), (3, W3)):
            assert W6 / 6 <= WL / L + 1e-12

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), N=st.integers(3, 4))
    def test_subadditive_over_splits(self, seed, N):
        # A rank-K projector split into K/L orthogonal rank-L pieces has
        # negativity at most the sum of the pieces.
        P = antisymmetric_projector(N)
        w, V = np.linalg.eigh(P)
        Q = V[:, w > 0.5]
        K = Q.shape[1]
        L = 1 if K == 3 else 2
        U = np.linalg.qr(Stream(seed).complex_normal((K, K)))[0]
        basis = Q @ U
        pieces = [basis[:, i : i + L] for i in range(0, K, L)]
        neg = [projector_negativity(B @ B.conj().T) for B in pieces]
        assert projector_negativity(P) <= sum(neg) + 1e-10
        assert projector_negativity(P) / K <= max(neg) / L + 1e-10

    def test_sampled_estimates_respect_bound(self):
        for N in (2, 3, 4):
            m = N * (N - 1) // 2
            est = estimate_projector_negativity(N, m, 200, seed=N)
            assert est.value <= (N - 1) / 2 + 1e-9
        Q = np.linalg.eigh(antisymmetric_projector(4))[1][:, -6:]
        est = estimate_projector_negativity(4, 3, 100, seed=9, subspace=Q)
        assert est.value <= 1.5 + 1e-9
