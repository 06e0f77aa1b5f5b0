import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import loop_partial_transpose
from sepball.bipartite import (
    BipartiteShape,
    PureState,
    as_shape,
    embedded_bell,
    maximally_entangled,
    partial_transpose,
    product_state,
    pure_pt_spectrum,
    schmidt,
    swap_operator,
)
from sepball.exceptions import InvalidInputError, InvalidShapeError
from sepball.linalg import spectral_p_norm
from sepball.stategen import Stream, random_density, random_pure


def bell_density():
    return embedded_bell(2).density_matrix()


class TestShape:
    def test_parse(self):
        assert BipartiteShape.parse("2x3") == BipartiteShape(2, 3)
        assert BipartiteShape.parse("4,4").dim == 16

    def test_bad(self):
        with pytest.raises(InvalidShapeError):
            BipartiteShape.parse("2x3x4")
        with pytest.raises(InvalidShapeError):
            as_shape(None, 6)
        with pytest.raises(InvalidShapeError):
            as_shape((2, 2), 6)

    def test_infer_square(self):
        assert as_shape(None, 9) == BipartiteShape(3, 3)


class TestPartialTranspose:
    def test_identity(self):
        np.testing.assert_array_equal(partial_transpose(np.eye(6), (2, 3)), np.eye(6))

    def test_matches_entrywise_reference(self, rng):
        for M, N in [(2, 2), (2, 3), (3, 2), (1, 4), (3, 3)]:
            A = rng.normal(size=(M * N, M * N)) + 1j * rng.normal(size=(M * N, M * N))
            np.testing.assert_array_equal(partial_transpose(A, (M, N)), loop_partial_transpose(A, M, N))

    def test_bell_spectrum(self):
        w = np.linalg.eigvalsh(partial_transpose(bell_density(), (2, 2)))
        np.testing.assert_allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    def test_bell_spectrum_exact(self):
        s = 1 / sympy.sqrt(2)
        v = sympy.Matrix([s, 0, 0, s])
        rho = v * v.T
        pt = sympy.Matrix(4, 4, lambda r, c: rho[(r // 2) * 2 + c % 2, (c // 2) * 2 + r % 2])
        eig = sorted(sum(([k] * m for k, m in pt.eigenvals().items()), []))
        assert eig == [-sympy.Rational(1, 2)] + [sympy.Rational(1, 2)] * 3

    def test_product_stays_psd(self):
        psi = product_state([1, 1j], [2, -1, 0.5])
        rho = psi.density_matrix()
        w = np.linalg.eigvalsh(partial_transpose(rho, (2, 3)))
        np.testing.assert_allclose(w, np.linalg.eigvalsh(rho), atol=1e-14)

    def test_shape_mismatch(self):
        with pytest.raises(InvalidShapeError):
            partial_transpose(np.eye(6), (2, 2))

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2**63), M=st.integers(1, 4), N=st.integers(1, 4))
    def test_involution_trace_norm(self, seed, M, N):
        rho = random_density(M * N, seed=seed)
        pt = partial_transpose(rho, (M, N))
        np.testing.assert_array_equal(partial_transpose(pt, (M, N)), rho)
        assert np.trace(pt) == np.trace(rho)
        assert np.linalg.norm(pt) == pytest.approx(np.linalg.norm(rho), rel=1e-12)
        np.testing.assert_allclose(pt, pt.conj().T, atol=0)


class TestSchmidt:
    def test_product(self):
        c = np.zeros((3, 3))
        c[0, 0] = 1
        np.testing.assert_allclose(schmidt(c).values, [1, 0, 0])

    def test_bell(self):
        np.testing.assert_allclose(schmidt(embedded_bell(2)).values, [1 / math.sqrt(2)] * 2)

    def test_diagonal(self):
        np.testing.assert_allclose(schmidt(np.diag([0.8, 0.6])).values, [0.8, 0.6])

    def test_unnormalized(self):
        with pytest.raises(InvalidInputError):
            schmidt(np.diag([1.0, 1.0]))

    def test_rectangular_reconstruction(self):
        psi = random_pure((2, 4), seed=3)
        data = schmidt(psi)
        assert data.values.size == 2
        assert np.sum(data.values**2) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(data.reconstruct(), psi.coefficients, atol=1e-12)


class TestPurePTSpectrum:
    def test_product(self):
        np.testing.assert_allclose(pure_pt_spectrum([1, 0]), [0, 0, 0, 1])

    def test_bell(self):
        np.testing.assert_allclose(pure_pt_spectrum([1 / math.sqrt(2)] * 2), [-0.5, 0.5, 0.5, 0.5])

    def test_maxent_3(self):
        spectrum = pure_pt_spectrum([1 / math.sqrt(3)] * 3)
        np.testing.assert_allclose(spectrum, [-1 / 3] * 3 + [1 / 3] * 6)

    def test_padding(self):
        spectrum = pure_pt_spectrum([0.8, 0.6], dim=8)
        assert spectrum.size == 8 and np.count_nonzero(np.abs(spectrum) < 1e-15) == 4

    def test_unnormalized(self):
        with pytest.raises(InvalidInputError):
            pure_pt_spectrum([1, 1])

    def test_random_states_match_brute_force(self):
        stream = Stream(11)
        for _ in range(200):
            M, N = (int(x) for x in 1 + np.floor(stream.uniform(2) * 4))
            psi = random_pure((M, N), stream)
            brute = np.linalg.eigvalsh(loop_partial_transpose(psi.density_matrix(), M, N))
            closed = pure_pt_spectrum(schmidt(psi).values, dim=M * N)
            np.testing.assert_allclose(brute, closed, atol=1e-9)

    def test_w_bound(self):
        stream = Stream(12)
        for N in range(2, 6):
            for _ in range(100):
                psi = random_pure((N, N), stream)
                w = np.linalg.eigvalsh(partial_transpose(psi.density_matrix(), (N, N)))
                assert -w[0] <= 0.5 + 1e-9


class TestNamedStates:
    def test_maxent(self):
        assert maximally_entangled(1).coefficients[0, 0] == 1
        np.testing.assert_allclose(schmidt(maximally_entangled(3)).values, [1 / math.sqrt(3)] * 3)
        np.testing.assert_allclose(schmidt(maximally_entangled(2)).values, [1 / math.sqrt(2)] * 2)

    def test_pure_state_validation(self):
        with pytest.raises(InvalidInputError):
            PureState(np.ones((2, 2)))


class TestSwap:
    def test_n1(self):
        np.testing.assert_array_equal(swap_operator(1), [[1]])

    def test_n2_spectrum_exact(self):
        S = sympy.Matrix(swap_operator(2).real.astype(int))
        eig = sorted(sum(([k] * m for k, m in S.eigenvals().items()), []))
        assert eig == [-1, 1, 1, 1]
        np.testing.assert_allclose(np.linalg.eigvalsh(swap_operator(2)), [-1, 1, 1, 1])

    @pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
    def test_properties(self, N):
        S = swap_operator(N)
        np.testing.assert_array_equal(S @ S, np.eye(N * N))
        w = np.linalg.eigvalsh(S)
        assert np.sum(np.isclose(w, 1)) == N * (N + 1) // 2
        assert np.sum(np.isclose(w, -1)) == N * (N - 1) // 2
        assert spectral_p_norm(S, np.inf) == pytest.approx(1.0)
        for p in (1, 2, 3, 7.5):
            assert spectral_p_norm(S, p) == pytest.approx(N ** (2 / p))

    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_swap_is_scaled_pt_of_maxent(self, N):
        rho_e = maximally_entangled(N).density_matrix()
        np.testing.assert_allclose(swap_operator(N), N * partial_transpose(rho_e, (N, N)), atol=1e-12)

    def test_action(self):
        N = 3
        S = swap_operator(N)
        x, y = np.array([1, 2j, 0]), np.array([0, 1, -1])
        np.testing.assert_allclose(S @ np.kron(x, y), np.kron(y, x))
