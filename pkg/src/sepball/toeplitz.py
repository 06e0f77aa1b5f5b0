"""Explicit separable decompositions of PSD block Toeplitz matrices.

A PSD block Toeplitz matrix ``T`` with ``M x M`` blocks of size ``N`` and
rank ``K`` factors as ``T(i, j) = X U^(i-j) X^H`` with ``X`` of size ``N x K``
and ``U`` a ``K x K`` unitary. Diagonalizing ``U = V diag(z) V^H`` gives

    T = sum_k Z_k Z_k^H (x) L_k L_k^H,   Z_k = (1, z_k, ..., z_k^(M-1)),

with ``L_k`` the k-th column of ``X V``. Term weights are absorbed into the
``L_k``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bipartite import BipartiteShape, as_shape
from .exceptions import DegenerateShapeError, InvalidInputError, InvalidShapeError, NotPSDError, NumericError
from .linalg import hermitian_eigensystem, operator_norm
from .validation import DEFAULT_TOL, check_hermitian, check_matrix, check_positive_int, check_square, check_tol, hermitian_tolerance

RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class BlockToeplitz:
    """First block row ``R_0, ..., R_{M-1}`` of a block Toeplitz matrix.

    Block ``(i, j)`` of the assembled matrix is ``R_{j-i}`` for ``j >= i`` and
    ``R_{i-j}^H`` below the diagonal.
    """

    first_row_blocks: tuple

    def __post_init__(self):
        blocks = [check_matrix(R, f"R_{k}") for k, R in enumerate(self.first_row_blocks)]
        if not blocks:
            raise InvalidShapeError("block Toeplitz matrix needs at least one block")
        n = blocks[0].shape[0]
        for k, R in enumerate(blocks):
            if R.shape != (n, n):
                raise InvalidShapeError(f"block R_{k} has shape {R.shape}, expected {(n, n)}")
        R0 = blocks[0]
        if np.max(np.abs(R0 - R0.conj().T)) > hermitian_tolerance(R0):
            raise InvalidInputError("diagonal block R_0 is not Hermitian")
        blocks[0] = 0.5 * (R0 + R0.conj().T)
        object.__setattr__(self, "first_row_blocks", tuple(blocks))

    @classmethod
    def from_block_row(cls, row, block_count):
        """Split an ``N x (M N)`` array into ``M`` square blocks."""
        row = check_matrix(row, "block row")
        M = check_positive_int(block_count, "block_count")
        n, total = row.shape
        if total != M * n:
            raise InvalidShapeError(f"block row of shape {row.shape} does not hold {M} blocks of size {n}")
        return cls(tuple(row[:, k * n:(k + 1) * n] for k in range(M)))

    @classmethod
    def from_matrix(cls, T, block_count, tol=DEFAULT_TOL):
        """Read the first block row of a full matrix, checking the Toeplitz structure."""
        T = check_square(T)
        M = check_positive_int(block_count, "block_count")
        if T.shape[0] % M:
            raise InvalidShapeError(f"{T.shape[0]}x{T.shape[0]} matrix is not an {M}x{M} block grid")
        n = T.shape[0] // M
        out = cls.from_block_row(T[:n, :], M)
        err = float(np.max(np.abs(out.assemble() - T))) if T.size else 0.0
        if err > tol * max(1.0, float(np.max(np.abs(T)))):
            raise InvalidInputError(f"matrix is not block Toeplitz (max deviation {err:.3g})")
        return out

    @property
    def block_count(self):
        return len(self.first_row_blocks)

    @property
    def block_dim(self):
        return self.first_row_blocks[0].shape[0]

    @property
    def shape(self):
        return BipartiteShape(self.block_count, self.block_dim)

    def assemble(self):
        M, n = self.block_count, self.block_dim
        T = np.empty((M * n, M * n), dtype=complex)
        for i in range(M):
            for j in range(M):
                R = self.first_row_blocks[j - i] if j >= i else self.first_row_blocks[i - j].conj().T
                T[i * n:(i + 1) * n, j * n:(j + 1) * n] = R
        return T


def assemble(T):
    """Full ``MN x MN`` Hermitian matrix of a ``BlockToeplitz``."""
    return T.assemble()


@dataclass(frozen=True, eq=False)
class SeparableDecomposition:
    """Terms ``(Z_k, L_k)`` with ``sum_k Z_k Z_k^H (x) L_k L_k^H`` equal to the target."""

    terms: tuple
    shape: BipartiteShape

    def __len__(self):
        return len(self.terms)

    def reconstruct(self):
        d = self.shape.dim
        out = np.zeros((d, d), dtype=complex)
        for Z, L in self.terms:
            v = np.kron(Z, L)
            out += np.outer(v, v.conj())
        return out

    def to_dict(self):
        def pairs(vec):
            return [[float(c.real), float(c.imag)] for c in vec]

        return {
            "block_count": self.shape.dim_left,
            "block_dim": self.shape.dim_right,
            "terms": [{"z": pairs(Z), "l": pairs(L)} for Z, L in self.terms],
        }

    @classmethod
    def from_dict(cls, data):
        def vec(pairs):
            return np.array([complex(re, im) for re, im in pairs])

        shape = BipartiteShape(int(data["block_count"]), int(data["block_dim"]))
        return cls(tuple((vec(t["z"]), vec(t["l"])) for t in data["terms"]), shape)


def _psd_factor(T, tol):
    """``T = Y Y^H`` with ``Y`` of full column rank ``K``."""
    w, V = hermitian_eigensystem(T)
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    if w.size and w[0] < -tol * scale:
        raise NotPSDError(w[0], f"block Toeplitz matrix is not PSD (min eigenvalue {w[0]:.9g})")
    top = float(w[-1]) if w.size else 0.0
    keep = w > RANK_RTOL * top if top > 0 else np.zeros(w.size, dtype=bool)
    return V[:, keep] * np.sqrt(w[keep])


def _shift_unitary(Y_U, Y_L):
    """Unitary ``W`` with ``Y_L = Y_U W``, given ``Y_U Y_U^H = Y_L Y_L^H``.

    With ``Y_U = A S B^H`` (thin SVD, rank r) the condition forces
    ``Y_L = A S C^H`` for an isometry ``C``; any ``W = B C^H + B' C'^H`` with
    ``B'``, ``C'`` orthonormal complements of ``B``, ``C`` works.
    """
    A, s, Bh = np.linalg.svd(Y_U, full_matrices=True)
    # r >= 1 here: Y_U = 0 would force R_0 = 0 and hence T = 0.
    r = int(np.sum(s > RANK_RTOL * s[0]))
    B = Bh.conj().T
    C = Y_L.conj().T @ A[:, :r] / s[:r]
    # Re-orthonormalize C and complete it to a basis of C^K.
    Qc, _, Rh = np.linalg.svd(C, full_matrices=True)
    C = Qc[:, :r] @ Rh
    W = B[:, :r] @ C.conj().T + B[:, r:] @ Qc[:, r:].conj().T
    # Polar projection removes residual non-unitarity.
    P, _, Qh = np.linalg.svd(W)
    return P @ Qh


def separable_decomposition(T, tol=DEFAULT_TOL):
    """Decompose a PSD block Toeplitz matrix into rank-one product terms.

    Parameters
    ----------
    T : BlockToeplitz
    tol : float
        Relative tolerance for the PSD check and for the shift-equation residual.

    Returns
    -------
    SeparableDecomposition
        ``K = rank(T)`` terms; ``Z_k[0] == 1`` and ``|Z_k[m]| == 1``.

    Raises
    ------
    NotPSDError
        The assembled matrix has a negative eigenvalue beyond tolerance.
    DegenerateShapeError
        For a single block row (``M = 1``); decompose ``R_0`` by its
        eigendecomposition instead.
    NumericError
        If the shift equation ``Y_L = Y_U U`` cannot be met to tolerance.
    """
    if not isinstance(T, BlockToeplitz):
        raise InvalidInputError("separable_decomposition expects a BlockToeplitz")
    tol = check_tol(tol)
    M, n = T.block_count, T.block_dim
    if M == 1:
        raise DegenerateShapeError(
            "a single block has no Toeplitz structure; use the eigendecomposition of R_0"
        )
    Tm = T.assemble()
    Y = _psd_factor(Tm, tol)
    K = Y.shape[1]
    if K == 0:
        return SeparableDecomposition((), T.shape)

    Y_U, Y_L = Y[: (M - 1) * n], Y[n:]
    U = _shift_unitary(Y_U, Y_L)
    scale = max(1.0, float(np.linalg.norm(Y_L)))
    residual = float(np.linalg.norm(Y_L - Y_U @ U))
    if residual > tol * scale:
        raise NumericError(f"shift equation residual {residual:.3g} exceeds tolerance", residual)

    # Complex Schur form of a unitary is diagonal, with unitary Schur vectors.
    D, V = scipy.linalg.schur(U, output="complex")
    z = np.diag(D)
    z = z / np.abs(z)
    L = Y[:n] @ V
    powers = np.arange(M)
    terms = tuple((z[k] ** powers, L[:, k].copy()) for k in range(K))
    return SeparableDecomposition(terms, T.shape)


def contraction_certificate(X, tol=DEFAULT_TOL):
    """Separable decomposition of ``[[I, X], [X^H, I]]`` for a contraction ``X``."""
    X = check_square(X, "X")
    if operator_norm(X) > 1.0 + tol:
        # [[I, X], [X^H, I]] has smallest eigenvalue 1 - ||X||.
        raise NotPSDError(1.0 - operator_norm(X), f"||X|| = {operator_norm(X):.9g} > 1; block matrix is not PSD")
    n = X.shape[0]
    return separable_decomposition(BlockToeplitz((np.eye(n, dtype=complex), X)), tol)


def verify_decomposition(target, dec, shape=None):
    """Frobenius norm of ``target - sum_k Z_k Z_k^H (x) L_k L_k^H``."""
    target = check_hermitian(target)
    shape = as_shape(shape if shape is not None else dec.shape, target.shape[0])
    if shape != dec.shape:
        raise InvalidShapeError(f"decomposition shape {dec.shape} differs from {shape}")
    for Z, L in dec.terms:
        if Z.size != shape.dim_left or L.size != shape.dim_right:
            raise InvalidShapeError("decomposition term does not match the bipartite shape")
    return float(np.linalg.norm(target - dec.reconstruct()))
