"""Dense complex linear algebra kernels.

All norms here are computed from eigenvalues or singular values. Eigenvalues
are always returned in nondecreasing order, singular values in nonincreasing
order.
"""

import math

import numpy as np

from .exceptions import InvalidShapeError, NumericError
from .validation import INF, check_hermitian, check_matrix, check_p, check_positive_int, check_tol


def hermitian_eigensystem(H):
    """Eigendecomposition ``H = V diag(w) V^H`` of a Hermitian matrix.

    Parameters
    ----------
    H : (d, d) array_like
        Hermitian matrix. Small asymmetries (below ``1e-10`` relative) are
        symmetrized away; larger ones raise ``InvalidInputError``.

    Returns
    -------
    w : (d,) ndarray
        Real eigenvalues, nondecreasing.
    V : (d, d) ndarray
        Unitary matrix whose columns are the eigenvectors.
    """
    H = check_hermitian(H)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition did not converge: {exc}") from None
    return w, V


def eigvalsh(H):
    """Eigenvalues of a Hermitian matrix, nondecreasing."""
    H = check_hermitian(H)
    try:
        return np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition did not converge: {exc}") from None


def singular_values(A):
    """Singular values of a (possibly rectangular) matrix, nonincreasing."""
    A = check_matrix(A)
    if A.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD did not converge: {exc}") from None


def vector_p_norm(values, p):
    """l_p norm of a real vector; ``p = math.inf`` gives the max modulus."""
    p = check_p(p)
    x = np.abs(np.asarray(values, dtype=float))
    if x.size == 0:
        return 0.0
    if p == INF:
        return float(np.max(x))
    if p == 1:
        return float(np.sum(x))
    if p == 2:
        return float(np.linalg.norm(x))
    # Rescale by the max entry so x**p cannot overflow or underflow.
    top = float(np.max(x))
    if top == 0.0:
        return 0.0
    return top * float(np.sum((x / top) ** p)) ** (1.0 / p)


def spectral_p_norm(H, p):
    """Schatten p-norm of a Hermitian matrix, ``(sum_i |lambda_i|^p)^(1/p)``.

    ``p = math.inf`` (or the string ``"inf"``) is the operator norm.
    """
    p = check_p(p)
    return vector_p_norm(eigvalsh(H), p)


def frobenius_norm(A):
    """Entry-sum Frobenius norm, used as a cross-check of the p = 2 norm."""
    A = check_matrix(A)
    return float(math.sqrt(np.sum(np.abs(A) ** 2)))


def operator_norm(A):
    """Largest singular value."""
    s = singular_values(A)
    return float(s[0]) if s.size else 0.0


def psd_check(H, tol=1e-9):
    """Test positive semidefiniteness.

    Returns ``(is_psd, min_eig)`` where ``is_psd`` holds iff the smallest
    eigenvalue is at least ``-tol * max(1, ||H||_inf)``.
    """
    tol = check_tol(tol)
    w = eigvalsh(H)
    if w.size == 0:
        return True, 0.0
    min_eig = float(w[0])
    scale = max(1.0, float(np.max(np.abs(w))))
    return min_eig >= -tol * scale, min_eig


def block_norm_compression(A, block_rows, block_cols):
    """Replace each block of ``A`` by its operator norm.

    ``A`` is cut into a ``block_rows x block_cols`` grid of equally sized
    blocks. The result ``C`` satisfies ``||A|| <= ||C|| <= block_rows ||A||``.
    """
    A = check_matrix(A)
    block_rows = check_positive_int(block_rows, "block_rows")
    block_cols = check_positive_int(block_cols, "block_cols")
    rows, cols = A.shape
    if rows % block_rows or cols % block_cols:
        raise InvalidShapeError(
            f"cannot split a {rows}x{cols} matrix into a {block_rows}x{block_cols} block grid"
        )
    br, bc = rows // block_rows, cols // block_cols
    blocks = A.reshape(block_rows, br, block_cols, bc).transpose(0, 2, 1, 3)
    out = np.zeros((block_rows, block_cols))
    for i in range(block_rows):
        for j in range(block_cols):
            out[i, j] = operator_norm(blocks[i, j])
    return out
