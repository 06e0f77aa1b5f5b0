"""Bipartite structure: shapes, partial transpose, Schmidt decomposition.

Composite index convention: ``e_i (x) f_j`` sits at position ``i * N + j``
(zero-based), so an ``MN x MN`` operator is an ``M x M`` grid of ``N x N``
blocks and the left factor selects the block. The partial transpose always
acts on the right factor, i.e. each block is transposed in place.
"""

from dataclasses import dataclass
import math

import numpy as np

from .exceptions import InvalidInputError, InvalidShapeError
from .linalg import eigvalsh
from .validation import NORM_TOL, check_hermitian, check_matrix, check_positive_int, check_square


@dataclass(frozen=True)
class BipartiteShape:
    """Local dimensions ``(M, N)`` of an ``M (x) N`` system."""

    dim_left: int
    dim_right: int

    def __post_init__(self):
        check_positive_int(self.dim_left, "dim_left")
        check_positive_int(self.dim_right, "dim_right")

    @property
    def dim(self):
        return self.dim_left * self.dim_right

    @property
    def is_square(self):
        return self.dim_left == self.dim_right

    def __iter__(self):
        yield self.dim_left
        yield self.dim_right

    def __str__(self):
        return f"{self.dim_left}x{self.dim_right}"

    @classmethod
    def parse(cls, text):
        """Parse ``"MxN"`` (also accepts ``"M,N"``)."""
        parts = str(text).lower().replace(",", "x").replace("*", "x").split("x")
        if len(parts) != 2:
            raise InvalidShapeError(f"cannot parse dims {text!r}; expected 'MxN'")
        try:
            return cls(int(parts[0]), int(parts[1]))
        except ValueError:
            raise InvalidShapeError(f"cannot parse dims {text!r}; expected 'MxN'") from None


def as_shape(shape, dim=None):
    """Coerce ``shape`` to a ``BipartiteShape``.

    ``shape`` may be a ``BipartiteShape``, a pair, an ``"MxN"`` string, or
    ``None`` (then ``dim`` must be a perfect square and the split is even).
    """
    if shape is None:
        if dim is None:
            raise InvalidShapeError("either a shape or a dimension is required")
        n = math.isqrt(dim)
        if n * n != dim:
            raise InvalidShapeError(
                f"dimension {dim} is not a perfect square; pass the local dimensions explicitly"
            )
        shape = BipartiteShape(n, n)
    elif isinstance(shape, str):
        shape = BipartiteShape.parse(shape)
    elif not isinstance(shape, BipartiteShape):
        try:
            m, n = shape
        except (TypeError, ValueError):
            raise InvalidShapeError(f"cannot interpret {shape!r} as a bipartite shape") from None
        shape = BipartiteShape(int(m), int(n))
    if dim is not None and shape.dim != dim:
        raise InvalidShapeError(f"shape {shape} has dimension {shape.dim}, operator has {dim}")
    return shape


@dataclass(frozen=True, eq=False)
class PureState:
    """Pure state ``sum_ij psi_ij e_i (x) f_j`` stored as its ``M x N`` coefficient matrix."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = check_matrix(self.coefficients, "coefficients")
        norm = float(np.linalg.norm(c))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidInputError(f"pure state is not normalized (norm {norm:.12g})")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_vector(cls, vec, shape):
        vec = np.asarray(vec, dtype=complex).ravel()
        shape = as_shape(shape, vec.size)
        return cls(vec.reshape(shape.dim_left, shape.dim_right))

    @property
    def shape(self):
        return BipartiteShape(*self.coefficients.shape)

    def vector(self):
        return self.coefficients.ravel().copy()

    def density_matrix(self):
        v = self.coefficients.ravel()
        return np.outer(v, v.conj())


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """Schmidt coefficients with the local unitaries, ``psi = U diag(d) W^H``."""

    values: np.ndarray
    left_unitary: np.ndarray
    right_unitary: np.ndarray

    def reconstruct(self):
        k = self.values.size
        return (self.left_unitary[:, :k] * self.values) @ self.right_unitary[:, :k].conj().T


def partial_transpose(A, shape=None):
    """Transpose every ``N x N`` block of ``A`` in place.

    The result is Hermitian whenever ``A`` is, has the same trace and
    Frobenius norm, and applying the map twice returns ``A``.
    """
    A = check_square(A)
    shape = as_shape(shape, A.shape[0])
    M, N = shape
    return A.reshape(M, N, M, N).transpose(0, 3, 2, 1).reshape(M * N, M * N)


def schmidt(psi):
    """Schmidt decomposition of a pure state.

    Accepts a ``PureState`` or a coefficient matrix. Values are the singular
    values of the coefficient matrix, nonincreasing, with squares summing to 1.
    """
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    U, s, Wh = np.linalg.svd(psi.coefficients)
    return SchmidtData(values=s, left_unitary=U, right_unitary=Wh.conj().T)


def check_schmidt_values(values):
    d = np.asarray(values, dtype=float).ravel()
    if d.size == 0 or not np.all(np.isfinite(d)):
        raise InvalidInputError("Schmidt values must be a non-empty finite list")
    if np.any(d < -NORM_TOL):
        raise InvalidInputError("Schmidt values must be nonnegative")
    total = float(np.sum(d**2))
    if abs(total - 1.0) > NORM_TOL:
        raise InvalidInputError(f"squared Schmidt values sum to {total:.12g}, not 1")
    return np.clip(d, 0.0, None)


def pure_pt_spectrum(schmidt_values, dim=None):
    """Closed-form partial-transpose spectrum of a pure state.

    For Schmidt values ``d_1..d_k`` the spectrum is ``{d_i^2}`` together with
    ``+d_i d_j`` and ``-d_i d_j`` for every pair ``i < j``. ``dim`` pads the
    result with zeros up to the full dimension ``M*N`` when ``k < M*N``.
    """
    d = check_schmidt_values(schmidt_values)
    iu, ju = np.triu_indices(d.size, k=1)
    cross = d[iu] * d[ju]
    spectrum = np.concatenate([d**2, cross, -cross])
    if dim is not None:
        if dim < spectrum.size:
            raise InvalidShapeError(f"dim {dim} smaller than spectrum length {spectrum.size}")
        spectrum = np.concatenate([spectrum, np.zeros(dim - spectrum.size)])
    return np.sort(spectrum)


def maximally_entangled(N):
    """``sum_i e_i (x) e_i / sqrt(N)``."""
    N = check_positive_int(N, "N")
    return PureState(np.eye(N, dtype=complex) / math.sqrt(N))


def embedded_bell(N):
    """Bell state ``(e_1 (x) e_1 + e_2 (x) e_2)/sqrt(2)`` inside ``N (x) N``."""
    N = check_positive_int(N, "N", minimum=2)
    c = np.zeros((N, N), dtype=complex)
    c[0, 0] = c[1, 1] = 1 / math.sqrt(2)
    return PureState(c)


def product_state(x, y):
    """Normalized product state ``x (x) y``."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    c = np.outer(x, y)
    return PureState(c / np.linalg.norm(c))


def swap_operator(N):
    """Swap of two ``N``-dimensional factors, ``S (e_i (x) e_j) = e_j (x) e_i``."""
    N = check_positive_int(N, "N")
    S = np.zeros((N * N, N * N), dtype=complex)
    i, j = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    S[(j * N + i).ravel(), (i * N + j).ravel()] = 1.0
    return S


def pt_min_eigenvalue(A, shape=None):
    """Smallest eigenvalue of the partial transpose."""
    A = check_hermitian(A)
    return float(eigvalsh(partial_transpose(A, shape))[0])
