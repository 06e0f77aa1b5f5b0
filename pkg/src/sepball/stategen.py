"""Reproducible random states, density matrices and projectors.

Random numbers come from a fixed pipeline so that a seed pins the output on
every platform and numpy release:

1. Philox-4x64-10, a counter-based generator, keyed by
   ``seed + (stream << 64)``, read through ``random_raw`` (raw 64-bit words);
2. a word ``w`` becomes the uniform double ``((w >> 11) + 0.5) * 2**-53`` in (0, 1);
3. consecutive uniforms ``(u1, u2)`` become two standard normals by the
   Box-Muller transform;
4. a standard complex Gaussian is ``(x + i y) / sqrt(2)`` from two
   consecutive normals.

``Stream`` objects can be passed wherever a seed is accepted; successive
calls on the same stream continue its sequence.
"""

import math
import os

import numpy as np

from .bipartite import PureState, as_shape
from .exceptions import InvalidParameterError
from .validation import check_positive_int

SEED_ENV_VAR = "SEPBALL_SEED"
_TWO_POW_64 = 1 << 64


def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidParameterError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < _TWO_POW_64:
        raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def default_seed():
    """Seed from the ``SEPBALL_SEED`` environment variable, else 0."""
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return check_seed(int(raw, 0))
    except ValueError:
        raise InvalidParameterError(f"{SEED_ENV_VAR}={raw!r} is not an integer") from None


class Stream:
    """Deterministic stream of uniforms and Gaussians for one ``(seed, stream)`` pair."""

    def __init__(self, seed=0, stream=0):
        self.seed = check_seed(seed)
        self.stream = check_seed(stream)
        self._bits = np.random.Philox(key=self.seed + (self.stream << 64))

    def spawn(self, i):
        """Independent stream ``i`` derived from the same seed."""
        return Stream(self.seed, (self.stream + 1 + int(i)) % _TWO_POW_64)

    def uniform(self, n):
        raw = np.asarray(self._bits.random_raw(int(n)), dtype=np.uint64)
        return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53

    def normal(self, n):
        n = int(n)
        u = self.uniform(2 * ((n + 1) // 2)).reshape(-1, 2)
        r = np.sqrt(-2.0 * np.log(u[:, 0]))
        theta = 2.0 * math.pi * u[:, 1]
        return np.column_stack([r * np.cos(theta), r * np.sin(theta)]).ravel()[:n]

    def complex_normal(self, shape):
        shape = tuple(np.atleast_1d(shape).astype(int))
        n = int(np.prod(shape))
        x = self.normal(2 * n).reshape(n, 2)
        return ((x[:, 0] + 1j * x[:, 1]) / math.sqrt(2.0)).reshape(shape)


def as_stream(seed):
    """Return ``seed`` if it is a ``Stream``, else a fresh stream for that seed."""
    if isinstance(seed, Stream):
        return seed
    if seed is None:
        return Stream(default_seed())
    return Stream(seed)


def random_pure(shape, seed=None):
    """Haar-random pure state on an ``M (x) N`` system."""
    shape = as_shape(shape)
    g = as_stream(seed).complex_normal((shape.dim_left, shape.dim_right))
    return PureState(g / np.linalg.norm(g))


def random_density(d, rank=None, seed=None):
    """``G G^H / tr(G G^H)`` for a ``d x rank`` complex Gaussian ``G``."""
    d = check_positive_int(d, "d")
    rank = d if rank is None else check_positive_int(rank, "rank")
    if rank > d:
        raise InvalidParameterError(f"rank must be between 1 and {d}, got {rank}")
    G = as_stream(seed).complex_normal((d, rank))
    rho = G @ G.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.real(np.trace(rho))


def random_projector(d, m, seed=None):
    """Projector onto the span of ``m`` Gaussian vectors in ``C^d`` (Haar-distributed subspace)."""
    d = check_positive_int(d, "d")
    m = check_positive_int(m, "m")
    if m > d:
        raise InvalidParameterError(f"m must be between 1 and {d}, got {m}")
    G = as_stream(seed).complex_normal((d, m))
    if m == d:
        return np.eye(d, dtype=complex)
    Q, _ = np.linalg.qr(G)
    P = Q @ Q.conj().T
    return 0.5 * (P + P.conj().T)
