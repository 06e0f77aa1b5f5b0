"""Extremal constructions and thresholds for balls around the identity.

Everything here concerns square ``N (x) N`` systems. "Negativity" means
``-lambda_min`` of the partial transpose, and the ``W`` quantities are the
largest negativity over a family (pure states, rank-m projectors).
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.optimize

from .bipartite import (
    BipartiteShape,
    PureState,
    check_schmidt_values,
    as_shape,
    partial_transpose,
    schmidt,
    swap_operator,
)
from .exceptions import InvalidParameterError, NotAProjectorError
from .linalg import eigvalsh
from .validation import INF, check_hermitian, check_p, check_positive_int

PROJECTOR_TOL = 1e-8


@dataclass(frozen=True)
class BallRadius:
    p: float
    N: int
    radius: float


@dataclass(frozen=True)
class PerturbationProfile:
    """Threshold constants for perturbing the identity on ``N (x) N``.

    ``pseudopure_lower``/``pseudopure_upper`` bracket the largest mixing
    weight ``eps`` for which ``(1 - eps) I/d + eps rho`` is separable for
    every state ``rho``.
    """

    N: int
    pure_scaling_threshold: float
    pure_ppt_threshold_bell: float
    pseudopure_lower: float
    pseudopure_upper: float
    projector_negativity_max: float
    prior_lower: float
    prior_upper: float


@dataclass(frozen=True)
class NegativityEstimate:
    """Best negativity found by random search; a lower estimate of the supremum."""

    value: float
    n_samples: int
    is_lower_estimate: bool = True


def ball_radius(N, p):
    """Radius of the largest separable p-ball around ``I`` on ``N (x) N``.

    1 for ``p <= 2`` and ``N^(2/p - 1)`` for ``p >= 2``.
    """
    N = check_positive_int(N, "N", minimum=2)
    p = check_p(p)
    if p <= 2:
        r = 1.0
    elif p == INF:
        r = 1.0 / N
    else:
        r = float(N) ** (2.0 / p - 1.0)
    return BallRadius(p=p, N=N, radius=r)


def _swap_pnorm_factor(N, p):
    # ||swap||_p = (N^2)^(1/p): N^2 eigenvalues of modulus one.
    return 1.0 if p == INF else float(N) ** (2.0 / p)


def npt_witness(N, p, a):
    """Perturbation ``Delta = -(a / ||S||_p) S`` along the swap ``S``.

    ``||Delta||_p = a`` and the partial transpose of ``I + Delta`` has
    smallest eigenvalue ``1 - a N^(1 - 2/p)``, which goes negative exactly
    when ``a`` leaves the separable ball.
    """
    N = check_positive_int(N, "N", minimum=2)
    p = check_p(p)
    if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0):
        raise InvalidParameterError(f"a must be a positive finite number, got {a!r}")
    return -(a / _swap_pnorm_factor(N, p)) * swap_operator(N)


def witness_pt_min(N, p, a):
    """Closed-form smallest partial-transpose eigenvalue of ``I + npt_witness(N, p, a)``."""
    p = check_p(p)
    exponent = 1.0 if p == INF else 1.0 - 2.0 / p
    return 1.0 - a * float(N) ** exponent


def pure_pt_negativity(schmidt_values):
    """``max_{i<j} d_i d_j``: negativity of a pure state from its Schmidt values."""
    d = np.sort(check_schmidt_values(schmidt_values))[::-1]
    if d.size < 2:
        return 0.0
    return float(d[0] * d[1])


def scaling_threshold(d):
    """Largest ``a`` with ``S(1, ..., 1, 1 + a) <= 1``: ``d / (d - 2)``."""
    return INF if d <= 2 else d / (d - 2)


def pure_perturbation_thresholds(psi):
    """Largest ``a`` for which ``I + a |psi><psi|`` passes each criterion.

    Returns ``(scaling_max_a, ppt_max_a)``. The first only depends on the
    dimension; the second is ``1 / negativity`` (infinite for products).
    """
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    d = psi.shape.dim
    neg = pure_pt_negativity(schmidt(psi).values)
    ppt_max = INF if neg <= 1e-15 else 1.0 / neg
    return scaling_threshold(d), ppt_max


def antisymmetric_projector(N):
    """Projector ``(I - S)/2`` onto the antisymmetric subspace, rank ``N(N-1)/2``."""
    N = check_positive_int(N, "N", minimum=2)
    return 0.5 * (np.eye(N * N) - swap_operator(N))


def symmetric_projector(N):
    N = check_positive_int(N, "N", minimum=1)
    return 0.5 * (np.eye(N * N) + swap_operator(N))


def check_projector(P, tol=PROJECTOR_TOL):
    P = check_hermitian(P)
    err = float(np.linalg.norm(P @ P - P))
    if err > tol * max(1.0, float(np.linalg.norm(P))):
        raise NotAProjectorError(f"||P^2 - P||_F = {err:.3g}; not an orthogonal projector")
    return P


def projector_negativity(P, shape=None):
    """``max(0, -lambda_min(P^T_B))`` for an orthogonal projector ``P``."""
    P = check_projector(P)
    shape = as_shape(shape, P.shape[0])
    return max(0.0, float(-eigvalsh(partial_transpose(P, shape))[0]))


def interior_boundary_delta(N):
    """``Delta`` with ``N(N+1)/2`` eigenvalues ``-1/N`` and ``N(N-1)/2`` eigenvalues ``+1/N``.

    ``||Delta||_2 = 1``, ``I + Delta`` is positive definite, and its partial
    transpose is singular: the unit 2-ball touches the entangled set inside
    the positive cone.
    """
    N = check_positive_int(N, "N", minimum=2)
    P = antisymmetric_projector(N)
    return ((N - 1) / N) * (np.eye(N * N) + (2.0 / (N - 1)) * P) - np.eye(N * N)


def _refined_pseudopure_lower(d):
    # tr sigma^2 = 1/d + eps^2 (1 - 1/d) for sigma = (1-eps) I/d + eps |psi><psi|;
    # solve tr sigma^2 = 1/(d-1) for eps in (0, 1).
    f = lambda eps: 1.0 / d + eps**2 * (1.0 - 1.0 / d) - 1.0 / (d - 1)
    return scipy.optimize.brentq(f, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def pseudopure_bounds(N, refine=False):
    """Threshold constants for ``N (x) N``.

    With ``refine=True`` the lower pseudopure bound is obtained by solving the
    purity condition for the mixture directly instead of the closed form;
    both give ``1/(N^2 - 1)``.
    """
    N = check_positive_int(N, "N", minimum=2)
    d = N * N
    lower = _refined_pseudopure_lower(d) if refine else 1.0 / (d - 1)
    return PerturbationProfile(
        N=N,
        pure_scaling_threshold=scaling_threshold(d),
        pure_ppt_threshold_bell=2.0,
        pseudopure_lower=lower,
        pseudopure_upper=2.0 / (2.0 + d),
        projector_negativity_max=(N - 1) / 2.0,
        prior_lower=1.0 / (1.0 + N**3),
        prior_upper=1.0 / (1.0 + N),
    )


def estimate_pure_negativity(N, n_samples, seed=0):
    """Largest negativity over ``n_samples`` Haar-random pure states on ``N (x) N``."""
    from .stategen import as_stream, random_pure

    N = check_positive_int(N, "N", minimum=2)
    n_samples = check_positive_int(n_samples, "n_samples")
    stream = as_stream(seed)
    shape = BipartiteShape(N, N)
    best = max(pure_pt_negativity(schmidt(random_pure(shape, stream)).values) for _ in range(n_samples))
    return NegativityEstimate(value=best, n_samples=n_samples)


def estimate_projector_negativity(N, m, n_samples, seed=0, subspace=None):
    """Largest negativity over ``n_samples`` random rank-``m`` projectors.

    ``subspace`` (a ``d x k`` isometry) restricts the search to projectors
    onto ``m``-dimensional subspaces of its range.
    """
    from .stategen import as_stream, random_projector

    N = check_positive_int(N, "N", minimum=2)
    n_samples = check_positive_int(n_samples, "n_samples")
    d = N * N
    stream = as_stream(seed)
    shape = BipartiteShape(N, N)
    best = -INF
    for _ in range(n_samples):
        if subspace is None:
            P = random_projector(d, m, stream)
        else:
            Q = np.asarray(subspace, dtype=complex)
            Pk = random_projector(Q.shape[1], m, stream)
            P = Q @ Pk @ Q.conj().T
        best = max(best, projector_negativity(P, shape))
    return NegativityEstimate(value=best, n_samples=n_samples)
