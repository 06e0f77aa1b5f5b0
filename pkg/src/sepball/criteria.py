"""Separability decisions for bipartite positive matrices.

Sufficient criteria (any pass certifies separability):

* ``scaling``: ``S(lambda) = d - ||lambda||_1^2 / ||lambda||_2^2 <= 1``, the
  best Frobenius-ball test over all rescalings ``A = b (I + Delta)``;
* ``purity``: ``tr rho^2 <= 1/(d-1)`` for ``rho = A / tr A``;
* ``frobenius_ball``: ``||rho - I/d||_2 <= 1/sqrt(d(d-1))``;
* ``pball_p``: ``||A - I||_p <= radius(p)`` with radius 1 for ``p <= 2`` and
  ``d^(1/p - 1/2)`` for ``p >= 2``;
* ``ppt_low_dimension``: positive partial transpose in 2x2 and 2x3 systems
  (and trivially when a factor is one-dimensional).

Necessary criterion: positive partial transpose. Its failure proves
entanglement and always takes precedence in the verdict.
"""

from dataclasses import dataclass, field
import enum
import math

import numpy as np

from .bipartite import as_shape, partial_transpose
from .exceptions import InvalidInputError, NotPSDError
from .linalg import eigvalsh, vector_p_norm
from .validation import DEFAULT_TOL, INF, NORM_TOL, check_hermitian, check_p, check_tol

DEFAULT_P_VALUES = (1.0, 2.0, INF)


class Verdict(str, enum.Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


def p_label(p):
    """Canonical text key for an exponent: ``1``, ``2``, ``2.5``, ``inf``."""
    p = check_p(p)
    if p == INF:
        return "inf"
    return str(int(p)) if float(p).is_integer() else repr(p)


def ball_radius_for_dim(d, p):
    """Radius of the separable p-ball around ``I`` in total dimension ``d``.

    For ``d = N^2`` this is ``N^(2/p - 1)`` when ``p >= 2``; exact (largest
    possible) only for square systems.
    """
    p = check_p(p)
    if p <= 2:
        return 1.0
    if p == INF:
        return d**-0.5
    return d ** (1.0 / p - 0.5)


def _check_psd_spectrum(lam, tol):
    lam = np.asarray(lam, dtype=float).ravel()
    if lam.size == 0 or not np.all(np.isfinite(lam)):
        raise InvalidInputError("spectrum must be a non-empty finite list")
    scale = max(1.0, float(np.max(np.abs(lam))))
    if lam.min() < -tol * scale:
        raise NotPSDError(lam.min())
    return lam


def scaling_score(lam, tol=DEFAULT_TOL):
    """``d - (sum lambda)^2 / sum lambda^2`` for a PSD spectrum.

    Equals ``min_{a > 0} ||a lambda - e||_2^2``; lies in ``[0, d-1]``.
    """
    lam = _check_psd_spectrum(lam, tol)
    peak = float(np.max(np.abs(lam)))
    if peak == 0.0:
        raise InvalidInputError("scaling score undefined for the zero spectrum")
    # Normalize first: keeps both sums O(1) for badly scaled input.
    lam = lam / peak
    lam = lam / math.sqrt(float(np.sum(lam**2)))
    return float(lam.size - np.sum(lam) ** 2)


def _normalized(A, tol):
    A = check_hermitian(A)
    tr = float(np.real(np.trace(A)))
    if abs(tr - 1.0) > NORM_TOL:
        raise InvalidInputError(f"density matrix must have unit trace, got {tr:.12g}")
    lam = eigvalsh(A)
    _check_psd_spectrum(lam, tol)
    return A, lam


def purity_test(rho, shape=None, tol=DEFAULT_TOL):
    """Return ``(tr rho^2, passes)`` with ``passes`` iff purity <= 1/(d-1)."""
    rho, lam = _normalized(rho, tol)
    shape = as_shape(shape, rho.shape[0])
    d = shape.dim
    purity = float(np.sum(lam**2))
    if d == 1:
        return purity, True
    return purity, purity <= 1.0 / (d - 1) + tol


def frobenius_ball_test(rho, shape=None, tol=DEFAULT_TOL):
    """Return ``(||rho - I/d||_2, passes)``; the separable radius is ``1/sqrt(d(d-1))``."""
    rho, lam = _normalized(rho, tol)
    shape = as_shape(shape, rho.shape[0])
    d = shape.dim
    distance = float(np.linalg.norm(lam - 1.0 / d))
    if d == 1:
        return distance, True
    return distance, distance <= 1.0 / math.sqrt(d * (d - 1)) + tol


def pball_membership(A, p, shape=None, tol=DEFAULT_TOL):
    """Test ``||A - I||_p`` against the separable ball radius.

    Returns ``(deviation, radius, passes)``. ``A`` is used as given, without
    rescaling.
    """
    p = check_p(p)
    A = check_hermitian(A)
    shape = as_shape(shape, A.shape[0])
    dev = vector_p_norm(eigvalsh(A - np.eye(shape.dim)), p)
    radius = ball_radius_for_dim(shape.dim, p)
    return dev, radius, dev <= radius + tol * max(1.0, radius)


def scaled_separability_test(A, shape=None, tol=DEFAULT_TOL):
    """Return ``(S(lambda), passes)``; ``passes`` certifies that ``A`` is separable."""
    A = check_hermitian(A)
    as_shape(shape, A.shape[0])
    score = scaling_score(eigvalsh(A), tol)
    return score, score <= 1.0 + tol


def ppt_test(A, shape=None, tol=DEFAULT_TOL):
    """Return ``(min eigenvalue of A^T_B, is_ppt)``.

    ``is_ppt`` is false only when the partial transpose has an eigenvalue
    below ``-tol * max(1, ||A^T_B||)``, which proves entanglement.
    """
    tol = check_tol(tol)
    A = check_hermitian(A)
    shape = as_shape(shape, A.shape[0])
    w = eigvalsh(partial_transpose(A, shape))
    scale = max(1.0, float(np.max(np.abs(w))))
    return float(w[0]), bool(w[0] >= -tol * scale)


def ppt_is_sufficient(shape):
    """Whether positive partial transpose implies separability for this shape."""
    m, n = sorted(shape)
    return m == 1 or (m == 2 and n <= 3)


@dataclass(frozen=True)
class CriterionReport:
    """Values of every criterion for one matrix, plus the combined verdict."""

    shape: object
    trace: float
    scaling_score: float
    purity: float
    frobenius_distance: float
    pball_margins: dict
    ppt_min_eig: float
    verdict: Verdict
    triggered_by: tuple
    min_eig: float = 0.0
    tol: float = DEFAULT_TOL
    passes: dict = field(default_factory=dict)

    @property
    def is_separable(self):
        return self.verdict is Verdict.SEPARABLE

    @property
    def is_entangled(self):
        return self.verdict is Verdict.ENTANGLED

    def to_dict(self):
        return {
            "shape": [self.shape.dim_left, self.shape.dim_right],
            "trace": self.trace,
            "min_eig": self.min_eig,
            "scaling_score": self.scaling_score,
            "purity": self.purity,
            "frobenius_distance": self.frobenius_distance,
            "pball_margins": {
                k: {"deviation": dev, "radius": rad} for k, (dev, rad) in self.pball_margins.items()
            },
            "ppt_min_eig": self.ppt_min_eig,
            "passes": dict(self.passes),
            "verdict": self.verdict.value,
            "triggered_by": list(self.triggered_by),
        }


def analyze(A, shape=None, tol=DEFAULT_TOL, p_values=DEFAULT_P_VALUES):
    """Run every criterion on a positive semidefinite matrix.

    ``A`` need not be normalized. The purity and Frobenius-ball tests see
    ``A / tr A``; the p-ball tests see ``A`` itself.

    Raises
    ------
    NotPSDError
        If ``A`` has an eigenvalue below ``-tol * max(1, ||A||)``.
    """
    tol = check_tol(tol)
    A = check_hermitian(A)
    shape = as_shape(shape, A.shape[0])
    d = shape.dim
    lam = eigvalsh(A)
    scale = max(1.0, float(np.max(np.abs(lam))))
    if lam[0] < -tol * scale:
        raise NotPSDError(lam[0], f"not a state: min eigenvalue {lam[0]:.9g}")
    trace = float(np.sum(lam))
    if trace <= 0:
        raise InvalidInputError("matrix has zero trace")

    score = scaling_score(lam, tol)
    nlam = np.clip(lam, 0.0, None) / trace
    purity = float(np.sum(nlam**2))
    distance = float(np.linalg.norm(nlam - 1.0 / d))
    passes = {
        "scaling": score <= 1.0 + tol,
        "purity": d == 1 or purity <= 1.0 / (d - 1) + tol,
        "frobenius_ball": d == 1 or distance <= 1.0 / math.sqrt(d * (d - 1)) + tol,
    }
    margins = {}
    dev_spec = eigvalsh(A - np.eye(d))
    for p in p_values:
        key = p_label(p)
        dev = vector_p_norm(dev_spec, p)
        rad = ball_radius_for_dim(d, p)
        margins[key] = (dev, rad)
        passes[f"pball_{key}"] = dev <= rad + tol * max(1.0, rad)

    ppt_min, is_ppt = ppt_test(A, shape, tol)
    passes["ppt"] = is_ppt
    passes["ppt_low_dimension"] = is_ppt and ppt_is_sufficient(shape)

    sufficient = [k for k, v in passes.items() if v and k != "ppt"]
    if not is_ppt:
        verdict, triggered = Verdict.ENTANGLED, ("ppt",)
    elif sufficient:
        verdict, triggered = Verdict.SEPARABLE, tuple(sufficient)
    else:
        verdict, triggered = Verdict.INCONCLUSIVE, ()

    return CriterionReport(
        shape=shape,
        trace=trace,
        scaling_score=score,
        purity=purity,
        frobenius_distance=distance,
        pball_margins=margins,
        ppt_min_eig=ppt_min,
        verdict=verdict,
        triggered_by=triggered,
        min_eig=float(lam[0]),
        tol=tol,
        passes=passes,
    )
