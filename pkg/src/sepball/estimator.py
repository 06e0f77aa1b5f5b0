"""scikit-learn compatible wrapper around :func:`sepball.criteria.analyze`.

Samples are ``d x d`` positive semidefinite matrices, passed as an array of
shape ``(n_samples, d, d)``. Nothing is learned: ``fit`` only validates the
bipartite shape, after which ``predict`` returns one verdict per matrix and
``transform`` returns the criterion values as features.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bipartite import as_shape
from .criteria import DEFAULT_P_VALUES, Verdict, analyze, p_label
from .exceptions import InvalidShapeError
from .validation import DEFAULT_TOL, check_state_stack, check_tol


class SeparabilityClassifier(ClassifierMixin, TransformerMixin, BaseEstimator):
    """Label bipartite matrices as separable, entangled or inconclusive.

    Parameters
    ----------
    dims : tuple of int or str, optional
        Local dimensions ``(M, N)``. Inferred as an even split when omitted.
    tol : float, default=1e-9
        Relative tolerance for every pass/fail margin.
    p_values : tuple of float, default=(1, 2, inf)
        Exponents of the p-ball criteria.

    Attributes
    ----------
    shape_ : BipartiteShape
    classes_ : ndarray of str
    feature_names_ : list of str
    """

    def __init__(self, dims=None, tol=DEFAULT_TOL, p_values=DEFAULT_P_VALUES):
        self.dims = dims
        self.tol = tol
        self.p_values = p_values

    def fit(self, X, y=None):
        X = check_state_stack(X)
        check_tol(self.tol)
        self.shape_ = as_shape(self.dims, X.shape[1])
        self.classes_ = np.array([v.value for v in Verdict])
        self.feature_names_ = [
            "trace",
            "scaling_score",
            "purity",
            "frobenius_distance",
            *[f"pball_{p_label(p)}_deviation" for p in self.p_values],
            "ppt_min_eig",
        ]
        self.n_features_in_ = X.shape[1] * X.shape[2]
        return self

    def _check(self, X):
        check_is_fitted(self, "shape_")
        X = check_state_stack(X)
        if X.shape[1] != self.shape_.dim:
            raise InvalidShapeError(
                f"fitted for dimension {self.shape_.dim}, got matrices of size {X.shape[1]}"
            )
        return X

    def analyze(self, X):
        """Full :class:`~sepball.criteria.CriterionReport` for every sample."""
        X = self._check(X)
        return [analyze(A, self.shape_, self.tol, self.p_values) for A in X]

    def predict(self, X):
        return np.array([r.verdict.value for r in self.analyze(X)])

    def transform(self, X):
        rows = []
        for r in self.analyze(X):
            rows.append(
                [r.trace, r.scaling_score, r.purity, r.frobenius_distance]
                + [r.pball_margins[p_label(p)][0] for p in self.p_values]
                + [r.ppt_min_eig]
            )
        return np.array(rows, dtype=float)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "feature_names_")
        return np.array(self.feature_names_, dtype=object)
