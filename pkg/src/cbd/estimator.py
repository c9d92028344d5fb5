"""Estimator-style wrappers so the analysis composes with scikit-learn tooling.

``X`` is always a batch of systems (anything :func:`check_systems`
accepts).  There is no supervised target; ``y`` is ignored.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .chsh import chsh
from .coupling import DEFAULT_MAX_VARS, analyze
from .validation import check_systems


class ContextualityAnalyzer(TransformerMixin, BaseEstimator):
    """Runs the coupling analysis on each system of a batch.

    Parameters
    ----------
    max_vars : int
        Size guard on the number of variables per system.

    Attributes
    ----------
    reports_ : list of CbdReport
        One report per system seen by :meth:`fit`.
    cntx_ : ndarray of object
        Exact CNTX values (``Fraction``), aligned with ``reports_``.
    contextual_ : ndarray of bool
    """

    def __init__(self, max_vars: int = DEFAULT_MAX_VARS):
        self.max_vars = max_vars

    def _analyze(self, X):
        if not isinstance(self.max_vars, int) or self.max_vars < 1:
            raise ValueError(f"max_vars must be a positive integer, got {self.max_vars!r}")
        return [analyze(s, max_vars=self.max_vars) for s in check_systems(X)]

    def fit(self, X, y=None):
        self.reports_ = self._analyze(X)
        self.cntx_ = np.array([r.cntx for r in self.reports_], dtype=object)
        self.contextual_ = np.array([r.contextual for r in self.reports_], dtype=bool)
        return self

    def transform(self, X):
        """Column of exact CNTX values, shape ``(n_systems, 1)``."""
        reports = self._analyze(X)
        return np.array([[r.cntx] for r in reports], dtype=object)

    def predict(self, X):
        return np.array([r.contextual for r in self._analyze(X)], dtype=bool)

    @property
    def report_(self):
        """Report of the only system seen by :meth:`fit`."""
        if not hasattr(self, "reports_"):
            raise NotFittedError("ContextualityAnalyzer is not fitted yet; call fit first")
        if len(self.reports_) != 1:
            raise AttributeError("report_ is only defined after fitting a single system")
        return self.reports_[0]


class ChshClassifier(BaseEstimator):
    """Contextuality verdicts from the closed-form CHSH bound (rank-4 cyclic systems)."""

    def fit(self, X, y=None):
        self.reports_ = [chsh(s) for s in check_systems(X)]
        return self

    def decision_function(self, X):
        """S value minus the classical bound 2; positive means contextual."""
        return np.array([chsh(s).s_value - 2 for s in check_systems(X)], dtype=object)

    def predict(self, X):
        return np.array([chsh(s).contextual for s in check_systems(X)], dtype=bool)
