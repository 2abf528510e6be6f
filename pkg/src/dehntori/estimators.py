"""
scikit-learn style wrappers.

Classification is rule-based, so ``fit`` learns nothing for the classifier;
the wrappers exist so that parameters can be set, cloned and grid-searched
the usual way.  The growth fitter does learn (a log-log slope and constant).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin
from sklearn.exceptions import NotFittedError

from .classify import classify


class DehnClassifier(ClassifierMixin, BaseEstimator):
    """Maps automorphisms to Dehn-function labels."""

    def __init__(self, n_max=64, budget=20_000, tol=0.25):
        self.n_max = n_max
        self.budget = budget
        self.tol = tol

    def fit(self, X, y=None):
        self.classes_ = np.array(sorted(set(y))) if y is not None else np.array([])
        self.n_features_in_ = 1
        return self

    def classify_one(self, Psi):
        kw = {"n_max": self.n_max, "budget": self.budget, "tol": self.tol}
        if Psi.group.kind == "FkxFl":
            return classify(Psi, **kw)
        return classify(Psi)

    def predict(self, X):
        if not hasattr(self, "n_features_in_"):
            raise NotFittedError("call fit first")
        return np.array([self.classify_one(Psi).label for Psi in X], dtype=object)


class PowerLawFit(RegressorMixin, BaseEstimator):
    """Fits ``y ~ K n^d`` on a log-log scale."""

    def __init__(self, round_degree=False):
        self.round_degree = round_degree

    def fit(self, X, y):
        n = np.log(np.asarray(X, dtype=float).ravel())
        v = np.log(np.asarray(y, dtype=float).ravel())
        slope, icept = np.polyfit(n, v, 1)
        self.degree_ = float(round(slope)) if self.round_degree else float(slope)
        self.constant_ = float(np.exp(np.mean(v - self.degree_ * n)))
        self.slope_ = float(slope)
        return self

    def predict(self, X):
        if not hasattr(self, "degree_"):
            raise NotFittedError("call fit first")
        n = np.asarray(X, dtype=float).ravel()
        return self.constant_ * n ** self.degree_
