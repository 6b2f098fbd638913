"""scikit-learn style wrapper around :func:`interpolate`."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_random_state
from .blackbox import SLP, Blackbox, SLPBlackbox, sparse_as_blackbox
from .interpolator import interpolate, verify
from .sparse import SparsePoly

__all__ = ["SparseInterpolator"]


def _as_blackbox(X):
    if isinstance(X, Blackbox):
        return X
    if isinstance(X, SLP):
        return SLPBlackbox(X)
    if isinstance(X, SparsePoly):
        return sparse_as_blackbox(X)
    raise TypeError("fit expects a Blackbox, an SLP or a SparsePoly")


class SparseInterpolator(BaseEstimator):
    """Recover a sparse integer polynomial from a modular blackbox.

    Parameters
    ----------
    n_terms : int
        Upper bound ``T`` on the number of terms.
    size_bound : int
        Upper bound ``S`` on the total bit-size of the polynomial.
    mode : str
        Only ``"practical"`` can run; provable sizes are reported by
        :func:`sparseinterp.derive_params`.
    beta : int or None
        Override for the per-round size multiplier.
    verify_trials : int
        Random identity checks after fitting (0 skips them).
    random_state : None, int or random.Random

    Attributes
    ----------
    polynomial_ : SparsePoly
    n_features_in_ : int
        Number of variables.
    eval_stats_ : tuple
        ``(evaluations, total modulus bits)`` charged to the blackbox.
    verified_ : bool or None
        Outcome of the identity checks, ``None`` when skipped.
    """

    def __init__(self, n_terms=1, size_bound=64, mode="practical", beta=None, verify_trials=0,
                 random_state=None):
        self.n_terms = n_terms
        self.size_bound = size_bound
        self.mode = mode
        self.beta = beta
        self.verify_trials = verify_trials
        self.random_state = random_state

    def fit(self, X, y=None):
        bb = _as_blackbox(X)
        rng = check_random_state(self.random_state)
        before = bb.stats.snapshot()
        f = interpolate(bb, bb.nvars, self.n_terms, self.size_bound, rng, mode=self.mode,
                        beta=self.beta)
        after = bb.stats.snapshot()
        self.eval_stats_ = (after[0] - before[0], after[1] - before[1])
        self.verified_ = verify(f, bb, self.verify_trials, rng) if self.verify_trials else None
        self.polynomial_ = f
        self.n_features_in_ = bb.nvars
        return self

    def predict(self, X, modulus=None):
        """Exact values (or residues modulo ``modulus``) of the fitted polynomial at the rows of ``X``."""
        check_is_fitted(self, "polynomial_")
        rows = [list(map(int, row)) for row in np.asarray(X, dtype=object).reshape(-1, self.n_features_in_)]
        out = np.empty(len(rows), dtype=object)
        for j, pt in enumerate(rows):
            out[j] = self.polynomial_.evaluate(pt, modulus)
        return out
