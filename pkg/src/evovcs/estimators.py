"""Estimator-style front ends for the three dealers.

``fit`` consumes a secret image and runs the first phase; ``extend`` issues
more shares without touching the ones already handed out.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .better import BETTER3_GROUP, Better2State, Better3State, better2_extend, better2_init, better3_extend, better3_init
from .evolving import EvolvingDealerState, ShareGroupLayout, dealer_extend, dealer_init
from .exceptions import ParameterError, StateError
from .image import BinaryImage

__all__ = ["KGroupedDealer", "Better2Dealer", "Better3Dealer", "check_binary_image", "dealer_for_state"]


def check_binary_image(X):
    """Coerce ``X`` to a BinaryImage, rejecting anything that is not a 2-D 0/1 raster."""
    if isinstance(X, BinaryImage):
        return X
    arr = np.asarray(X)
    if arr.ndim != 2 or arr.size == 0:
        raise ParameterError(f"expected a non-empty 2-D image, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ParameterError("image pixels must be 0 (white) or 1 (black)")
    return BinaryImage(arr.astype(np.uint8))


class _Dealer(BaseEstimator):
    def fit(self, X, y=None):
        secret = check_binary_image(X)
        shares, state = self._init(secret)
        self.shares_ = list(shares)
        self.state_ = state
        self.secret_shape_ = secret.shape
        return self

    def extend(self, count=1):
        """Issue ``count`` more shares and return them."""
        check_is_fitted(self, "state_")
        if int(count) != count or count < 0:
            raise ParameterError(f"count must be a non-negative integer, got {count}")
        new = []
        for _ in range(int(count)):
            share, self.state_ = self._step(self.state_)
            new.append(share)
        self.shares_.extend(new)
        return new

    @property
    def n_issued_(self):
        check_is_fitted(self, "state_")
        return len(self.shares_)

    def layout(self):
        check_is_fitted(self, "state_")
        return ShareGroupLayout(self._group_size(), len(self.shares_))

    def _resume(self, state, shares):
        self.state_ = state
        self.shares_ = list(shares)
        self.secret_shape_ = tuple(state.shape)
        return self


class KGroupedDealer(_Dealer):
    """(k, inf) random-grid dealer; the first ``n`` shares form a k-grouped (k, n) sharing."""

    def __init__(self, k=2, n=None, seed=42):
        self.k = k
        self.n = n
        self.seed = seed

    def _init(self, secret):
        state, shares = dealer_init(secret, self.k, self.n, self.seed)
        return shares, state

    def _step(self, state):
        return dealer_extend(state)

    def _group_size(self):
        return self.k


class Better2Dealer(_Dealer):
    """Generalized random-grid (2, inf) dealer. Keeps the secret in its state."""

    def __init__(self, seed=42):
        self.seed = seed

    def _init(self, secret):
        share, state = better2_init(secret, self.seed)
        return [share], state

    def _step(self, state):
        return better2_extend(state)

    def _group_size(self):
        return 2


class Better3Dealer(_Dealer):
    """(3, inf) dealer built on 6 x 4 basis matrices; issues four shares on fit."""

    def __init__(self, seed=42):
        self.seed = seed

    def _init(self, secret):
        shares, state = better3_init(secret, self.seed)
        return shares, state

    def _step(self, state):
        return better3_extend(state)

    def _group_size(self):
        return BETTER3_GROUP


def dealer_for_state(state, shares=()):
    """Rebuild a fitted dealer around a previously saved state."""
    if isinstance(state, EvolvingDealerState):
        dealer = KGroupedDealer(k=state.k, n=state.n, seed=state.seed)
    elif isinstance(state, Better2State):
        dealer = Better2Dealer(seed=state.seed)
    elif isinstance(state, Better3State):
        dealer = Better3Dealer(seed=state.seed)
    else:
        raise StateError(f"not a dealer state: {type(state).__name__}")
    return dealer._resume(state, shares)

