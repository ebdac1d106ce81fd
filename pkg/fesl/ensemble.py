"""Weighting the old-space and new-space predictions: exponential weights or fixed share."""
import math
from enum import Enum

import numpy as np
from scipy.special import logsumexp, softmax, xlogy

from . import consts
from .exceptions import InvalidInputError, StateError
from .losses import clip_loss

LOG_FLOOR = math.log(np.finfo(float).tiny)


class Mode(Enum):
    COMBINE = consts.MODE_COMBINE
    SELECT = consts.MODE_SELECT


def binary_entropy(x):
    """H(x) = -x ln x - (1-x) ln(1-x), in nats."""
    if not 0 <= x <= 1:
        raise InvalidInputError('Entropy argument must lie in [0, 1], got {!r}'.format(x))
    return float(-xlogy(x, x) - xlogy(1.0 - x, 1.0 - x))


def eta_combine(t2):
    """Learning rate sqrt(8 ln 2 / T2) of the combination strategy."""
    if t2 < 2:
        raise InvalidInputError('t2 must be at least 2, got {!r}'.format(t2))
    return math.sqrt(8.0 * consts.LN2 / t2)


def eta_select(t2):
    """Learning rate sqrt((8 / T2) (2 ln 2 + (T2 - 1) H(1 / (T2 - 1)))) for selection."""
    if t2 < 3:
        raise InvalidInputError('t2 must be at least 3, got {!r}'.format(t2))
    return math.sqrt((8.0 / t2) * (2.0 * consts.LN2 + (t2 - 1) * binary_entropy(1.0 / (t2 - 1))))


def default_delta(t2):
    """The fixed-share mixing rate 1 / (T2 - 1)."""
    if t2 < 3:
        raise InvalidInputError('t2 must be at least 3, got {!r}'.format(t2))
    return 1.0 / (t2 - 1)


class EnsembleState:
    """Normalized weights of the two base models plus the strategy parameters.

    Weights live in log space and are renormalized after every update; only their ratio
    matters to either strategy. No updated weight falls below the smallest positive float.
    Select mode owns a numpy Generator that every draw advances.
    """

    def __init__(self, mode, eta, delta=0.0, rng=None, clip_losses=True, alpha=(0.5, 0.5),
                 log_alpha=None):
        if not eta > 0:
            raise InvalidInputError('eta must be positive, got {!r}'.format(eta))
        if not 0 <= delta < 1:
            raise InvalidInputError('delta must lie in [0, 1), got {!r}'.format(delta))
        if mode is Mode.COMBINE and delta != 0:
            raise InvalidInputError('Combination mode has no fixed share')
        if mode is Mode.SELECT and rng is None:
            raise InvalidInputError('Selection mode needs a random generator')
        if log_alpha is None:
            alpha = np.asarray(alpha, dtype=float)
            if alpha.shape != (2,) or np.any(alpha < 0) or not alpha.sum() > 0:
                raise InvalidInputError('alpha must be two non-negative weights, got {!r}'.format(
                    alpha))
            alpha = alpha / alpha.sum()
            with np.errstate(divide='ignore'):
                log_alpha = np.log(alpha)
        else:
            log_alpha = np.asarray(log_alpha, dtype=float)
            if log_alpha.shape != (2,) or np.any(np.isnan(log_alpha)):
                raise InvalidInputError('log_alpha must be two log-weights, got {!r}'.format(
                    log_alpha))
            alpha = np.exp(log_alpha)
        self._mode = mode
        self._eta = float(eta)
        self._delta = float(delta)
        self._rng = rng
        self._clip_losses = bool(clip_losses)
        self._alpha = alpha
        self._log_alpha = log_alpha
        self._alpha.setflags(write=False)
        self._log_alpha.setflags(write=False)

    @classmethod
    def combine(cls, t2, clip_losses=True):
        """Combination state with eta tuned for a stream of t2 new-space rounds."""
        return cls(Mode.COMBINE, eta_combine(t2), 0.0, None, clip_losses)

    @classmethod
    def select(cls, t2, rng, delta=None, clip_losses=True):
        """Selection state with eta and delta tuned for t2 rounds unless delta is given."""
        delta = default_delta(t2) if delta is None else delta
        return cls(Mode.SELECT, eta_select(t2), delta, rng, clip_losses)

    @property
    def alpha(self):
        return tuple(float(a) for a in self._alpha)

    @property
    def eta(self):
        return self._eta

    @property
    def delta(self):
        return self._delta

    @property
    def mode(self):
        return self._mode

    @property
    def rng(self):
        return self._rng

    @property
    def clip_losses(self):
        return self._clip_losses

    def distribution(self):
        """Probabilities of drawing each model: the weights scaled to sum to one."""
        return softmax(self._log_alpha)

    def _evolve(self, log_weights):
        log_alpha = np.maximum(log_weights - logsumexp(log_weights), LOG_FLOOR)
        return EnsembleState(self._mode, self._eta, self._delta, self._rng, self._clip_losses,
                             log_alpha=log_alpha)

    def _discounted(self, loss1, loss2):
        """log v_i = log alpha_i - eta l_i."""
        losses = np.array([loss1, loss2], dtype=float)
        if not np.all(np.isfinite(losses)) or np.any(losses < 0):
            raise InvalidInputError('Losses must be finite and non-negative, got {!r}'.format(
                (loss1, loss2)))
        if self._clip_losses:
            losses = np.array([clip_loss(value) for value in losses])
        return self._log_alpha - self._eta * losses

    def __repr__(self):
        return 'EnsembleState({!s}, alpha={!r}, eta={!r}, delta={!r})'.format(
            self._mode.value, self.alpha, self._eta, self._delta)


def _require(state, mode):
    if state.mode is not mode:
        raise StateError('Operation needs {!s} mode, state is {!s}'.format(
            mode.value, state.mode.value))


def combine_predict(state, f1, f2):
    """The weighted average alpha_1 f1 + alpha_2 f2."""
    _require(state, Mode.COMBINE)
    alpha1, alpha2 = state.alpha
    return alpha1 * f1 + alpha2 * f2


def select_predict(state, f1, f2):
    """Draw model 1 or 2 with probability proportional to its weight and return its prediction."""
    _require(state, Mode.SELECT)
    p1 = state.distribution()[0]
    choice = 1 if state.rng.random() < p1 else 2
    return choice, (f1 if choice == 1 else f2)


def update_combine(state, loss1, loss2):
    """alpha_i <- alpha_i exp(-eta l_i), normalized."""
    _require(state, Mode.COMBINE)
    return state._evolve(state._discounted(loss1, loss2))


def update_select(state, loss1, loss2):
    """Fixed share: alpha_i <- delta W / 2 + (1 - delta) v_i with W = v_1 + v_2, normalized."""
    _require(state, Mode.SELECT)
    log_v = state._discounted(loss1, loss2)
    log_w = logsumexp(log_v)
    terms = np.vstack([np.full(2, log_w), log_v])
    shares = [[state.delta / 2.0], [1.0 - state.delta]]
    return state._evolve(logsumexp(terms, axis=0, b=shares))
