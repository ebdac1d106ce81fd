"""Projected online gradient descent on real and on recovered instances."""
import math

from . import consts
from .core import LinearModel, project_ball
from .exceptions import InvalidInputError
from .losses import loss_gradient_wrt_model


class OgdState:
    """A model plus its step-size schedule tau_t = 1 / (c * sqrt(t)).

    States are values: every step returns a new state and leaves this one untouched.
    """

    def __init__(self, model, step_scale=consts.DEFAULT_STEP_SCALE, local_round=1):
        if not step_scale > 0:
            raise InvalidInputError('Step scale must be positive, got {!r}'.format(step_scale))
        if int(local_round) != local_round or local_round < 1:
            raise InvalidInputError('Local round must be >= 1, got {!r}'.format(local_round))
        self._model = model
        self._step_scale = float(step_scale)
        self._local_round = int(local_round)

    @property
    def model(self):
        return self._model

    @property
    def step_scale(self):
        return self._step_scale

    @property
    def local_round(self):
        return self._local_round

    @property
    def step_size(self):
        return 1.0 / (self._step_scale * math.sqrt(self._local_round))

    def restart(self):
        """Same model, step-size schedule back at its first round."""
        return OgdState(self._model, self._step_scale, 1)

    def __repr__(self):
        return 'OgdState({!r}, c={!r}, t={:d})'.format(
            self._model, self._step_scale, self._local_round)


def ogd_step(state, x, label, kind):
    """w <- Proj(w - tau_t * grad loss(<w, x>, y)), then advance the local round."""
    gradient = loss_gradient_wrt_model(kind, state.model, x, label)
    radius = state.model.radius
    weights = project_ball(state.model.weights - state.step_size * gradient, radius)
    return OgdState(LinearModel(weights, radius), state.step_scale, state.local_round + 1)


def ogd_step_recovered(state, estimator, x_new, label, kind):
    """The same step taken on the instance recovered from the new feature space."""
    return ogd_step(state, estimator.recover(x_new), label, kind)


def initial_model(dim, radius, rng, scale=consts.DEFAULT_INIT_SCALE):
    """A small random starting point inside the ball, drawn from the run's generator."""
    return LinearModel.random(dim, radius, rng, scale)
