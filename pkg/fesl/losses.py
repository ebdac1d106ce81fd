"""Logistic loss for classification and square loss for regression, with weight-space gradients."""
from enum import Enum

import numpy as np
from scipy.special import expit

from . import consts
from .core import Task, predict
from .exceptions import InvalidInputError


class LossKind(Enum):
    LOGISTIC = consts.LOSS_LOGISTIC
    SQUARE = consts.LOSS_SQUARE

    @property
    def task(self):
        """The only task this loss may be paired with."""
        return Task.CLASSIFICATION if self is LossKind.LOGISTIC else Task.REGRESSION

    @classmethod
    def for_task(cls, task):
        return cls.LOGISTIC if task is Task.CLASSIFICATION else cls.SQUARE


def _check(kind, prediction, label):
    if label.task is not kind.task:
        raise InvalidInputError('{!s} loss needs a {!s} label, got {!r}'.format(
            kind.value, kind.task.value, label))
    if not np.isfinite(prediction):
        raise InvalidInputError('Prediction must be finite, got {!r}'.format(prediction))


def loss(kind, prediction, label):
    """The loss of a scalar prediction.

    Logistic: log2(1 + exp(-y f)), evaluated with logaddexp so large margins do not overflow.
    Square: (y - f)^2.
    """
    _check(kind, prediction, label)
    y = label.value
    if kind is LossKind.LOGISTIC:
        return float(np.logaddexp(0.0, -y * prediction) / consts.LN2)
    return float((y - prediction) ** 2)


def loss_gradient_wrt_model(kind, model, x, label):
    """Gradient of loss(kind, <w, x>, y) with respect to w."""
    prediction = predict(model, x)
    _check(kind, prediction, label)
    y = label.value
    if kind is LossKind.LOGISTIC:
        scale = -y * expit(-y * prediction) / consts.LN2
    else:
        scale = 2.0 * (prediction - y)
    return scale * x.values


def clip_loss(value):
    """Clip a loss into [0, 1], the range the weighting bounds assume."""
    return min(float(value), 1.0)
