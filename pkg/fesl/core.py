"""Domain types shared by every module: feature vectors, labels, schedules, instances, models."""
from collections import namedtuple
from enum import Enum

import numpy as np

from . import consts
from .exceptions import InvalidInputError


class Task(Enum):
    CLASSIFICATION = consts.TASK_CLASSIFICATION
    REGRESSION = consts.TASK_REGRESSION


class Phase(Enum):
    OLD_ONLY = consts.PHASE_OLD_ONLY
    OVERLAP = consts.PHASE_OVERLAP
    NEW_ONLY = consts.PHASE_NEW_ONLY


def _frozen(values):
    """Return a read-only float copy of values."""
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


class FeatureVector:
    """A dense, finite, read-only vector observed in one round."""

    def __init__(self, values):
        array = _frozen(values)
        if array.ndim != 1 or array.size == 0:
            raise InvalidInputError(
                'Feature vector must be 1-dimensional and non-empty, got shape {!s}'.format(
                    array.shape))
        if not np.all(np.isfinite(array)):
            raise InvalidInputError('Feature vector has non-finite entries')
        self._values = array

    @property
    def values(self):
        return self._values

    @property
    def dim(self):
        return self._values.size

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        return isinstance(other, FeatureVector) and np.array_equal(self._values, other._values)

    def __repr__(self):
        return 'FeatureVector(dim={:d})'.format(self.dim)


class Label:
    """The revealed target: ±1 for classification, any finite real for regression."""

    def __init__(self, value, task=Task.CLASSIFICATION):
        value = float(value)
        if not np.isfinite(value):
            raise InvalidInputError('Label must be finite, got {!r}'.format(value))
        if task is Task.CLASSIFICATION and value not in (-1.0, 1.0):
            raise InvalidInputError(
                'Classification labels must be -1 or +1, got {!r}'.format(value))
        self._value = value
        self._task = task

    @property
    def value(self):
        return self._value

    @property
    def task(self):
        return self._task

    def __eq__(self, other):
        return (isinstance(other, Label) and self._value == other._value
                and self._task is other._task)

    def __repr__(self):
        return 'Label({!r}, {!s})'.format(self._value, self._task.value)


class StreamSchedule(namedtuple('StreamSchedule', 't1 t2 b d1 d2')):
    """Lengths of the three periods of one cycle and the two dimensionalities.

    Rounds 1..t1-b observe only the old space, t1-b+1..t1 observe both, and
    t1+1..t1+t2 observe only the new space.
    """

    __slots__ = ()

    def __new__(cls, t1, t2, b, d1, d2):
        for name, value in (('t1', t1), ('t2', t2), ('b', b), ('d1', d1), ('d2', d2)):
            if int(value) != value or value < 1:
                raise InvalidInputError('{!s} must be a positive integer, got {!r}'.format(
                    name, value))
        if not b < t1:
            raise InvalidInputError('Overlap b={:d} must be shorter than t1={:d}'.format(b, t1))
        if t2 < 3:
            raise InvalidInputError('t2 must be at least 3, got {:d}'.format(t2))
        return super().__new__(cls, int(t1), int(t2), int(b), int(d1), int(d2))

    @property
    def rounds(self):
        return self.t1 + self.t2

    def phase(self, round_index):
        """The phase of a 1-based round."""
        if not 1 <= round_index <= self.rounds:
            raise InvalidInputError('Round {!r} is outside 1..{:d}'.format(
                round_index, self.rounds))
        if round_index <= self.t1 - self.b:
            return Phase.OLD_ONLY
        if round_index <= self.t1:
            return Phase.OVERLAP
        return Phase.NEW_ONLY


class Instance:
    """One round's observation: the vector(s) visible in its phase and the label."""

    def __init__(self, round_index, phase, label, x_old=None, x_new=None):
        expected = {
            Phase.OLD_ONLY: (True, False),
            Phase.OVERLAP: (True, True),
            Phase.NEW_ONLY: (False, True),
        }[phase]
        if (x_old is not None, x_new is not None) != expected:
            raise InvalidInputError('Round {:d} in phase {!s} has the wrong vectors'.format(
                round_index, phase.value))
        self._round = round_index
        self._phase = phase
        self._label = label
        self._x_old = x_old
        self._x_new = x_new

    @property
    def round(self):
        return self._round

    @property
    def phase(self):
        return self._phase

    @property
    def label(self):
        return self._label

    @property
    def x_old(self):
        return self._x_old

    @property
    def x_new(self):
        return self._x_new

    def __repr__(self):
        return 'Instance({:d}, {!s})'.format(self._round, self._phase.value)


class LinearModel:
    """A weight vector kept inside the L2 ball of the given radius."""

    # Slack for the rounding of the radial projection.
    NORM_TOLERANCE = 1e-12

    def __init__(self, weights, radius=consts.DEFAULT_RADIUS):
        if not radius > 0:
            raise InvalidInputError('Radius must be positive, got {!r}'.format(radius))
        weights = _frozen(weights)
        if weights.ndim != 1 or not np.all(np.isfinite(weights)):
            raise InvalidInputError('Weights must be a finite 1-dimensional array')
        if np.linalg.norm(weights) > radius * (1.0 + self.NORM_TOLERANCE):
            raise InvalidInputError('Weights lie outside the ball of radius {!r}'.format(radius))
        self._weights = weights
        self._radius = float(radius)

    @classmethod
    def random(cls, dim, radius, rng, scale=consts.DEFAULT_INIT_SCALE):
        """Draw i.i.d. N(0, scale^2) weights from rng and project them into the ball."""
        return cls(project_ball(rng.normal(0.0, scale, size=dim), radius), radius)

    @property
    def weights(self):
        return self._weights

    @property
    def radius(self):
        return self._radius

    @property
    def dim(self):
        return self._weights.size

    def __repr__(self):
        return 'LinearModel(dim={:d}, radius={!r})'.format(self.dim, self._radius)


def predict(model, x):
    """The linear prediction <w, x>."""
    if model.dim != x.dim:
        raise InvalidInputError('Model has dimension {:d} but instance has {:d}'.format(
            model.dim, x.dim))
    return float(np.dot(model.weights, x.values))


def project_ball(v, radius):
    """Euclidean projection of v onto the L2 ball of the given radius."""
    if not radius > 0:
        raise InvalidInputError('Radius must be positive, got {!r}'.format(radius))
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise InvalidInputError('Cannot project a non-finite vector')
    norm = np.linalg.norm(v)
    if norm <= radius:
        return v.copy()
    return v * (radius / norm)
