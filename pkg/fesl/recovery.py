"""Least-squares map from the new feature space back to the old one, learnt on the overlap."""
import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from . import consts
from .core import FeatureVector
from .exceptions import InvalidInputError, SingularSystemError, StateError

logger = logging.getLogger(__name__)


class MapEstimator:
    """Accumulates M1 = sum x_new x_new^T and M2 = sum x_new x_old^T, then solves for M*.

    The recovered instance is psi(x_new) = M*^T x_new. Estimators are values: accumulate and
    solve return new estimators.
    """

    def __init__(self, d2, d1, ridge=consts.DEFAULT_RIDGE):
        """Init an empty estimator.

        Args:
            d2: dimensionality of the new feature space
            d1: dimensionality of the old feature space
            ridge: lambda added to the diagonal of M1 before solving
        """
        if d1 < 1 or d2 < 1:
            raise InvalidInputError('Dimensions must be positive, got d2={!r}, d1={!r}'.format(
                d2, d1))
        if not ridge >= 0:
            raise InvalidInputError('Ridge must be non-negative, got {!r}'.format(ridge))
        self._d2 = int(d2)
        self._d1 = int(d1)
        self._ridge = float(ridge)
        self._m1 = np.zeros((self._d2, self._d2))
        self._m2 = np.zeros((self._d2, self._d1))
        self._m_star = None
        self._samples_seen = 0

    @property
    def d1(self):
        return self._d1

    @property
    def d2(self):
        return self._d2

    @property
    def ridge(self):
        return self._ridge

    @property
    def m1(self):
        return self._m1

    @property
    def m2(self):
        return self._m2

    @property
    def m_star(self):
        return self._m_star

    @property
    def samples_seen(self):
        return self._samples_seen

    @property
    def solved(self):
        return self._m_star is not None

    def accumulate(self, x_new, x_old):
        """Add one overlap pair to the accumulators."""
        if self.solved:
            raise StateError('Cannot accumulate into a solved map')
        if x_new.dim != self._d2 or x_old.dim != self._d1:
            raise InvalidInputError(
                'Expected a ({:d}, {:d}) pair, got ({:d}, {:d})'.format(
                    self._d2, self._d1, x_new.dim, x_old.dim))
        estimator = self._copy()
        estimator._m1 = self._m1 + np.outer(x_new.values, x_new.values)
        estimator._m2 = self._m2 + np.outer(x_new.values, x_old.values)
        estimator._samples_seen = self._samples_seen + 1
        return estimator

    def solve(self):
        """M* = (M1 + lambda I)^-1 M2 through a Cholesky factorization."""
        if self._samples_seen < 1:
            raise StateError('Cannot solve a map before any overlap sample')
        if self._ridge == 0 and self._samples_seen < self._d2:
            raise SingularSystemError(
                'M1 has rank at most {:d} < d2={:d}; use a ridge > 0'.format(
                    self._samples_seen, self._d2))
        system = self._m1 + self._ridge * np.eye(self._d2)
        try:
            factor = cho_factor(system, lower=True)
        except LinAlgError as error:
            raise SingularSystemError(
                'M1 + {!r} I is not positive definite ({!s}); use a ridge > 0'.format(
                    self._ridge, error))
        m_star = cho_solve(factor, self._m2)
        if not np.all(np.isfinite(m_star)):
            raise SingularSystemError('Map solve produced non-finite entries; use a larger ridge')
        logger.debug('Solved {:d}x{:d} map from {:d} samples with ridge {!r}'.format(
            self._d2, self._d1, self._samples_seen, self._ridge))
        estimator = self._copy()
        estimator._m_star = m_star
        return estimator

    def recover(self, x_new):
        """Estimate the vanished old-space vector of a new-space instance."""
        if not self.solved:
            raise StateError('Map has not been solved yet')
        if x_new.dim != self._d2:
            raise InvalidInputError('Expected a {:d}-dim new-space vector, got {:d}'.format(
                self._d2, x_new.dim))
        return FeatureVector(self._m_star.T.dot(x_new.values))

    def save(self, path):
        """Write M* as a row-major text matrix whose header holds d2 and d1."""
        if not self.solved:
            raise StateError('Only a solved map can be saved')
        np.savetxt(path, self._m_star, header='{:d} {:d}'.format(self._d2, self._d1))

    @classmethod
    def load(cls, path, ridge=consts.DEFAULT_RIDGE):
        """Read a map written by save; the result is solved and has seen no samples."""
        with open(path) as stream:
            header = stream.readline().lstrip('#').split()
        try:
            d2, d1 = int(header[0]), int(header[1])
        except (IndexError, ValueError):
            raise InvalidInputError('{!s} has no "d2 d1" header'.format(path))
        entries = np.loadtxt(path)
        if entries.size != d2 * d1:
            raise InvalidInputError('{!s} holds {:d} entries, header says ({:d}, {:d})'.format(
                path, entries.size, d2, d1))
        estimator = cls(d2, d1, ridge)
        estimator._m_star = entries.reshape(d2, d1)
        return estimator

    def _copy(self):
        estimator = MapEstimator(self._d2, self._d1, self._ridge)
        estimator._m1 = self._m1
        estimator._m2 = self._m2
        estimator._m_star = self._m_star
        estimator._samples_seen = self._samples_seen
        return estimator

    def __repr__(self):
        return 'MapEstimator({:d}x{:d}, samples={:d}, solved={!s})'.format(
            self._d2, self._d1, self._samples_seen, self.solved)
