import unittest

import numpy as np
from mock import Mock
from numpy.testing import assert_allclose

from fesl import FeatureVector, InvalidInputError, Label, LinearModel, LossKind, OgdState, Task
from fesl.losses import loss
from fesl.ogd import initial_model, ogd_step, ogd_step_recovered


class OgdTests(unittest.TestCase):

    def test_step_size(self):
        state = OgdState(LinearModel([0.0]), step_scale=2.0, local_round=4)
        self.assertAlmostEqual(state.step_size, 0.25)
        self.assertAlmostEqual(OgdState(LinearModel([0.0]), 10.0).step_size, 0.1)

    def test_rejects_bad_schedule(self):
        with self.assertRaises(InvalidInputError):
            OgdState(LinearModel([0.0]), step_scale=0.0)
        with self.assertRaises(InvalidInputError):
            OgdState(LinearModel([0.0]), local_round=0)

    def test_square_step_by_hand(self):
        state = OgdState(LinearModel([0.0, 0.0]), step_scale=1.0)
        label = Label(1.0, Task.REGRESSION)
        stepped = ogd_step(state, FeatureVector([1.0, 0.0]), label, LossKind.SQUARE)
        # gradient 2 (0 - 1) x = (-2, 0), step size 1
        assert_allclose(stepped.model.weights, [2.0, 0.0])
        self.assertEqual(stepped.local_round, 2)
        self.assertEqual(state.local_round, 1)
        assert_allclose(state.model.weights, [0.0, 0.0])

    def test_step_is_projected(self):
        state = OgdState(LinearModel([0.0, 0.0], radius=1.0), step_scale=1.0)
        label = Label(1.0, Task.REGRESSION)
        stepped = ogd_step(state, FeatureVector([1.0, 0.0]), label, LossKind.SQUARE)
        assert_allclose(stepped.model.weights, [1.0, 0.0])
        self.assertEqual(stepped.model.radius, 1.0)

    def test_restart(self):
        state = OgdState(LinearModel([0.5]), step_scale=3.0, local_round=40)
        restarted = state.restart()
        self.assertEqual(restarted.local_round, 1)
        self.assertEqual(restarted.step_scale, 3.0)
        self.assertIs(restarted.model, state.model)

    def test_step_on_recovered_instance(self):
        recovered = FeatureVector([0.5, -1.0, 2.0])
        estimator = Mock()
        estimator.recover.return_value = recovered
        x_new = FeatureVector([1.0, 1.0])
        state = OgdState(LinearModel([0.1, 0.2, 0.3]), step_scale=2.0)

        stepped = ogd_step_recovered(state, estimator, x_new, Label(-1), LossKind.LOGISTIC)

        estimator.recover.assert_called_once_with(x_new)
        expected = ogd_step(state, recovered, Label(-1), LossKind.LOGISTIC)
        assert_allclose(stepped.model.weights, expected.model.weights, rtol=0)

    def test_initial_model(self):
        model = initial_model(8, 100.0, np.random.default_rng(0), scale=0.01)
        self.assertEqual(model.dim, 8)
        self.assertLess(np.abs(model.weights).max(), 0.1)

    def test_average_loss_decreases_on_separable_stream(self):
        rng = np.random.default_rng(5)
        state = OgdState(LinearModel([0.0]), step_scale=1.0)
        losses = []
        for _ in range(2000):
            x = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5)
            label = Label(1.0 if x > 0 else -1.0)
            vector = FeatureVector([x])
            losses.append(loss(LossKind.LOGISTIC, float(state.model.weights.dot(vector.values)),
                               label))
            state = ogd_step(state, vector, label, LossKind.LOGISTIC)
        self.assertLess(np.mean(losses[-200:]), np.mean(losses[:200]))
