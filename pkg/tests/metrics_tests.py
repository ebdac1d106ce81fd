import math
import unittest
from collections import namedtuple

import numpy as np
from mock import Mock
from numpy.testing import assert_allclose

from fesl import InvalidInputError, MethodKind
from fesl.consts import LN2
from fesl.metrics import (aggregate, avg_cumulative_series, best_switch_loss, check_bounds,
                          check_expected_bound, sign_accuracy, theorem1_bound, theorem2_bound,
                          trend)


class MetricsTests(unittest.TestCase):

    FakeRecord = namedtuple('FakeRecord', '''method seed dataset rows config L_S1 L_S2 L_S12
                                             accuracy avg_cum_loss_series''')

    def create_fake_record(self, method, l_s12, l_s1=10.0, l_s2=12.0, t2=100, seed=0,
                           clip_losses=True, accuracy=None, series=(0.5, )):
        record = self.FakeRecord(method, seed, 'toy', [None] * t2, Mock(clip_losses=clip_losses),
                                 l_s1, l_s2, l_s12, accuracy, np.array(series))
        return record

    def test_avg_cumulative_series(self):
        assert_allclose(avg_cumulative_series([1.0, 0.0, 1.0, 0.0]), [1.0, 0.5, 2 / 3, 0.5])

    def test_sign_accuracy(self):
        self.assertEqual(sign_accuracy([0.0, 0.0], [-1, -1]), 0.0)
        self.assertEqual(sign_accuracy([0.0, 0.0], [1, 1]), 1.0)
        self.assertEqual(sign_accuracy([2.0, -1.0, 0.5, -3.0], [1, -1, -1, 1]), 0.5)
        with self.assertRaises(InvalidInputError):
            sign_accuracy([], [])

    def test_theorem1_bound(self):
        self.assertAlmostEqual(theorem1_bound(2), math.sqrt(LN2))
        self.assertAlmostEqual(theorem1_bound(100), math.sqrt(50 * LN2))
        with self.assertRaises(InvalidInputError):
            theorem1_bound(1)

    def test_theorem2_bound(self):
        # t2 = 3: delta = 1/2 and H(1/2) = ln 2
        self.assertAlmostEqual(theorem2_bound(3), math.sqrt(6 * LN2))
        self.assertGreater(theorem2_bound(100), theorem1_bound(100))

    def test_best_switch_loss(self):
        self.assertEqual(best_switch_loss([0, 0, 1, 1], [1, 1, 0, 0]), (2, 0.0))
        self.assertEqual(best_switch_loss([0, 0, 0], [1, 1, 1]), (3, 0.0))
        self.assertEqual(best_switch_loss([1, 1, 1], [0, 0, 0]), (0, 0.0))

    def test_best_switch_loss_ties(self):
        self.assertEqual(best_switch_loss([0.5, 0.5], [0.5, 0.5]), (0, 1.0))

    def test_best_switch_loss_brute_force(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            losses1, losses2 = rng.random(15), rng.random(15)
            brute = [losses1[:s].sum() + losses2[s:].sum() for s in range(16)]
            s, value = best_switch_loss(losses1, losses2)
            self.assertEqual(s, int(np.argmin(brute)))
            self.assertAlmostEqual(value, min(brute))

    def test_best_switch_loss_rejects_bad_sequences(self):
        with self.assertRaises(InvalidInputError):
            best_switch_loss([], [])
        with self.assertRaises(InvalidInputError):
            best_switch_loss([0.1, 0.2], [0.1])

    def test_check_bounds_combination(self):
        bound = theorem1_bound(100)
        report = check_bounds(self.create_fake_record(MethodKind.FESLC, 10.0 + bound - 0.5))
        self.assertTrue(report.passed)
        self.assertFalse(report.expected)
        self.assertAlmostEqual(report.margin, 0.5)
        self.assertEqual(report.comparator, 10.0)

        report = check_bounds(self.create_fake_record(MethodKind.FESLC, 10.0 + bound + 0.5))
        self.assertFalse(report.passed)
        self.assertAlmostEqual(report.margin, -0.5)

    def test_check_bounds_selection(self):
        losses = ([0.0] * 50 + [1.0] * 50, [1.0] * 50 + [0.0] * 50)
        record = Mock(method=MethodKind.FESLS, rows=[None] * 100, config=Mock(clip_losses=True),
                      L_S12=3.0, dataset='toy', seed=0)
        record.base_losses.return_value = losses

        report = check_bounds(record)

        self.assertTrue(report.expected)
        self.assertTrue(report.passed)
        self.assertEqual(report.comparator, 0.0)
        self.assertAlmostEqual(report.bound, theorem2_bound(100))

    def test_check_bounds_needs_fesl_and_clipping(self):
        with self.assertRaises(InvalidInputError):
            check_bounds(self.create_fake_record(MethodKind.NOGD, 1.0))
        with self.assertRaises(InvalidInputError):
            check_bounds(self.create_fake_record(MethodKind.FESLC, 1.0, clip_losses=False))

    def test_check_expected_bound(self):
        records = []
        for seed, loss in enumerate((20.0, 30.0)):
            record = Mock(method=MethodKind.FESLS, rows=[None] * 100,
                          config=Mock(clip_losses=True), L_S12=loss, dataset='toy', seed=seed)
            record.base_losses.return_value = ([0.1] * 100, [0.2] * 100)
            records.append(record)

        report = check_expected_bound(records)

        self.assertAlmostEqual(report.loss, 25.0)
        self.assertAlmostEqual(report.comparator, 10.0)
        self.assertAlmostEqual(report.bound, theorem2_bound(100) + 5.0)
        self.assertIsNone(report.seed)
        self.assertEqual(report.passed, report.margin >= 0)

    def test_aggregate(self):
        records = [
            self.create_fake_record(MethodKind.FESLC, 1.0, seed=1, accuracy=0.8, series=(1, 0.4)),
            self.create_fake_record(MethodKind.NOGD, 1.0, seed=0, accuracy=0.5, series=(1, 0.6)),
            self.create_fake_record(MethodKind.FESLC, 1.0, seed=0, accuracy=0.6, series=(1, 0.2)),
        ]

        rows = aggregate(records)

        self.assertEqual([row.method for row in rows], ['nogd', 'feslc'])
        feslc = rows[1]
        self.assertEqual(feslc.runs, 2)
        self.assertAlmostEqual(feslc.accuracy_mean, 0.7)
        self.assertAlmostEqual(feslc.accuracy_std, 0.1)
        self.assertAlmostEqual(feslc.final_loss_mean, 0.3)

    def test_aggregate_regression(self):
        rows = aggregate([self.create_fake_record(MethodKind.NOGD, 1.0, series=(2.0, 1.0))])
        self.assertIsNone(rows[0].accuracy_mean)
        self.assertIsNone(rows[0].accuracy_std)
        self.assertAlmostEqual(rows[0].final_loss_mean, 1.0)

    def test_trend(self):
        records = [
            self.create_fake_record(MethodKind.FESLS, 1.0, seed=0, series=(1.0, 0.0)),
            self.create_fake_record(MethodKind.ROGDU, 1.0, seed=0, series=(0.5, 0.5)),
            self.create_fake_record(MethodKind.FESLS, 1.0, seed=1, series=(0.0, 1.0)),
        ]

        methods, series = trend(records)

        self.assertEqual(methods, ['rogdu', 'fesls'])
        assert_allclose(series[0], [0.5, 0.5])
        assert_allclose(series[1], [0.5, 0.5])
