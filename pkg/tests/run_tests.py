import io
import os
import tempfile
import unittest
from contextlib import redirect_stdout

from mock import patch

import run
from fesl import consts
from fesl.harness import read_records
from fesl.metrics import BoundReport
from fesl.streams import load_stream


@patch('run.configure_logging')
class RunTests(unittest.TestCase):

    def setUp(self):
        self._directory = tempfile.TemporaryDirectory()
        self.path = self._directory.name
        self.stream_path = os.path.join(self.path, 'generated.stream')
        self.records_path = os.path.join(self.path, 'runs')

    def tearDown(self):
        self._directory.cleanup()

    def main(self, *argv):
        return run.main(['--env', consts.ENV_TEST] + list(argv))

    def synth(self):
        return self.main('synth', '--generate', '200,5', '--d2', '4', '--seed', '1',
                         '--out', self.stream_path)

    def test_synth(self, configure_logging):
        self.assertEqual(self.synth(), consts.EXIT_OK)
        configure_logging.assert_called_once_with(consts.ENV_TEST)

        stream = load_stream(self.stream_path)
        self.assertEqual((stream.schedule.t1, stream.schedule.t2, stream.schedule.b),
                         (100, 100, 5))
        self.assertEqual((stream.schedule.d1, stream.schedule.d2), (5, 4))
        self.assertEqual(stream.seed, 1)

    def test_synth_from_csv(self, configure_logging):
        data = os.path.join(self.path, 'toy.csv')
        with open(data, 'w') as stream:
            stream.write(''.join('{:d},{:d},{:d}\n'.format(i, i % 3, i % 2) for i in range(40)))

        self.assertEqual(self.main('synth', '--input', data, '--d2', '3', '--out',
                                   self.stream_path), consts.EXIT_OK)
        self.assertEqual(load_stream(self.stream_path).name, 'toy')

    def test_synth_rejects_large_spaces(self, configure_logging):
        self.assertEqual(self.main('synth', '--generate', '20,600', '--d2', '4', '--out',
                                   self.stream_path), consts.EXIT_INPUT_ERROR)
        self.assertFalse(os.path.exists(self.stream_path))

    def test_run_report_check(self, configure_logging):
        self.synth()

        self.assertEqual(self.main('run', '--stream', self.stream_path, '--methods',
                                   'nogd,rogdu,feslc,fesls', '--seeds', '2', '--out',
                                   self.records_path), consts.EXIT_OK)
        records = read_records(self.records_path)
        self.assertEqual(len(records), 8)
        self.assertIn('generated_feslc_seed1.record', os.listdir(self.records_path))

        self.assertEqual(self.main('report', '--in', self.records_path), consts.EXIT_OK)
        with open(os.path.join(self.records_path, consts.FILE_TABLE)) as table:
            lines = table.read().splitlines()
        self.assertEqual(len(lines), 5)
        trend_path = os.path.join(self.records_path, 'generated_' + consts.FILE_TREND)
        with open(trend_path) as trend:
            self.assertEqual(trend.readline().strip(), 'round,nogd,rogdu,feslc,fesls')

        output = io.StringIO()
        with redirect_stdout(output):
            code = self.main('check', '--in', self.records_path)
        self.assertEqual(code, consts.EXIT_OK)
        lines = output.getvalue().splitlines()
        self.assertEqual(len(lines), 5)
        self.assertTrue(all('FAIL' not in line for line in lines if 'feslc' in line))

    def test_run_overrides(self, configure_logging):
        self.synth()
        self.main('run', '--stream', self.stream_path, '--methods', 'fesls', '--seeds', '1',
                  '--c', '10', '--clip', 'off', '--delta', '0.1', '--out', self.records_path)
        record = read_records(self.records_path)[0]
        self.assertEqual(record.config.step_scale, 10.0)
        self.assertFalse(record.config.clip_losses)
        self.assertEqual(record.config.delta, 0.1)

    def test_run_twice_writes_identical_records(self, configure_logging):
        self.synth()
        outputs = [os.path.join(self.path, 'first'), os.path.join(self.path, 'second')]
        for out in outputs:
            self.assertEqual(self.main('run', '--stream', self.stream_path, '--methods',
                                       'rogdf,feslc,fesls', '--seeds', '2', '--out', out),
                             consts.EXIT_OK)

        names = sorted(os.listdir(outputs[0]))
        self.assertEqual(names, sorted(os.listdir(outputs[1])))
        self.assertEqual(len(names), 6)
        for name in names:
            with open(os.path.join(outputs[0], name), 'rb') as first, \
                    open(os.path.join(outputs[1], name), 'rb') as second:
                self.assertEqual(first.read(), second.read(), name)

    def test_check_flags_violations(self, configure_logging):
        self.synth()
        self.main('run', '--stream', self.stream_path, '--methods', 'feslc', '--seeds', '1',
                  '--out', self.records_path)
        failing = BoundReport('generated', 'feslc', 0, 9.0, 1.0, 2.0, -6.0, False, False)
        with patch('run.check_bounds', return_value=failing), redirect_stdout(io.StringIO()):
            self.assertEqual(self.main('check', '--in', self.records_path),
                             consts.EXIT_BOUND_VIOLATION)

    def test_missing_stream(self, configure_logging):
        self.assertEqual(self.main('run', '--stream', os.path.join(self.path, 'none.stream'),
                                   '--out', self.records_path), consts.EXIT_INPUT_ERROR)

    def test_unknown_method(self, configure_logging):
        self.synth()
        self.assertEqual(self.main('run', '--stream', self.stream_path, '--methods', 'hedge',
                                   '--out', self.records_path), consts.EXIT_INPUT_ERROR)

    def test_unknown_environment(self, configure_logging):
        with self.assertRaises(ValueError):
            run.main(['--env', 'staging', 'check', '--in', self.path])
