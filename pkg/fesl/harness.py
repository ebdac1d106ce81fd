"""Running the five methods over a cycle stream and recording every new-space round."""
import logging
import os
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from enum import Enum

import numpy as np

from . import consts
from .core import Phase, StreamSchedule, Task, predict
from .ensemble import (EnsembleState, combine_predict, select_predict, update_combine,
                       update_select)
from .exceptions import FeslError, FormatError, InvalidInputError, RunError
from .losses import LossKind, clip_loss, loss
from .metrics import avg_cumulative_series, sign_accuracy
from .ogd import OgdState, initial_model, ogd_step, ogd_step_recovered
from .recovery import MapEstimator
from .report import Report, read_sections

logger = logging.getLogger(__name__)


class MethodKind(Enum):
    NOGD = consts.METHOD_NOGD
    ROGDU = consts.METHOD_ROGD_U
    ROGDF = consts.METHOD_ROGD_F
    FESLC = consts.METHOD_FESL_C
    FESLS = consts.METHOD_FESL_S

    @property
    def order(self):
        return list(MethodKind).index(self)

    @property
    def uses_old_model(self):
        """Predicts with the old-space model on recovered instances."""
        return self is not MethodKind.NOGD

    @property
    def uses_new_model(self):
        """Predicts with a model trained on the new space."""
        return self in (MethodKind.NOGD, MethodKind.FESLC, MethodKind.FESLS)

    @property
    def updates_old_model(self):
        return self in (MethodKind.ROGDU, MethodKind.FESLC, MethodKind.FESLS)

    @classmethod
    def parse_list(cls, text):
        """Parse a comma-separated list such as 'nogd,feslc'."""
        try:
            return [cls(name.strip().lower()) for name in text.split(',') if name.strip()]
        except ValueError as error:
            raise InvalidInputError('Unknown method in {!r}: {!s}'.format(text, error))


class RunConfig(namedtuple('RunConfig', '''seed,
                                           step_scale,
                                           radius,
                                           ridge,
                                           clip_losses,
                                           delta,
                                           init_scale,
                                           loss_kind''')):
    """Everything besides the stream that determines a run."""

    __slots__ = ()

    def __new__(cls, seed=0, step_scale=consts.DEFAULT_STEP_SCALE, radius=consts.DEFAULT_RADIUS,
                ridge=consts.DEFAULT_RIDGE, clip_losses=True, delta=None,
                init_scale=consts.DEFAULT_INIT_SCALE, loss_kind=None):
        return super().__new__(cls, int(seed), float(step_scale), float(radius), float(ridge),
                               bool(clip_losses), None if delta is None else float(delta),
                               float(init_scale), loss_kind)

    @classmethod
    def from_config(cls, config, seed, dataset='', **overrides):
        """Defaults from a Config (c from the preset table), then any non-None overrides."""
        run_config = cls(seed=seed,
                         step_scale=config.step_scale_for(dataset),
                         radius=config.learner.radius,
                         ridge=config.recovery.ridge,
                         clip_losses=config.ensemble.clip_losses,
                         delta=config.ensemble.delta,
                         init_scale=config.learner.init_scale)
        return run_config._replace(**{key: value for key, value in overrides.items()
                                      if value is not None})

    def as_dict(self):
        values = self._asdict()
        values['loss_kind'] = self.loss_kind.value if self.loss_kind else None
        return values


RoundRow = namedtuple('RoundRow', '''round,
                                     label,
                                     f1,
                                     f2,
                                     prediction,
                                     loss_raw,
                                     loss_clipped,
                                     loss1,
                                     loss2,
                                     alpha1,
                                     alpha2,
                                     choice''')


class RunRecord:
    """Per-round results of one method on one stream, with the cumulative summaries.

    loss_clipped, loss1 and loss2 are the effective losses: clipped into [0, 1] when clipping is
    on, raw otherwise. L_S1, L_S2 and L_S12 sum them over the new-space rounds.
    """

    COLUMNS = RoundRow._fields

    def __init__(self, method, seed, schedule, rows, config, dataset='',
                 task=Task.CLASSIFICATION):
        self._method = method
        self._seed = int(seed)
        self._schedule = schedule
        self._rows = tuple(rows)
        self._config = config
        self._dataset = dataset
        self._task = task
        if len(self._rows) != schedule.t2:
            raise InvalidInputError('Record has {:d} rows for t2={:d}'.format(
                len(self._rows), schedule.t2))

    @property
    def method(self):
        return self._method

    @property
    def seed(self):
        return self._seed

    @property
    def schedule(self):
        return self._schedule

    @property
    def rows(self):
        return self._rows

    @property
    def config(self):
        return self._config

    @property
    def dataset(self):
        return self._dataset

    @property
    def task(self):
        return self._task

    @property
    def L_S1(self):
        return self._total('loss1')

    @property
    def L_S2(self):
        return self._total('loss2')

    @property
    def L_S12(self):
        return self._total('loss_clipped')

    @property
    def accuracy(self):
        """Sign accuracy over the new-space rounds; None for regression."""
        if self._task is not Task.CLASSIFICATION:
            return None
        return sign_accuracy([row.prediction for row in self._rows],
                             [row.label for row in self._rows])

    @property
    def avg_cum_loss_series(self):
        return avg_cumulative_series([row.loss_clipped for row in self._rows])

    @property
    def avg_raw_loss_series(self):
        return avg_cumulative_series([row.loss_raw for row in self._rows])

    def base_losses(self):
        """Per-round effective losses of the old-space and new-space models."""
        if not (self._method.uses_old_model and self._method.uses_new_model):
            raise InvalidInputError('{!s} records carry a single base model'.format(
                self._method.value))
        return [row.loss1 for row in self._rows], [row.loss2 for row in self._rows]

    def _total(self, column):
        values = [getattr(row, column) for row in self._rows]
        if any(value is None for value in values):
            return None
        return float(np.sum(values))

    def header(self):
        """The structured part of the record file."""
        final_loss = self.avg_cum_loss_series[-1]
        final_raw_loss = self.avg_raw_loss_series[-1]
        return {
            'dataset': self._dataset,
            'method': self._method.value,
            'seed': self._seed,
            'task': self._task.value,
            'schedule': dict(self._schedule._asdict()),
            'config': self._config.as_dict(),
            'summary': {
                'L_S1': self.L_S1,
                'L_S2': self.L_S2,
                'L_S12': self.L_S12,
                'accuracy': self.accuracy,
                'final_avg_loss': float(final_loss),
                'final_avg_raw_loss': float(final_raw_loss),
            },
        }

    def write(self, path):
        Report().write_record(self, path)

    @classmethod
    def read(cls, path):
        """Read a record written by write."""
        header, lines = read_sections(path)
        try:
            method = MethodKind(header['method'])
            task = Task(header['task'])
            schedule = StreamSchedule(**header['schedule'])
            settings = dict(header['config'])
            loss_kind = settings.pop('loss_kind')
            config = RunConfig(loss_kind=LossKind(loss_kind) if loss_kind else None, **settings)
        except (KeyError, TypeError, ValueError) as error:
            raise FormatError('bad record header ({!s})'.format(error), path)
        rows = []
        for line, fields in lines:
            try:
                rows.append(_parse_row(fields))
            except ValueError as error:
                raise FormatError('bad record row ({!s})'.format(error), path, line)
        try:
            return cls(method, header['seed'], schedule, rows, config, header.get('dataset', ''),
                       task)
        except InvalidInputError as error:
            raise FormatError('{!s}'.format(error), path)

    def __repr__(self):
        return 'RunRecord({!s}, seed={:d}, dataset={!r})'.format(
            self._method.value, self._seed, self._dataset)


def _parse_row(fields):
    if len(fields) != len(RoundRow._fields):
        raise ValueError('expected {:d} fields, got {:d}'.format(len(RoundRow._fields),
                                                                 len(fields)))

    def optional(value, kind=float):
        return None if value == consts.ABSENT else kind(value)

    round_index, label = int(fields[0]), float(fields[1])
    values = [optional(value) for value in fields[2:11]]
    return RoundRow(round_index, label, *values, optional(fields[11], int))


class Runner:
    """Run one method over one stream.

    Rounds 1..t1 are the same for every method: train the old-space model and learn the map
    on the overlap. Each new-space round is dispatched on the method.
    """

    def __init__(self, stream, method, config):
        """Init the class with the stream, the method to run and the run configuration."""
        self._stream = stream
        self._method = method
        self._config = config
        self._kind = config.loss_kind or LossKind.for_task(stream.task)
        init_seed, select_seed = np.random.SeedSequence(config.seed).spawn(2)
        self._init_rng = np.random.default_rng(init_seed)
        self._select_rng = np.random.default_rng(select_seed)
        self._w1 = None
        self._w2 = None
        self._estimator = None
        self._ensemble = None

    def run(self):
        """Process every round of the stream and return the record."""
        logger.info('Running {!s} seed {:d} on {!r}'.format(
            self._method.value, self._config.seed, self._stream.name))
        schedule = self._stream.schedule
        self._start(schedule)
        for instance in self._stream.instances[:schedule.t1]:
            self._guarded(self._on_old_round, instance)
        self._guarded(self._switch_spaces, self._stream.instances[schedule.t1])
        rows = [self._guarded(self._on_new_round, instance)
                for instance in self._stream.new_only()]
        record = RunRecord(self._method, self._config.seed, schedule, rows, self._config,
                           self._stream.name, self._stream.task)
        logger.info('Finished {!r}: L_S12={:.4f}'.format(record, record.L_S12))
        return record

    def _guarded(self, handler, instance):
        try:
            return handler(instance)
        except FeslError as error:
            raise RunError(instance.round, error) from error

    def _start(self, schedule):
        # Both initial models are drawn for every method so that methods share trajectories.
        config = self._config
        w1 = initial_model(schedule.d1, config.radius, self._init_rng, config.init_scale)
        w2 = initial_model(schedule.d2, config.radius, self._init_rng, config.init_scale)
        self._w1 = OgdState(w1, config.step_scale)
        self._w2 = OgdState(w2, config.step_scale)
        self._estimator = MapEstimator(schedule.d2, schedule.d1, config.ridge)

    def _on_old_round(self, instance):
        """Train the old-space model; feed overlap pairs to the map."""
        if not self._method.uses_old_model:
            return
        self._w1 = ogd_step(self._w1, instance.x_old, instance.label, self._kind)
        if instance.phase is Phase.OVERLAP:
            self._estimator = self._estimator.accumulate(instance.x_new, instance.x_old)

    def _switch_spaces(self, instance):
        """Solve the map, restart the step sizes and set up the ensemble at round t1+1."""
        logger.debug('Switching to the new feature space at round {:d}'.format(instance.round))
        if self._method.uses_old_model:
            self._estimator = self._estimator.solve()
            self._w1 = self._w1.restart()
        t2 = self._stream.schedule.t2
        clip = self._config.clip_losses
        if self._method is MethodKind.FESLC:
            self._ensemble = EnsembleState.combine(t2, clip)
        elif self._method is MethodKind.FESLS:
            self._ensemble = EnsembleState.select(t2, self._select_rng, self._config.delta, clip)

    def _on_new_round(self, instance):
        x_new, label = instance.x_new, instance.label
        f1 = f2 = None
        if self._method.uses_old_model:
            f1 = predict(self._w1.model, self._estimator.recover(x_new))
        if self._method.uses_new_model:
            f2 = predict(self._w2.model, x_new)
        alpha = self._ensemble.alpha if self._ensemble else (None, None)

        choice, prediction = self._predict(f1, f2)
        loss_raw = loss(self._kind, prediction, label)
        loss1 = loss(self._kind, f1, label) if f1 is not None else None
        loss2 = loss(self._kind, f2, label) if f2 is not None else None

        if self._method is MethodKind.FESLC:
            self._ensemble = update_combine(self._ensemble, loss1, loss2)
        elif self._method is MethodKind.FESLS:
            self._ensemble = update_select(self._ensemble, loss1, loss2)
        if self._method.updates_old_model:
            self._w1 = ogd_step_recovered(self._w1, self._estimator, x_new, label, self._kind)
        if self._method.uses_new_model:
            self._w2 = ogd_step(self._w2, x_new, label, self._kind)

        return RoundRow(instance.round, label.value, f1, f2, prediction, loss_raw,
                        self._effective(loss_raw), self._effective(loss1),
                        self._effective(loss2), alpha[0], alpha[1], choice)

    def _predict(self, f1, f2):
        """Pick the round's prediction according to the method."""
        if self._method is MethodKind.NOGD:
            return None, f2
        elif self._method in (MethodKind.ROGDU, MethodKind.ROGDF):
            return None, f1
        elif self._method is MethodKind.FESLC:
            return None, combine_predict(self._ensemble, f1, f2)
        return select_predict(self._ensemble, f1, f2)

    def _effective(self, value):
        if value is None or not self._config.clip_losses:
            return value
        return clip_loss(value)


def run_method(stream, method, config):
    """Run one method over a stream."""
    return Runner(stream, method, config).run()


def _run_task(task):
    stream, method, config = task
    return run_method(stream, method, config)


def run_many(stream, methods, seeds, config, workers=1):
    """Run every (method, seed) pair, in a process pool when workers > 1.

    Returns:
        records sorted by method order, then seed
    """
    tasks = [(stream, method, config._replace(seed=seed)) for method in methods for seed in seeds]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(_run_task, tasks))
    else:
        records = [_run_task(task) for task in tasks]
    return sorted(records, key=lambda record: (record.method.order, record.seed))


def record_path(directory, record):
    """File name of a record inside an output directory."""
    name = '{!s}_{!s}_seed{:d}{!s}'.format(record.dataset or 'stream', record.method.value,
                                            record.seed, consts.FILE_RECORD_SUFFIX)
    return os.path.join(directory, name)


def read_records(directory):
    """Every record in a directory, sorted by dataset, method and seed."""
    paths = sorted(os.path.join(directory, name) for name in os.listdir(directory)
                   if name.endswith(consts.FILE_RECORD_SUFFIX))
    records = [RunRecord.read(path) for path in paths]
    return sorted(records, key=lambda r: (r.dataset, r.method.order, r.seed))
