"""Building evolvable streams from batch data: loading, a synthetic second space, the cycle."""
import logging
import os
import re
from collections import namedtuple
from enum import Enum

import numpy as np
import pandas as pd
from sklearn.datasets import load_svmlight_file

from . import consts
from .core import FeatureVector, Instance, Label, Phase, StreamSchedule, Task
from .exceptions import FormatError, InvalidInputError
from .report import Report, read_sections

logger = logging.getLogger(__name__)


class Source(Enum):
    SYNTHETIC_GAUSSIAN = consts.SOURCE_SYNTHETIC
    TWO_VIEW = consts.SOURCE_TWO_VIEW
    GENERATED = consts.SOURCE_GENERATED


class DatasetSpec(namedtuple('DatasetSpec', 'name n d1 d2 task source')):
    """Shape and origin of a batch dataset."""

    __slots__ = ()

    def __new__(cls, name, n, d1, d2, task, source):
        if min(n, d1, d2) < 1:
            raise InvalidInputError('n, d1 and d2 must be positive, got {!r}'.format((n, d1, d2)))
        return super().__new__(cls, name, int(n), int(d1), int(d2), task, source)


class CycleStream:
    """The instances of one cycle, in arrival order, with the schedule that shaped them."""

    def __init__(self, schedule, instances, seed, name='', task=Task.CLASSIFICATION):
        instances = tuple(instances)
        if len(instances) != schedule.rounds:
            raise InvalidInputError('Stream has {:d} instances, schedule needs {:d}'.format(
                len(instances), schedule.rounds))
        for index, instance in enumerate(instances, start=1):
            if instance.round != index or instance.phase is not schedule.phase(index):
                raise InvalidInputError('Instance {!r} does not follow the schedule'.format(
                    instance))
        self._schedule = schedule
        self._instances = instances
        self._seed = int(seed)
        self._name = name
        self._task = task

    @property
    def schedule(self):
        return self._schedule

    @property
    def instances(self):
        return self._instances

    @property
    def seed(self):
        return self._seed

    @property
    def name(self):
        return self._name

    @property
    def task(self):
        return self._task

    def phase_counts(self):
        """Number of instances in each phase."""
        counts = {phase: 0 for phase in Phase}
        for instance in self._instances:
            counts[instance.phase] += 1
        return counts

    def new_only(self):
        """The instances of rounds t1+1..t1+t2."""
        return self._instances[self._schedule.t1:]

    def __len__(self):
        return len(self._instances)

    def __iter__(self):
        return iter(self._instances)

    def __repr__(self):
        return 'CycleStream({!r}, {!r}, seed={:d})'.format(self._name, self._schedule, self._seed)


def remap_labels(labels, task=Task.CLASSIFICATION):
    """Map {0, 1} and {1, 2} classification labels onto {-1, +1}."""
    labels = np.asarray(labels, dtype=float)
    if task is Task.REGRESSION:
        return labels
    values = set(np.unique(labels).tolist())
    if values <= {-1.0, 1.0}:
        return labels
    if values <= {0.0, 1.0}:
        return np.where(labels == 0.0, -1.0, 1.0)
    if values <= {1.0, 2.0}:
        return np.where(labels == 1.0, -1.0, 1.0)
    raise InvalidInputError('Cannot map classification labels {!r} onto -1/+1'.format(
        sorted(values)))


def load_batch(path, fmt=consts.FORMAT_CSV, n_features=None, task=Task.CLASSIFICATION):
    """Load a batch dataset into a dense matrix.

    Args:
        path: file to read
        fmt: 'csv' (comma separated, label last) or 'svm' ("label idx:val ..." with 1-based indices)
        n_features: dimensionality of svm files; read from a "# dim: <d>" line when omitted
        task: classification labels are remapped onto -1/+1

    Returns:
        (features, labels, DatasetSpec) with d2 == d1 until a second space is attached

    Raises:
        FormatError: if the file is empty, ragged or does not parse
    """
    if fmt == consts.FORMAT_CSV:
        features, labels = _read_csv(path)
    elif fmt == consts.FORMAT_SVM:
        features, labels = _read_svm(path, n_features)
    else:
        raise InvalidInputError('Unknown format: {!r}'.format(fmt))
    labels = remap_labels(labels, task)
    name = os.path.splitext(os.path.basename(path))[0]
    n, d1 = features.shape
    logger.info('Loaded {!s}: {:d} rows, {:d} features'.format(path, n, d1))
    return features, labels, DatasetSpec(name, n, d1, d1, task, Source.SYNTHETIC_GAUSSIAN)


def load_two_view(path_old, path_new, fmt=consts.FORMAT_CSV, task=Task.CLASSIFICATION,
                  n_features=(None, None)):
    """Load two views of the same samples, one file per feature space, labels in both."""
    features_old, labels_old = _read(path_old, fmt, n_features[0])
    features_new, labels_new = _read(path_new, fmt, n_features[1])
    if features_old.shape[0] != features_new.shape[0]:
        raise FormatError('views have {:d} and {:d} rows'.format(
            features_old.shape[0], features_new.shape[0]), path_new)
    if not np.array_equal(labels_old, labels_new):
        raise FormatError('labels differ from {!s}'.format(path_old), path_new)
    labels = remap_labels(labels_old, task)
    name = '{!s}-{!s}'.format(os.path.splitext(os.path.basename(path_old))[0],
                              os.path.splitext(os.path.basename(path_new))[0])
    spec = DatasetSpec(name, features_old.shape[0], features_old.shape[1],
                       features_new.shape[1], task, Source.TWO_VIEW)
    return features_old, features_new, labels, spec


def _read(path, fmt, n_features):
    if fmt == consts.FORMAT_CSV:
        return _read_csv(path)
    if fmt == consts.FORMAT_SVM:
        return _read_svm(path, n_features)
    raise InvalidInputError('Unknown format: {!r}'.format(fmt))


def _data_lines(path):
    """1-based line numbers of the non-blank, non-comment lines of a file."""
    with open(path) as stream:
        return [number for number, text in enumerate(stream, start=1)
                if text.strip() and not text.lstrip().startswith('#')]


def _read_csv(path):
    lines = _data_lines(path)
    if not lines:
        raise FormatError('file is empty', path)
    try:
        frame = pd.read_csv(path, header=None, skipinitialspace=True, comment='#')
    except pd.errors.ParserError as error:
        match = re.search(r'line (\d+)', str(error))
        raise FormatError('ragged row ({!s})'.format(error), path,
                          int(match.group(1)) if match else None)
    numeric = frame.apply(pd.to_numeric, errors='coerce')
    bad_rows = np.flatnonzero(numeric.isnull().any(axis=1).to_numpy())
    if bad_rows.size:
        raise FormatError('missing or non-numeric field', path, lines[bad_rows[0]])
    if numeric.shape[1] < 2:
        raise FormatError('rows need at least one feature and a label', path, lines[0])
    values = numeric.to_numpy(dtype=float)
    return values[:, :-1], values[:, -1]


_DIM_HEADER = re.compile(r'^\s*#\s*dim\s*[:=]\s*(\d+)\s*$')


def _declared_dim(path):
    with open(path) as stream:
        for text in stream:
            match = _DIM_HEADER.match(text)
            if match:
                return int(match.group(1))
    return None


def _read_svm(path, n_features):
    lines = _data_lines(path)
    if not lines:
        raise FormatError('file is empty', path)
    n_features = n_features or _declared_dim(path)
    try:
        features, labels = load_svmlight_file(path, n_features=n_features, zero_based=False)
    except ValueError as error:
        raise FormatError('{!s}'.format(error), path, _first_bad_svm_line(path, n_features))
    return features.toarray(), np.asarray(labels, dtype=float)


def _first_bad_svm_line(path, n_features):
    """Locate the line the svmlight parser choked on."""
    with open(path) as stream:
        for number, text in enumerate(stream, start=1):
            tokens = text.split('#', 1)[0].split()
            if not tokens:
                continue
            try:
                float(tokens[0])
                for token in tokens[1:]:
                    index, value = token.split(':')
                    float(value)
                    if int(index) < 1 or (n_features and int(index) > n_features):
                        return number
            except ValueError:
                return number
    return None


def generate_batch(n, d, seed, task=Task.CLASSIFICATION, noise=0.1, name=consts.SOURCE_GENERATED):
    """A seeded dataset whose targets follow a hidden linear score.

    Classification labels are the signs of the noisy score; regression targets are the noisy score.
    """
    rng = np.random.default_rng(seed)
    features = rng.standard_normal((n, d))
    direction = rng.standard_normal(d) / np.sqrt(d)
    score = features.dot(direction) + noise * rng.standard_normal(n)
    if task is Task.CLASSIFICATION:
        labels = np.where(score >= 0, 1.0, -1.0)
    else:
        labels = score
    return features, labels, DatasetSpec(name, n, d, d, task, Source.GENERATED)


def _gaussian_matrix(d1, d2, seed):
    return np.random.default_rng(seed).standard_normal((d1, d2))


def synthesize_second_space(features, d2, seed):
    """Map the original features into a second space through a seeded standard Gaussian matrix."""
    features = np.asarray(features, dtype=float)
    if d2 < 1:
        raise InvalidInputError('d2 must be positive, got {!r}'.format(d2))
    return features.dot(_gaussian_matrix(features.shape[1], d2, seed))


def default_schedule(n, d1, d2, source, task, stream_config):
    """Split n rows into two halves and pick the overlap length for the source."""
    if source is Source.TWO_VIEW:
        if task is Task.REGRESSION:
            b = stream_config.overlap_real
        else:
            b = stream_config.overlap_two_view
    elif n <= stream_config.small_rows:
        b = stream_config.overlap_small
    else:
        b = stream_config.overlap_large
    t1 = n // 2
    return StreamSchedule(t1, n - t1, min(b, t1 - 1), d1, d2)


def build_cycle(features_old, features_new, labels, schedule, seed, task=Task.CLASSIFICATION,
                name=''):
    """Shuffle the batch with the seed and lay it out as one cycle.

    Row i of features_old and features_new must describe the same sample.
    """
    features_old = np.asarray(features_old, dtype=float)
    features_new = np.asarray(features_new, dtype=float)
    labels = np.asarray(labels, dtype=float)
    n = features_old.shape[0]
    if features_new.shape[0] != n or labels.shape[0] != n:
        raise InvalidInputError('Old features, new features and labels differ in length')
    if n < schedule.rounds:
        raise InvalidInputError('{:d} rows cannot fill a {:d}-round cycle'.format(
            n, schedule.rounds))
    if features_old.shape[1] != schedule.d1 or features_new.shape[1] != schedule.d2:
        raise InvalidInputError('Feature dimensions do not match the schedule')
    order = np.random.default_rng(seed).permutation(n)[:schedule.rounds]
    instances = []
    for round_index, row in enumerate(order, start=1):
        phase = schedule.phase(round_index)
        x_old = FeatureVector(features_old[row]) if phase is not Phase.NEW_ONLY else None
        x_new = FeatureVector(features_new[row]) if phase is not Phase.OLD_ONLY else None
        instances.append(Instance(round_index, phase, Label(labels[row], task), x_old, x_new))
    stream = CycleStream(schedule, instances, seed, name, task)
    logger.info('Built {!r}'.format(stream))
    return stream


def dump_stream(stream, path):
    """Write a stream in the self-describing text format."""
    Report().write_stream(stream, path)


def load_stream(path):
    """Read a stream written by dump_stream."""
    header, rows = read_sections(path)
    try:
        task = Task(header['task'])
        schedule = StreamSchedule(header['t1'], header['t2'], header['b'], header['d1'],
                                  header['d2'])
        seed = header['seed']
        name = header.get('name') or ''
    except (KeyError, TypeError, ValueError) as error:
        raise FormatError('bad stream header ({!s})'.format(error), path)
    instances = []
    for line, fields in rows:
        try:
            round_index, phase, label, x_old, x_new = fields
            instances.append(Instance(int(round_index), Phase(phase), Label(float(label), task),
                                      _vector(x_old), _vector(x_new)))
        except (ValueError, InvalidInputError) as error:
            raise FormatError('bad stream row ({!s})'.format(error), path, line)
    try:
        return CycleStream(schedule, instances, seed, name, task)
    except InvalidInputError as error:
        raise FormatError('{!s}'.format(error), path)


def _vector(field):
    if field == consts.ABSENT:
        return None
    return FeatureVector([float(value) for value in field.split()])
