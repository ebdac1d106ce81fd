import os
from collections import namedtuple
from configparser import ConfigParser

import yaml

from . import consts


class Config:
    """Extract the config from the provided config file path."""

    LearnerConfig = namedtuple('LearnerConfig', 'step_scale radius init_scale')
    RecoveryConfig = namedtuple('RecoveryConfig', 'ridge')
    EnsembleConfig = namedtuple('EnsembleConfig', 'clip_losses delta')
    StreamConfig = namedtuple('StreamConfig', '''overlap_small,
                                                 overlap_large,
                                                 overlap_two_view,
                                                 overlap_real,
                                                 small_rows,
                                                 max_dim''')
    HarnessConfig = namedtuple('HarnessConfig', 'seeds workers step_sizes')

    def __init__(self, config_file_path):
        """Init the class with the path of the config file and use the standard configparser."""
        config = ConfigParser()
        if not config.read(config_file_path):
            raise ValueError('Config file not found: {!r}'.format(config_file_path))

        self._root = os.path.dirname(os.path.dirname(os.path.realpath(config_file_path)))
        self._learner = self._learner_config(config, 'Learner')
        self._recovery = self._recovery_config(config, 'Recovery')
        self._ensemble = self._ensemble_config(config, 'Ensemble')
        self._stream = self._stream_config(config, 'Stream')
        self._harness = self._harness_config(config, 'Harness')
        self._step_sizes = None

    @classmethod
    def for_env(cls, env, root=None):
        """Load config/<env>.cfg relative to root (the repository root by default)."""
        if env not in (consts.ENV_DEV, consts.ENV_TEST):
            raise ValueError('Unrecognised environment: {!r}'.format(env))
        root = root or os.path.dirname(os.path.dirname(os.path.realpath(__file__)))
        return cls(os.path.join(root, consts.PATH_CONFIG, '{!s}.cfg'.format(env)))

    @property
    def learner(self):
        return self._learner

    @property
    def recovery(self):
        return self._recovery

    @property
    def ensemble(self):
        return self._ensemble

    @property
    def stream(self):
        return self._stream

    @property
    def harness(self):
        return self._harness

    def step_scale_for(self, dataset):
        """The preset step-size constant c for a dataset, or the [Learner] default."""
        if self._step_sizes is None:
            self._step_sizes = self._load_step_sizes()
        return float(self._step_sizes.get(dataset, self._learner.step_scale))

    def _load_step_sizes(self):
        """Flatten the preset table {group: {c: [datasets]}} into {dataset: c}."""
        path = self._harness.step_sizes
        if not path:
            return {}
        if not os.path.isabs(path):
            path = os.path.join(self._root, path)
        with open(path) as stream:
            table = yaml.safe_load(stream) or {}
        presets = {}
        for group in table.values():
            for step_scale, datasets in group.items():
                for dataset in datasets:
                    presets[dataset] = step_scale
        return presets

    def _learner_config(self, config, section):
        """Extract the config for the online gradient descent learners."""
        return self.LearnerConfig(
            config.getfloat(section, 'step_scale', fallback=consts.DEFAULT_STEP_SCALE),
            config.getfloat(section, 'radius', fallback=consts.DEFAULT_RADIUS),
            config.getfloat(section, 'init_scale', fallback=consts.DEFAULT_INIT_SCALE),
        )

    def _recovery_config(self, config, section):
        """Extract the config for the feature-space map."""
        return self.RecoveryConfig(
            config.getfloat(section, 'ridge', fallback=consts.DEFAULT_RIDGE),
        )

    def _ensemble_config(self, config, section):
        """Extract the config for the two ensembling strategies."""
        delta = config.get(section, 'delta', fallback='').strip()
        return self.EnsembleConfig(
            config.getboolean(section, 'clip_losses', fallback=True),
            float(delta) if delta else None,
        )

    def _stream_config(self, config, section):
        """Extract the config for building evolvable streams."""
        return self.StreamConfig(
            config.getint(section, 'overlap_small', fallback=5),
            config.getint(section, 'overlap_large', fallback=10),
            config.getint(section, 'overlap_two_view', fallback=50),
            config.getint(section, 'overlap_real', fallback=40),
            config.getint(section, 'small_rows', fallback=1000),
            config.getint(section, 'max_dim', fallback=consts.MAX_DESK_DIM),
        )

    def _harness_config(self, config, section):
        """Extract the config for running experiments."""
        return self.HarnessConfig(
            config.getint(section, 'seeds', fallback=consts.DEFAULT_SEEDS),
            config.getint(section, 'workers', fallback=1),
            config.get(section, 'step_sizes', fallback=''),
        )
