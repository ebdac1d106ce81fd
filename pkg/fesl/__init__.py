from .config import Config
from .core import FeatureVector, Instance, Label, LinearModel, Phase, StreamSchedule, Task
from .ensemble import EnsembleState, Mode
from .exceptions import (FeslError, FormatError, InvalidInputError, RunError, SingularSystemError,
                         StateError)
from .harness import MethodKind, RunConfig, RunRecord, Runner, run_many, run_method
from .losses import LossKind
from .ogd import OgdState
from .recovery import MapEstimator
from .report import Report
from .streams import CycleStream, DatasetSpec, Source
