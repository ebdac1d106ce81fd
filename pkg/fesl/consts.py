"""Constants used throughout the library and the harness."""
import math

# Environmental variables
ENV_VAR_APP = 'FESL_ENV'

# Environments
ENV_DEV = 'development'
ENV_TEST = 'testing'

# Paths
PATH_CONFIG = 'config'
PATH_TEMPLATES = 'templates'

# Output file names
FILE_RECORD_SUFFIX = '.record'
FILE_TABLE = 'table.txt'
FILE_TREND = 'trend.csv'

# Separates the YAML header from the row section of every text artifact
HEADER_SEPARATOR = '---'
ABSENT = '-'

# Tasks
TASK_CLASSIFICATION = 'classification'
TASK_REGRESSION = 'regression'

# Stream phases
PHASE_OLD_ONLY = 'old'
PHASE_OVERLAP = 'overlap'
PHASE_NEW_ONLY = 'new'

# Dataset sources
SOURCE_SYNTHETIC = 'synthetic'
SOURCE_TWO_VIEW = 'two_view'
SOURCE_GENERATED = 'generated'

# Input formats
FORMAT_CSV = 'csv'
FORMAT_SVM = 'svm'

# Losses
LOSS_LOGISTIC = 'logistic'
LOSS_SQUARE = 'square'
LN2 = math.log(2.0)

# Methods
METHOD_NOGD = 'nogd'
METHOD_ROGD_U = 'rogdu'
METHOD_ROGD_F = 'rogdf'
METHOD_FESL_C = 'feslc'
METHOD_FESL_S = 'fesls'

# Ensemble modes
MODE_COMBINE = 'combine'
MODE_SELECT = 'select'

# Defaults
DEFAULT_STEP_SCALE = 1.0
DEFAULT_RADIUS = 100.0
DEFAULT_INIT_SCALE = 0.01
DEFAULT_RIDGE = 1e-3
DEFAULT_SEEDS = 10
MAX_DESK_DIM = 512

# Bound checks
THEOREM1_TOLERANCE = 1e-9
THEOREM2_SLACK_PER_ROUND = 0.05

# Exit codes
EXIT_OK = 0
EXIT_BOUND_VIOLATION = 1
EXIT_INPUT_ERROR = 2
