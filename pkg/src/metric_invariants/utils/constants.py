DEFAULT_SEED = 0
DEFAULT_TRIALS = 5
DEFAULT_PRIME_COUNT = 1
DEFAULT_FORMAT = "table"
OUTPUT_FORMATS = ("table", "json", "csv")
DEFAULT_LOGS_PATH = "metric_invariants_logs.txt"
LOGGER_NAME = "metric_invariants"

SEED_LIMIT = 2**64

# Modular certificates draw from the largest primes below these powers of two
PRIME_BIT_SIZES = (62, 61)
PRIMES_PER_BIT_SIZE = 8
PRIME_REDRAW_ATTEMPTS = 5
PARANOID_PRIME_COUNT = 3
PARANOID_EXACT_MAX_N = 3

# Random jet points
ELEMENTARY_ENTRY_RANGE = (-3, 3)
ELEMENTARY_STEPS_PER_DIM = 3
NUMERATOR_RANGE = (-20, 20)
DENOMINATORS = (1, 2, 3)

# Random polynomial vector fields
POLY_COEFF_RANGE = (-5, 5)
POLY_DENOMINATORS = (1, 2)

# Console rendering; fixed so that tables are byte-identical across terminals
CONSOLE_WIDTH = 120

ENV_LOG_LEVEL = "METRIC_INVARIANTS_LOG_LEVEL"
ENV_WORKERS = "METRIC_INVARIANTS_WORKERS"
