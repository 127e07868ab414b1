FORMAT_VERSION = 1

# Literal used for the bottom element of ExtPair in serialized files
BOTTOM_LITERAL = "-inf"

# Engine
DEFAULT_MAX_STEPS = 10_000
MIN_DIVISORS = 2

# Chart oracle
DEFAULT_MAX_LEAVES = 2 ** 14

# Environment variables
ENV_MAX_LEAVES = "PRINCIPALIZE_MAX_LEAVES"
ENV_MAX_STEPS = "PRINCIPALIZE_MAX_STEPS"
ENV_LOG_LEVEL = "PRINCIPALIZE_LOG_LEVEL"

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_ENGINE_ERROR = 3
EXIT_VERIFICATION_ERROR = 4

NERVE_FULL = "full"
