DEFAULT_LOGGING_LEVEL = "WARNING"

# Environment variable overriding the catalog location.
CATALOG_DIRECTORY_ENV = "DONALDSON_CATALOG_DIR"
DEFAULT_CATALOG_DIRECTORY = "~/.donaldson_catalog"

DEFAULT_EXPAND_ORDER = 6
MAX_EXPAND_ORDER = 12

# Highest (x^2-4)^n insertion tried before giving up on finite type.
MAX_FINITE_TYPE_ORDER = 4

N_RSHIFT_SAMPLES = 100
RSHIFT_SEED = 1998
RSHIFT_DENOMINATOR_RANGE = [1, 12]
RSHIFT_NUMERATOR_RANGE = [-40, 40]

STANDARD_CATALOG = ["K3", "elliptic:3", "elliptic:4",
                    "bg:2", "bg:3", "bg:4", "bg:5", "bg:6",
                    "dia2:1:2", "dia2:1:3", "dia2:2:3",
                    "cg:2", "cg:3", "cg:4", "cg:5"]
