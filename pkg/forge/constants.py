"""Constants

Limits, tolerances and exit codes shared across the forge modules.
"""

# Coordinate tuples use 0 for the alpha entry; real coordinates run over 1..q.
ALPHA = 0
ALPHA_TEXT = "α"
ALPHA_ALIASES = frozenset({"α", "a", "alpha", "*"})

# Exact solvers
CHROMATIC_VERTEX_LIMIT = 40
ISOMORPHISM_VERTEX_LIMIT = 64

# Construction guards
BOOKPILE_VERTEX_CAP = 10**6

# Homomorphism densities
DENSITY_MAP_CAP = 10**8
EXHAUSTIVE_MAP_CAP = 10**7
MAX_DENSITY_EDGES = 60

# Tolerances
JENSEN_TOLERANCE = 1e-12
WITNESS_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-12
MIN_SEARCH_STEP = 1e-12
ARMIJO_FRACTION = 1e-4

# Exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3
