# /usr/bin/env python3
# Constants for the Connectivity Space Engine
# Centralized configuration for size guards, exit codes, and file grammar keywords

# Carrier and materialization guards
MAX_POINTS = 64  # one machine word per subset
MATERIALIZE_LIMIT = 16  # explicit kappa only at or below this many points
ORACLE_IRREDUCIBLE_LIMIT = 10
CLARITY_LIMIT = 20  # is_clear quantifies over 2^n subsets
CANONICAL_REP_LIMIT = 20
STRUCTURE_ENUMERATION_LIMIT = 4
POWER_SPACE_LIMIT = 4  # P*(X) has 2^n - 1 points
UNION_MAP_LIMIT = 2  # P*(P*(X)) must still fit MAX_POINTS
MORPHISM_ENUMERATION_BUDGET = 10**6
GROUP_ORDER_LIMIT = 10**5

# CLI exit codes
EXIT_SUCCESS = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_SIZE_GUARD = 3
EXIT_ORACLE_MISMATCH = 4

# Functorial structure tags accepted by --gamma0/--gamma1
GAMMA_CHOICES = {
    "d": {
        "key": "DESINTEGRATED",
        "display": "kappa_D (only the empty set is connected)",
    },
    "k": {
        "key": "IDENTITY",
        "display": "kappa (the structure of the space itself)",
    },
    "g": {
        "key": "COARSE",
        "display": "kappa_G (every subset is connected)",
    },
}

# Document grammar keywords
BLOCK_KEYWORDS = ("space", "topology", "device", "map", "representation", "foliation", "group")
BOOLEAN_WORDS = {"true": True, "false": False}
COMMENT_CHAR = "#"
PAIR_SEPARATOR = "|"
ARROW = "->"

# Configuration defaults (overridable through .env)
DEFAULT_CACHE_DIR = ".cache/connectivity"
ENV_CACHE_DIR = "CONNECTIVITY_CACHE_DIR"
ENV_USE_CACHE = "CONNECTIVITY_USE_CACHE"
