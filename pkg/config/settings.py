"""
Application configuration settings.

The command line is flags-only, so every default lives here as a plain
constant and is overridden through RunConfig.
"""

# Logging
LOG_LEVEL = "INFO"

# Budgets
DEFAULT_MAX_AMBIENT_POINTS = 2_000_000
DEFAULT_MAX_EVALUATIONS = 1_000_000
# Pairwise sums X, Y in E for the Omega kernel algorithm; verify needs q^(2d) of them per cell
DEFAULT_MAX_PAIR_EVALUATIONS = 300_000_000

# The O(q^(2d)) direct transform is only allowed on small grids
DIRECT_TRANSFORM_LIMIT = 3**5

# Exhaustive search switches over to randomized search above 2**20 patterns
EXHAUSTIVE_PATTERN_LIMIT = 20

# Candidate direction sets for the brute-force affine maximality search
SUBSPACE_CANDIDATE_LIMIT = 10**7

# Isotropic vector search: random draws before the deterministic sweep
SEARCH_RETRY_BUDGET = 4096

# Seeds and trial counts
DEFAULT_SEED = 0
DEFAULT_TRIALS = 100
DEFAULT_SPARSE_EXTRA_POINTS = 200

# Power iteration
POWER_ITERATIONS = 50

# Tolerances (absolute unless the name says relative)
TOL_CHARACTER_SUM = 1e-12
TOL_GAUSS = 1e-9
TOL_PLANCHEREL_REL = 1e-8
TOL_INVERSION = 1e-9
TOL_S_HAT = 1e-8
TOL_S_HOMOGENEOUS = 1e-10
TOL_S_LP_REL = 1e-9
TOL_HOM_FOURIER = 1e-6
TOL_TRANSFER_REL = 1e-8
TOL_OMEGA_REL = 1e-7
TOL_OMEGA_BOUND = 1e-9
TOL_EXTREMIZER_REL = 1e-8
TOL_OPERATOR_NORM_REL = 1e-6
TOL_NORMALIZATION = 1e-9

DEFAULT_TOLERANCES: dict[str, float] = {
    "character_sum": TOL_CHARACTER_SUM,
    "gauss": TOL_GAUSS,
    "plancherel": TOL_PLANCHEREL_REL,
    "inversion": TOL_INVERSION,
    "s_hat": TOL_S_HAT,
    "s_homogeneous": TOL_S_HOMOGENEOUS,
    "s_lp": TOL_S_LP_REL,
    "hom_fourier": TOL_HOM_FOURIER,
    "transfer": TOL_TRANSFER_REL,
    "omega": TOL_OMEGA_REL,
    "omega_bound": TOL_OMEGA_BOUND,
    "extremizer": TOL_EXTREMIZER_REL,
    "operator_norm": TOL_OPERATOR_NORM_REL,
}
