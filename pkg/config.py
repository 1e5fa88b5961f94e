import os

# --- App Metadata ---
APP_NAME = "Curve Sampler"
PLAN_VERSION = 1
LOG_LEVEL = os.environ.get("CURVESAMPLER_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# --- Polynomial Tolerances ---
TRIM_TOLERANCE = 1e-300
VANISHING_SPEED_RATIO = 1e-9
ROOT_ON_INTERVAL_TOLERANCE = 1e-12
ROOT_RESIDUAL_FACTOR = 1e-8
REAL_ROOT_SLACK = 1e-6
# Aberth returns a k-fold root as a ring of radius about tol^(1/k)
ROOT_CLUSTER_RADIUS = 1e-2
CLUSTER_NEWTON_STEPS = 8

# --- Root Finder (Aberth-Ehrlich) ---
ABERTH_MAX_ITER = 200
ABERTH_TOL = 1e-10

# --- Bernstein Ellipse Scan ---
ELLIPSE_GRID = 2048
ELLIPSE_XTOL = 1e-10
ELLIPSE_ROOT_FLOOR = 1e-14
# rho used for M sits this fraction of (rho* - 1) inside the critical ellipse
ELLIPSE_MARGIN = 1e-3

# --- Degree Selection ---
K_MIN = 8
MAX_DOUBLINGS = 6
POSITIVITY_TOLERANCE = 1e-9
MONOTONE_TOLERANCE = 1e-10
SUP_OVERSAMPLING = 8
CHECK_GRID_FACTOR = 10
SPLIT_DEDUP_TOLERANCE = 1e-9
PLAN_TOLERANCE = 1e-10

# --- Validation ---
DEFAULT_BINS = 256
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 400
REFERENCE_PANELS = 1024
GAUSS_POINTS = 10

# --- CLI Defaults ---
COMMANDS = ["preprocess", "sample", "validate", "bench", "experiment"]
OUTPUT_FORMATS = ["csv", "jsonl"]
EXPERIMENT_MODES = ["table1", "split", "degree"]
BOUND_MODES = ["search", "bernstein"]
DEFAULT_ELL = 4
DEFAULT_COUNT = 300
DEFAULT_SEED = 42
ELL_RANGE = (1, 40)
MAX_COUNT = 10**9
SHARD_SIZE = 65536
# shards in flight per worker when sampling in parallel
SHARDS_PER_WORKER = 2
FLOAT_FORMAT = "%.17g"

# --- Experiment Grids ---
TABLE1_DEGREES = [5, 10, 15, 20]
TABLE1_DIMENSIONS = [20]
TABLE1_EPSILONS = [0.1, 0.01]
SPLIT_ELLS = [2, 4, 6, 8, 10, 12]
SPLIT_DEGREE = 10
SPLIT_DIMENSION = 50
DEGREE_RANGE = (2, 40)
EXPERIMENT_TRIALS = 10
EXPERIMENT_SAMPLES = 1000
BENCH_REPEATS = 5
