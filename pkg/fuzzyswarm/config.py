import os

# Output directory for artifacts (partition, labels, model, reports)
OUTPUT_DIR = os.getenv("FTS_OUTPUT_DIR", "output")
SEED_ENV_VAR = "FTS_SEED"
DEFAULT_SEED = 0

# PSO defaults (enrollment experiment)
INERTIA = 1.4
C1 = 2.0
C2 = 2.0
V_MAX = 0.01
POS_MIN = 0.0
POS_MAX = 1.0
N_PARTICLES = 5
MAX_ITERATIONS = 500
TARGET_SE = 3.0
RESTARTS = 10

# Initial weight ladder: w_i = max(LADDER_START - LADDER_STEP * (i - 1), LADDER_FLOOR)
LADDER_START = 0.75
LADDER_STEP = 0.25
LADDER_FLOOR = 0.05

# Artifact file names
MODEL_FILE = "model.yaml"
PARTITION_FILE = "partition.csv"
FUZZIFIED_FILE = "fuzzified.csv"
REPORT_TEXT_FILE = "report.txt"
REPORT_CSV_FILE = "report.csv"
COMPARISON_FILE = "comparison.csv"
COMPARISON_TEXT_FILE = "comparison.txt"
GROUPS_FILE = "groups.txt"
DISAMBIGUATED_FILE = "groups_disambiguated.txt"
RULES_FILE = "rules.txt"
TRAINED_RULES_FILE = "rules_trained.txt"

MODEL_FORMAT = "fuzzyswarm-model"
MODEL_VERSION = 1
