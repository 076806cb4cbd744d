"""
Configuration settings for the Domination Turing Kernelizer.
"""
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _as_bool(value):
    return str(value).strip().lower() in ("1", "true", "yes", "on")


# Logging Configuration
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_TO_FILE = _as_bool(os.getenv("LOG_TO_FILE", "false"))
LOG_DIR = os.getenv("LOG_DIR", "logs")

# Exact Solver Budgets (vertices for graph problems, universe size for HS,
# non-terminals for NST)
EXACT_BUDGET_DS = int(os.getenv("EXACT_BUDGET_DS", "26"))
EXACT_BUDGET_CDS = int(os.getenv("EXACT_BUDGET_CDS", "26"))
EXACT_BUDGET_IDS = int(os.getenv("EXACT_BUDGET_IDS", "20"))
EXACT_BUDGET_CAPDS = int(os.getenv("EXACT_BUDGET_CAPDS", "20"))
EXACT_BUDGET_HS = int(os.getenv("EXACT_BUDGET_HS", "20"))
EXACT_BUDGET_NST = int(os.getenv("EXACT_BUDGET_NST", "16"))

# Overrides every per-kind budget when set
EXACT_SOLVER_BUDGET = os.getenv("EXACT_SOLVER_BUDGET")

# Application Configuration
DEFAULT_EPSILON = os.getenv("DEFAULT_EPSILON", "1")
PARALLEL_WORKERS = int(os.getenv("PARALLEL_WORKERS", "4"))
DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "0"))
