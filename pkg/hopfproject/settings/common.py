# Settings for the Hopf Galois structure toolkit
import json
import os
from pathlib import Path

# Utilities
PROJECT_PACKAGE = Path(__file__).resolve().parent.parent

# The full path to the repository root.
BASE_DIR = PROJECT_PACKAGE.parent

data_dir_key = "HOPFPROJECT_DATA_DIR"
DATA_DIR = (
    Path(os.environ[data_dir_key]) if data_dir_key in os.environ else BASE_DIR.parent
)

try:
    with DATA_DIR.joinpath("conf", "local.json").open() as handle:
        LOCAL_CONF = json.load(handle)
except OSError:
    LOCAL_CONF = {
        "secret_key": "a",
    }


# Django settings

INSTALLED_APPS = [
    "fpcore",
    "nilalg",
    "affine",
    "formclass",
    "chain",
    "oracle",
    "descent",
]

LANGUAGE_CODE = "en-us"

LOGGING = {
    "version": 1,
    "disable_existing_loggers": True,
    "formatters": {
        "simple": {"format": "[%(name)s] %(levelname)s: %(message)s"},
        "full": {"format": "%(asctime)s [%(name)s] %(levelname)s: %(message)s"},
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        app: {
            "handlers": ["console"],
            "level": LOCAL_CONF.get("log_level", "INFO"),
            "propagate": False,
        }
        for app in INSTALLED_APPS
    },
}

SECRET_KEY = str(LOCAL_CONF.get("secret_key", "a"))

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

# Oracle settings

# Largest group the brute-force oracle may sweep. GL_4(F_3) has ~2.4e7
# elements and GL_3(F_5) ~1.5e6, both inside the default.
HOPF_ORACLE_BUDGET = int(LOCAL_CONF.get("oracle_budget", 3 * 10**7))

# Matrices per vectorised batch; lower it on small machines.
HOPF_ORACLE_BATCH = int(LOCAL_CONF.get("oracle_batch", 2**18))

HOPF_WORKERS = int(LOCAL_CONF.get("workers", 1))

# Seed for every randomised routine (sampled checks, random test inputs).
HOPF_SEED = int(LOCAL_CONF.get("seed", 20161))

# Above this many elements, exhaustive group checks switch to sampling.
HOPF_EXHAUSTIVE_LIMIT = int(LOCAL_CONF.get("exhaustive_limit", 10**6))

HOPF_SAMPLE_SIZE = int(LOCAL_CONF.get("sample_size", 10**4))

# Trial division bound for the prime p.
HOPF_MAX_PRIME = 2**16
