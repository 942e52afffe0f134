from .common import *  # noqa

DEBUG = True

for logger in LOGGING["loggers"].values():
    logger["level"] = LOCAL_CONF.get("log_level", "DEBUG")

# Keep the test suite inside a single process unless asked otherwise.
HOPF_WORKERS = int(os.environ.get("HOPF_WORKERS", HOPF_WORKERS))
