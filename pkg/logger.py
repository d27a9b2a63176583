import logging

from config import LOG_FILE, LOG_LEVEL, malformed_settings

logging.basicConfig(
    filename=LOG_FILE or None,
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)

for _key, _raw in malformed_settings():
    logging.getLogger("afinv.config").warning(
        "ignoring malformed %s=%r, using default", _key, _raw
    )


def get_logger(name):
    return logging.getLogger(f"afinv.{name}")


def log_event(message):
    logging.getLogger("afinv").info(message)
