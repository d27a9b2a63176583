import os

# Try to load .env file if python-dotenv is available
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # python-dotenv not installed, use environment variables only

_MALFORMED = []


def _int_setting(key, default):
    raw = os.getenv(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        _MALFORMED.append((key, raw))
        return default
    if value < 1:
        _MALFORMED.append((key, raw))
        return default
    return value


MAX_STEPS = _int_setting("AFINV_MAX_STEPS", 100)
CERT_BOUND = _int_setting("AFINV_CERT_BOUND", 50)
TRIAL_DIVISION_LIMIT = _int_setting("AFINV_TRIAL_DIVISION_LIMIT", 10**6)
BRATTELI_DEPTH = _int_setting("AFINV_BRATTELI_DEPTH", 10)

LOG_FILE = os.getenv("AFINV_LOG_FILE", "afinv.log")
LOG_LEVEL = os.getenv("AFINV_LOG_LEVEL", "INFO").upper()


def malformed_settings():
    """Environment values that were ignored in favour of defaults"""
    return list(_MALFORMED)
