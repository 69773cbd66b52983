from os import getenv, path
from dotenv import load_dotenv

load_dotenv(path.join(path.dirname(path.dirname(__file__)), "config.env"))


def _int_list(raw: str) -> list[int]:
    return [int(item.strip()) for item in raw.split(",") if item.strip()]


class Verify:
    TOLERANCE = float(getenv("TOLERANCE", "1e-10"))
    SEED = int(getenv("SEED", "20"))
    WORKERS = int(getenv("WORKERS", "4"))
    OUTPUT = getenv("OUTPUT", "reports")

    # counting primes and the p = 1 mod 20 primes used for chart reductions
    PRIMES = _int_list(getenv("PRIMES") or "7,11,13,17,19,23,29,31,37")
    MODULAR_PRIMES = _int_list(getenv("MODULAR_PRIMES") or "41,61,101")

    STEP_BUDGET = int(getenv("STEP_BUDGET", "200000"))
    TWIST_BOUND = int(getenv("TWIST_BOUND", "6"))
    SCAN_BUDGET = int(getenv("SCAN_BUDGET", str(10**7)))

    LOG_TIMEZONE = getenv("LOG_TIMEZONE", "UTC")
    LOG_LEVEL = getenv("LOG_LEVEL", "INFO")
    LOG_FILE = getenv("LOG_FILE", "log.txt")
