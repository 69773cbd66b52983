from datetime import datetime
from logging import ERROR, FileHandler, Formatter, StreamHandler, basicConfig, getLevelName, getLogger

import pytz

from Shimura.config import Verify

TZ = pytz.timezone(Verify.LOG_TIMEZONE)
LOG_FORMAT = "[%(asctime)s] [%(levelname)s] - %(message)s"
DATE_FORMAT = "%d-%b-%y %I:%M:%S %p"


class TZFormatter(Formatter):
    """Stamps records in LOG_TIMEZONE instead of the host clock's zone."""

    def formatTime(self, record, datefmt=None):
        stamp = datetime.fromtimestamp(record.created, TZ)
        return stamp.strftime(datefmt or DATE_FORMAT)


formatter = TZFormatter(LOG_FORMAT, DATE_FORMAT)
handlers = [StreamHandler()]
if Verify.LOG_FILE:
    handlers.append(FileHandler(Verify.LOG_FILE))
for handler in handlers:
    handler.setFormatter(formatter)

level = getLevelName(Verify.LOG_LEVEL.upper())
basicConfig(handlers=handlers, level=level)

# sympy's solver and the event loop chatter at INFO
for noisy in ("sympy", "asyncio", "concurrent.futures"):
    getLogger(noisy).setLevel(ERROR)

LOGGER = getLogger(__name__)
LOGGER.setLevel(level)

LOGGER.debug(f"Logger initialized at {Verify.LOG_LEVEL} in the {Verify.LOG_TIMEZONE} timezone.")
