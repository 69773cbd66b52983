from time import time
from datetime import datetime
import pytz

from Shimura.config import Verify

timezone = pytz.timezone(Verify.LOG_TIMEZONE)
now = datetime.now(timezone)
StartTime = time()

__version__ = "1.0.0"
