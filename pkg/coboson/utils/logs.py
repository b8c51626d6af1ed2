"""
Logging setup shared by the CLI and the API server
"""
import logging
import sys
from typing import Optional

from config import settings


LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """Install one stderr handler on the root logger; stdout stays free for CSV"""
    name = (level or settings.LOG_LEVEL).upper()
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_coboson", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler._coboson = True
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(getattr(logging, name, logging.INFO))
