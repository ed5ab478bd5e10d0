import logging
import os
import sys
import time
from functools import wraps
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_debug_override = False


def debug_enabled() -> bool:
    return _debug_override or os.environ.get('BOOLSYNTH_DEBUG', '0') == '1'


def get_logger(name):
    logger = logging.getLogger(name)
    level = logging.DEBUG if debug_enabled() else logging.INFO
    logger.setLevel(level)

    if not logger.handlers:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(logging.DEBUG)
        formatter = logging.Formatter(LOG_FORMAT)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)
        logger.propagate = False
    return logger


def set_log_level(level: int) -> None:
    """Apply ``level`` to every boolsynth logger created so far."""
    global _debug_override
    _debug_override = level <= logging.DEBUG
    for name in list(logging.root.manager.loggerDict):
        if name == 'boolsynth' or name.startswith('boolsynth.'):
            logging.getLogger(name).setLevel(level)


logger = get_logger('boolsynth.utils')


def load_env_config(env_file: Optional[Path] = None) -> bool:
    """Load BOOLSYNTH_* variables from ``.env.local`` without overriding the environment."""
    env_file = env_file or Path.cwd() / '.env.local'
    if env_file.exists():
        load_dotenv(env_file, override=False)
        logger.debug(f'Configuration loaded from {env_file}')
        return True
    return False


class run_timer:
    """ Wall-clock timer for decision procedures.

        Supports both context manager and decorator usage. Timing is only
        recorded in debug mode (``BOOLSYNTH_DEBUG=1`` or ``--verbose``).

        Example as context manager:
        ```python
        with run_timer('decide_solvable'):
            decide_solvable(ts, tau)
        ```

        Example as decorator:
        ```python
        @run_timer('build_gadget')
        def build(...):
            pass
        ```
    """

    def __init__(self, name=None):
        self.name = name
        self.elapsed = None

    def __enter__(self):
        if debug_enabled():
            self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_value, exc_tb):
        if debug_enabled():
            self.elapsed = (time.perf_counter() - self.start) * 1000.0
            if self.name is not None:
                logger.info(f'{self.name} takes {self.elapsed:.1f} ms')

    def __call__(self, func):

        @wraps(func)
        def wrapper(*args, **kwargs):
            with self:
                return func(*args, **kwargs)

        return wrapper
