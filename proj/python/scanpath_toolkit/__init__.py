"""Scanpath comparison, calibrated scoring and active-vision rollouts.

Everything lives in the compiled extension; this package re-exports it under
a stable name.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
