"""Spreading-group cascade simulation and message-log analytics."""

from ._cascadelab import *  # noqa: F401,F403
from ._cascadelab import __version__  # noqa: F401
