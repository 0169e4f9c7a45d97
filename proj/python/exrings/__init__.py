"""Exciton diffusion on stacked-ring and helical chromophore arrays."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
