"""Hybrid analog/digital beamforming with low-resolution phase shifters."""

from ._hybeam import *  # noqa: F401,F403
from ._hybeam import __version__  # noqa: F401
