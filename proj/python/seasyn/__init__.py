"""Mixed H2/H-infinity impedance control toolkit for a cable-driven SEA."""

from seasyn._core import *  # noqa: F401,F403
from seasyn._core import __doc__  # noqa: F401
