"""Arithmetic phase toolkit.

Exact arithmetic sums (arith), phase operators on finite index windows
(phase), arithmetic signal spectra (signals), continued-fraction and
scattering geometry (hyperbolic), and a CSV command line (cli).  The
public names of every submodule are re-exported here.
"""

from .arith import *  # noqa: F401,F403
from .hyperbolic import *  # noqa: F401,F403
from .phase import *  # noqa: F401,F403
from .signals import *  # noqa: F401,F403
from . import arith, cli, hyperbolic, phase, signals  # noqa: F401

__version__ = "0.1.0"
