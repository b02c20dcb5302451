"""Phase-covariant qubit dynamical maps: channels, trajectories, mixtures."""

from phasecov._core import *  # noqa: F401,F403
from phasecov._core import __doc__, __version__  # noqa: F401
