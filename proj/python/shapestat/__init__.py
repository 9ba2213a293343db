"""Statistics on Kendall's shape spaces.

Thin wrapper around the C++ core: pre-shape construction, Procrustes
alignment, intrinsic / Ziezold / full Procrustes / Schoenberg means,
tangent-space coordinates and the two-sample Hotelling test.
"""

from ._shapestat import *  # noqa: F401,F403
from ._shapestat import __version__  # noqa: F401
