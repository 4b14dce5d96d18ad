"""Base-station placement games with SINR-driven mobile association on a line."""

from .assoc_single import *  # noqa: F401,F403
from .assoc_two_freq import *  # noqa: F401,F403
from .errors import DegenerateInput, NumericalFailure, QuadratureError
from .fluid_oracle import *  # noqa: F401,F403
from .geometry2d import *  # noqa: F401,F403
from .hierarchical import *  # noqa: F401,F403
from .pathloss import *  # noqa: F401,F403
from .sic import *  # noqa: F401,F403

from . import assoc_single, assoc_two_freq, fluid_oracle, geometry2d, hierarchical, pathloss, sic

__all__ = (
    ["DegenerateInput", "NumericalFailure", "QuadratureError"]
    + pathloss.__all__ + assoc_single.__all__ + assoc_two_freq.__all__ + sic.__all__
    + hierarchical.__all__ + fluid_oracle.__all__ + geometry2d.__all__
)
__version__ = "0.1.0"
