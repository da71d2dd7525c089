"""Formula-to-formula transformations."""

from .guards import *  # noqa: F401,F403
from .factors import *  # noqa: F401,F403
from .pipeline import *  # noqa: F401,F403
from .delay import *  # noqa: F401,F403
from .reductions import *  # noqa: F401,F403
