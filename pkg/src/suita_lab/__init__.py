"""
Numerical toolkit for the invariant ``F(z) = K(z) * vol(I(z))``.

``K`` is the Bergman kernel on the diagonal and ``I(z)`` the indicatrix of
an invariant metric.  The package covers balls, egg domains
``{|z1|^2 + |z2|^(2 mu) < 1}``, the Siegel domain and images of these under
explicit biholomorphisms, together with the scaling construction at a
strongly pseudoconvex boundary point.
"""

__version__ = "0.1.0"

from .bergman import *  # noqa: E402,F401,F403
from .domains import *  # noqa: E402,F401,F403
from .errors import *  # noqa: E402,F401,F403
from .indicatrix import *  # noqa: E402,F401,F403
from .metrics import *  # noqa: E402,F401,F403
from .scaling import *  # noqa: E402,F401,F403
from .suita import *  # noqa: E402,F401,F403
from .transforms import *  # noqa: E402,F401,F403
