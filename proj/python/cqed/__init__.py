"""Circuit QED simulations: transmons, dispersive theory, Lindblad dynamics,
dispersive readout, phase-space tools, gates and bosonic codes.

The heavy lifting lives in the `_cqed` extension; this package re-exports its
surface. Frequencies and rates are angular (rad/s) unless a name says Hz;
energies such as EJ and EC are E/h in Hz.
"""

from _cqed import *  # noqa: F401,F403
from _cqed import __version__  # noqa: F401
