"""Exception taxonomy shared across the package.

Three failure classes matter to callers: bad configuration, physically
impossible or out-of-domain requests, and iterative procedures that fail
to converge. The command line maps them to exit codes 2, 3 and 4.
"""


class ConfigError(ValueError):
    """Malformed or inconsistent user configuration."""


class PhysicsError(ValueError):
    """Request is outside the physical or model domain."""


class DispersionRangeError(PhysicsError):
    """Wavelength outside the declared validity range of a Sellmeier fit."""


class DispersionModelError(PhysicsError):
    """Sellmeier evaluation produced an unphysical index (for example past the UV pole)."""


class NoPhaseMatchError(PhysicsError):
    """No phase-matching solution exists for the requested geometry."""


class ConvergenceError(RuntimeError):
    """An iterative solver or fit ran out of iterations or usable data."""
