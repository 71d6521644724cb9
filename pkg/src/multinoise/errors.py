"""Exception hierarchy shared across the package."""


class MultinoiseError(Exception):
    """Base class for all package-specific errors."""


class ZeroGamma(MultinoiseError):
    """A noise channel was given a vanishing coupling constant."""


class IllConditionedBasis(MultinoiseError):
    """Sector basis is numerically linearly dependent."""


class CapacityExceeded(MultinoiseError):
    """A creation operator would push a vector past the particle cap."""


class NotInSpan(MultinoiseError):
    """A smearing function is not representable in the sector basis."""


class SectorMismatch(MultinoiseError):
    """Two Fock vectors belong to different sectors."""


class QuadratureFailure(MultinoiseError):
    """An adaptive quadrature did not reach the requested tolerance."""


class ImaginaryResidue(MultinoiseError):
    """A value that must be real carries too large an imaginary part."""


class SlowDecay(MultinoiseError):
    """The oscillatory integrand does not decay below the truncation bound."""


class DegenerateRoot(MultinoiseError):
    """The dispersion has a near-critical root on the energy shell."""


class BelowFloor(MultinoiseError):
    """Errors sit at the quadrature noise floor; no rate can be fitted."""


class SupportConditionFailed(MultinoiseError):
    """A stationary point of the dispersion lies inside the form-factor support."""


class ConfigError(MultinoiseError):
    """A study configuration file is missing fields or inconsistent."""


class OracleMismatch(MultinoiseError):
    """Two independent computation routes disagree beyond tolerance."""
