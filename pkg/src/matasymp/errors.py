"""Exception types raised by matasymp.

Every error derives from :class:`MatasympError`, so callers (the CLI in
particular) can catch the whole family and report ``type(err).__name__``.
"""


class MatasympError(Exception):
    """Base class for precondition violations and numerical failures."""


class NearDefective(MatasympError):
    """Eigenvector matrix too ill-conditioned for a diagonalization route."""


class SingularResolvent(MatasympError):
    """A sampled resolvent point coincides with an eigenvalue."""


class BranchCut(MatasympError):
    """An eigenvalue lies on the closed negative real axis."""


class NotSectorial(MatasympError):
    """Spectrum or Hermitian part violates the sector / positivity requirement."""


class InsufficientSeries(MatasympError):
    """Too few input coefficients for the requested number of terms."""


class OracleFailure(MatasympError):
    """The reference evaluator failed or returned a non-finite value."""


class SpectrumNotRight(MatasympError):
    """Some eigenvalue has non-positive real part."""


class NotConvergent(MatasympError):
    """An integral representation does not converge for this matrix."""


class SingularShift(MatasympError):
    """A + kI is singular for some shift needed by the reciprocal gamma."""


class SectorViolation(MatasympError):
    """Argument or spectrum outside the admissible sector."""


class NotHermitianPD(MatasympError):
    """Matrix is not Hermitian positive definite."""


class MuTooSmall(MatasympError):
    """mu(A) <= -1/2, so the Bessel integral diverges."""


class NoConvergence(MatasympError):
    """A power series failed to converge within the term budget."""


class ContourPole(MatasympError):
    """The Mellin-Barnes contour passes through a pole."""


class NoDecay(MatasympError):
    """The Mellin-Barnes integrand does not decay along the contour."""


class GenerationFailed(MatasympError):
    """A matrix family could not produce a member satisfying its invariants."""
