"""Exception hierarchy for the holmc package.

Every failure mode named in a module contract maps to exactly one class here,
so callers (and the CLI exit-code logic) can branch on type alone.
"""
from __future__ import annotations


class HolmcError(Exception):
    """Base class for all package-specific failures."""


# numerics

class NotFactorizable(HolmcError):
    """Cholesky failed even at the largest allowed jitter; covariance is broken."""


class NotPSD(HolmcError):
    """Matrix has an eigenvalue below the tolerated negative band."""


class Overflow(HolmcError):
    """Matrix exponential input or output exceeds representable range."""


class NotContractive(HolmcError):
    """Spectral radius >= 1; the discrete Lyapunov fixed point does not exist."""


# certificate

class InvalidOrder(HolmcError):
    """Chain order P below 3 is not defined for this family of schemes."""


class DegenerateSpectrum(HolmcError):
    """Eigenvector basis ill-conditioned and the Jordan fallback failed too."""


class FrictionTooSmall(HolmcError):
    """Supplied friction is below the certified threshold gamma_0."""


# potentials

class EmptyDataset(HolmcError):
    """A data-backed potential needs at least one observation."""


class DegreeUnsupported(HolmcError):
    """Taylor surrogate degree outside the implemented range."""


class UnsupportedPotential(HolmcError):
    """Operation requires a potential family this instance does not belong to."""


# kernel engines

class QuadratureNotConverged(HolmcError):
    """Stage integration failed its step-halving accuracy gate."""


# sampler

class MinimizerNotConverged(HolmcError):
    """Damped Newton failed to push the gradient norm below tolerance."""


# diagnostics

class SingularPrior(HolmcError):
    """Prior covariance is singular; the ridge posterior is undefined."""


class NonPositiveError(HolmcError):
    """Quantity that must be strictly positive (variance, W2 input) is not."""


class DegenerateFit(HolmcError):
    """Log-log slope fit needs at least two distinct abscissae."""


class EmptyTestSet(HolmcError):
    """Accuracy evaluation received zero held-out rows."""


# ingestion / experiments

class MissingColumn(HolmcError):
    """Requested target or feature column absent from the CSV header."""


class NonNumericCell(HolmcError):
    """Non-numeric value in a column that was not one-hot declared."""


class EmptyFile(HolmcError):
    """CSV contains a header but no data rows, or nothing at all."""


class NonBinaryTarget(HolmcError):
    """Classification target must take exactly two distinct values."""


class AllConfigsFailed(HolmcError):
    """Every grid-search configuration raised; nothing to rank."""


class SlopeUndefined(HolmcError):
    """Order-study slope requires at least two successful stepsizes."""


class EmptyCurve(HolmcError):
    """A diagnostics curve must contain at least one checkpoint."""
