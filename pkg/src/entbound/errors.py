"""Exception types shared across the package.

Every validation failure raises a named exception whose message states the
violated condition and, where meaningful, its measured magnitude.
"""


class NotHermitian(ValueError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class NotUnitTrace(ValueError):
    """Trace differs from 1 beyond tolerance."""


class NotPSD(ValueError):
    """Smallest eigenvalue is negative beyond tolerance."""


class OutOfRange(ValueError):
    """Scalar argument lies outside its admissible interval."""


class IndexOutOfRange(ValueError):
    """Integer selector outside the valid index set."""


class InvalidSpec(ValueError):
    """Parameter record fails its consistency conditions."""


class VanishingTrace(ValueError):
    """Filtered state has numerically zero trace; renormalization undefined."""


class NonpositiveTrace(ValueError):
    """Trace factor must be positive for the concurrence transformation."""


class RankDeficient(ValueError):
    """Operation requires a full-rank state."""


class NoConvergence(RuntimeError):
    """Iteration budget exhausted before reaching the requested tolerance."""


class NotEntangled(ValueError):
    """Operation is only defined for entangled states."""


class ComplexSigma(ValueError):
    """Closed-form singular values left the real domain for these parameters."""


class DomainError(ValueError):
    """Scalar function undefined at an eigenvalue of the operand."""
