"""Error taxonomy shared by all modules.

Every library error derives from NcycleError so callers (and the CLI) can
map failures to exit codes without string matching.
"""
from __future__ import annotations


class NcycleError(Exception):
    """Base class for all library errors."""


class NotPrime(NcycleError):
    """Field characteristic is not prime."""


class NotIrreducible(NcycleError):
    """Supplied modulus is not irreducible over GF(p)."""


class CapExceeded(NcycleError):
    """Requested field or transform size exceeds the configured cap."""


class DivisionByZero(NcycleError, ZeroDivisionError):
    """Inversion or division by the zero element."""


class CtxMismatch(NcycleError):
    """Elements from different field contexts were mixed."""


class InvalidSubfield(NcycleError):
    """Requested subfield degree does not divide the extension degree."""


class NotDivisor(NcycleError):
    """A required divisibility relation (e.g. ell | p^n - 1) fails."""


class NotPermutation(NcycleError):
    """A map required to be a bijection is not one."""


class InvalidSpec(NcycleError):
    """A declarative map description is malformed or out of supported range."""


class PrereqNotNcycle(NcycleError):
    """A map required to already be an n-cycle is not one."""


class BadParams(NcycleError):
    """Construction or criterion parameters violate a stated precondition."""


class HypothesisViolated(NcycleError):
    """A criterion hypothesis fails; carries which one and an optional witness.

    Hypothesis failures are reported distinctly from a criterion evaluating
    to false: the criterion simply does not apply.
    """

    def __init__(self, which: str, witness=None):
        super().__init__(which)
        self.which = which
        self.witness = witness


class NotSurjective(NcycleError):
    """A map is not surjective onto its declared image set."""


class HValueNotRootOfUnity(NcycleError):
    """h takes a value whose n-th power is not 1; carries the witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class KernelViolation(NcycleError):
    """A value escapes a required kernel; carries the witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class DegenerateH(NcycleError):
    """H collapses on the relevant domain, so the family degenerates."""
