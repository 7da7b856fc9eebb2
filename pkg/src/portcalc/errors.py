"""Exception types shared across the package."""


class PortCalcError(Exception):
    """Base class for all errors raised by this package."""


class NotSquarefree(PortCalcError):
    """A repeated prime factor was found where a squarefree integer is required."""


class FactorizationIncomplete(PortCalcError):
    """The factoring backend gave up before producing a complete factorization."""


class DuplicatePrime(PortCalcError):
    """A prime was appended that already divides the current product."""


class NonpositiveDefect(PortCalcError):
    """An operation requires a positive defect but the defect is <= 0."""


class PrimeDividesModulus(PortCalcError):
    """A transition prime divides the port modulus R."""


class NonpositiveC(PortCalcError):
    """A port operation produced c <= 0 (dead branch, rejected explicitly)."""


class NotCoprime(PortCalcError):
    """Arguments required to be coprime share a common factor."""


class NotCoprimePort(PortCalcError):
    """The port has gcd(R, c) > 1 where coprimality is required."""


class NotAFilling(PortCalcError):
    """The given block does not fill the port (its residual is not 1)."""


class NotAmbient(PortCalcError):
    """The operation requires an ambient port with a factored modulus."""


class TooManyDivisors(PortCalcError):
    """The divisor audit would exceed the configured subset cap."""


class NotPPN(PortCalcError):
    """The operation requires a primary pseudoperfect number."""


class CertificationFailed(PortCalcError):
    """A primality certificate could not be constructed within budget."""


class RangeExceedsBound(PortCalcError):
    """A requested scan range exceeds the finite interval bound."""


class ModulusTooLarge(PortCalcError):
    """The sieve/enumeration modulus exceeds the configured cap."""


class SmallTerminalPrime(PortCalcError):
    """The terminal prime is too small (p <= 3) for the local witness construction."""


class NoPositiveRoot(PortCalcError):
    """The real-component equation has no positive root for the given parameter."""


class BudgetExceeded(PortCalcError):
    """A time budget was exhausted before the operation completed."""


class ResumeMismatch(PortCalcError):
    """A resume snapshot does not match the current search configuration."""
