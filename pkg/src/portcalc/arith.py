"""Exact arithmetic on squarefree integers: derivative, defect, and chain steps.

A squarefree integer is represented by its strictly increasing tuple of prime
factors.  All values are arbitrary-precision; everything is immutable and
pure, so concurrent use needs no synchronization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import prod

from .errors import DuplicatePrime, FactorizationIncomplete, NonpositiveDefect, NotSquarefree
from .primality import exact_sqrt, factorize, is_probable_prime, small_primes


@dataclass(frozen=True)
class PrimeFactorization:
    """A squarefree positive integer as its sorted tuple of distinct primes.

    The empty tuple represents 1.  Construction validates that the primes are
    strictly increasing and individually pass the probable-prime test.
    """

    primes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(self.primes))
        for prev, cur in zip(self.primes, self.primes[1:]):
            if prev >= cur:
                raise ValueError(f"primes not strictly increasing: {prev} >= {cur}")
        for p in self.primes:
            if not is_probable_prime(p):
                raise ValueError(f"{p} is not prime")

    @cached_property
    def value(self) -> int:
        return prod(self.primes)

    @property
    def omega(self) -> int:
        return len(self.primes)

    def append(self, q: int) -> "PrimeFactorization":
        """Factorization of value*q for a new prime q."""
        if q in self.primes:
            raise DuplicatePrime(f"{q} already divides {self.value}")
        return PrimeFactorization(tuple(sorted(self.primes + (q,))))

    def merge(self, other: "PrimeFactorization") -> "PrimeFactorization":
        """Factorization of the product with a coprime factorization."""
        common = set(self.primes) & set(other.primes)
        if common:
            raise DuplicatePrime(f"shared primes {sorted(common)}")
        return PrimeFactorization(tuple(sorted(self.primes + other.primes)))

    def __str__(self) -> str:
        return "*".join(map(str, self.primes)) if self.primes else "1"


def factor_squarefree(n: int, budget: float | None = None) -> PrimeFactorization:
    """Full factorization of a squarefree n; primes sorted ascending.

    Raises NotSquarefree if a prime divides n twice, FactorizationIncomplete
    if the factoring backend gives up within its effort budget.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n == 1:
        return PrimeFactorization(())
    r = exact_sqrt(n)
    if r is not None:
        raise NotSquarefree(f"{n} = {r}^2")
    # cheap square-divisor extraction before committing to a full factoring run
    for p in small_primes()[:1229]:
        if n % (p * p) == 0:
            raise NotSquarefree(f"{p}^2 divides {n}")
    kwargs = {} if budget is None else {"budget": budget}
    fac = factorize(n, **kwargs)
    if not fac.complete:
        raise FactorizationIncomplete(f"factoring {n} exceeded the effort budget")
    for p, e in fac.factors:
        if e > 1:
            raise NotSquarefree(f"{p}^{e} divides {n}")
    return PrimeFactorization(fac.primes())


def derivative(f: PrimeFactorization) -> int:
    """Arithmetic derivative of a squarefree integer: sum of value/p over p | value.

    The empty factorization (value 1) has derivative 0.
    """
    return sum(f.value // p for p in f.primes)


def defect(f: PrimeFactorization) -> int:
    """value - derivative(value); equal to 1 exactly on primary pseudoperfect numbers."""
    return f.value - derivative(f)


def is_ppn(f: PrimeFactorization) -> bool:
    """True iff derivative(f) = value - 1."""
    return derivative(f) == f.value - 1


def reciprocal_identity_holds(f: PrimeFactorization) -> bool:
    """Exact rational check of 1/n + sum of 1/p = 1; equivalent to is_ppn."""
    if f.value == 1:
        return False
    total = Fraction(1, f.value) + sum(Fraction(1, p) for p in f.primes)
    return total == 1


@dataclass(frozen=True)
class DefectState:
    """State (D, a) of the append-a-prime machine, with a = D - derivative(D)."""

    D: PrimeFactorization
    a: int

    def __post_init__(self):
        if self.a != defect(self.D):
            raise ValueError(f"inconsistent defect: {self.a} != defect({self.D.value})")

    @classmethod
    def of(cls, f: PrimeFactorization) -> "DefectState":
        return cls(f, defect(f))


def defect_step(s: DefectState, q: int) -> DefectState:
    """Append a new prime: (D, a) -> (D*q, q*a - D)."""
    if s.D.value % q == 0:
        raise DuplicatePrime(f"{q} already divides {s.D.value}")
    return DefectState(s.D.append(q), q * s.a - s.D.value)


def chain_completion_prime(s: DefectState) -> int | None:
    """The unique prime q completing the state in one step, if it exists.

    Solves q*a - D = 1: returns q = (D+1)/a when that is an integer, prime,
    and does not divide D; otherwise None.  Requires a > 0.
    """
    if s.a <= 0:
        raise NonpositiveDefect(f"defect {s.a} is not positive")
    if (s.D.value + 1) % s.a != 0:
        return None
    q = (s.D.value + 1) // s.a
    if s.D.value % q == 0 or not is_probable_prime(q):
        return None
    return q
