"""The port calculus.

A port (R, c) stands for the residual equation c*B - R*derivative(B) = 1 in
an unknown squarefree B coprime to R.  Appending a prime q moves to the port
(R*q, c*q - R); absorbing a whole coprime block A moves to (R*A, residual(A)).
When c = R - derivative(R) the port is ambient: any B that fills it makes
R*B a primary pseudoperfect number.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod

from .arith import PrimeFactorization, defect, derivative, is_ppn
from .errors import (
    FactorizationIncomplete,
    NonpositiveC,
    NonpositiveDefect,
    NotAFilling,
    NotAmbient,
    NotCoprime,
    NotCoprimePort,
    NotPPN,
    PrimeDividesModulus,
    TooManyDivisors,
)
from .primality import exact_sqrt, factorize, is_probable_prime, small_primes

AUDIT_OMEGA_CAP = 20


@dataclass(frozen=True)
class Port:
    """Residual equation c*B - R*derivative(B) = 1.

    R_fact is the factorization of R, present whenever the port was built as
    an ambient port (or reached from one); the ambient flag is set only by
    ambient_port and preserved by transition/induced_port, which keeps
    assemble_ppn honest.
    """

    R: int
    c: int
    R_fact: PrimeFactorization | None = None
    ambient: bool = False

    def __post_init__(self):
        if self.R < 1 or self.c < 1:
            raise ValueError(f"port ({self.R}, {self.c}) must have R >= 1 and c >= 1")
        if self.R_fact is not None and self.R_fact.value != self.R:
            raise ValueError("R_fact does not multiply to R")
        if self.ambient:
            if self.R_fact is None:
                raise NotAmbient("ambient ports carry the factorization of R")
            if defect(self.R_fact) != self.c:
                raise NotAmbient(f"c = {self.c} differs from R - derivative(R)")

    def __str__(self) -> str:
        return f"({self.R}, {self.c})"


def delta(port: Port, B: PrimeFactorization) -> int:
    """Residual c*B - R*derivative(B); value 1 means B fills the port."""
    return port.c * B.value - port.R * derivative(B)


@dataclass(frozen=True)
class Filling:
    """A checked record that B fills the port: residual recomputed to 1."""

    port: Port
    B: PrimeFactorization
    delta_value: int = 1

    def __post_init__(self):
        if gcd(self.B.value, self.port.R) != 1:
            raise NotCoprime(f"gcd({self.B.value}, {self.port.R}) > 1")
        actual = delta(self.port, self.B)
        if actual != self.delta_value or self.delta_value != 1:
            raise NotAFilling(f"residual is {actual}, not 1")


def transition(port: Port, q: int) -> Port:
    """Append a prime: (R, c) -> (R*q, c*q - R).

    Rejects q | R and dead branches with c*q - R <= 0.  Ambience and the
    coprimality gcd(R', c') = 1 are preserved along valid chains.
    """
    if not is_probable_prime(q):
        raise ValueError(f"{q} is not prime")
    if port.R % q == 0:
        raise PrimeDividesModulus(f"{q} divides {port.R}")
    c2 = port.c * q - port.R
    if c2 <= 0:
        raise NonpositiveC(f"c*q - R = {c2} <= 0 for q = {q}")
    fact2 = port.R_fact.append(q) if port.R_fact is not None else None
    out = Port(port.R * q, c2, fact2, port.ambient)
    if port.ambient and gcd(port.R, port.c) == 1:
        assert gcd(out.R, out.c) == 1, "reachable-port coprimality violated"
    return out


def induced_port(port: Port, A: PrimeFactorization) -> Port:
    """Absorb a coprime block: (R, c) -> (R*A, delta(port, A)).

    Satisfies delta(port, A*B) = delta(induced_port(port, A), B) for every B
    coprime to R*A.
    """
    if gcd(A.value, port.R) != 1:
        raise NotCoprime(f"gcd({A.value}, {port.R}) > 1")
    if A.omega == 0:
        return port
    c2 = delta(port, A)
    if c2 <= 0:
        raise NonpositiveC(f"residual {c2} <= 0 for block {A}")
    fact2 = port.R_fact.merge(A) if port.R_fact is not None else None
    return Port(port.R * A.value, c2, fact2, port.ambient)


def ambient_port(R: PrimeFactorization) -> Port:
    """The port (R, R - derivative(R)) whose fillings B make R*B pseudoperfect."""
    c = defect(R)
    if c < 1:
        raise NonpositiveDefect(f"defect of {R.value} is {c}")
    return Port(R.value, c, R, ambient=True)


def assemble_ppn(port: Port, B: PrimeFactorization) -> PrimeFactorization:
    """Merge an ambient port's modulus with a filling into a primary pseudoperfect number."""
    if not port.ambient or port.R_fact is None:
        raise NotAmbient("assemble_ppn requires an ambient port with factored R")
    if gcd(B.value, port.R) != 1:
        raise NotCoprime(f"gcd({B.value}, {port.R}) > 1")
    if delta(port, B) != 1:
        raise NotAFilling(f"residual is {delta(port, B)}, not 1")
    out = port.R_fact.merge(B)
    assert is_ppn(out), "assembled product is not primary pseudoperfect"
    return out


def znam_residues(port: Port, B: PrimeFactorization) -> list[int]:
    """For each prime q | B, the residue (R*(B/q) + 1) mod q.

    All zero whenever B fills the port.
    """
    return [(port.R * (B.value // q) + 1) % q for q in B.primes]


def port_congruences(port: Port) -> tuple[int, int]:
    """(inverse of c mod R, inverse of -R mod c).

    Any filling B satisfies B = first residue (mod R) and
    derivative(B) = second residue (mod c).  Requires gcd(R, c) = 1.
    """
    if gcd(port.R, port.c) != 1:
        raise NotCoprimePort(f"gcd({port.R}, {port.c}) > 1")
    return pow(port.c, -1, port.R), pow(-port.R, -1, port.c)


@dataclass(frozen=True)
class AuditRow:
    primes: tuple[int, ...]
    divisor: int
    residual: int


@dataclass(frozen=True)
class PrimitivityAudit:
    """All proper nontrivial divisors of a filling with their residuals.

    verdict is "primitive" when no divisor has residual 1, else "inherited"
    with the offending divisors listed.
    """

    port: Port
    B: PrimeFactorization
    rows: tuple[AuditRow, ...]
    verdict: str
    inherited_via: tuple[int, ...]


def port_primitive_audit(port: Port, B: PrimeFactorization, cap: int = AUDIT_OMEGA_CAP) -> PrimitivityAudit:
    """Check B's 2^omega - 2 proper nontrivial divisors against the port."""
    if delta(port, B) != 1:
        raise NotAFilling(f"residual is {delta(port, B)}, not 1")
    if B.omega > cap:
        raise TooManyDivisors(f"omega = {B.omega} exceeds the audit cap {cap}")
    rows = []
    hits = []
    for r in range(1, B.omega):
        for combo in itertools.combinations(B.primes, r):
            d = prod(combo)
            dd = sum(d // p for p in combo)
            res = port.c * d - port.R * dd
            rows.append(AuditRow(combo, d, res))
            if res == 1:
                hits.append(d)
    rows.sort(key=lambda row: (len(row.primes), row.divisor))
    verdict = "inherited" if hits else "primitive"
    return PrimitivityAudit(port, B, tuple(rows), verdict, tuple(sorted(hits)))


# ---------------------------------------------------------------------------
# Inheritance: growing a primary pseudoperfect number by 1, 2, or 3 primes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InheritancePair:
    """Two new primes p < q with (p - K)(q - K) = K^2 + 1."""

    K: PrimeFactorization
    p: int
    q: int

    def __post_init__(self):
        if not self.p < self.q:
            raise ValueError("requires p < q")
        if (self.p - self.K.value) * (self.q - self.K.value) != self.K.value**2 + 1:
            raise ValueError("pair does not satisfy the two-prime inheritance identity")


@dataclass(frozen=True)
class TwoPrimeCandidate:
    """One divisor d <= sqrt(K^2+1) with the resulting candidate primes.

    reject_witness is a small prime divisor of the first composite candidate
    (trial division), or None when both candidates are prime.
    """

    d: int
    p: int
    q: int
    p_prime: bool
    q_prime: bool
    reject_witness: int | None


def inherit_one(K: PrimeFactorization) -> int | None:
    """K+1 when it is prime (so K*(K+1) is again pseudoperfect), else None."""
    if not is_ppn(K):
        raise NotPPN(f"{K.value} is not a primary pseudoperfect number")
    q = K.value + 1
    return q if is_probable_prime(q) else None


def _divisors_from(fac) -> list[int]:
    divs = [1]
    for p, e in fac.factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _small_witness(n: int) -> int | None:
    for p in small_primes():
        if n % p == 0:
            return p
    return None


def inherit_two_report(K: PrimeFactorization, budget: float | None = None) -> list[TwoPrimeCandidate]:
    """Every candidate (d, K+d, K+M/d) with M = K^2+1 and d <= sqrt(M).

    Raises FactorizationIncomplete if M resists the factoring budget.
    """
    if not is_ppn(K):
        raise NotPPN(f"{K.value} is not a primary pseudoperfect number")
    M = K.value**2 + 1
    # K^2+1 is strictly between consecutive squares for K >= 1
    assert exact_sqrt(M) is None
    kwargs = {} if budget is None else {"budget": budget}
    fac = factorize(M, **kwargs)
    if not fac.complete:
        raise FactorizationIncomplete(f"factoring {M} exceeded the effort budget")
    out = []
    for d in _divisors_from(fac):
        if d * d > M:
            break
        p, q = K.value + d, K.value + M // d
        p_prime = is_probable_prime(p)
        q_prime = is_probable_prime(q)
        witness = None
        if not p_prime:
            witness = _small_witness(p)
        elif not q_prime:
            witness = _small_witness(q)
        out.append(TwoPrimeCandidate(d, p, q, p_prime, q_prime, witness))
    return out


def inherit_two(K: PrimeFactorization, budget: float | None = None) -> list[InheritancePair]:
    """All prime pairs p < q with (p - K)(q - K) = K^2 + 1, sorted by p."""
    return [
        InheritancePair(K, cand.p, cand.q)
        for cand in inherit_two_report(K, budget)
        if cand.p_prime and cand.q_prime
    ]


def inherit_three(K: PrimeFactorization, x: int, y: int) -> int | None:
    """The third prime z with x*y*z - K*(xy+xz+yz) = 1, if one exists.

    z = (K*x*y + 1) / (x*y - K*x - K*y); returns None unless the denominator
    is positive, divides exactly, and z is a new prime.
    """
    if x == y:
        raise ValueError("x and y must be distinct")
    if K.value % x == 0 or K.value % y == 0:
        raise ValueError("x and y must not divide K")
    den = x * y - K.value * x - K.value * y
    if den <= 0:
        return None
    num = K.value * x * y + 1
    if num % den != 0:
        return None
    z = num // den
    if z in (x, y) or K.value % z == 0 or not is_probable_prime(z):
        return None
    return z
