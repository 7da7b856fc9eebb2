"""Finite and numeric checkers for the five-prime splitting hypersurface.

A terminal port (R, c, p) has c*p - R = 1.  Replacing the single prime p by
five primes means finding a point on
F(x1..x5) = c*x1*x2*x3*x4*x5 - R*sum_i prod_{j != i} x_j - 1 = 0.
This module checks the two finite/numeric hypotheses that make such a
replacement plausible: solubility of F = 0 in nonzero residues modulo every
prime, and an unbounded positive real branch with all coordinates above p.
Searching for actual prime points is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .arith import PrimeFactorization, defect
from .errors import ModulusTooLarge, NoPositiveRoot, SmallTerminalPrime
from .primality import is_probable_prime

BRUTEFORCE_MODULUS_CAP = 31
RESIDUAL_TOLERANCE = Fraction(1, 10**30)


@dataclass(frozen=True)
class TerminalPort:
    """(R, c, p) with p prime and c*p - R = 1; ambient when c = R - derivative(R)."""

    R: int
    c: int
    p: int
    ambient: bool = False
    R_fact: PrimeFactorization | None = None

    def __post_init__(self):
        if self.c * self.p - self.R != 1:
            raise ValueError(f"c*p - R = {self.c * self.p - self.R} != 1")
        if not is_probable_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.ambient:
            if self.R_fact is None or self.R_fact.value != self.R:
                raise ValueError("ambient terminal ports carry the factorization of R")
            if defect(self.R_fact) != self.c:
                raise ValueError("c differs from R - derivative(R)")

    @classmethod
    def from_ambient(cls, R_fact: PrimeFactorization, p: int) -> "TerminalPort":
        return cls(R_fact.value, defect(R_fact), p, ambient=True, R_fact=R_fact)


def eval_F(tp: TerminalPort, x, modulus: int | None = None) -> int:
    """c*prod(x) - R*sum of the five 4-term products - 1, optionally mod a prime."""
    x = tuple(x)
    if len(x) != 5:
        raise ValueError("x must have exactly five coordinates")
    total = prod(x)
    elementary4 = sum(prod(x[j] for j in range(5) if j != i) for i in range(5))
    value = tp.c * total - tp.R * elementary4 - 1
    return value % modulus if modulus is not None else value


def local_witness(tp: TerminalPort, l: int) -> tuple[int, int, int, int, int]:
    """A solution of F = 0 in nonzero residues mod l, by explicit construction.

    For l != p the tuple (p, 1, -1, 1, -1) works because the four-term
    products telescope to 1 and the full product is p, leaving c*p - R - 1 = 0.
    For l = p one divides through by the product; with R = -1 (mod p) the
    equation becomes prod(y) - sum(y) = c in the reciprocal coordinates, which
    (c/3, 1, -1, 2, -2) solves when c != 0 and (1, 1, -1, 1, -1) solves when
    c = 0; inverting mod p gives the witness.  Needs p > 3.
    """
    if tp.p <= 3:
        raise SmallTerminalPrime(f"terminal prime {tp.p} is too small")
    if not is_probable_prime(l):
        raise ValueError(f"modulus {l} is not prime")
    if l != tp.p:
        w = (tp.p % l, 1 % l, (l - 1) % l, 1 % l, (l - 1) % l)
    else:
        c = tp.c % l
        if c != 0:
            y = (c * pow(3, -1, l) % l, 1, l - 1, 2, l - 2)
        else:
            y = (1, 1, l - 1, 1, l - 1)
        w = tuple(pow(yi, -1, l) for yi in y)
    assert all(wi % l != 0 for wi in w), "witness has a zero coordinate"
    assert eval_F(tp, w, modulus=l) == 0, "witness does not satisfy the congruence"
    return w


def local_bruteforce(tp: TerminalPort, l: int) -> int:
    """Exact count of solutions of F = 0 in nonzero residues mod l.

    Enumerates (x1..x4) and solves the resulting linear condition for x5,
    which gives the same count as the full five-fold enumeration.  Capped at
    l <= 31 to keep (l-1)^4 cases enumerable.
    """
    if l > BRUTEFORCE_MODULUS_CAP:
        raise ModulusTooLarge(f"modulus {l} exceeds the cap {BRUTEFORCE_MODULUS_CAP}")
    if not is_probable_prime(l):
        raise ValueError(f"modulus {l} is not prime")
    R, c = tp.R % l, tp.c % l
    count = 0
    units = range(1, l)
    for x1 in units:
        for x2 in units:
            p12 = x1 * x2 % l
            s12 = (x1 + x2) % l
            for x3 in units:
                p123 = p12 * x3 % l
                e2_123 = (p12 + x3 * s12) % l  # x1x2 + x3(x1+x2)
                s123 = (s12 + x3) % l
                for x4 in units:
                    p4 = p123 * x4 % l
                    # sum of 3-term products of x1..x4
                    e3 = (p123 + x4 * e2_123) % l
                    # F = x5*(c*p4 - R*e3) - R*p4 - 1 (mod l)
                    a = (c * p4 - R * e3) % l
                    b = (R * p4 + 1) % l
                    if a != 0:
                        if b * pow(a, -1, l) % l != 0:
                            count += 1
                    elif b == 0:
                        count += l - 1
    return count


@dataclass(frozen=True)
class RealWitness:
    """A positive rational point near the unbounded real branch.

    The four equal coordinates are 1/s and the fifth is 1/y5; the residual
    bounds how far 4*s + y5 + s^4*y5/R sits from c/R.
    """

    s: Fraction
    y5: Fraction
    residual: Fraction
    coordinates: tuple[Fraction, Fraction]  # (1/s repeated four times, 1/y5)
    all_exceed_p: bool


def real_witness(tp: TerminalPort, y5: Fraction) -> RealWitness:
    """Solve 4*s + y5 + s^4*y5/R = c/R for s by exact rational bisection.

    Requires R > 4 and 0 < y5 < c/R.  The returned s has residual below
    10^-30; as y5 shrinks, s approaches c/(4R) and all five hypersurface
    coordinates (four copies of 1/s and one of 1/y5) grow past p.
    """
    if tp.R <= 4:
        raise ValueError("requires R > 4")
    y5 = Fraction(y5)
    target = Fraction(tp.c, tp.R)
    if not 0 < y5 < target:
        raise NoPositiveRoot(f"y5 must lie strictly between 0 and c/R = {target}")

    def f(s: Fraction) -> Fraction:
        return 4 * s + y5 + s**4 * y5 / tp.R - target

    lo = Fraction(0)
    hi = Fraction(tp.c, 4 * tp.R)
    # f(0) = y5 - c/R < 0 and f(c/(4R)) = y5*(1 + (c/4R)^4/R) > 0
    while True:
        mid = (lo + hi) / 2
        val = f(mid)
        if abs(val) < RESIDUAL_TOLERANCE:
            break
        if val < 0:
            lo = mid
        else:
            hi = mid
    coords = (1 / mid, 1 / y5)
    return RealWitness(mid, y5, val, coords, all(c > tp.p for c in coords))
