"""Probable-prime testing, integer square roots, factorization, and Pocklington certificates.

Everything here is exact big-integer arithmetic.  Factorization is trial
division up to a fixed bound followed by Brent-cycle Pollard rho with a
deterministic restart sequence, so results are reproducible run to run.
"""

from __future__ import annotations

import random
import time
from bisect import bisect_right
from dataclasses import dataclass
from math import gcd, isqrt, prod

from .errors import CertificationFailed

TRIAL_DIVISION_BOUND = 10**6
# Primes below this are certified by trial division instead of a recursive
# Pocklington node.
TRIAL_CERT_LIMIT = 10**6
DEFAULT_BUDGET = 60.0
DEFAULT_SEED = 0x5EED
# Strong-pseudoprime witnesses that are deterministic for all n < 3.3*10^24,
# in particular for all n < 2^64 (Sorenson-Webster).
_DETERMINISTIC_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_RANDOM_WITNESS_ROUNDS = 40

_sieve_cache: list[int] | None = None


def small_primes() -> list[int]:
    """All primes below TRIAL_DIVISION_BOUND, sieved once and cached."""
    global _sieve_cache
    if _sieve_cache is None:
        n = TRIAL_DIVISION_BOUND
        sieve = bytearray([1]) * n
        sieve[0:2] = b"\x00\x00"
        for p in range(2, isqrt(n) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(range(p * p, n, p)))
        _sieve_cache = [i for i in range(n) if sieve[i]]
    return _sieve_cache


def floor_sqrt(n: int) -> int:
    """Largest r with r*r <= n."""
    if n < 0:
        raise ValueError("floor_sqrt of a negative integer")
    return isqrt(n)


def exact_sqrt(n: int) -> int | None:
    """The integer square root of n when n is a perfect square, else None."""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    # n - 1 = d * 2^s with d odd
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _strong_lucas_probable_prime(n: int) -> bool:
    # Selfridge parameter choice: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    if exact_sqrt(n) is not None:
        return False
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -(D + 2) if D > 0 else -(D - 2)
    Q = (1 - D) // 4
    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # Lucas sequences U_d, V_d by binary ladder (P = 1).
    U, V, Qk = 1, 1, Q % n
    for bit in bin(d)[3:]:
        U = U * V % n
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (U + V) % n, (V + D * U) % n
            if U % 2:
                U += n
            if V % 2:
                V += n
            U, V = U // 2 % n, V // 2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_probable_prime(n: int) -> bool:
    """Primality test; never reports a prime as composite.

    Deterministic (Miller-Rabin with a fixed published witness set) for
    n < 2^64; beyond that, strong tests at 40 deterministic pseudo-random
    witnesses plus a strong Lucas check.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 2**64:
        witnesses: tuple[int, ...] | list[int] = _DETERMINISTIC_WITNESSES
    else:
        rng = random.Random(DEFAULT_SEED ^ (n & (2**64 - 1)))
        witnesses = [rng.randrange(2, n - 1) for _ in range(_RANDOM_WITNESS_ROUNDS)]
    for a in witnesses:
        if not _strong_probable_prime(n, a % n, d, s):
            return False
    if n >= 2**64 and not _strong_lucas_probable_prime(n):
        return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    ps = small_primes()
    if n < ps[-1]:
        return ps[bisect_right(ps, n)]
    k = n + 1 if n % 2 == 0 else n + 2
    while not is_probable_prime(k):
        k += 2
    return k


def primes_from(start: int):
    """Yield primes >= start in increasing order, without an upper limit.

    Below the sieve bound this walks the cached sieve; beyond it, candidates
    are filtered by is_probable_prime (deterministic below 2^64).
    """
    ps = small_primes()
    i = bisect_right(ps, start - 1)
    while i < len(ps):
        yield ps[i]
        i += 1
    k = max(start, ps[-1] + 2)
    if k % 2 == 0:
        k += 1
    while True:
        if is_probable_prime(k):
            yield k
        k += 2


@dataclass(frozen=True)
class GeneralFactorization:
    """A (possibly partial) factorization n = prod(p^e) * cofactor.

    When complete is False, the trailing entry of factors is the unfactored
    composite cofactor with exponent 1; it fails is_probable_prime.
    """

    n: int
    factors: tuple[tuple[int, int], ...]
    complete: bool

    def __post_init__(self):
        if prod(p**e for p, e in self.factors) != self.n:
            raise ValueError("factor product does not equal n")

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)


def _brent_rho(n: int, c: int, max_iters: int, deadline: float | None) -> int | None:
    """One Brent-cycle rho attempt on composite odd n with polynomial x^2 + c.

    Returns a nontrivial factor, or None if the iteration or time budget runs
    out or the attempt degenerates.
    """
    y, r, q = 2, 1, 1
    g = 1
    x = ys = y
    iters = 0
    m = 128
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * (x - y) % n
            g = gcd(q, n)
            k += m
            iters += m
            if iters > max_iters:
                return None
            if deadline is not None and time.monotonic() > deadline:
                return None
        r *= 2
    if g == n:
        # backtrack one step at a time
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(x - ys, n)
    return g if g != n else None


def _iroot(n: int, e: int) -> int:
    """Largest r with r**e <= n (Newton on integers)."""
    if n < 2:
        return n
    r = 1 << ((n.bit_length() + e - 1) // e)
    while True:
        nr = ((e - 1) * r + n // r ** (e - 1)) // e
        if nr >= r:
            return r
        r = nr


def _find_factor(n: int, rng: random.Random, deadline: float | None) -> int | None:
    """Find a nontrivial factor of odd composite n, or None on budget exhaustion."""
    # perfect powers first: rho converges slowly on p^k
    for e in (2, 3, 5, 7):
        r = _iroot(n, e)
        if r > 1 and r**e == n:
            return r
    max_iters = 1 << 18
    while True:
        c = rng.randrange(1, n - 1)
        g = _brent_rho(n, c, max_iters, deadline)
        if g is not None and 1 < g < n:
            return g
        if deadline is not None and time.monotonic() > deadline:
            return None
        max_iters *= 2


def factorize(n: int, budget: float | None = DEFAULT_BUDGET, seed: int = DEFAULT_SEED) -> GeneralFactorization:
    """Factor n completely if possible within the per-composite time budget.

    Trial division to TRIAL_DIVISION_BOUND, then deterministic-seeded Brent
    rho on what remains.  On budget exhaustion the result carries
    complete=False with the unfactored cofactor as the last entry.
    """
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n == 1:
        return GeneralFactorization(1, (), True)
    found: dict[int, int] = {}
    m = n
    for p in small_primes():
        if p * p > m:
            break
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    if m > 1 and m < TRIAL_DIVISION_BOUND**2:
        # below the square of the trial bound the remainder must be prime
        found[m] = found.get(m, 0) + 1
        m = 1
    stack = [m] if m > 1 else []
    leftover = 1
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        deadline = time.monotonic() + budget if budget is not None else None
        rng = random.Random(seed ^ (m & (2**64 - 1)))
        g = _find_factor(m, rng, deadline)
        if g is None:
            leftover *= m
            continue
        stack.append(g)
        stack.append(m // g)
    factors = sorted(found.items())
    if leftover > 1:
        factors.append((leftover, 1))
    return GeneralFactorization(n, tuple(factors), leftover == 1)


# ---------------------------------------------------------------------------
# Pocklington certificates (fully factored form)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PocklingtonCertificate:
    """Recursive primality certificate.

    Internal node: base a with a^(p-1) = 1 (mod p) and
    gcd(a^((p-1)/q) - 1, p) = 1 for every prime q | p-1, with p-1 completely
    factored; every factor >= TRIAL_CERT_LIMIT carries a child certificate.

    Leaf node (leaf=True, base=0, no factors): p < TRIAL_CERT_LIMIT is checked
    by trial division.  A leaf with p >= TRIAL_CERT_LIMIT is a probable-prime
    annotation: the subtree could not be completed within budget and
    verification reports it as conditional.
    """

    p: int
    base: int
    p_minus_1: GeneralFactorization | None
    children: tuple["PocklingtonCertificate", ...]
    leaf: bool


@dataclass(frozen=True)
class PocklingtonVerification:
    valid: bool
    failure: str | None
    # (q, gcd(a^((p-1)/q) - 1, p)) for the root node, in increasing q
    gcd_rows: tuple[tuple[int, int], ...]
    # primes accepted only as probable-prime annotations
    conditional: tuple[int, ...]

    @property
    def unconditional(self) -> bool:
        return self.valid and not self.conditional


def _trial_division_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in small_primes():
        if q * q > p:
            return True
        if p % q == 0:
            return p == q
    return True


def _base_works(p: int, base: int, prime_factors: tuple[int, ...]) -> bool:
    if pow(base, p - 1, p) != 1:
        return False
    for q in prime_factors:
        if gcd(pow(base, (p - 1) // q, p) - 1, p) != 1:
            return False
    return True


def certify_prime(
    p: int,
    budget: float | None = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    _cache: dict[int, PocklingtonCertificate] | None = None,
    _root: bool = True,
) -> PocklingtonCertificate:
    """Build a recursive certificate for p with the smallest working base.

    Raises CertificationFailed if p is not (probably) prime or if p-1 cannot
    be completely factored within budget at the top level.  Deeper in the
    tree a resistant subtree degrades to a probable-prime annotation leaf.
    """
    if _cache is None:
        _cache = {}
    if p in _cache:
        return _cache[p]
    if not is_probable_prime(p):
        raise CertificationFailed(f"{p} is not prime")
    # small primes become trial-division leaves inside a tree; a direct call
    # still gets a genuine node (p = 2 has no Pocklington form at all)
    if p == 2 or (p < TRIAL_CERT_LIMIT and not _root):
        cert = PocklingtonCertificate(p, 0, None, (), True)
        _cache[p] = cert
        return cert
    fac = factorize(p - 1, budget=budget, seed=seed)
    if not fac.complete:
        if _root:
            raise CertificationFailed(f"could not completely factor {p} - 1 within budget")
        cert = PocklingtonCertificate(p, 0, None, (), True)  # probable-prime annotation
        _cache[p] = cert
        return cert
    primes = fac.primes()
    base = 2
    while not _base_works(p, base, primes):
        base += 1
        if base > 10000:
            raise CertificationFailed(f"no working base below 10000 for {p}")
    children = tuple(
        certify_prime(q, budget=budget, seed=seed, _cache=_cache, _root=False)
        for q in primes
        if q >= TRIAL_CERT_LIMIT
    )
    cert = PocklingtonCertificate(p, base, fac, children, False)
    _cache[p] = cert
    return cert


def pocklington_verify(cert: PocklingtonCertificate) -> PocklingtonVerification:
    """Recheck every condition of the certificate tree from scratch.

    The gcd_rows of the result reproduce the per-factor gcd table for the
    root node.  Verification stops at the first violated condition.
    """
    conditional: list[int] = []

    def check(node: PocklingtonCertificate) -> tuple[bool, str | None, tuple[tuple[int, int], ...]]:
        p = node.p
        if p < 2:
            return False, f"{p} is below 2", ()
        if node.leaf:
            if p < TRIAL_CERT_LIMIT:
                if not _trial_division_prime(p):
                    return False, f"trial division shows {p} composite", ()
                return True, None, ()
            # probable-prime annotation
            if not is_probable_prime(p):
                return False, f"annotated leaf {p} fails the probable-prime test", ()
            conditional.append(p)
            return True, None, ()
        if node.p_minus_1 is None or not node.p_minus_1.complete:
            return False, f"certificate for {p} lacks a complete factorization of p-1", ()
        if node.p_minus_1.n != p - 1:
            return False, f"stated factorization for {p} is not of p-1", ()
        if prod(q**e for q, e in node.p_minus_1.factors) != p - 1:
            return False, f"factor product mismatch for {p}", ()
        if node.base < 2:
            return False, f"base {node.base} below 2 for {p}", ()
        if pow(node.base, p - 1, p) != 1:
            return False, f"Fermat congruence fails for {p} at base {node.base}", ()
        rows = []
        for q, _ in node.p_minus_1.factors:
            g = gcd(pow(node.base, (p - 1) // q, p) - 1, p)
            rows.append((q, g))
            if g != 1:
                return False, f"gcd condition fails for {p} at factor {q}", tuple(rows)
        by_p = {ch.p: ch for ch in node.children}
        for q, _ in node.p_minus_1.factors:
            if q >= TRIAL_CERT_LIMIT:
                if q not in by_p:
                    return False, f"missing child certificate for factor {q} of {p} - 1", tuple(rows)
            else:
                if not _trial_division_prime(q):
                    return False, f"small factor {q} of {p} - 1 is composite", tuple(rows)
        for ch in node.children:
            ok, why, _ = check(ch)
            if not ok:
                return False, why, tuple(rows)
        return True, None, tuple(rows)

    ok, failure, rows = check(cert)
    return PocklingtonVerification(ok, failure, rows, tuple(conditional))
