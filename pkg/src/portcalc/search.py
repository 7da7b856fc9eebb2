"""Finishing a port filling: last-two-prime discriminants, square sieving,
prefix enumeration with capacity pruning, and the next-layer channel audit.

The last two primes u < v of any filling of (R, c) satisfy c*u*v - R*(u+v) = 1,
so their product is P0 + t*R and their sum is S0 + c*t for a single parameter
t that is bounded by an explicit floor computation.  Completability therefore
reduces to (S0 + c*t)^2 - 4*(P0 + t*R) being a perfect square for some t in a
finite interval, which a residue sieve can exclude wholesale.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd, prod

from .arith import PrimeFactorization
from .errors import (
    ModulusTooLarge,
    NonpositiveC,
    NotCoprimePort,
    PrimeDividesModulus,
    RangeExceedsBound,
)
from .known import KEY_PORT, PPN_7, PPN_9_FACTORS, PPN_10
from .ports import (
    InheritancePair,
    Port,
    TwoPrimeCandidate,
    inherit_two_report,
    transition,
)
from .primality import (
    GeneralFactorization,
    exact_sqrt,
    factorize,
    is_probable_prime,
    primes_from,
    small_primes,
)

logger = logging.getLogger(__name__)

SIEVE_MODULUS_CAP = 10**4
DEFAULT_SIEVE_MODULI = tuple(p for p in small_primes()[:25])  # primes up to 97
DEFAULT_T_CAP = 1000
# ceiling on direct residue-class coverage scans in certificate building
COVERAGE_SCAN_CAP = 10**7


@dataclass(frozen=True)
class DiscriminantProblem:
    """Finite square-discriminant problem for the last two primes of a filling.

    P0 is the inverse of c mod R in [1, R); S0 = (c*P0 - 1)/R.  Candidate
    products are P0 + t*R with sums S0 + c*t.  U is the least admissible
    final prime, and t only needs checking in [0, T]; T < 0 marks an empty
    interval.
    """

    port: Port
    m: int
    P0: int
    S0: int
    U: int
    T: int

    @property
    def interval_empty(self) -> bool:
        return self.T < 0


def build_discriminant_problem(port: Port, m: int) -> DiscriminantProblem:
    """Set up the last-two-prime problem for primes above the floor prime m."""
    if gcd(port.R, port.c) != 1:
        raise NotCoprimePort(f"gcd({port.R}, {port.c}) > 1")
    R, c = port.R, port.c
    P0 = pow(c, -1, R) if R > 1 else 1
    S0 = (c * P0 - 1) // R
    U = max(m + 1, R // c + 1)
    # c*U - R >= 1 since U > R/c, so floor division is safe; a negative
    # numerator floors to T <= -1, the empty-interval marker.
    T = (U * U - S0 * U + P0) // (c * U - R)
    return DiscriminantProblem(port, m, P0, S0, U, T)


def discriminant(problem: DiscriminantProblem, t: int) -> int:
    """D(t) = (S0 + c*t)^2 - 4*(P0 + t*R), exactly."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    S = problem.S0 + problem.port.c * t
    P = problem.P0 + t * problem.port.R
    return S * S - 4 * P


def scan_last_two(
    problem: DiscriminantProblem,
    t_range=None,
    *,
    allow_beyond_bound: bool = False,
) -> list[tuple[int, int, int]]:
    """All completions (t, u, v) with u < v prime in the given t range.

    Default range is the full interval [0, T].  Explicit t beyond T is
    rejected unless allow_beyond_bound is set (exploratory use only; the
    interval bound already covers every completion).
    """
    if t_range is None:
        t_range = range(0, problem.T + 1) if problem.T >= 0 else range(0)
    hits = []
    for t in t_range:
        if t < 0:
            raise ValueError("t must be nonnegative")
        if t > problem.T and not allow_beyond_bound:
            raise RangeExceedsBound(f"t = {t} exceeds the interval bound T = {problem.T}")
        D = discriminant(problem, t)
        if D < 0:
            continue
        s = exact_sqrt(D)
        if s is None:
            continue
        S = problem.S0 + problem.port.c * t
        if (S - s) % 2 != 0:
            continue
        u, v = (S - s) // 2, (S + s) // 2
        if u < problem.U or u == v:
            continue
        if problem.port.R % u == 0 or problem.port.R % v == 0:
            continue
        if is_probable_prime(u) and is_probable_prime(v):
            hits.append((t, u, v))
    return hits


# ---------------------------------------------------------------------------
# Modular square sieve and exclusion certificates
# ---------------------------------------------------------------------------


def sieve_allowed_classes(
    problem: DiscriminantProblem, l: int, cap: int = SIEVE_MODULUS_CAP
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(quadratic residues mod l, allowed classes of t mod l).

    A residue class t mod l is allowed when D(t) mod l is a square mod l;
    any t with D(t) an integer square lies in an allowed class.
    """
    if l > cap:
        raise ModulusTooLarge(f"modulus {l} exceeds the cap {cap}")
    if not is_probable_prime(l):
        raise ValueError(f"modulus {l} is not prime")
    qr = sorted({x * x % l for x in range(l // 2 + 1)})
    qr_set = set(qr)
    S0, c = problem.S0 % l, problem.port.c % l
    P0, R = problem.P0 % l, problem.port.R % l
    allowed = [
        t for t in range(l)
        if ((S0 + c * t) ** 2 - 4 * (P0 + t * R)) % l in qr_set
    ]
    return tuple(qr), tuple(allowed)


@dataclass(frozen=True)
class SieveModulus:
    l: int
    qr_set: tuple[int, ...]
    allowed_classes: tuple[int, ...]


@dataclass(frozen=True)
class ExclusionWitness:
    """For a single-point interval: the one discriminant value and the modulus
    at which it is a quadratic nonresidue."""

    t: int
    D: int
    l: int


@dataclass(frozen=True)
class SieveExclusionCertificate:
    """Machine-checkable proof that no t in [0, T] has a square discriminant.

    Every field is recomputable from the embedded problem alone, so a
    verifier needs no trust in the producer.
    """

    problem: DiscriminantProblem
    moduli: tuple[SieveModulus, ...]
    verdict: str
    witness: ExclusionWitness | None

    @property
    def combined_modulus(self) -> int:
        return prod(m.l for m in self.moduli)


def _surviving_t(problem: DiscriminantProblem, moduli: list[SieveModulus]) -> int | None:
    """First t in the interval passing every per-modulus class restriction.

    Survival is periodic with period prod(l), so scanning min(T, period - 1)
    is complete.
    """
    if problem.T < 0:
        return None
    period = prod(m.l for m in moduli) if moduli else 1
    hi = min(problem.T, period - 1)
    if hi > COVERAGE_SCAN_CAP:
        raise ModulusTooLarge(
            f"coverage scan over {hi + 1} values exceeds the cap {COVERAGE_SCAN_CAP}"
        )
    allowed_sets = [(m.l, set(m.allowed_classes)) for m in moduli]
    for t in range(hi + 1):
        if all(t % l in allowed for l, allowed in allowed_sets):
            return t
    return None


def build_exclusion_certificate(
    problem: DiscriminantProblem, moduli=None
) -> SieveExclusionCertificate | None:
    """Certificate that the problem has no square discriminant, or None.

    None means some t in [0, T] survives every listed modulus, so these
    moduli cannot exclude the prefix (in particular whenever a genuine
    completion exists).
    """
    if moduli is None:
        moduli = DEFAULT_SIEVE_MODULI
    mods = []
    for l in moduli:
        qr, allowed = sieve_allowed_classes(problem, l)
        mods.append(SieveModulus(l, qr, allowed))
    if _surviving_t(problem, mods) is not None:
        return None
    witness = None
    if problem.T == 0:
        for m in mods:
            if 0 not in m.allowed_classes:
                witness = ExclusionWitness(0, discriminant(problem, 0), m.l)
                break
    return SieveExclusionCertificate(problem, tuple(mods), "excluded", witness)


def verify_exclusion_certificate(cert: SieveExclusionCertificate) -> tuple[bool, str | None]:
    """Recompute everything in the certificate; (True, None) iff it all holds."""
    prob = cert.problem
    try:
        fresh = build_discriminant_problem(prob.port, prob.m)
    except NotCoprimePort as e:
        return False, str(e)
    if fresh != prob:
        return False, f"problem data mismatch: stated {prob}, recomputed {fresh}"
    if cert.verdict != "excluded":
        return False, f"unexpected verdict {cert.verdict!r}"
    for m in cert.moduli:
        qr, allowed = sieve_allowed_classes(prob, m.l)
        if qr != m.qr_set:
            return False, f"quadratic residue set mismatch at modulus {m.l}"
        if allowed != m.allowed_classes:
            return False, f"allowed classes mismatch at modulus {m.l}"
    survivor = _surviving_t(prob, list(cert.moduli))
    if survivor is not None:
        return False, f"t = {survivor} survives every modulus"
    if cert.witness is not None:
        w = cert.witness
        if w.t != 0 or prob.T != 0:
            return False, "witness only applies to the single-point interval"
        if discriminant(prob, 0) != w.D:
            return False, "witness discriminant value mismatch"
        if w.l not in [m.l for m in cert.moduli]:
            return False, f"witness modulus {w.l} not among the certificate moduli"
    return True, None


# ---------------------------------------------------------------------------
# Prefix enumeration with reciprocal-capacity pruning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrefixSearchConfig:
    """Search for k-prime fillings of port, all primes above the floor m.

    The first k-2 primes are enumerated; the last two come from the
    discriminant problem, scanning t up to min(T, t_cap).  q1 bounds
    restrict the first prime (used for worker partitioning).
    """

    port: Port
    k: int
    m: int
    t_cap: int = DEFAULT_T_CAP
    q1_min: int | None = None
    q1_max: int | None = None
    workers: int = 1

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.t_cap < 0:
            raise ValueError("t_cap must be nonnegative")
        if gcd(self.port.R, self.port.c) != 1:
            raise NotCoprimePort(f"gcd({self.port.R}, {self.port.c}) > 1")


@dataclass(frozen=True)
class PrefixNode:
    prefix: PrimeFactorization
    port: Port
    problem: DiscriminantProblem | None


def _capacity_ok(port: Port, last: int, j: int) -> bool:
    """Necessary condition for j more primes above `last` to fill the port.

    The j smallest primes beyond `last` maximize the reciprocal sum, which
    must reach c/R (the exact equation leaves a positive slack term, dropped
    here on the necessary side).
    """
    if j <= 0:
        return True
    total = Fraction(0)
    target = Fraction(port.c, port.R)
    for p in primes_from(last + 1):
        total += Fraction(1, p)
        j -= 1
        if j == 0:
            break
    return total >= target


def enumerate_prefixes(config: PrefixSearchConfig, depth: int | None = None):
    """Depth-first stream of admissible prefixes q1 < ... < q_depth.

    Nodes are yielded at the requested depth (default k-2, where the
    discriminant problem is attached).  Pruning: transitions with c' <= 0
    are skipped, a node dies when the reciprocal capacity of the remaining
    slots cannot reach c'/R', and first primes outside the configured
    bounds are cut.  Every surviving branch keeps gcd(R', c') = 1; a
    violation is logged and pruned since it cannot occur along ambient
    chains.
    """
    target = config.k - 2 if depth is None else depth
    if not 0 <= target <= config.k - 2:
        raise ValueError(f"depth must lie in [0, {config.k - 2}]")

    def rec(port: Port, last: int, chosen: tuple[int, ...]):
        if len(chosen) == target:
            prob = build_discriminant_problem(port, last) if target == config.k - 2 else None
            yield PrefixNode(PrimeFactorization(chosen), port, prob)
            return
        d = len(chosen)
        j_child = config.k - (d + 1)
        lo = max(last + 1, port.R // port.c + 1)
        if d == 0 and config.q1_min is not None:
            lo = max(lo, config.q1_min)
        for q in primes_from(lo):
            if d == 0 and config.q1_max is not None and q > config.q1_max:
                break
            try:
                child = transition(port, q)
            except (PrimeDividesModulus, NonpositiveC):
                continue
            if gcd(child.R, child.c) > 1:
                logger.warning("pruned prefix %s + %d with gcd(R', c') > 1", chosen, q)
                continue
            if not _capacity_ok(child, q, j_child):
                # capacity is monotone in q: once it fails it fails for all
                # larger q at this node
                break
            yield from rec(child, q, chosen + (q,))

    if not _capacity_ok(config.port, config.m, config.k):
        return
    yield from rec(config.port, config.m, ())


def first_prime_candidates(config: PrefixSearchConfig) -> list[int]:
    """The admissible first primes of the enumeration, in increasing order."""
    return [node.prefix.primes[0] for node in enumerate_prefixes(config, depth=1)]


# ---------------------------------------------------------------------------
# Scan harness over the enumerated prefixes (snapshots, resume, workers)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BranchRecord:
    """Progress of one first-prime branch; mirrors the snapshot record."""

    q1: int
    last_completed_prefix: tuple[int, ...] | None
    prefixes_seen: int
    t_checked: int
    square_hits: int
    complete: bool


@dataclass(frozen=True)
class PrefixScanResult:
    config: PrefixSearchConfig
    branches: tuple[BranchRecord, ...]
    # (prefix primes, t, u, v): genuine prime-pair completions found
    hits: tuple[tuple[tuple[int, ...], int, int, int], ...]
    complete: bool


@dataclass(frozen=True)
class ResumeState:
    """Branch progress and hits recovered from an earlier snapshot."""

    branches: dict[int, BranchRecord]
    hits: tuple[tuple[tuple[int, ...], int, int, int], ...] = ()


def _scan_branch(
    config: PrefixSearchConfig,
    q1: int,
    skip_upto: tuple[int, ...] | None = None,
    deadline: float | None = None,
    prior: BranchRecord | None = None,
) -> tuple[BranchRecord, list, bool]:
    sub = replace(config, q1_min=q1, q1_max=q1, workers=1)
    seen = prior.prefixes_seen if prior else 0
    t_checked = prior.t_checked if prior else 0
    squares = prior.square_hits if prior else 0
    last = skip_upto
    hits = []
    for node in enumerate_prefixes(sub):
        if skip_upto is not None and node.prefix.primes <= skip_upto:
            continue
        if deadline is not None and time.monotonic() > deadline:
            return BranchRecord(q1, last, seen, t_checked, squares, False), hits, False
        seen += 1
        prob = node.problem
        if prob.T >= 0:
            hi = min(prob.T, config.t_cap)
            for t in range(hi + 1):
                t_checked += 1
                D = discriminant(prob, t)
                if D >= 0 and exact_sqrt(D) is not None:
                    squares += 1
            for t, u, v in scan_last_two(prob, range(0, hi + 1)):
                hits.append((node.prefix.primes, t, u, v))
        last = node.prefix.primes
    return BranchRecord(q1, last, seen, t_checked, squares, True), hits, True


def _scan_branch_worker(args):
    return _scan_branch(*args)


def run_prefix_scan(
    config: PrefixSearchConfig,
    budget: float | None = None,
    resume_state: ResumeState | None = None,
) -> PrefixScanResult:
    """Scan every enumerated prefix's discriminant interval for prime pairs.

    With a resume state, complete branches are skipped and partial ones
    continue after their last completed prefix; previously found hits are
    carried over.  A blown budget is reported through the result's complete
    flag being False -- callers decide whether that is an error.
    """
    deadline = time.monotonic() + budget if budget is not None else None
    # k = 2 has no prefix layer: the root is the single branch (q1 = 0)
    if config.k == 2:
        q1s = [0]
    else:
        q1s = first_prime_candidates(replace(config, workers=1))
    jobs = []
    done: dict[int, BranchRecord] = {}
    hits_by_q1: dict[int, list] = {}
    if resume_state is not None:
        for prefix, t, u, v in resume_state.hits:
            hits_by_q1.setdefault(prefix[0], []).append((prefix, t, u, v))
    for q1 in q1s:
        prior = resume_state.branches.get(q1) if resume_state else None
        if prior is not None and prior.complete:
            done[q1] = prior
            continue
        skip = prior.last_completed_prefix if prior else None
        jobs.append((config, q1, skip, deadline, prior))
    if config.workers > 1 and len(jobs) > 1:
        import multiprocessing

        with multiprocessing.Pool(config.workers) as pool:
            results = pool.map(_scan_branch_worker, jobs)
    else:
        results = [_scan_branch(*job) for job in jobs]
    all_complete = True
    for (rec, hits, finished) in results:
        done[rec.q1] = rec
        hits_by_q1.setdefault(rec.q1, []).extend(hits)
        all_complete = all_complete and finished
    branches = tuple(done[q1] for q1 in sorted(done))
    merged_hits = []
    for q1 in sorted(hits_by_q1):
        merged_hits.extend(sorted(hits_by_q1[q1]))
    return PrefixScanResult(config, branches, tuple(merged_hits), all_complete)


# ---------------------------------------------------------------------------
# Next-layer channel audit for the key port
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InheritanceSubproblem:
    """Open search task: squarefree C with C - K*derivative(C) = 1 and omega(C) primes."""

    K: int
    omega: int

    def port(self) -> Port:
        return Port(self.K, 1)


@dataclass(frozen=True)
class ChannelAudit:
    """What the known fillings say about six-prime fillings of the key port.

    Each known filling of length w leaves a (6-w)-prime completion problem:
    the length-4 filling needs two primes (settled: no prime pair), the
    length-5 filling needs one prime (settled: the candidate is composite),
    and the length-2 filling leaves an open four-prime subproblem.  The
    caveat records that only *known* fillings are covered.
    """

    port: Port
    one_prime_value: int
    one_prime_factorization: GeneralFactorization
    one_prime_composite: bool
    two_prime_candidates: tuple[TwoPrimeCandidate, ...]
    two_prime_hits: tuple[InheritancePair, ...]
    four_prime_subproblem: InheritanceSubproblem
    caveat: str


AUDIT_CAVEAT = (
    "channel list covers the known fillings only; any further filling with "
    "fewer than six primes would open an additional inherited channel"
)


def h6_channel_audit(port: Port = KEY_PORT, budget: float | None = None) -> ChannelAudit:
    """Audit the inherited channels toward a six-prime filling of the key port."""
    if (port.R, port.c) != (KEY_PORT.R, KEY_PORT.c):
        raise ValueError("the channel audit is specific to the key port")
    kwargs = {} if budget is None else {"budget": budget}
    one_prime_value = PPN_10 + 1
    fac = factorize(one_prime_value, **kwargs)
    composite = not is_probable_prime(one_prime_value)
    candidates = inherit_two_report(PPN_9_FACTORS, budget)
    hits = tuple(
        InheritancePair(PPN_9_FACTORS, c.p, c.q) for c in candidates if c.p_prime and c.q_prime
    )
    subproblem = InheritanceSubproblem(PPN_7, 4)
    return ChannelAudit(
        port,
        one_prime_value,
        fac,
        composite,
        tuple(candidates),
        hits,
        subproblem,
        AUDIT_CAVEAT,
    )
