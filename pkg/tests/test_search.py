"""Discriminant machinery, square sieve, prefix enumeration, channel audit."""

import random
from dataclasses import replace
from fractions import Fraction
from math import prod

import pytest

from portcalc.arith import PrimeFactorization
from portcalc.errors import NotCoprimePort, RangeExceedsBound, ResumeMismatch
from portcalc.known import KEY_PORT, PPN_7, PPN_10
from portcalc.ports import Port, induced_port, transition
from portcalc.primality import exact_sqrt, is_probable_prime, small_primes
from portcalc.search import (
    PrefixSearchConfig,
    SieveModulus,
    build_discriminant_problem,
    build_exclusion_certificate,
    discriminant,
    enumerate_prefixes,
    first_prime_candidates,
    h6_channel_audit,
    run_prefix_scan,
    scan_last_two,
    sieve_allowed_classes,
    verify_exclusion_certificate,
)
from portcalc.serialization import snapshot_resume_state, snapshot_to_bytes


def pf(*primes):
    return PrimeFactorization(tuple(primes))


TOY_PORT = Port(6, 1)
EXAMPLE_PREFIX = pf(409, 419, 457, 81199)


@pytest.fixture(scope="module")
def example_problem():
    return build_discriminant_problem(induced_port(KEY_PORT, EXAMPLE_PREFIX), 81199)


def test_build_problem_key_port():
    prob = build_discriminant_problem(KEY_PORT, 101)
    assert (prob.P0, prob.S0, prob.U, prob.T) == (9953, 70, 143, 31)
    assert not prob.interval_empty


def test_build_problem_example(example_problem):
    prob = example_problem
    assert prob.P0 == 695935036388423125
    assert prob.S0 == 650279490314
    assert prob.U == 1070210
    assert prob.T == 0


def test_build_problem_toy():
    prob = build_discriminant_problem(TOY_PORT, 5)
    assert (prob.P0, prob.S0, prob.U, prob.T) == (1, 0, 7, 50)
    assert scan_last_two(prob) == [(50, 7, 43)]


def test_build_problem_requires_coprimality():
    with pytest.raises(NotCoprimePort):
        build_discriminant_problem(Port(10, 5), 3)


def test_discriminant_values(example_problem):
    prob = build_discriminant_problem(KEY_PORT, 101)
    assert discriminant(prob, 4) == 8761600
    assert discriminant(example_problem, 0) == 422860631782890066126096
    assert discriminant(build_discriminant_problem(TOY_PORT, 5), 0) == -4
    with pytest.raises(ValueError):
        discriminant(prob, -1)


def test_scan_last_two_key_port():
    prob = build_discriminant_problem(KEY_PORT, 101)
    assert scan_last_two(prob) == [(4, 149, 3109)]
    assert scan_last_two(prob, range(0, 5)) == [(4, 149, 3109)]
    with pytest.raises(RangeExceedsBound):
        scan_last_two(prob, [40])
    assert scan_last_two(prob, [40], allow_beyond_bound=True) == []


def test_scan_last_two_induced():
    prob = build_discriminant_problem(induced_port(KEY_PORT, pf(157, 1979)), 1979)
    assert scan_last_two(prob, [0]) == [(0, 10093, 16879)]
    assert scan_last_two(prob) == [(0, 10093, 16879)]


def test_scan_last_two_example_empty(example_problem):
    assert scan_last_two(example_problem, [0]) == []


def test_key_port_full_hit_list_against_bruteforce():
    # enumerate all u prime with U <= u < 10^5; v solves c*u*v - R*(u+v) = 1
    prob = build_discriminant_problem(KEY_PORT, 101)
    R, c = KEY_PORT.R, KEY_PORT.c
    brute = []
    for u in small_primes():
        if u >= 10**5:
            break
        if u < prob.U:
            continue
        den = c * u - R
        num = 1 + R * u
        if den > 0 and num % den == 0:
            v = num // den
            if v > u and is_probable_prime(v):
                brute.append((u, v))
    assert brute == [(149, 3109)]
    assert [(u, v) for _, u, v in scan_last_two(prob)] == brute


def test_problem_linear_family_identity():
    # every point of the (P0 + t*R, S0 + c*t) family satisfies c*P - R*S = 1
    for prob in (
        build_discriminant_problem(KEY_PORT, 101),
        build_discriminant_problem(TOY_PORT, 3),
        build_discriminant_problem(Port(66, 5), 11),
    ):
        R, c = prob.port.R, prob.port.c
        for t in range(0, max(prob.T, 0) + 1):
            P, S = prob.P0 + t * R, prob.S0 + c * t
            assert c * P - R * S == 1


def test_scan_oracle_equivalence_random_ports():
    # brute force over prime pairs u < v both below 10^4; the scan is then
    # complete once t covers every product below 10^8
    rng = random.Random(41)
    bound = 10**4
    checked = 0
    while checked < 200:
        R = rng.randrange(10**4, 10**8)
        c = rng.randrange(1, 1000)
        from math import gcd

        if gcd(R, c) != 1:
            continue
        prob = build_discriminant_problem(Port(R, c), 2)
        if prob.U >= bound:
            continue  # no admissible pair below the bound, vacuous draw
        brute = []
        ps = [p for p in small_primes() if prob.U <= p < bound]
        for u in ps:
            den = c * u - R
            if den <= 0:
                continue
            num = 1 + R * u
            if num % den:
                continue
            v = num // den
            if u < v < bound and R % v != 0 and is_probable_prime(v):
                t, rem = divmod(u * v - prob.P0, R)
                assert rem == 0 and 0 <= t <= prob.T
                brute.append((t, u, v))
        scan_hi = min(prob.T, (bound * bound - prob.P0) // R)
        hits = scan_last_two(prob, range(scan_hi + 1)) if scan_hi >= 0 else []
        assert sorted(brute) == [h for h in hits if h[2] < bound]
        checked += 1


def test_sieve_allowed_classes(example_problem):
    qr, allowed = sieve_allowed_classes(example_problem, 11)
    assert qr == (0, 1, 3, 4, 5, 9)
    assert 0 not in allowed
    qr2, allowed2 = sieve_allowed_classes(example_problem, 2)
    assert qr2 == (0, 1) and allowed2 == (0, 1)
    # the true hit at t=4 must stay allowed at every modulus
    prob = build_discriminant_problem(KEY_PORT, 101)
    _, e3 = sieve_allowed_classes(prob, 3)
    assert 4 % 3 in e3
    for l in small_primes()[:25]:
        _, allowed = sieve_allowed_classes(prob, l)
        assert 4 % l in allowed


def test_exclusion_certificate_round_trip(example_problem):
    cert = build_exclusion_certificate(example_problem, [11])
    assert cert is not None and cert.verdict == "excluded"
    assert cert.witness is not None and cert.witness.l == 11
    assert cert.witness.D == 422860631782890066126096
    ok, why = verify_exclusion_certificate(cert)
    assert ok and why is None


def test_exclusion_certificate_empty_interval():
    # an empty interval is excluded outright regardless of the moduli
    port = transition(Port(66, 5), 67)
    prob = build_discriminant_problem(port, 67)
    if prob.T >= 0:
        pytest.skip("interval unexpectedly nonempty")
    cert = build_exclusion_certificate(prob, [11])
    assert cert is not None
    ok, why = verify_exclusion_certificate(cert)
    assert ok, why


def test_exclusion_never_built_over_true_hit():
    prob = build_discriminant_problem(KEY_PORT, 101)
    assert build_exclusion_certificate(prob) is None
    assert build_exclusion_certificate(prob, [11, 13, 17]) is None


def test_exclusion_certificate_tampering(example_problem):
    cert = build_exclusion_certificate(example_problem, [11])
    m = cert.moduli[0]
    tampered = replace(cert, moduli=(SieveModulus(m.l, m.qr_set, m.allowed_classes + (0,)),))
    ok, why = verify_exclusion_certificate(tampered)
    assert not ok and "allowed classes" in why
    tampered = replace(cert, problem=replace(cert.problem, T=1))
    ok, why = verify_exclusion_certificate(tampered)
    assert not ok
    tampered = replace(cert, verdict="open")
    ok, why = verify_exclusion_certificate(tampered)
    assert not ok
    tampered = replace(cert, witness=replace(cert.witness, D=cert.witness.D + 1))
    ok, why = verify_exclusion_certificate(tampered)
    assert not ok


def test_first_prime_interval():
    config = PrefixSearchConfig(KEY_PORT, k=6, m=101)
    cands = first_prime_candidates(config)
    assert len(cands) == 111
    assert cands[0] == 149 and cands[-1] == 829
    assert 139 not in cands
    assert cands == sorted(cands)


def test_enumerate_prefixes_k2_reduces_to_problem():
    config = PrefixSearchConfig(KEY_PORT, k=2, m=101)
    nodes = list(enumerate_prefixes(config))
    assert len(nodes) == 1
    assert nodes[0].prefix.primes == ()
    assert nodes[0].problem == build_discriminant_problem(KEY_PORT, 101)


def test_enumeration_monotone_residual_ratio():
    # appending q moves c/R down by exactly 1/q
    from itertools import islice

    config = PrefixSearchConfig(KEY_PORT, k=6, m=101, q1_min=149, q1_max=151)
    nodes = list(islice(enumerate_prefixes(config, depth=3), 200))
    assert nodes
    for node in nodes:
        ratio = Fraction(KEY_PORT.c, KEY_PORT.R)
        for q in node.prefix.primes:
            ratio -= Fraction(1, q)
        assert ratio == Fraction(node.port.c, node.port.R)


def _toy_bruteforce(k, bound=1000):
    ps = [p for p in small_primes() if 3 < p <= bound]
    out = []

    def rec(start, chosen):
        if len(chosen) == k:
            val = prod(chosen)
            if val - 6 * sum(val // p for p in chosen) == 1:
                out.append(chosen)
            return
        for i in range(start, len(ps)):
            rec(i + 1, chosen + (ps[i],))

    rec(0, ())
    return sorted(out)


@pytest.mark.parametrize("k,expected_value", [(2, 1806), (3, 47058)])
def test_toy_port_oracle_equivalence(k, expected_value):
    config = PrefixSearchConfig(TOY_PORT, k=k, m=3)
    found = []
    for node in enumerate_prefixes(config):
        for _, u, v in scan_last_two(node.problem):
            found.append(tuple(sorted(node.prefix.primes + (u, v))))
    assert sorted(found) == _toy_bruteforce(k)
    assert [6 * prod(sol) for sol in found] == [expected_value]


def test_run_prefix_scan_toy():
    config = PrefixSearchConfig(TOY_PORT, k=3, m=3)
    result = run_prefix_scan(config)
    assert result.complete
    assert result.hits == (((11,), 10, 23, 31),)
    assert all(b.complete for b in result.branches)
    assert sum(b.square_hits for b in result.branches) >= 1


def test_run_prefix_scan_worker_count_invariance():
    config = PrefixSearchConfig(TOY_PORT, k=3, m=3)
    one = run_prefix_scan(config)
    two = run_prefix_scan(replace(config, workers=2))
    assert snapshot_to_bytes(one) == snapshot_to_bytes(two)


def test_snapshot_resume_round_trip():
    config = PrefixSearchConfig(TOY_PORT, k=3, m=3)
    result = run_prefix_scan(config)
    data = snapshot_to_bytes(result)
    state = snapshot_resume_state(data, config)
    assert set(state.branches) == {b.q1 for b in result.branches}
    assert all(rec.complete for rec in state.branches.values())
    resumed = run_prefix_scan(config, resume_state=state)
    assert resumed.complete
    assert resumed.hits == result.hits
    assert snapshot_to_bytes(resumed) == data


def test_snapshot_resume_mismatch():
    config = PrefixSearchConfig(TOY_PORT, k=3, m=3)
    data = snapshot_to_bytes(run_prefix_scan(config))
    with pytest.raises(ResumeMismatch):
        snapshot_resume_state(data, replace(config, k=4))
    with pytest.raises(ResumeMismatch):
        snapshot_resume_state(data, replace(config, t_cap=5))


def test_run_prefix_scan_budget_exhaustion():
    config = PrefixSearchConfig(KEY_PORT, k=6, m=101, q1_min=149, q1_max=157)
    result = run_prefix_scan(config, budget=0.0)
    assert not result.complete
    assert any(not b.complete for b in result.branches)


def test_h6_channel_audit():
    audit = h6_channel_audit()
    assert audit.one_prime_value == PPN_10 + 1
    assert audit.one_prime_composite
    assert audit.one_prime_factorization.primes() == (
        7, 37, 73, 407221, 2746750419901, 1701301706648581,
    )
    assert len(audit.two_prime_candidates) == 8
    assert audit.two_prime_hits == ()
    assert audit.four_prime_subproblem.K == PPN_7
    assert audit.four_prime_subproblem.omega == 4
    assert audit.four_prime_subproblem.port() == Port(PPN_7, 1)
    assert "known fillings" in audit.caveat
    with pytest.raises(ValueError):
        h6_channel_audit(Port(66, 5))
