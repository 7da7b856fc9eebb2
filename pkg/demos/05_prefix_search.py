"""Enumerating six-prime filling prefixes with reciprocal-capacity pruning.

A six-prime filling of the key port needs four enumerated primes before the
discriminant finishes the last two.  Pruning: the next prime must keep the
residual positive, and the remaining slots must retain enough reciprocal
capacity to reach c'/R'.  The toy port (6, 1) shows the full pipeline
rediscovering 1806 and 47058 from scratch.
"""

from portcalc import PrefixSearchConfig, Port, first_prime_candidates, run_prefix_scan
from portcalc.known import KEY_PORT
from portcalc.search import h6_channel_audit

config = PrefixSearchConfig(KEY_PORT, k=6, m=101)
cands = first_prime_candidates(config)
print(f"six-prime fillings of the key port: {len(cands)} admissible first primes,")
print(f"from {cands[0]} to {cands[-1]}")

print()
print("toy pipeline on the port (6, 1):")
for k in (2, 3):
    result = run_prefix_scan(PrefixSearchConfig(Port(6, 1), k=k, m=3))
    for prefix, t, u, v in result.hits:
        primes = sorted(prefix + (u, v))
        value = 6
        for p in primes:
            value *= p
        print(f"  k = {k}: prefix {prefix}, pair ({u}, {v}) at t = {t} -> 6 * {'*'.join(map(str, primes))} = {value}")

print()
print("channels toward a six-prime filling, from the known fillings:")
audit = h6_channel_audit()
print(f"  one more prime onto the five-prime filling: {audit.one_prime_value}")
print(f"    is composite: {' * '.join(str(p) for p, _ in audit.one_prime_factorization.factors)}")
print(f"  two more primes onto the four-prime filling: {len(audit.two_prime_candidates)} divisor")
print(f"    pairs, {len(audit.two_prime_hits)} of them prime pairs")
for c in audit.two_prime_candidates:
    status = "both prime" if c.p_prime and c.q_prime else f"composite (divisor {c.reject_witness})"
    print(f"      d = {c.d}: {status}")
print(f"  four more primes onto the two-prime filling: open subproblem")
print(f"    C - {audit.four_prime_subproblem.K}*derivative(C) = 1, omega(C) = {audit.four_prime_subproblem.omega}")
print(f"  caveat: {audit.caveat}")
