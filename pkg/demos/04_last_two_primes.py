"""The last-two-prime discriminant and the modular square sieve.

Fixing everything but the final two primes u < v of a filling forces their
product into P0 + t*R and their sum into S0 + c*t, so completability reduces
to D(t) = (S0 + c*t)^2 - 4*(P0 + t*R) being a perfect square for a t in an
explicit finite interval.  Quadratic residues then exclude whole prefixes.
"""

from portcalc import (
    build_discriminant_problem,
    build_exclusion_certificate,
    discriminant,
    induced_port,
    scan_last_two,
    sieve_allowed_classes,
    verify_exclusion_certificate,
)
from portcalc.arith import PrimeFactorization
from portcalc.known import KEY_PORT

print("completing the key port itself (floor prime 101):")
prob = build_discriminant_problem(KEY_PORT, 101)
print(f"  P0 = {prob.P0}, S0 = {prob.S0}, least final prime U = {prob.U}, t <= {prob.T}")
for t, u, v in scan_last_two(prob):
    print(f"  t = {t}: D(t) = {discriminant(prob, t)} is a square; completion {u} * {v}")

print()
print("after absorbing 157 * 1979 the remaining pair appears at t = 0:")
inner = induced_port(KEY_PORT, PrimeFactorization((157, 1979)))
prob2 = build_discriminant_problem(inner, 1979)
print(f"  port ({inner.R}, {inner.c}), T = {prob2.T}, hits {scan_last_two(prob2)}")

print()
print("excluding the four-prime prefix 409 * 419 * 457 * 81199:")
port = induced_port(KEY_PORT, PrimeFactorization((409, 419, 457, 81199)))
prob3 = build_discriminant_problem(port, 81199)
print(f"  T = {prob3.T}, so only t = 0 needs checking")
D0 = discriminant(prob3, 0)
qr, allowed = sieve_allowed_classes(prob3, 11)
print(f"  D(0) = {D0}")
print(f"  D(0) mod 11 = {D0 % 11}, but the squares mod 11 are {set(qr)}")
cert = build_exclusion_certificate(prob3, [11])
print(f"  certificate verdict: {cert.verdict}; independent recheck: {verify_exclusion_certificate(cert)}")
