"""Pocklington certificates: build, serialize, verify, and reject tampering.

With p - 1 completely factored, a single base a proving a^(p-1) = 1 (mod p)
and gcd(a^((p-1)/q) - 1, p) = 1 for every prime q | p - 1 certifies p prime.
Large factors of p - 1 carry child certificates, recursively.
"""

from dataclasses import replace

from portcalc import certify_prime, pocklington_verify
from portcalc.known import PPN_10_LARGEST_PRIME
from portcalc.serialization import certificate_from_bytes, certificate_to_bytes

p10 = PPN_10_LARGEST_PRIME
print(f"certifying {p10} (one more than the 9-factor pseudoperfect number):")
cert = certify_prime(p10)
print(f"  base {cert.base}, p - 1 factors {[q for q, _ in cert.p_minus_1.factors]}")
res = pocklington_verify(cert)
print("  per-factor gcd conditions:")
for q, g in res.gcd_rows:
    print(f"    q = {q:>6}: gcd = {g}")
print(f"  verdict: valid = {res.valid}, fully certified = {res.unconditional}")

print()
print("a deeper tree: 1701301706648581 needs a child for its 14-digit factor")
cert2 = certify_prime(1701301706648581)
print(f"  base {cert2.base}; children: {[ch.p for ch in cert2.children]}")
child = cert2.children[0]
print(f"  child {child.p}: base {child.base}, p - 1 = {child.p_minus_1.factors}")

data = certificate_to_bytes(cert2)
assert certificate_to_bytes(certificate_from_bytes(data)) == data
print(f"  JSON round-trip is byte-identical ({len(data)} bytes)")

tampered = replace(cert2, base=cert2.base + 1)
bad = pocklington_verify(tampered)
print(f"  tampered base: valid = {bad.valid} ({bad.failure})")
