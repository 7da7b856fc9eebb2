"""Checkers for the five-prime splitting hypersurface.

A terminal port (R, c, p) has c*p - R = 1; replacing p by five primes means
a prime point on c*x1..x5 - R*sum_i prod_{j!=i} x_j = 1.  Two finite facts
make the replacement plausible everywhere: the congruence is solvable in
nonzero residues modulo every prime, and the real surface has an unbounded
positive branch with all coordinates above p.  (Finding prime points is an
open problem; these are the checkable halves.)
"""

from fractions import Fraction

from portcalc import TerminalPort, eval_F, local_bruteforce, local_witness, real_witness
from portcalc.known import PPN_9_FACTORS, PPN_10_LARGEST_PRIME

big = TerminalPort.from_ambient(PPN_9_FACTORS, PPN_10_LARGEST_PRIME)
print(f"terminal port: R = {big.R}, c = {big.c}, p = {big.p}")

print()
print("local witnesses (nonzero residue solutions) at small moduli:")
for l in (2, 3, 5, 7, 11, 13):
    w = local_witness(big, l)
    print(f"  mod {l:>2}: x = {w}, F(x) mod {l} = {eval_F(big, w, modulus=l)}")

print()
print("exhaustive counts of nonzero solutions for a toy terminal port (6, 1, 7):")
toy = TerminalPort(6, 1, 7)
for l in (2, 3, 5, 7, 11):
    note = "  <- modulus equals the terminal prime" if l == toy.p else ""
    print(f"  mod {l:>2}: {local_bruteforce(toy, l)} solutions{note}")

print()
print("real branch: four equal coordinates 1/s and a fifth 1/y5")
for name, tp in (("toy", toy), ("big", big)):
    y5 = Fraction(tp.c, tp.R) / 10**6
    w = real_witness(tp, y5)
    print(f"  {name}: s = {float(w.s):.6g} (limit c/(4R) = {float(Fraction(tp.c, 4 * tp.R)):.6g}),")
    print(f"       residual = {float(w.residual):.3g}, all coordinates exceed p: {w.all_exceed_p}")
