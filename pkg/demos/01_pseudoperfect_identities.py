"""Walk through the known primary pseudoperfect numbers.

A squarefree n is primary pseudoperfect when 1/n + sum of 1/p over its prime
factors is exactly 1, equivalently derivative(n) = n - 1.  The first four
form a chain where each successor appends the prime n + 1.
"""

from fractions import Fraction

from portcalc import DefectState, chain_completion_prime, derivative, factor_squarefree, is_ppn
from portcalc.known import KNOWN_PPNS

print("the ten known primary pseudoperfect numbers:")
for n in KNOWN_PPNS:
    f = factor_squarefree(n)
    total = Fraction(1, n) + sum(Fraction(1, p) for p in f.primes)
    print(f"  {n} = {f}")
    print(f"      derivative = n - 1: {derivative(f) == n - 1};   1/n + sum 1/p = {total}")

print()
print("the elementary chain 2 -> 6 -> 42 -> 1806 appends q = (D + 1)/a:")
state = DefectState.of(factor_squarefree(2))
while True:
    q = chain_completion_prime(state)
    if q is None or state.D.omega >= 4:
        break
    print(f"  {state.D.value} + 1 = {q} is prime, so {state.D.value} * {q} = {state.D.value * q}")
    state = DefectState.of(state.D.append(q))

print()
print("the chain stops at 1806: 1807 = 13 * 139 is composite,")
print("so the next layer needs more than one new prime at a time.")
print("is_ppn(1806) =", is_ppn(factor_squarefree(1806)))
