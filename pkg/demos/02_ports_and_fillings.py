"""The port calculus: residual equations, transitions, and fillings.

A port (R, c) asks for squarefree B with c*B - R*derivative(B) = 1.  When
c = R - derivative(R), any filling B makes R*B primary pseudoperfect, so
hunting for new examples means filling ambient ports.
"""

from portcalc import (
    ambient_port,
    assemble_ppn,
    delta,
    factor_squarefree,
    port_congruences,
    port_primitive_audit,
    transition,
    znam_residues,
)
from portcalc.known import KEY_FILLING_2, KEY_FILLING_4, KEY_FILLING_5, KEY_PORT

print("walking from the pseudoperfect number 6 to the key port:")
port = ambient_port(factor_squarefree(6))
print(f"  start at ({port.R}, {port.c})")
for q in (11, 17, 101):
    port = transition(port, q)
    print(f"  append {q:>3} -> ({port.R}, {port.c})")

print()
print(f"the key port is ambient: 113322 - derivative(113322) = {port.c}")
b_res, d_res = port_congruences(port)
print(f"every filling B satisfies B = {b_res} (mod {port.R}) and derivative(B) = {d_res} (mod {port.c})")

print()
for B in (KEY_FILLING_2, KEY_FILLING_4):
    n = assemble_ppn(KEY_PORT, B)
    print(f"filling {B}: residual = {delta(KEY_PORT, B)}, divisor residues {znam_residues(KEY_PORT, B)}")
    print(f"  113322 * {B.value} = {n.value} is primary pseudoperfect")

print()
print("divisor audit of the four-prime filling (no proper divisor fills the port):")
audit = port_primitive_audit(KEY_PORT, KEY_FILLING_4)
for row in audit.rows:
    print(f"  {'*'.join(map(str, row.primes)):>22}  ->  {row.residual}")
print(f"verdict: {audit.verdict}")

print()
audit5 = port_primitive_audit(KEY_PORT, KEY_FILLING_5)
print(f"the five-prime filling is {audit5.verdict}: divisor {audit5.inherited_via[0]} already fills the port")
