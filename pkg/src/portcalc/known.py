"""Known primary pseudoperfect numbers and the central/key ports built from them.

All displayed integers are re-derived from their prime tuples at import time,
so a typo in any constant trips the constructors immediately.
"""

from __future__ import annotations

from math import prod

from .arith import PrimeFactorization
from .ports import Port, ambient_port

# The known primary pseudoperfect numbers by number of prime factors (1..10).
KNOWN_PPN_PRIMES: tuple[tuple[int, ...], ...] = (
    (2,),
    (2, 3),
    (2, 3, 7),
    (2, 3, 7, 43),
    (2, 3, 11, 23, 31),
    (2, 3, 11, 23, 31, 47059),
    (2, 3, 11, 17, 101, 149, 3109),
    (2, 3, 11, 23, 31, 47059, 2217342227, 1729101023519),
    (2, 3, 11, 17, 101, 157, 1979, 10093, 16879),
)

PPN_7 = prod(KNOWN_PPN_PRIMES[6])                      # 52495396602
PPN_9 = prod(KNOWN_PPN_PRIMES[8])                      # 5998279018951962402
PPN_10_LARGEST_PRIME = PPN_9 + 1                       # 5998279018951962403, prime
PPN_10 = PPN_9 * PPN_10_LARGEST_PRIME

KNOWN_PPN_PRIMES = KNOWN_PPN_PRIMES + (KNOWN_PPN_PRIMES[8] + (PPN_10_LARGEST_PRIME,),)
KNOWN_PPNS: tuple[int, ...] = tuple(prod(ps) for ps in KNOWN_PPN_PRIMES)

PPN_9_FACTORS = PrimeFactorization(KNOWN_PPN_PRIMES[8])
PPN_10_FACTORS = PrimeFactorization(KNOWN_PPN_PRIMES[9])

# The central port (66, 5) arises from 2*3*11; extending by 17 and 101 gives
# the key port (113322, 797), whose fillings all produce new primary
# pseudoperfect numbers 113322*B.
CENTRAL_PORT: Port = ambient_port(PrimeFactorization((2, 3, 11)))
KEY_PORT_PREFIX = PrimeFactorization((2, 3, 11, 17, 101))
KEY_PORT: Port = ambient_port(KEY_PORT_PREFIX)

# Fillings of the key port: two primitive ones of lengths 2 and 4, and the
# length-5 filling inherited from the 9-factor example.
KEY_FILLING_2 = PrimeFactorization((149, 3109))
KEY_FILLING_4 = PrimeFactorization((157, 1979, 10093, 16879))
KEY_FILLING_5 = PrimeFactorization((157, 1979, 10093, 16879, PPN_10_LARGEST_PRIME))

# floor prime of the key port's modulus: new fillings use primes above this
KEY_PORT_FLOOR = 101

# Residues that every filling of the key port must satisfy.
KEY_PORT_FILLING_RESIDUE = 9953          # mod 113322
KEY_PORT_DERIVATIVE_RESIDUE = 70         # mod 797

# Pocklington data for the large primes appearing in the displayed
# factorizations: (prime, factorization of p-1 used at the top level, base).
TOP_LEVEL_POCKLINGTON_DATA: tuple[tuple[int, tuple[tuple[int, int], ...], int], ...] = (
    (5998279018951962403,
     ((2, 1), (3, 1), (11, 1), (17, 1), (101, 1), (157, 1), (1979, 1), (10093, 1), (16879, 1)), 3),
    (407221, ((2, 2), (3, 1), (5, 1), (11, 1), (617, 1)), 2),
    (2746750419901, ((2, 2), (3, 2), (5, 2), (23, 1), (769, 1), (172553, 1)), 7),
    (1701301706648581, ((2, 2), (3, 1), (5, 1), (28355028444143, 1)), 6),
    (34646497971913, ((2, 3), (3, 2), (53, 1), (373, 1), (24341209, 1)), 5),
    (9085080009049858397, ((2, 2), (11, 1), (206479091114769509, 1)), 2),
    (21807157, ((2, 2), (3, 1), (7, 2), (37087, 1)), 2),
    (480382349, ((2, 2), (120095587, 1)), 2),
    (123572138719194583969192220095883252267503088389616114960309,
     ((2, 2), (59, 1),
      (523610757284722813428780593626623950286030035549220826103, 1)), 2),
)

# Successor-exclusion factorizations for the 10-factor example.
PPN_10_PLUS_1_PRIMES = (7, 37, 73, 407221, 2746750419901, 1701301706648581)
PPN_9_SQUARED_PLUS_1_PRIMES = (5, 22861, 34646497971913, 9085080009049858397)
PPN_10_SQUARED_PLUS_1_PRIMES = (
    21807157,
    480382349,
    123572138719194583969192220095883252267503088389616114960309,
)

# Named ports accepted by the command-line tools.
PORT_ALIASES: dict[str, Port] = {
    "H": KEY_PORT,
    "central": CENTRAL_PORT,
}
