"""Core squarefree arithmetic: factorization, derivative, defect chains."""

import random

import pytest

from portcalc.arith import (
    DefectState,
    PrimeFactorization,
    chain_completion_prime,
    defect,
    defect_step,
    derivative,
    factor_squarefree,
    is_ppn,
    reciprocal_identity_holds,
)
from portcalc.errors import DuplicatePrime, NonpositiveDefect, NotSquarefree
from portcalc.known import KNOWN_PPNS, PPN_9, PPN_9_FACTORS, PPN_10_LARGEST_PRIME
from portcalc.primality import small_primes


def pf(*primes):
    return PrimeFactorization(tuple(primes))


def test_factor_squarefree_small():
    assert factor_squarefree(42).primes == (2, 3, 7)
    assert factor_squarefree(113322).primes == (2, 3, 11, 17, 101)
    assert factor_squarefree(1).primes == ()


def test_factor_squarefree_rejects_squares():
    with pytest.raises(NotSquarefree):
        factor_squarefree(12)
    with pytest.raises(NotSquarefree):
        factor_squarefree(49)
    with pytest.raises(ValueError):
        factor_squarefree(0)


def test_prime_factorization_validation():
    with pytest.raises(ValueError):
        PrimeFactorization((3, 2))
    with pytest.raises(ValueError):
        PrimeFactorization((2, 2))
    with pytest.raises(ValueError):
        PrimeFactorization((2, 9))


def test_derivative_examples():
    assert derivative(pf(2, 3)) == 5
    assert derivative(pf(2, 3, 7, 43)) == 1805
    assert derivative(pf(157, 1979, 10093, 16879)) == 372268700908
    assert derivative(pf()) == 0


def test_defect_examples():
    assert defect(pf(2, 3)) == 1
    assert defect(pf(2, 3, 11, 17, 101)) == 797
    assert defect(pf(2,)) == 1


def test_defect_step_examples():
    s = DefectState.of(pf(2, 3))
    assert defect_step(s, 11) == DefectState(pf(2, 3, 11), 5)
    assert defect_step(DefectState.of(pf(2)), 3) == DefectState(pf(2, 3), 1)
    assert defect_step(DefectState.of(pf(2, 3, 7)), 43) == DefectState(pf(2, 3, 7, 43), 1)
    with pytest.raises(DuplicatePrime):
        defect_step(s, 3)


def test_chain_completion_examples():
    assert chain_completion_prime(DefectState.of(pf(2, 3, 7))) == 43
    assert chain_completion_prime(DefectState(pf(2, 3, 11), 5)) is None
    assert chain_completion_prime(DefectState.of(PPN_9_FACTORS)) == PPN_10_LARGEST_PRIME
    with pytest.raises(NonpositiveDefect):
        chain_completion_prime(DefectState.of(pf(2, 3, 5)))  # defect = -1


def test_is_ppn_examples():
    assert is_ppn(pf(2, 3, 7, 43))
    assert is_ppn(pf(2, 3, 11, 23, 31))
    assert not is_ppn(pf(2, 5))


def test_rational_identity_iff_is_ppn():
    for n in KNOWN_PPNS[:7] + (PPN_9,):
        f = factor_squarefree(n)
        assert is_ppn(f) and reciprocal_identity_holds(f)
    for f in (pf(2, 5), pf(3, 7), pf(2, 3, 5)):
        assert not is_ppn(f) and not reciprocal_identity_holds(f)


def test_product_rule():
    rng = random.Random(7)
    pool = [p for p in small_primes() if p <= 10**4]
    for _ in range(200):
        primes = rng.sample(pool, rng.randint(2, 8))
        cut = rng.randint(1, len(primes) - 1)
        A = PrimeFactorization(tuple(sorted(primes[:cut])))
        B = PrimeFactorization(tuple(sorted(primes[cut:])))
        AB = A.merge(B)
        assert derivative(AB) == A.value * derivative(B) + B.value * derivative(A)


def test_defect_step_matches_recomputation():
    rng = random.Random(11)
    pool = [p for p in small_primes() if p <= 10**4]
    for _ in range(1000):
        primes = tuple(sorted(rng.sample(pool, rng.randint(1, 6))))
        state = DefectState.of(PrimeFactorization(primes))
        q = rng.choice(pool)
        if q in primes:
            continue
        stepped = defect_step(state, q)
        assert stepped.a == defect(stepped.D)


def test_is_ppn_iff_defect_one():
    rng = random.Random(13)
    pool = [p for p in small_primes() if p <= 500]
    for _ in range(300):
        primes = tuple(sorted(rng.sample(pool, rng.randint(1, 5))))
        f = PrimeFactorization(primes)
        assert is_ppn(f) == (defect(f) == 1)
