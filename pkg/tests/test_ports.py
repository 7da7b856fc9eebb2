"""Port calculus: residuals, transitions, composition, audits, inheritance."""

import random
from fractions import Fraction
from math import gcd

import pytest

from portcalc.arith import PrimeFactorization, defect, derivative, factor_squarefree, is_ppn
from portcalc.errors import (
    NonpositiveC,
    NonpositiveDefect,
    NotAFilling,
    NotAmbient,
    NotCoprime,
    NotCoprimePort,
    NotPPN,
    PrimeDividesModulus,
    TooManyDivisors,
)
from portcalc.known import (
    CENTRAL_PORT,
    KEY_FILLING_2,
    KEY_FILLING_4,
    KEY_FILLING_5,
    KEY_PORT,
    PPN_9,
    PPN_9_FACTORS,
    PPN_10_FACTORS,
    PPN_10_LARGEST_PRIME,
)
from portcalc.ports import (
    Filling,
    Port,
    ambient_port,
    assemble_ppn,
    delta,
    induced_port,
    inherit_one,
    inherit_three,
    inherit_two,
    inherit_two_report,
    port_congruences,
    port_primitive_audit,
    transition,
    znam_residues,
)
from portcalc.primality import next_prime, small_primes


def pf(*primes):
    return PrimeFactorization(tuple(primes))


# the fillings of the central port displayed alongside the key port
CENTRAL_FILLINGS = (
    pf(23, 31),
    pf(23, 31, 47059),
    pf(17, 101, 149, 3109),
    pf(17, 101, 157, 1979, 10093, 16879),
)
KEY_FILLINGS = (KEY_FILLING_2, KEY_FILLING_4, KEY_FILLING_5)


def test_delta_examples():
    assert delta(KEY_PORT, KEY_FILLING_2) == 1
    assert delta(Port(66, 5), pf(23, 31)) == 1
    assert delta(KEY_PORT, pf(157)) == 11807
    assert delta(KEY_PORT, pf()) == KEY_PORT.c  # empty block leaves the residual


def test_transition_examples():
    assert (transition(Port(66, 5), 17).R, transition(Port(66, 5), 17).c) == (1122, 19)
    p = transition(Port(1122, 19), 101)
    assert (p.R, p.c) == (113322, 797)
    p = transition(Port(6, 1), 11)
    assert (p.R, p.c) == (66, 5)


def test_transition_errors():
    with pytest.raises(PrimeDividesModulus):
        transition(Port(66, 5), 11)
    with pytest.raises(NonpositiveC):
        transition(Port(113322, 797), 139)  # 797*139 < 113322
    with pytest.raises(ValueError):
        transition(Port(66, 5), 15)


def test_induced_port_examples():
    p = induced_port(KEY_PORT, pf(157, 1979))
    assert (p.R, p.c) == (35209485366, 5574499)
    p = induced_port(KEY_PORT, pf(409, 419, 457, 81199))
    assert (p.R, p.c) == (720640129429941666, 673363850881)
    assert induced_port(KEY_PORT, pf()) == KEY_PORT
    with pytest.raises(NotCoprime):
        induced_port(KEY_PORT, pf(17))


def test_ambient_port_examples():
    assert (ambient_port(pf(2, 3, 11, 17, 101)).R, ambient_port(pf(2, 3, 11, 17, 101)).c) == (113322, 797)
    assert (ambient_port(pf(2, 3, 11)).R, ambient_port(pf(2, 3, 11)).c) == (66, 5)
    assert (ambient_port(pf(2, 3)).R, ambient_port(pf(2, 3)).c) == (6, 1)
    with pytest.raises(NonpositiveDefect):
        ambient_port(pf(2, 3, 5))


def test_ambience_preserved_by_transition_and_induction():
    assert transition(CENTRAL_PORT, 17).ambient
    assert induced_port(KEY_PORT, pf(157, 1979)).ambient


def test_assemble_ppn():
    assert assemble_ppn(KEY_PORT, KEY_FILLING_2).value == 52495396602
    assert assemble_ppn(KEY_PORT, KEY_FILLING_4).value == PPN_9
    assert assemble_ppn(ambient_port(pf(2, 3)), pf(7)).primes == (2, 3, 7)


def test_assemble_ppn_errors():
    with pytest.raises(NotAFilling):
        assemble_ppn(KEY_PORT, pf(157))
    with pytest.raises(NotAmbient):
        assemble_ppn(Port(113322, 797), KEY_FILLING_2)
    with pytest.raises(NotCoprime):
        assemble_ppn(KEY_PORT, pf(17, 101))


def test_znam_residues():
    assert znam_residues(KEY_PORT, KEY_FILLING_2) == [0, 0]
    assert znam_residues(ambient_port(pf(2, 3)), pf(7)) == [0]
    assert znam_residues(KEY_PORT, KEY_FILLING_4) == [0, 0, 0, 0]


def test_znam_soundness_on_corpus():
    for B in KEY_FILLINGS:
        assert all(r == 0 for r in znam_residues(KEY_PORT, B))
    for B in CENTRAL_FILLINGS:
        assert all(r == 0 for r in znam_residues(CENTRAL_PORT, B))


def test_port_congruences():
    assert port_congruences(KEY_PORT) == (9953, 70)
    assert port_congruences(Port(6, 1)) == (1, 0)
    assert port_congruences(Port(66, 5)) == (53, 4)
    with pytest.raises(NotCoprimePort):
        port_congruences(Port(10, 5))


def test_filling_congruence():
    for port, fillings in ((KEY_PORT, KEY_FILLINGS), (CENTRAL_PORT, CENTRAL_FILLINGS)):
        b_res, d_res = port_congruences(port)
        for B in fillings:
            assert delta(port, B) == 1
            assert B.value % port.R == b_res
            assert derivative(B) % port.c == d_res


def test_primitive_audit_four_prime_table():
    audit = port_primitive_audit(KEY_PORT, KEY_FILLING_4)
    assert audit.verdict == "primitive"
    table = {row.primes: row.residual for row in audit.rows}
    assert len(table) == 14
    assert table[(157,)] == 11807
    assert table[(1979, 10093, 16879)] == 243347763355591
    assert table[(157, 1979)] == 5574499


def test_primitive_audit_two_and_five():
    audit2 = port_primitive_audit(KEY_PORT, KEY_FILLING_2)
    assert audit2.verdict == "primitive" and len(audit2.rows) == 2
    audit5 = port_primitive_audit(KEY_PORT, KEY_FILLING_5)
    assert audit5.verdict == "inherited"
    assert audit5.inherited_via == (KEY_FILLING_4.value,)


def test_primitive_audit_errors():
    with pytest.raises(NotAFilling):
        port_primitive_audit(KEY_PORT, pf(157))
    with pytest.raises(TooManyDivisors):
        port_primitive_audit(KEY_PORT, KEY_FILLING_2, cap=1)


def test_filling_type():
    Filling(KEY_PORT, KEY_FILLING_2)
    with pytest.raises(NotAFilling):
        Filling(KEY_PORT, pf(157))
    with pytest.raises(NotCoprime):
        Filling(KEY_PORT, pf(17, 101))


def test_inherit_one():
    assert inherit_one(factor_squarefree(42)) == 43
    assert inherit_one(factor_squarefree(1806)) is None
    assert inherit_one(PPN_9_FACTORS) == PPN_10_LARGEST_PRIME
    with pytest.raises(NotPPN):
        inherit_one(pf(2, 5))


def test_inherit_two():
    assert [(x.p, x.q) for x in inherit_two(factor_squarefree(6))] == [(7, 43)]
    assert inherit_two(PPN_9_FACTORS) == []


def test_inherit_two_report_n10():
    report = inherit_two_report(PPN_10_FACTORS)
    assert [c.d for c in report] == [1, 21807157, 480382349, 10475773304671793]
    assert [c.reject_witness for c in report] == [7, 7, 5, 2141]
    assert not any(c.p_prime and c.q_prime for c in report)


def test_inherit_three():
    K6 = factor_squarefree(6)
    assert inherit_three(K6, 11, 23) == 31
    assert inherit_three(K6, 7, 11) is None  # negative denominator
    assert inherit_three(K6, 11, 29) is None  # non-integral quotient
    with pytest.raises(ValueError):
        inherit_three(K6, 7, 7)


def _chain_block(rng, base, avoid, maxlen=2):
    """Blocks built by legal transitions keep every induced residual >= 1."""
    cur = base
    primes = []
    while len(primes) < maxlen:
        q = next_prime(cur.R // cur.c + 1 + rng.randrange(1, 200))
        if q in primes or q in avoid or cur.R % q == 0:
            continue
        cur = transition(cur, q)
        primes.append(q)
        if rng.random() < 0.5:
            break
    return PrimeFactorization(tuple(sorted(primes)))


def test_composition_law_randomized():
    rng = random.Random(31)
    for _ in range(500):
        port = Port(rng.randrange(2, 10**6), rng.randrange(1, 10**6))
        A = _chain_block(rng, port, set())
        B = _chain_block(rng, port, set(A.primes))
        AB = A.merge(B)
        assert delta(port, AB) == delta(induced_port(port, A), B)
        assert delta(port, AB) == delta(induced_port(port, B), A)


def test_reachable_port_coprimality_randomized():
    rng = random.Random(37)
    pool = [p for p in small_primes() if p < 5000]
    done = 0
    while done < 500:
        primes = [2]
        total = Fraction(1, 2)
        while True:
            q = pool[rng.randrange(len(pool))]
            if q in primes or total + Fraction(1, q) >= 1:
                break
            primes.append(q)
            total += Fraction(1, q)
        f = PrimeFactorization(tuple(sorted(primes)))
        c = defect(f)
        if c < 1 or gcd(f.value, c) != 1:
            continue
        port = ambient_port(f)
        q = pool[rng.randrange(len(pool))]
        if f.value % q == 0 or port.c * q - port.R <= 0:
            continue
        out = transition(port, q)
        assert out.c == defect(f.append(q))
        assert gcd(out.R, out.c) == 1
        done += 1


def test_assembled_products_are_ppn():
    for B in CENTRAL_FILLINGS:
        assert is_ppn(assemble_ppn(CENTRAL_PORT, B))
    for B in KEY_FILLINGS:
        assert is_ppn(assemble_ppn(KEY_PORT, B))
