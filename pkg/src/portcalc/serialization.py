"""File formats: certificates, exclusion certificates, and search snapshots.

All integers are serialized as decimal strings, never as native JSON numbers,
so files round-trip bit-exactly at any size.  Emission is canonical (sorted
keys, fixed indentation, trailing newline): emit -> parse -> emit is
byte-identical.
"""

from __future__ import annotations

import json
from typing import Any

from .arith import PrimeFactorization
from .errors import ResumeMismatch
from .ports import Port
from .primality import GeneralFactorization, PocklingtonCertificate
from .search import (
    BranchRecord,
    DiscriminantProblem,
    ExclusionWitness,
    PrefixScanResult,
    PrefixSearchConfig,
    ResumeState,
    SieveExclusionCertificate,
    SieveModulus,
)


def canonical_json_bytes(obj: Any) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("ascii")


def _s(n: int) -> str:
    return str(n)


def _i(s: str) -> int:
    return int(s)


# ---------------------------------------------------------------------------
# Pocklington certificate files
# ---------------------------------------------------------------------------


def certificate_to_obj(cert: PocklingtonCertificate) -> dict:
    factors = [] if cert.p_minus_1 is None else [
        [_s(p), _s(e)] for p, e in cert.p_minus_1.factors
    ]
    return {
        "p": _s(cert.p),
        "base": _s(cert.base),
        "p_minus_1_factors": factors,
        "children": [certificate_to_obj(ch) for ch in cert.children],
        "leaf": cert.leaf,
    }


def certificate_from_obj(obj: dict) -> PocklingtonCertificate:
    p = _i(obj["p"])
    factors = tuple((_i(q), _i(e)) for q, e in obj["p_minus_1_factors"])
    p_minus_1 = None
    if factors:
        n = 1
        for q, e in factors:
            n *= q**e
        p_minus_1 = GeneralFactorization(n, factors, True)
    return PocklingtonCertificate(
        p,
        _i(obj["base"]),
        p_minus_1,
        tuple(certificate_from_obj(ch) for ch in obj["children"]),
        bool(obj["leaf"]),
    )


def certificate_to_bytes(cert: PocklingtonCertificate) -> bytes:
    return canonical_json_bytes(certificate_to_obj(cert))


def certificate_from_bytes(data: bytes) -> PocklingtonCertificate:
    return certificate_from_obj(json.loads(data))


# ---------------------------------------------------------------------------
# Exclusion certificate files
# ---------------------------------------------------------------------------


def exclusion_to_obj(cert: SieveExclusionCertificate) -> dict:
    prob = cert.problem
    prefix = list(prob.port.R_fact.primes) if prob.port.R_fact is not None else None
    return {
        "port": {"R": _s(prob.port.R), "c": _s(prob.port.c)},
        "prefix": [_s(p) for p in prefix] if prefix is not None else None,
        "m": _s(prob.m),
        "P0": _s(prob.P0),
        "S0": _s(prob.S0),
        "U": _s(prob.U),
        "T": _s(prob.T),
        "moduli": [
            {
                "l": _s(m.l),
                "qr_set": [_s(x) for x in m.qr_set],
                "allowed_classes": [_s(x) for x in m.allowed_classes],
            }
            for m in cert.moduli
        ],
        "verdict": cert.verdict,
        "witness": None
        if cert.witness is None
        else {"t": _s(cert.witness.t), "D": _s(cert.witness.D), "l": _s(cert.witness.l)},
    }


def exclusion_from_obj(obj: dict) -> SieveExclusionCertificate:
    R_fact = None
    if obj.get("prefix") is not None:
        R_fact = PrimeFactorization(tuple(_i(p) for p in obj["prefix"]))
    port = Port(_i(obj["port"]["R"]), _i(obj["port"]["c"]), R_fact)
    prob = DiscriminantProblem(
        port, _i(obj["m"]), _i(obj["P0"]), _i(obj["S0"]), _i(obj["U"]), _i(obj["T"])
    )
    moduli = tuple(
        SieveModulus(
            _i(m["l"]),
            tuple(_i(x) for x in m["qr_set"]),
            tuple(_i(x) for x in m["allowed_classes"]),
        )
        for m in obj["moduli"]
    )
    witness = None
    if obj.get("witness") is not None:
        w = obj["witness"]
        witness = ExclusionWitness(_i(w["t"]), _i(w["D"]), _i(w["l"]))
    return SieveExclusionCertificate(prob, moduli, obj["verdict"], witness)


def exclusion_to_bytes(cert: SieveExclusionCertificate) -> bytes:
    return canonical_json_bytes(exclusion_to_obj(cert))


def exclusion_from_bytes(data: bytes) -> SieveExclusionCertificate:
    return exclusion_from_obj(json.loads(data))


# ---------------------------------------------------------------------------
# Search progress snapshots (resume support)
# ---------------------------------------------------------------------------


def _branch_to_obj(rec: BranchRecord) -> dict:
    return {
        "q1": _s(rec.q1),
        "last_completed_prefix": None
        if rec.last_completed_prefix is None
        else [_s(p) for p in rec.last_completed_prefix],
        "prefixes_seen": _s(rec.prefixes_seen),
        "t_checked": _s(rec.t_checked),
        "square_hits": _s(rec.square_hits),
    }


def _branch_from_obj(obj: dict, complete: bool) -> BranchRecord:
    last = obj["last_completed_prefix"]
    return BranchRecord(
        _i(obj["q1"]),
        None if last is None else tuple(_i(p) for p in last),
        _i(obj["prefixes_seen"]),
        _i(obj["t_checked"]),
        _i(obj["square_hits"]),
        complete,
    )


def snapshot_to_obj(result: PrefixScanResult) -> dict:
    cfg = result.config
    return {
        "config": {
            "R": _s(cfg.port.R),
            "c": _s(cfg.port.c),
            "m": _s(cfg.m),
            "k": _s(cfg.k),
            "t_cap": _s(cfg.t_cap),
        },
        "records": [_branch_to_obj(b) for b in result.branches],
        "completed": [_s(b.q1) for b in result.branches if b.complete],
        "hits": [
            {"prefix": [_s(p) for p in prefix], "t": _s(t), "u": _s(u), "v": _s(v)}
            for prefix, t, u, v in result.hits
        ],
    }


def snapshot_to_bytes(result: PrefixScanResult) -> bytes:
    return canonical_json_bytes(snapshot_to_obj(result))


def snapshot_resume_state(data: bytes, config: PrefixSearchConfig) -> ResumeState:
    """Parse a snapshot into the state run_prefix_scan resumes from.

    Raises ResumeMismatch when the snapshot was produced for a different
    search configuration.
    """
    obj = json.loads(data)
    cfg = obj["config"]
    stated = (_i(cfg["R"]), _i(cfg["c"]), _i(cfg["m"]), _i(cfg["k"]), _i(cfg["t_cap"]))
    current = (config.port.R, config.port.c, config.m, config.k, config.t_cap)
    if stated != current:
        raise ResumeMismatch(f"snapshot is for configuration {stated}, current is {current}")
    completed = {_i(q) for q in obj.get("completed", [])}
    branches = {
        _i(rec["q1"]): _branch_from_obj(rec, _i(rec["q1"]) in completed)
        for rec in obj["records"]
    }
    hits = tuple(
        (tuple(_i(p) for p in h["prefix"]), _i(h["t"]), _i(h["u"]), _i(h["v"]))
        for h in obj.get("hits", [])
    )
    return ResumeState(branches, hits)
