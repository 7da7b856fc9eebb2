"""Exact port calculus for primary pseudoperfect numbers.

A squarefree n is primary pseudoperfect when 1/n + sum of 1/p over its prime
factors equals 1.  The package verifies all the displayed identities and
certificates around the known examples and searches for (or excludes) new
fillings of residual equations c*B - R*derivative(B) = 1.
"""

from .arith import (
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
from .errors import PortCalcError
from .fivesplit import TerminalPort, eval_F, local_bruteforce, local_witness, real_witness
from .ports import (
    Filling,
    InheritancePair,
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
from .primality import (
    GeneralFactorization,
    PocklingtonCertificate,
    certify_prime,
    exact_sqrt,
    factorize,
    floor_sqrt,
    is_probable_prime,
    pocklington_verify,
)
from .search import (
    DiscriminantProblem,
    PrefixSearchConfig,
    SieveExclusionCertificate,
    build_discriminant_problem,
    build_exclusion_certificate,
    discriminant,
    enumerate_prefixes,
    first_prime_candidates,
    h6_channel_audit,
    run_prefix_scan,
    scan_last_two,
    sieve_allowed_classes,
    verify_exclusion_certificate,
)
from .verification import build_report

__version__ = "0.1.0"
