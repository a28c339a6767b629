"""Mordell-curve twist triples, L-series rank evidence, and Hilbert-10
unsolvability certificates for Q(zeta3, cbrt(D)) and
Q(zeta3, sqrt(D), cbrt(p))."""

from .cache import ApCache
from .cubesum import (
    CubeSumVerdict,
    classify_by_congruence,
    cube_sum_search,
    cubesum_to_point,
    find_cubesum_prime,
    point_to_cubesum,
)
from .h10 import (
    H10Certificate,
    NoDecision,
    TwistTriple,
    certify_prime_degree6,
    degree12_certificate,
    density_experiment,
    enumerate_S_sieve,
    lemma1_check,
    scan_S_prop44,
)
from .lseries import (
    LSeriesJob,
    RankConfig,
    RankEvidence,
    Verdict,
    l_derivative,
    l_value,
    prepare_job,
    rank_evidence,
    root_number,
)
from .mordell import (
    MordellCurve,
    RationalPoint,
    TorsionClass,
    ap,
    conductor,
    cubic_twists,
    isogenous_constant,
    point_search,
    real_period,
    torsion_class,
)

__version__ = "0.1.0"

__all__ = [
    "ApCache",
    "CubeSumVerdict",
    "H10Certificate",
    "LSeriesJob",
    "MordellCurve",
    "NoDecision",
    "RankConfig",
    "RankEvidence",
    "RationalPoint",
    "TorsionClass",
    "TwistTriple",
    "Verdict",
    "ap",
    "certify_prime_degree6",
    "classify_by_congruence",
    "conductor",
    "cube_sum_search",
    "cubesum_to_point",
    "cubic_twists",
    "degree12_certificate",
    "density_experiment",
    "enumerate_S_sieve",
    "find_cubesum_prime",
    "isogenous_constant",
    "l_derivative",
    "l_value",
    "lemma1_check",
    "point_search",
    "point_to_cubesum",
    "prepare_job",
    "rank_evidence",
    "real_period",
    "root_number",
    "scan_S_prop44",
    "torsion_class",
]
