"""The rational cube-sum problem x^3 + y^3 = D.

Congruence classifiers, the birational bridge to y^2 = x^3 - 432 D^2,
exhaustive small-denominator witness search, and the hunt for cube-sum
primes in a fixed residue class mod 9d.

Verdicts for D <= 2 are refused: the correspondence "D is a cube-sum
iff y^2 = x^3 - 432 D^2 has positive rank" needs the torsion to vanish,
which fails for D in {1, 2} (their only solutions are torsion, e.g.
2 = 1^3 + 1^3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith
from .mordell import MordellCurve, RationalPoint, rational_point_from_xy

STATUS_CUBE_SUM = "CubeSum"
STATUS_NOT_CUBE_SUM = "NotCubeSum"
STATUS_UNKNOWN = "Unknown"

RULE_SYLVESTER_A = "Sylvester-a"
RULE_DV_B_I = "DV-b(i)"
RULE_MS_B_II = "MS-b(ii)"
RULE_POINT_WITNESS = "PointWitness"
RULE_L_VALUE_ZERO_RANK = "LValueZeroRank"
RULE_NONE = "None"


@dataclass(frozen=True)
class CubeSumVerdict:
    d: int
    status: str
    rule: str
    witness: tuple[Fraction, Fraction] | None = None

    def __post_init__(self) -> None:
        if self.witness is not None:
            x, y = self.witness
            if x**3 + y**3 != self.d:
                raise ValueError("witness does not satisfy x^3 + y^3 = D")


def classify_by_congruence(d: int) -> CubeSumVerdict:
    """Congruence-rule classification of a cube-free integer D > 2.

    Rules tried in order (they are mutually exclusive by residue class):
      (a)    D in {p, p^2, 9p, 9p^2}, p an odd prime = 2, 5 (mod 9)
             -> not a cube-sum.
      (b)(i) D = p prime = 4, 7 (mod 9) with 3 not a cube mod p
             -> cube-sum.
      (b)(ii) D in {lp, lp^2, pl^2} with l = 8 (mod 9) prime,
             p = 4, 7 (mod 9) prime, l not a cube mod p
             -> not a cube-sum.
    Anything else: Unknown.
    """
    if d <= 2:
        raise ValueError("verdicts need cube-free D > 2 (torsion must vanish)")
    fac = arith.factorize(d)
    if not all(e < 3 for _, e in fac):
        raise ValueError(f"{d} is not cube-free")
    odd = [(p, e) for p, e in fac if p != 3]
    three_exp = d // math.prod(p**e for p, e in odd)

    # (a): p, p^2, 9p, 9p^2 for odd p = 2, 5 (mod 9)
    if len(odd) == 1 and three_exp in (1, 9):
        p, e = odd[0]
        if p != 2 and p % 9 in (2, 5):
            return CubeSumVerdict(d, STATUS_NOT_CUBE_SUM, RULE_SYLVESTER_A)

    # (b)(i): single prime = 4, 7 (mod 9) with 3 not in F_p^3
    if len(odd) == 1 and three_exp == 1:
        p, e = odd[0]
        if e == 1 and p % 9 in (4, 7) and not arith.cubic_residue_test(3, p):
            return CubeSumVerdict(d, STATUS_CUBE_SUM, RULE_DV_B_I)

    # (b)(ii): lp, lp^2, pl^2
    if len(odd) == 2 and three_exp == 1:
        (q1, e1), (q2, e2) = odd
        for (ell, eell), (p, ep) in (((q1, e1), (q2, e2)), ((q2, e2), (q1, e1))):
            if ell % 9 == 8 and p % 9 in (4, 7) and (eell, ep) in ((1, 1), (1, 2), (2, 1)):
                if not arith.cubic_residue_test(ell, p):
                    return CubeSumVerdict(d, STATUS_NOT_CUBE_SUM, RULE_MS_B_II)

    return CubeSumVerdict(d, STATUS_UNKNOWN, RULE_NONE)


# ---------------------------------------------------------------------------
# The birational bridge x^3 + y^3 = D  <->  y^2 = x^3 - 432 D^2
# ---------------------------------------------------------------------------


def cubesum_xy_to_weierstrass(d, x, y) -> tuple[Fraction, Fraction]:
    """(X, Y) with X^3 + Y^3 = D to a point on y^2 = x^3 - 432 D^2."""
    x, y, d = Fraction(x), Fraction(y), Fraction(d)
    if x + y == 0:
        raise ValueError("X + Y = 0 maps to the point at infinity")
    if x**3 + y**3 != d:
        raise ValueError("input does not satisfy X^3 + Y^3 = D")
    w = 12 * d / (x + y)
    z = 36 * d * (x - y) / (x + y)
    return w, z


def weierstrass_to_cubesum_xy(d, w, z) -> tuple[Fraction, Fraction]:
    """Inverse map: a point on y^2 = x^3 - 432 D^2 back to (X, Y)."""
    w, z, d = Fraction(w), Fraction(z), Fraction(d)
    if w == 0:
        raise ValueError("x = 0 is not in the image of the cube-sum map")
    if z * z != w**3 - 432 * d * d:
        raise ValueError("point is not on y^2 = x^3 - 432 D^2")
    x = (36 * d + z) / (6 * w)
    y = (36 * d - z) / (6 * w)
    return x, y


def cubesum_to_point(d: int, witness: tuple) -> RationalPoint:
    """Wrap the image of a witness as a RationalPoint on E_{-432 D^2}."""
    w, z = cubesum_xy_to_weierstrass(d, *witness)
    return rational_point_from_xy(MordellCurve(-432 * d * d), w, z)


def point_to_cubesum(d: int, point: RationalPoint) -> tuple[Fraction, Fraction]:
    return weierstrass_to_cubesum_xy(d, point.x, point.y)


def cube_sum_search(d: int, bound: int) -> tuple[Fraction, Fraction] | None:
    """Exhaustive witness search for X^3 + Y^3 = D over denominators
    q <= bound and numerators |u| <= q * bound.  Returns the witness with
    the smallest denominator (canonicalised to X >= Y), or None."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if d == 0:
        raise ValueError("D must be nonzero")
    for q in range(1, bound + 1):
        target = d * q**3
        hits: list[tuple[Fraction, Fraction]] = []
        for u in range(-q * bound, q * bound + 1):
            if math.gcd(u, q) != 1:
                continue
            v3 = target - u**3
            v = arith.exact_cube_root(v3)
            if v is None:
                continue
            x, y = Fraction(u, q), Fraction(v, q)
            if x < y:
                x, y = y, x
            hits.append((x, y))
        if hits:
            return max(hits)
    return None


# ---------------------------------------------------------------------------
# Detecting cube-sum curves among Mordell constants
# ---------------------------------------------------------------------------


def cube_level(k: int) -> int | None:
    """The cube-free D > 0 with E_k isomorphic to E_{-432 D^2}, if any.

    Solves k * t^6 = -432 D^2 over t in {1, 2, 3, 6}; t beyond 6 cannot
    occur once k is sixth-power-free.
    """
    if k >= 0:
        return None
    k0, _ = arith.strip_power(k, 6)
    for t in (1, 2, 3, 6):
        num = -k0 * t**6
        d2, rem = divmod(num, 432)
        if rem or d2 <= 0:
            continue
        d = math.isqrt(d2)
        if d * d == d2 and arith.is_cube_free(d):
            return d
    return None


def cube_twist_level(k: int) -> int | None:
    """The square-free D with E_k isomorphic to E_{-432 D^3}, if any
    (sign of D matters; used for root-number cross-checks)."""
    if k == 0:
        return None
    k0, _ = arith.strip_power(k, 6)
    for t in (1, 2, 3, 6):
        num = -k0 * t**6
        d3, rem = divmod(num, 432)
        if rem:
            continue
        d = arith.exact_cube_root(d3)
        if d is not None and d != 0 and arith.is_square_free(d):
            return d
    return None


# ---------------------------------------------------------------------------
# Cube-sum primes in an arithmetic progression
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubeSumPrimeResult:
    prime: int | None
    verdict: CubeSumVerdict | None
    searched_to: int

    @property
    def found(self) -> bool:
        return self.prime is not None


def find_cubesum_prime(
    a_res: int,
    d: int,
    search_bound: int,
    *,
    witness_bound: int = 24,
    config=None,
) -> CubeSumPrimeResult:
    """Least prime l = a_res (mod 9d), l <= search_bound, that is a
    verified cube-sum (witness search first, rank evidence on
    E_{-432 l^2} as fallback).  Existence is guaranteed only in the
    limit, so running out of bound is a normal NotFound outcome.
    """
    if a_res % 9 != 8:
        raise ValueError("residue must be = 8 (mod 9)")
    if d < 1:
        raise ValueError("d must be a positive integer")
    if math.gcd(a_res, d) != 1:
        raise ValueError("residue must be coprime to d")
    modulus = 9 * d
    start = a_res % modulus
    for ell in range(start, search_bound + 1, modulus):
        if ell < 5 or not arith.is_prime(ell):
            continue
        w = cube_sum_search(ell, witness_bound)
        if w is not None:
            return CubeSumPrimeResult(
                ell, CubeSumVerdict(ell, STATUS_CUBE_SUM, RULE_POINT_WITNESS, w), ell
            )
        verdict = _analytic_cubesum_verdict(ell, config)
        if verdict is not None and verdict.status == STATUS_CUBE_SUM:
            return CubeSumPrimeResult(ell, verdict, ell)
    return CubeSumPrimeResult(None, None, search_bound)


def _analytic_cubesum_verdict(ell: int, config) -> CubeSumVerdict | None:
    """Rank evidence for E_{-432 l^2}: positive rank certifies cube-sum,
    proven rank zero certifies not-cube-sum, anything else is None."""
    from .lseries import Verdict, rank_evidence  # local import: cycle breaker

    ev = rank_evidence(MordellCurve(-432 * ell * ell), config=config)
    if ev.verdict is Verdict.POSITIVE_BY_POINT:
        witness = point_to_cubesum(ell, ev.point)
        return CubeSumVerdict(ell, STATUS_CUBE_SUM, RULE_POINT_WITNESS, witness)
    if ev.verdict is Verdict.ONE_BY_GZK:
        return CubeSumVerdict(ell, STATUS_CUBE_SUM, RULE_L_VALUE_ZERO_RANK, None)
    if ev.is_zero:
        return CubeSumVerdict(ell, STATUS_NOT_CUBE_SUM, RULE_L_VALUE_ZERO_RANK)
    return None
