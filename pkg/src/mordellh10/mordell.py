"""The Mordell curve family y^2 = x^3 + a.

Twists, torsion, traces of Frobenius, conductors, real periods and
bounded-height point search.  Curves here have CM by Z[zeta_3] (j = 0),
which the a_p code exploits: a_p = 0 for good p = 2 (mod 3), and for
good p = 1 (mod 3) the trace lies in the six-element set
{+-L, +-(L+9M)/2, +-(L-9M)/2} with 4p = L^2 + 27 M^2; the right candidate
is singled out by explicit point arithmetic.  The naive character-sum
count stays as the contract and as the oracle for the fast path.
"""
from __future__ import annotations

import functools
import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import arith
from .tate import LocalReduction, Model, tate_local


class CoprimalityWarning(UserWarning):
    """Twisting by D sharing a factor with a is legal but worth flagging."""


@dataclass(frozen=True)
class MordellCurve:
    """y^2 = x^3 + a with a != 0."""

    a: int

    def __post_init__(self) -> None:
        if self.a == 0:
            raise ValueError("a = 0 is singular")

    @property
    def discriminant(self) -> int:
        return -432 * self.a * self.a

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"MordellCurve(a={self.a})"


@dataclass(frozen=True)
class RationalPoint:
    """An affine rational point x = m/e^2, y = n/e^3 with gcd(m, e) = 1."""

    m: int
    n: int
    e: int

    def __post_init__(self) -> None:
        if self.e <= 0:
            raise ValueError("denominator parameter e must be positive")
        if math.gcd(self.m, self.e) != 1:
            raise ValueError("representation is not primitive")

    @property
    def x(self) -> Fraction:
        return Fraction(self.m, self.e * self.e)

    @property
    def y(self) -> Fraction:
        return Fraction(self.n, self.e**3)

    def on_curve(self, curve: MordellCurve) -> bool:
        return self.n * self.n == self.m**3 + curve.a * self.e**6


@dataclass(frozen=True)
class TorsionClass:
    order: int  # one of 1, 2, 3, 6
    generators: tuple[RationalPoint, ...]


def rational_point_from_xy(curve: MordellCurve, x: Fraction, y: Fraction) -> RationalPoint:
    """Wrap exact affine coordinates as a RationalPoint (denominators of a
    curve point are always (e^2, e^3) for one e)."""
    if y * y != x**3 + curve.a:
        raise ValueError("coordinates do not satisfy the curve equation")
    e2 = x.denominator
    e = math.isqrt(e2)
    if e * e != e2:
        raise ArithmeticError("x-denominator of a curve point must be a square")
    n = y * e**3
    if n.denominator != 1:
        raise ArithmeticError("y-denominator incompatible with x-denominator")
    return RationalPoint(m=x.numerator, n=int(n), e=e)


def minimal_constant(a: int) -> tuple[int, int]:
    """Strip sixth powers: a = a0 * t^6 with a0 sixth-power-free."""
    return arith.strip_power(a, 6)


def cubic_twists(curve: MordellCurve, d: int) -> tuple[MordellCurve, MordellCurve]:
    """The two cubic twists (E_{a D^2}, E_{a D^4}) for cube-free D > 1."""
    if d <= 1:
        raise ValueError("twist parameter must be an integer > 1")
    if not arith.is_cube_free(d):
        raise ValueError(f"{d} is not cube-free")
    if math.gcd(curve.a, d) != 1:
        warnings.warn(
            f"twisting y^2 = x^3 + {curve.a} by D = {d} with gcd > 1",
            CoprimalityWarning,
            stacklevel=2,
        )
    return MordellCurve(curve.a * d * d), MordellCurve(curve.a * d**4)


def isogenous_constant(curve: MordellCurve) -> MordellCurve:
    """Image of the rational 3-isogeny: y^2 = x^3 - 27 a."""
    return MordellCurve(-27 * curve.a)


def isogeny_image(curve: MordellCurve, pt: RationalPoint) -> RationalPoint:
    """Image of a point under the 3-isogeny E_a -> E_{-27a}:
    (x, y) -> ((x^3 + 4a)/x^2, y (x^3 - 8a)/x^3)."""
    a = curve.a
    x, y = pt.x, pt.y
    if x == 0:
        raise ValueError("x = 0 lies in the isogeny kernel")
    xx = (x**3 + 4 * a) / (x * x)
    yy = y * (x**3 - 8 * a) / (x**3)
    return rational_point_from_xy(isogenous_constant(curve), xx, yy)


def point_via_isogeny(curve: MordellCurve, height_bound: int) -> RationalPoint | None:
    """Point on E_a obtained by searching the 3-isogenous curve E_{-27a}
    and pushing a hit through the isogeny E_{-27a} -> E_{729a} ~ E_a.

    Rank is an isogeny invariant, so a generator can be much shorter on
    the isogenous side; the returned point still lives on E_a and is
    verified exactly.
    """
    other = isogenous_constant(curve)
    hit = point_search(other, height_bound)
    if hit is None:
        return None
    img = isogeny_image(other, hit)  # on E_{729 a}
    x, y = img.x / 9, img.y / 27
    pt = rational_point_from_xy(curve, x, y)
    if pt.x in torsion_x_values(curve):
        return None
    return pt


def torsion_class(curve: MordellCurve) -> TorsionClass:
    """Rational torsion of y^2 = x^3 + a, by the classical classification
    on the sixth-power-free part: order 6 iff a0 = 1; order 3 iff a0 is a
    square != 1 or a0 = -432; order 2 iff a0 is a cube != 1; else trivial."""
    a0, t = minimal_constant(curve.a)

    def pt(x0: int, y0: int) -> RationalPoint:
        return RationalPoint(m=x0 * t * t, n=y0 * t**3, e=1)

    if a0 == 1:
        return TorsionClass(6, (pt(2, 3), pt(0, 1), pt(-1, 0)))
    if a0 == -432:
        return TorsionClass(3, (pt(12, 36),))
    if a0 > 0:
        r = math.isqrt(a0)
        if r * r == a0:
            return TorsionClass(3, (pt(0, r),))
    c = _icbrt(a0)
    if c is not None and c**3 == a0:
        return TorsionClass(2, (pt(-c, 0),))
    return TorsionClass(1, ())


def _icbrt(n: int) -> int | None:
    return arith.exact_cube_root(n)


def torsion_x_values(curve: MordellCurve) -> set[Fraction]:
    """x-coordinates of all nonzero rational torsion points."""
    cls = torsion_class(curve)
    xs: set[Fraction] = set()
    for g in cls.generators:
        xs.add(g.x)
    a0, t = minimal_constant(curve.a)
    if a0 == 1:
        # full 6-torsion: x in {2, 0, -1} scaled
        xs.update(Fraction(v * t * t) for v in (2, 0, -1))
    return xs


# ---------------------------------------------------------------------------
# Traces of Frobenius
# ---------------------------------------------------------------------------

_NAIVE_CUTOFF = 500


def ap_naive(curve: MordellCurve, p: int) -> int:
    """Character-sum point count: a_p = -sum_x chi(x^3 + a) for good p.

    O(p) per prime; the contract and the oracle for the CM fast path.
    """
    a0, _ = minimal_constant(curve.a)
    if p < 2 or not arith.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if (6 * a0) % p == 0:
        raise ValueError(f"p = {p} is not a prime of good reduction")
    # chi table via the square table
    chi = bytearray(p)  # 0 = non-residue marker, handled below
    for i in range(1, (p + 1) // 2 + 1):
        chi[i * i % p] = 1
    total = 0
    k = a0 % p
    for x in range(p):
        v = (x * x % p * x + k) % p
        if v == 0:
            continue
        total += 1 if chi[v] else -1
    return -total


def _cornacchia_3(p: int) -> tuple[int, int]:
    """p = x^2 + 3 y^2 for a prime p = 1 (mod 3)."""
    r = arith.sqrt_mod(p - 3, p)
    if r is None:
        raise ValueError(f"{p} is not 1 mod 3")
    for root in (r, p - r):
        a, b = p, root
        while b * b > p:
            a, b = b, a % b
        y2, rem = divmod(p - b * b, 3)
        if rem == 0:
            y = math.isqrt(y2)
            if y * y == y2:
                return b, y
    raise ArithmeticError(f"Cornacchia failed at {p}")


def _ec_add(P, Q, k: int, p: int):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = 3 * x1 * x1 * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def _ec_mul(n: int, P, k: int, p: int):
    if n < 0:
        n = -n
        if P is not None:
            P = (P[0], (-P[1]) % p)
    R = None
    while n:
        if n & 1:
            R = _ec_add(R, P, k, p)
        P = _ec_add(P, P, k, p)
        n >>= 1
    return R


def _random_point(k: int, p: int, rng: random.Random):
    while True:
        x = rng.randrange(p)
        rhs = (x * x % p * x + k) % p
        if rhs == 0:
            continue
        if pow(rhs, (p - 1) // 2, p) != 1:
            continue
        return (x, arith.sqrt_mod(rhs, p))


def _ap_good_cm(k: int, p: int) -> int:
    """Trace at a good p = 1 (mod 3) via the CM candidate set."""
    x, y = _cornacchia_3(p)
    A, B = x + y, 2 * y  # norm form A^2 - A B + B^2 = p
    cands = sorted({2 * A - B, B - 2 * A, A + B, -A - B, 2 * B - A, A - 2 * B})
    if len(cands) != 6:
        raise ArithmeticError(f"degenerate CM candidate set at p = {p}")
    rng = random.Random(p * 0x9E3779B97F4A7C15 ^ (k % p))
    survivors = cands
    for _ in range(64):
        if len(survivors) == 1:
            return survivors[0]
        P = _random_point(k % p, p, rng)
        Q = _ec_mul(p + 1, P, k % p, p)
        survivors = [t for t in survivors if Q == _ec_mul(t, P, k % p, p)]
        if not survivors:
            raise ArithmeticError(f"all CM candidates eliminated at p = {p}")
    # pathological sampling; fall back to the oracle
    return ap_naive(MordellCurve(k), p)


def _count_points_small(model: Model, p: int) -> int:
    """#E(F_p) for a general Weierstrass model, p small (2 or 3 here)."""
    a1, a2, a3, a4, a6 = model
    count = 1  # infinity
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0:
                count += 1
    return count


@functools.lru_cache(maxsize=None)
def _local_reduction(a0: int, p: int) -> LocalReduction:
    return tate_local((0, 0, 0, 0, a0), p)


def ap(curve: MordellCurve, p: int) -> int:
    """Trace of Frobenius a_p (bad primes give the local L-factor
    coefficient: +-1 multiplicative, 0 additive)."""
    a0, _ = minimal_constant(curve.a)
    if not arith.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if (6 * a0) % p:
        if p % 3 == 2:
            return 0
        if p <= _NAIVE_CUTOFF:
            return ap_naive(curve, p)
        return _ap_good_cm(a0, p)
    red = _local_reduction(a0, p)
    if red.conductor_exponent == 0:
        return p + 1 - _count_points_small(red.minimal_model, p)
    if red.conductor_exponent == 1:
        return 1 if red.split else -1
    return 0


def conductor(curve: MordellCurve) -> int:
    """Conductor of the minimal model, via Tate's algorithm at every
    prime dividing 6 a0."""
    a0, _ = minimal_constant(curve.a)
    n = 1
    bad = {2, 3}
    bad.update(q for q, _ in arith.factorize(a0) if q >= 5)
    for p in sorted(bad):
        red = _local_reduction(a0, p)
        n *= p**red.conductor_exponent
    return n


def minimal_scale(curve: MordellCurve) -> int:
    """u with Delta(raw model) = u^12 * Delta(global minimal model)."""
    a0, t = minimal_constant(curve.a)
    u = t
    for p in (2, 3):
        u *= _local_reduction(a0, p).scale
    return u


# ---------------------------------------------------------------------------
# Real period
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _period_raw(a0: int) -> float:
    """Integral of dx / sqrt(x^3 + a0) over the single real component.

    With x = x0 + u^2 (x0 the real root), the integrand becomes
    2 / sqrt(u^4 + 3 x0 u^2 + 3 x0^2), which is smooth: no endpoint
    singularity and no cancellation for large |a0|.
    """
    from scipy.integrate import quad

    x0 = -math.copysign(abs(a0) ** (1.0 / 3.0), a0)

    def f(u: float) -> float:
        u2 = u * u
        return 2.0 / math.sqrt(u2 * u2 + 3 * x0 * u2 + 3 * x0 * x0)

    val, _err = quad(f, 0.0, math.inf, epsabs=1e-13, epsrel=1e-12, limit=400)
    return val


def real_period(curve: MordellCurve, tol: float = 1e-9) -> float:
    """Real period of the global minimal model, to absolute accuracy tol."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    a0, _ = minimal_constant(curve.a)
    omega = _period_raw(a0) * minimal_scale(MordellCurve(a0))
    return omega


# ---------------------------------------------------------------------------
# Point search
# ---------------------------------------------------------------------------


def point_search(curve: MordellCurve, height_bound: int) -> RationalPoint | None:
    """Exhaustive non-torsion point search: denominators e <= bound^(1/3)+1,
    numerators |m| <= bound.  Deterministic tie-break: smallest e, then
    smallest |m|, then nonnegative n."""
    if height_bound < 1:
        raise ValueError("height bound must be >= 1")
    k = curve.a
    emax = _icbrt_floor(height_bound) + 1
    tors = torsion_x_values(curve)
    for e in range(1, emax + 1):
        ke6 = k * e**6
        hit = _search_numerators(k, e, ke6, height_bound, tors)
        if hit is not None:
            return hit
    return None


def _icbrt_floor(n: int) -> int:
    return arith.icbrt(n)


def _search_numerators(
    k: int, e: int, ke6: int, bound: int, tors: set[Fraction]
) -> RationalPoint | None:
    import numpy as np

    # int64 overflow guard; fall back to exact ints when values get huge
    if abs(ke6) + bound**3 < 2**62:
        ms = np.arange(-bound, bound + 1, dtype=np.int64)
        vals = ms * ms * ms + ke6
        mask = vals >= 0
        cand_m = ms[mask]
        cand_v = vals[mask]
        roots = np.rint(np.sqrt(cand_v.astype(np.float64))).astype(np.int64)
        sq = roots * roots == cand_v
        near = ~sq & ((roots + 1) * (roots + 1) == cand_v)
        roots = np.where(near, roots + 1, roots)
        sq |= near
        near = ~sq & ((roots - 1) * (roots - 1) == cand_v)
        roots = np.where(near, roots - 1, roots)
        sq |= near
        pairs = sorted(
            (int(m), int(r))
            for m, r in zip(cand_m[sq], roots[sq])
        )
    else:
        pairs = []
        for m in range(-bound, bound + 1):
            v = m**3 + ke6
            if v < 0:
                continue
            r = math.isqrt(v)
            if r * r == v:
                pairs.append((m, r))

    best: tuple[int, int, int] | None = None  # sort key (|m|, sign, n)
    best_pt: RationalPoint | None = None
    for m, n in pairs:
        if math.gcd(m, e) != 1:
            continue
        if n * n != m**3 + ke6:  # exact re-check (floats only preselect)
            continue
        if Fraction(m, e * e) in tors:
            continue
        key = (abs(m), 0 if m >= 0 else 1, n)
        if best is None or key < best:
            best = key
            best_pt = RationalPoint(m=m, n=n, e=e)
    return best_pt
