"""Numerical L-series of Mordell curves at s = 1, and rank evidence.

The rapidly converging central-point formulas used throughout:

    L(E, 1)  = (1 + eps) * sum_{n >= 1} (a_n / n) exp(-2 pi n / sqrt(N))
    L'(E, 1) = 2 * sum_{n >= 1} (a_n / n) E1(2 pi n / sqrt(N))   when eps = -1

with N the conductor and E1 the exponential integral.  The root number
eps is measured rather than assumed: writing
g(t) = sum a_n exp(-2 pi n t / sqrt(N)), the functional equation forces
g(1/t) = eps * t^2 * g(t); the sign is accepted only when two distinct
t values (1.1 and 1.2) agree, anything else raises SignConsistencyError
(in practice that means a conductor bug, which is exactly what the check
is for).

Truncation honesty: |a_n| <= sqrt(3) n for every n (Hasse plus the
divisor bound d(n) <= sqrt(3 n)), so cutting either sum at M leaves a
tail below 2 sqrt(3) e^{-c(M+1)} / (1 - e^{-c}) with c = 2 pi / sqrt(N).
The reported tail_bound is that quantity; thresholds are expressed in
multiples of it.
"""
from __future__ import annotations

import enum
import logging
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import arith, cubesum
from .cache import ApCache
from .mordell import (
    MordellCurve,
    RationalPoint,
    ap,
    conductor,
    minimal_constant,
    point_search,
    point_via_isogeny,
    real_period,
)

log = logging.getLogger(__name__)

TAIL_FACTOR = 2.0 * math.sqrt(3.0)
TERM_CAP = 10**7
_RN_TS = (1.1, 1.2)
_EULER_GAMMA = 0.57721566490153286060651209


class DeskScaleError(ValueError):
    """The truncation length needed exceeds what a desk run should do."""


class SignConsistencyError(ArithmeticError):
    """The two-t functional-equation check did not settle on one sign."""


@dataclass(frozen=True)
class RankConfig:
    """Default knobs for the rank-evidence pipeline.

    The conductor cap is sized so that every twist-table row fits: the
    largest conductor among the (a, D) rows with D <= 100 is
    192192048 (a = 23, D = 58), so 4e8 leaves a 2x margin.
    """

    point_search_bound: int = 10_000
    tolerance: float = 1e-6
    conductor_cap: int = 4 * 10**8
    # Escalation multipliers used only when the L-values flag hidden
    # positive rank (eps = +1 with L(1) ~ 0, or eps = -1 with L'(1) ~ 0):
    # the point search is retried at bound * factor, on the curve and on
    # its 3-isogenous partner (rank is an isogeny invariant and the
    # isogeny is explicit, so hits are mapped back and verified exactly).
    escalation_factors: tuple[int, ...] = (10, 100)


DEFAULT_CONFIG = RankConfig()


class Verdict(enum.Enum):
    ZERO_BY_L_VALUE = "ZeroByLValue"
    POSITIVE_BY_POINT = "PositiveByPoint"
    ONE_BY_GZK = "OneByGZK"
    ZERO_BY_CONGRUENCE = "ZeroByCongruence"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class RankEvidence:
    verdict: Verdict
    curve_constant: int
    point: RationalPoint | None = None
    l_value: float | None = None
    l_derivative: float | None = None
    tail_bound: float | None = None
    omega: float | None = None
    l_over_omega: Fraction | None = None
    eps: int | None = None
    rule: str | None = None
    reason: str | None = None

    @property
    def is_positive(self) -> bool:
        return self.verdict in (Verdict.POSITIVE_BY_POINT, Verdict.ONE_BY_GZK)

    @property
    def is_zero(self) -> bool:
        return self.verdict in (Verdict.ZERO_BY_L_VALUE, Verdict.ZERO_BY_CONGRUENCE)


@dataclass(frozen=True)
class LSeriesJob:
    """Metadata for one truncated-series evaluation."""

    curve: MordellCurve
    conductor: int
    eps: int
    truncation: int
    tail_bound: float

    def __post_init__(self) -> None:
        if self.eps * self.eps != 1:
            raise ValueError("root number must be +-1")
        if self.truncation < 2 * math.isqrt(self.conductor):
            raise ValueError("truncation shorter than 2 sqrt(N)")


# ---------------------------------------------------------------------------
# a_p / a_n plumbing with a shared cache
# ---------------------------------------------------------------------------

_default_cache = ApCache()
_cache_lock = threading.Lock()

_primes: list[int] = []


def set_default_cache(cache: ApCache) -> None:
    global _default_cache
    with _cache_lock:
        _default_cache = cache


def get_default_cache() -> ApCache:
    return _default_cache


def _primes_up_to(limit: int) -> list[int]:
    global _primes
    if not _primes or _primes[-1] < limit:
        _primes = arith.sieve_primes(max(limit, 2 * len(_primes) + 16))
    # bisect is overkill; the list is ascending and limits are monotone-ish
    import bisect

    return _primes[: bisect.bisect_right(_primes, limit)]


def _ap_map(curve: MordellCurve, limit: int, cache: ApCache) -> dict[int, int]:
    a0, _ = minimal_constant(curve.a)
    base = MordellCurve(a0)
    out: dict[int, int] = {}
    fresh: dict[int, int] = {}
    for p in _primes_up_to(limit):
        v = cache.get(a0, p)
        if v is None:
            v = ap(base, p)
            fresh[p] = v
        out[p] = v
    if fresh:
        cache.put_many(a0, fresh)
    return out


def _an_array(curve: MordellCurve, m: int, cache: ApCache) -> np.ndarray:
    """a_n for 1 <= n <= m, multiplicative extension of the a_p."""
    a0, _ = minimal_constant(curve.a)
    apm = _ap_map(curve, m, cache)
    # bad primes are the primes of the conductor, not of 6*a0: the model
    # can gain good reduction at 2 or 3 after minimalisation
    bad = {p for p, _e in arith.factorize(conductor(curve))}
    spf = list(range(m + 1))
    for i in range(2, math.isqrt(m) + 1):
        if spf[i] == i:
            for j in range(i * i, m + 1, i):
                if spf[j] == j:
                    spf[j] = i
    an = [0] * (m + 1)
    if m >= 1:
        an[1] = 1
    power_cache: dict[int, list[int]] = {}
    for p, tp in apm.items():
        if p > m:
            continue
        powers = [1, tp]
        pk = p
        while pk * p <= m:
            pk *= p
            if p in bad:
                powers.append(powers[-1] * tp)
            else:
                powers.append(tp * powers[-1] - p * powers[-2])
        power_cache[p] = powers
    for n in range(2, m + 1):
        p = spf[n]
        e = 0
        rest = n
        while rest % p == 0:
            rest //= p
            e += 1
        an[n] = power_cache[p][e] * an[rest] if rest > 1 else power_cache[p][e]
    return np.array(an, dtype=np.float64)


# per-constant session store of computed series data
@dataclass
class _Series:
    conductor: int
    an: np.ndarray = field(repr=False)
    eps: int | None = None


_session: dict[int, _Series] = {}
_session_lock = threading.Lock()


def clear_session() -> None:
    """Drop per-curve cached series data (used by tests)."""
    with _session_lock:
        _session.clear()


def _series_for(curve: MordellCurve, m: int, cache: ApCache) -> _Series:
    a0, _ = minimal_constant(curve.a)
    with _session_lock:
        s = _session.get(a0)
    if s is None or len(s.an) - 1 < m:
        n = conductor(curve)
        an = _an_array(curve, m, cache)
        with _session_lock:
            old = _session.get(a0)
            s = _Series(conductor=n, an=an, eps=old.eps if old else None)
            _session[a0] = s
    return s


def _truncation(n_cond: int, tol: float) -> tuple[int, float]:
    c = 2.0 * math.pi / math.sqrt(n_cond)
    denom = -math.expm1(-c)  # 1 - e^{-c}
    need = math.log(TAIL_FACTOR / (tol * denom)) / c
    m = max(2 * math.isqrt(n_cond) + 1, math.ceil(need), 16)
    if m > TERM_CAP:
        raise DeskScaleError(
            f"conductor too large for desk scale (needs {m} > {TERM_CAP} terms)"
        )
    tail = TAIL_FACTOR * math.exp(-c * (m + 1)) / denom
    return m, tail


def _theta(an: np.ndarray, n_cond: int, t: float, m: int) -> float:
    ns = np.arange(1, m + 1, dtype=np.float64)
    c = 2.0 * math.pi * t / math.sqrt(n_cond)
    return float(np.dot(an[1 : m + 1], np.exp(-c * ns)))


# ---------------------------------------------------------------------------
# Exponential-integral kernel
# ---------------------------------------------------------------------------


def exponential_integral_e1(x: np.ndarray | float) -> np.ndarray | float:
    """E1(x) for x > 0: power series below 2, continued fraction above.

    Matches scipy.special.exp1 to ~1e-14 relative; kept local so the
    derivative formula is self-contained and testable against quadrature.
    """
    scalar = np.isscalar(x)
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(xs <= 0):
        raise ValueError("E1 kernel needs positive arguments")
    out = np.empty_like(xs)
    small = xs <= 2.0
    if np.any(small):
        v = xs[small]
        term = np.ones_like(v)
        acc = np.zeros_like(v)
        for k in range(1, 60):
            term *= -v / k
            acc += term / k
            if np.all(np.abs(term) < 1e-18):
                break
        out[small] = -_EULER_GAMMA - np.log(v) - acc
    big = ~small
    if np.any(big):
        v = xs[big]
        # Lentz on E1(x) = e^{-x} / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))
        tiny = 1e-300
        f = v + 1.0
        C = f.copy()
        D = np.zeros_like(v)
        for j in range(1, 80):
            a_j = -float(j * j)
            b_j = v + 2.0 * j + 1.0
            D = b_j + a_j * D
            np.copyto(D, tiny, where=np.abs(D) < tiny)
            C = b_j + a_j / C
            np.copyto(C, tiny, where=np.abs(C) < tiny)
            D = 1.0 / D
            delta = C * D
            f *= delta
            if np.all(np.abs(delta - 1.0) < 1e-16):
                break
        out[big] = np.exp(-v) / f
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Root number, L(1), L'(1)
# ---------------------------------------------------------------------------


def root_number(
    curve: MordellCurve, tol: float = 1e-6, cache: ApCache | None = None
) -> int:
    """Sign eps in the functional equation, measured at t = 1.1 and 1.2."""
    cache = cache or _default_cache
    a0, _ = minimal_constant(curve.a)
    with _session_lock:
        s = _session.get(a0)
        if s is not None and s.eps is not None:
            return s.eps
    n_cond = conductor(curve)
    m, tail = _truncation(n_cond, min(tol, 1e-8))
    m_rn = math.ceil(1.3 * m)
    if m_rn > TERM_CAP:
        raise DeskScaleError("conductor too large for desk scale")
    s = _series_for(curve, m_rn, cache)
    signs = []
    for t in _RN_TS:
        num = _theta(s.an, n_cond, 1.0 / t, m_rn)
        den = t * t * _theta(s.an, n_cond, t, m_rn)
        if abs(den) < 1e3 * tail:
            raise SignConsistencyError(
                f"theta sum too small to resolve the sign at t={t} (k={curve.a})"
            )
        ratio = num / den
        if abs(ratio - 1.0) < 0.05:
            signs.append(1)
        elif abs(ratio + 1.0) < 0.05:
            signs.append(-1)
        else:
            raise SignConsistencyError(
                f"functional equation inconsistent at t={t}: ratio={ratio:.6g} "
                f"(k={curve.a}, N={n_cond}) - likely a conductor bug"
            )
    if signs[0] != signs[1]:
        raise SignConsistencyError(
            f"sign disagrees between t values {signs} (k={curve.a}, N={n_cond})"
        )
    eps = signs[0]
    _crosscheck_birch_stephens(curve, eps)
    with _session_lock:
        stored = _session.get(a0)
        if stored is not None:
            stored.eps = eps
    return eps


def _crosscheck_birch_stephens(curve: MordellCurve, eps: int) -> None:
    """For E_{-432 D^3} with square-free D of the shapes +-(3k+2) or
    +-3(3k+1) (k > 0) the classical closed form gives eps = -1; any
    numerical disagreement is a hard error."""
    d = cubesum.cube_twist_level(curve.a)
    if d is None:
        return
    expected = birch_stephens_negative(d)
    if expected and eps != -1:
        raise SignConsistencyError(
            f"closed-form root number -1 for D={d} but measured {eps:+d}"
        )


def birch_stephens_negative(d: int) -> bool:
    """Whether the closed form pins the root number of E_{-432 d^3} at -1.

    The two square-free families with forced sign -1 are |d| = 3k + 2 and
    |d| = 3(3k + 2), i.e. |d| = 2 (mod 3) or |d| = 6 (mod 9).  (Validated
    against the measured functional-equation sign, with a unique
    conductor fit, for every square-free |d| <= 23; the complementary
    classes |d| = 1 (mod 3) and |d| = 3 (mod 9) all measure +1, e.g.
    |d| = 3 gives E_{-+16} of rank 0.)
    """
    ad = abs(d)
    return ad % 3 == 2 or ad % 9 == 6


def prepare_job(
    curve: MordellCurve, tol: float = 1e-6, cache: ApCache | None = None
) -> LSeriesJob:
    cache = cache or _default_cache
    n_cond = conductor(curve)
    m, tail = _truncation(n_cond, tol)
    eps = root_number(curve, tol, cache)
    return LSeriesJob(curve, n_cond, eps, m, tail)


def l_value(
    curve: MordellCurve, tol: float = 1e-6, cache: ApCache | None = None
) -> float:
    """L(E, 1) to within tol.

    Evaluates (1 + eps) * sum (a_n/n) e^{-2 pi n / sqrt(N)}; the split
    integral behind that identity makes the eps = -1 case vanish exactly,
    as the functional equation forces.
    """
    cache = cache or _default_cache
    n_cond = conductor(curve)
    m, _tail = _truncation(n_cond, tol)
    eps = root_number(curve, tol, cache)
    if eps == -1:
        return 0.0
    s = _series_for(curve, m, cache)
    ns = np.arange(1, m + 1, dtype=np.float64)
    c = 2.0 * math.pi / math.sqrt(n_cond)
    return 2.0 * float(np.dot(s.an[1 : m + 1] / ns, np.exp(-c * ns)))


def l_derivative(
    curve: MordellCurve, tol: float = 1e-6, cache: ApCache | None = None
) -> float:
    """L'(E, 1) to within tol; meaningful when eps = -1."""
    cache = cache or _default_cache
    n_cond = conductor(curve)
    m, _tail = _truncation(n_cond, tol)
    s = _series_for(curve, m, cache)
    ns = np.arange(1, m + 1, dtype=np.float64)
    c = 2.0 * math.pi / math.sqrt(n_cond)
    kern = exponential_integral_e1(c * ns)
    return 2.0 * float(np.dot(s.an[1 : m + 1] / ns, kern))


# ---------------------------------------------------------------------------
# Rank evidence pipeline
# ---------------------------------------------------------------------------


def rank_evidence(
    curve: MordellCurve,
    config: RankConfig | None = None,
    cache: ApCache | None = None,
) -> RankEvidence:
    """Machine-checkable rank verdict for one curve.

    Pipeline: congruence rules (cube-sum family), then bounded point
    search, then the analytic route (eps = +1: nonzero L(1) certifies
    rank 0; eps = -1: nonzero L'(1) certifies rank 1).  Undetermined is
    a first-class outcome, never a guess.
    """
    cfg = config or DEFAULT_CONFIG
    cache = cache or _default_cache
    k = curve.a

    d_eff = cubesum.cube_level(k)
    if d_eff is not None and d_eff > 2:
        verdict = cubesum.classify_by_congruence(d_eff)
        if verdict.status == cubesum.STATUS_NOT_CUBE_SUM:
            return RankEvidence(
                Verdict.ZERO_BY_CONGRUENCE, k, rule=verdict.rule,
                reason=f"D={d_eff} is not a cube-sum by rule {verdict.rule}",
            )

    pt = point_search(curve, cfg.point_search_bound)
    if pt is not None:
        return RankEvidence(Verdict.POSITIVE_BY_POINT, k, point=pt)

    n_cond = conductor(curve)
    if n_cond > cfg.conductor_cap:
        return RankEvidence(
            Verdict.UNDETERMINED, k,
            reason=f"conductor {n_cond} exceeds cap {cfg.conductor_cap}",
        )
    try:
        eps = root_number(curve, cfg.tolerance, cache)
    except (SignConsistencyError, DeskScaleError) as exc:
        return RankEvidence(Verdict.UNDETERMINED, k, reason=str(exc))

    _m, tail = _truncation(n_cond, cfg.tolerance)
    omega = real_period(curve)
    threshold = max(10.0 * tail, 1e-3 * omega)
    if eps == 1:
        val = l_value(curve, cfg.tolerance, cache)
        if abs(val) > threshold:
            ratio = _bsd_ratio(val, omega, k)
            return RankEvidence(
                Verdict.ZERO_BY_L_VALUE, k, l_value=val, tail_bound=tail,
                omega=omega, l_over_omega=ratio, eps=eps,
            )
        pt = _escalated_point_search(curve, cfg)
        if pt is not None:
            return RankEvidence(Verdict.POSITIVE_BY_POINT, k, point=pt)
        return RankEvidence(
            Verdict.UNDETERMINED, k, l_value=val, tail_bound=tail, omega=omega,
            eps=eps, reason="eps=+1 with L(1) ~ 0: likely even rank >= 2",
        )
    der = l_derivative(curve, cfg.tolerance, cache)
    if abs(der) > threshold:
        return RankEvidence(
            Verdict.ONE_BY_GZK, k, l_derivative=der, tail_bound=tail,
            omega=omega, eps=eps,
        )
    pt = _escalated_point_search(curve, cfg)
    if pt is not None:
        return RankEvidence(Verdict.POSITIVE_BY_POINT, k, point=pt)
    return RankEvidence(
        Verdict.UNDETERMINED, k, l_derivative=der, tail_bound=tail, omega=omega,
        eps=eps, reason="eps=-1 with L'(1) ~ 0: likely odd rank >= 3",
    )


def _escalated_point_search(curve: MordellCurve, cfg: RankConfig) -> RationalPoint | None:
    """Deeper search for a curve whose L-values say the rank is positive
    but whose generators were too tall for the first pass."""
    for factor in cfg.escalation_factors:
        bound = cfg.point_search_bound * factor
        pt = point_search(curve, bound)
        if pt is not None:
            return pt
        pt = point_via_isogeny(curve, bound)
        if pt is not None:
            return pt
    return None


def _bsd_ratio(val: float, omega: float, k: int) -> Fraction | None:
    """Audit-only: L(1)/Omega rounded to a small rational when it is one."""
    q = Fraction(val / omega).limit_denominator(36)
    if abs(float(q) - val / omega) < 1e-4:
        log.debug("L(1)/Omega for k=%d rounds to %s", k, q)
        return q
    log.debug("L(1)/Omega for k=%d = %.8f (no denominator <= 36)", k, val / omega)
    return None
