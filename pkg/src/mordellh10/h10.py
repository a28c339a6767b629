"""Certificate engine for unsolvability of Hilbert's tenth problem.

Builds auditable chains of verified rank facts about Mordell twist
triples (E_a, E_{aD^2}, E_{aD^4}) and closes them with one of two
composition axioms:

  * rank-stability transfer: rk E(L) = rk E(K) > 0 makes O_K Diophantine
    in O_L, and H10 is already unsolvable over O_K = Z[zeta_3];
  * quadratic-compositum transfer: rk E(F) = 0 with rk E(K') > 0 for a
    quadratic K' makes O_L / O_F integrally Diophantine for the
    compositum L = F K'.

Every issued chain link carries verified evidence; an Undetermined link
anywhere downgrades the outcome to NoDecision, never to a certificate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, cubesum
from .cache import ApCache
from .lseries import RankConfig, RankEvidence, Verdict, rank_evidence
from .mordell import MordellCurve, RationalPoint, cubic_twists

BASE_FIELD_CLAIM = "H10 has a negative solution over Z[zeta3]"


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistTriple:
    a: int
    d: int
    evidence: tuple[RankEvidence, RankEvidence, RankEvidence]

    @property
    def exactly_one_positive(self) -> bool:
        pos = sum(1 for e in self.evidence if e.is_positive)
        zero = sum(1 for e in self.evidence if e.is_zero)
        return pos == 1 and zero == 2


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str  # "degree6" | "degree12"
    d: int
    p: int | None = None

    def to_json_dict(self) -> dict:
        return {"type": self.kind, "D": self.d, "p": self.p}


@dataclass(frozen=True)
class ChainLink:
    claim: str
    rule: str
    data: dict

    def to_json_dict(self) -> dict:
        return {"claim": self.claim, "rule": self.rule, "data": self.data}


@dataclass(frozen=True)
class H10Certificate:
    field: FieldDescriptor
    chain: tuple[ChainLink, ...]
    issued: bool = True
    version: int = 1

    def to_json_dict(self) -> dict:
        return {
            "field": self.field.to_json_dict(),
            "issued": self.issued,
            "chain": [link.to_json_dict() for link in self.chain],
            "version": self.version,
        }

    def audit(self) -> None:
        """Walk the chain; any Undetermined evidence is a hard failure."""
        if not self.issued:
            raise ValueError("auditing a non-issued certificate")
        for link in self.chain:
            v = link.data.get("verdict")
            if v == Verdict.UNDETERMINED.value:
                raise ValueError(f"issued certificate carries an Undetermined link: {link}")
        if self.chain[-1].rule not in (
            "rank-stability-transfer",
            "quadratic-compositum-transfer",
        ):
            raise ValueError("chain does not terminate in a composition axiom")


@dataclass(frozen=True)
class NoDecision:
    reason: str
    blocking: tuple[int, ...] = ()
    triple: TwistTriple | None = None
    field: FieldDescriptor | None = None

    def to_json_dict(self) -> dict:
        return {
            "field": self.field.to_json_dict() if self.field else None,
            "issued": False,
            "chain": [
                {
                    "claim": f"no decision: {self.reason}",
                    "rule": "no-decision",
                    "data": {"blocking_curves": list(self.blocking)},
                }
            ],
            "version": 1,
        }


def canonical_cube_radicand(d: int) -> int:
    """Smallest cube-free radicand generating Q(cbrt(d)): min(d0, cubefree(d0^2))."""
    d0, _ = arith.strip_power(d, 3)
    alt, _ = arith.strip_power(d0 * d0, 3)
    return min(d0, alt)


# ---------------------------------------------------------------------------
# Chain-link helpers
# ---------------------------------------------------------------------------


def _point_payload(pt: RationalPoint) -> dict:
    return {"m": pt.m, "n": pt.n, "e": pt.e}


def _evidence_link(curve_k: int, ev: RankEvidence) -> ChainLink:
    data: dict = {"curve": curve_k, "verdict": ev.verdict.value}
    if ev.verdict is Verdict.POSITIVE_BY_POINT:
        data["point"] = _point_payload(ev.point)
        claim = f"rk E_{{{curve_k}}}(Q) >= 1 (explicit non-torsion point)"
        rule = "point-witness"
    elif ev.verdict is Verdict.ONE_BY_GZK:
        data.update(l_derivative=ev.l_derivative, tail_bound=ev.tail_bound, eps=ev.eps)
        claim = f"rk E_{{{curve_k}}}(Q) = 1 (eps = -1, L'(1) != 0)"
        rule = "gzk-analytic-rank-one"
    elif ev.verdict is Verdict.ZERO_BY_L_VALUE:
        data.update(
            l_value=ev.l_value,
            tail_bound=ev.tail_bound,
            omega=ev.omega,
            l_over_omega=str(ev.l_over_omega) if ev.l_over_omega is not None else None,
            eps=ev.eps,
        )
        claim = f"rk E_{{{curve_k}}}(Q) = 0 (L(1) != 0, CM nonvanishing)"
        rule = "l-value-nonzero"
    elif ev.verdict is Verdict.ZERO_BY_CONGRUENCE:
        data["rule_id"] = ev.rule
        claim = f"rk E_{{{curve_k}}}(Q) = 0 (congruence rule {ev.rule})"
        rule = "congruence-rule"
    else:
        data["reason"] = ev.reason
        claim = f"no verdict for E_{{{curve_k}}}"
        rule = "undetermined"
    return ChainLink(claim=claim, rule=rule, data=data)


def _degree6_chain(triple: TwistTriple, curve_ks: tuple[int, int, int]) -> tuple[ChainLink, ...]:
    pos_idx = next(i for i, e in enumerate(triple.evidence) if e.is_positive)
    links = [
        _evidence_link(k, ev) for k, ev in zip(curve_ks, triple.evidence)
    ]
    links.append(
        ChainLink(
            claim="rk E(Q(zeta3)) = 2 rk E(Q) for each of the three curves (CM by Z[zeta3])",
            rule="cm-rank-doubling",
            data={"curves": list(curve_ks)},
        )
    )
    links.append(
        ChainLink(
            claim=(
                "rk E(L) = rk E(K) + rk E1(K) + rk E2(K) > 0 for "
                f"L = Q(zeta3, cbrt({triple.d})): the three curves are isomorphic over L"
            ),
            rule="cubic-twist-rank-sum",
            data={"positive_curve": curve_ks[pos_idx], "d": triple.d},
        )
    )
    links.append(
        ChainLink(claim=BASE_FIELD_CLAIM, rule="base-field-axiom", data={})
    )
    links.append(
        ChainLink(
            claim=(
                f"rk E(L) = rk E(K) > 0 makes O_K Diophantine in O_L; hence H10 is "
                f"unsolvable over the ring of integers of Q(zeta3, cbrt({triple.d}))"
            ),
            rule="rank-stability-transfer",
            data={"positive_curve": curve_ks[pos_idx]},
        )
    )
    return tuple(links)


# ---------------------------------------------------------------------------
# Lemma-1 style certification
# ---------------------------------------------------------------------------


def lemma1_check(
    a: int,
    d: int,
    config: RankConfig | None = None,
    cache: ApCache | None = None,
) -> H10Certificate | NoDecision | None:
    """Exactly-one-positive check on (E_a, E_{aD^2}, E_{aD^4}).

    Issues a degree-6 certificate when one curve carries positive
    evidence and the other two carry zero evidence; returns NoDecision
    when Undetermined evidence blocks the call; returns None when the
    triple definitively fails the exactly-one-positive shape.
    """
    if d <= 1:
        raise ValueError("twist parameter must be > 1")
    if not arith.is_cube_free(d):
        raise ValueError(f"{d} is not cube-free")
    base = MordellCurve(a)
    e1, e2 = cubic_twists(base, d)
    curves = (base, e1, e2)
    evidence = tuple(rank_evidence(c, config, cache) for c in curves)
    triple = TwistTriple(a=a, d=d, evidence=evidence)
    pos = [i for i, e in enumerate(evidence) if e.is_positive]
    zero = [i for i, e in enumerate(evidence) if e.is_zero]
    und = [i for i, e in enumerate(evidence) if e.verdict is Verdict.UNDETERMINED]

    if len(pos) == 1 and len(zero) == 2:
        field = FieldDescriptor(kind="degree6", d=canonical_cube_radicand(d))
        cert = H10Certificate(
            field=field, chain=_degree6_chain(triple, tuple(c.a for c in curves))
        )
        cert.audit()
        return cert
    if len(pos) >= 2 or not und:
        return None
    return NoDecision(
        reason="undetermined rank evidence blocks the exactly-one-positive check",
        blocking=tuple(curves[i].a for i in und),
        triple=triple,
        field=FieldDescriptor(kind="degree6", d=canonical_cube_radicand(d)),
    )


# ---------------------------------------------------------------------------
# The prime classes of the degree-6 construction
# ---------------------------------------------------------------------------


def enumerate_S_sieve(limit: int) -> list[int]:
    """Primes l <= limit with l = 4, 7 (mod 9) and 3 not a cube mod l."""
    return [
        p
        for p in arith.sieve_primes(limit)
        if p % 9 in (4, 7) and not arith.cubic_residue_test(3, p)
    ]


def _s_sieve_iter():
    limit = 64
    seen = 0
    while True:
        items = enumerate_S_sieve(limit)
        for p in items[seen:]:
            yield p
        seen = len(items)
        limit *= 2


def certify_prime_degree6(
    p: int,
    config: RankConfig | None = None,
    cache: ApCache | None = None,
    *,
    cubesum_prime_bound: int = 100_000,
) -> H10Certificate | NoDecision:
    """Certificate for Q(zeta3, cbrt(p)), routed by p mod 9.

    p = 2, 5: base curve E_{-432*81} (9 is a cube-sum; 9p, 9p^2 are
    Sylvester classes).  p = 4, 7: pick B not a cube mod p, lift by CRT
    to A = 8 (mod 9), A = B (mod p), and hunt a cube-sum prime l = A
    (mod 9p); the twists land in the l p / l p^2 classes.  p = 8: first
    sieve prime l with p not a cube mod l plays the same role.
    p = 1 (mod 9): no route; NoDecision.
    """
    if p in (2, 3):
        raise ValueError("p must be a prime >= 5")
    if not arith.is_prime(p):
        raise ValueError(f"{p} is not prime")
    field = FieldDescriptor(kind="degree6", d=canonical_cube_radicand(p))
    cls = p % 9
    prelude: list[ChainLink] = []

    if cls == 1:
        return NoDecision(
            reason="p = 1 (mod 9) lies outside every certified class (the missing 1/6)",
            field=field,
        )
    if cls in (2, 5):
        a = -432 * 81
        prelude.append(
            ChainLink(
                claim="base curve y^2 = x^3 - 432*9^2 has rank 1 (9 = 1^3 + 2^3); "
                "twisting by p lands in the Sylvester classes 9p, 9p^2",
                rule="class-2-5-selection",
                data={"a": a, "p_mod_9": cls},
            )
        )
    elif cls in (4, 7):
        b = 2
        while arith.cubic_residue_test(b, p):
            b += 1
        a_res = arith.crt([(8, 9), (b, p)])
        found = cubesum.find_cubesum_prime(
            a_res, p, cubesum_prime_bound, config=config
        )
        if not found.found:
            return NoDecision(
                reason=(
                    f"no verified cube-sum prime = {a_res} (mod {9 * p}) "
                    f"below {cubesum_prime_bound}"
                ),
                field=field,
            )
        ell = found.prime
        a = -432 * ell * ell
        prelude.append(
            ChainLink(
                claim=(
                    f"l = {ell} = {a_res} (mod {9 * p}) is a verified cube-sum prime; "
                    f"l = 8 (mod 9) and l = {b} (mod {p}) is not a cube mod p, so "
                    "lp and lp^2 are non-cube-sum classes"
                ),
                rule="class-4-7-selection",
                data={
                    "B": b,
                    "crt_residue": a_res,
                    "ell": ell,
                    "witness": _witness_payload(found.verdict.witness),
                },
            )
        )
    else:  # cls == 8
        ell = None
        for cand in _s_sieve_iter():
            if cand > 10_000:
                break
            if not arith.cubic_residue_test(p, cand):
                ell = cand
                break
        if ell is None:
            return NoDecision(
                reason="no sieve prime with p outside its cubes below 10000",
                field=field,
            )
        a = -432 * ell * ell
        prelude.append(
            ChainLink(
                claim=(
                    f"l = {ell} is the least sieve prime (l = 4,7 mod 9, 3 not a cube "
                    f"mod l) with p = {p} not a cube mod l; l is a cube-sum and "
                    "lp, lp^2 are non-cube-sum classes"
                ),
                rule="class-8-sieve-selection",
                data={"ell": ell},
            )
        )

    res = lemma1_check(a, p, config, cache)
    if isinstance(res, H10Certificate):
        cert = H10Certificate(field=field, chain=tuple(prelude) + res.chain)
        cert.audit()
        return cert
    if isinstance(res, NoDecision):
        return NoDecision(
            reason=f"twist-triple evidence incomplete: {res.reason}",
            blocking=res.blocking,
            triple=res.triple,
            field=field,
        )
    return NoDecision(
        reason="constructed triple failed the exactly-one-positive shape",
        field=field,
    )


def _witness_payload(w) -> list[str] | None:
    if w is None:
        return None
    return [str(Fraction(x)) for x in w]


# ---------------------------------------------------------------------------
# Density experiment (the 5/6 picture at desk scale)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityReport:
    limit: int
    depth: int
    sieve_primes: tuple[int, ...]
    class_totals: dict[int, int]
    class_certified: dict[int, int]
    excluded_small: int
    total_primes: int
    certified: int
    certified_fraction: float
    predicted_fraction: float
    class8_subfraction: float
    class8_prediction: float

    @property
    def asymptotic_prediction(self) -> float:
        """depth -> infinity limit of the prediction (the 5/6 line,
        weighted by the actual class populations)."""
        good = sum(self.class_totals[c] for c in (2, 4, 5, 7, 8))
        return good / self.total_primes if self.total_primes else 0.0


def density_experiment(limit: int, depth: int) -> DensityReport:
    """Count primes <= limit certified by the congruence machinery.

    Classes 2, 4, 5, 7 mod 9 are certified outright; class 8 is certified
    when one of the first `depth` sieve primes l has p not a cube mod l;
    class 1 (and the ramified primes 2, 3) stay uncertified.
    """
    if limit < 1000:
        raise ValueError("limit must be >= 1000")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    ells: list[int] = []
    for cand in _s_sieve_iter():
        ells.append(cand)
        if len(ells) == depth:
            break
    totals = {c: 0 for c in (1, 2, 4, 5, 7, 8)}
    certified = {c: 0 for c in (1, 2, 4, 5, 7, 8)}
    excluded = 0
    primes = arith.sieve_primes(limit)
    for p in primes:
        if p in (2, 3):
            excluded += 1
            continue
        c = p % 9
        totals[c] += 1
        if c in (2, 4, 5, 7):
            certified[c] += 1
        elif c == 8:
            if any(not arith.cubic_residue_test(p, ell) for ell in ells):
                certified[c] += 1
    total = len(primes)
    n_cert = sum(certified.values())
    n8 = totals[8]
    sieve_factor = 1.0 - 3.0 ** (-depth)
    predicted = (
        sum(totals[c] for c in (2, 4, 5, 7)) + n8 * sieve_factor
    ) / total
    return DensityReport(
        limit=limit,
        depth=depth,
        sieve_primes=tuple(ells),
        class_totals=totals,
        class_certified=certified,
        excluded_small=excluded,
        total_primes=total,
        certified=n_cert,
        certified_fraction=n_cert / total,
        predicted_fraction=predicted,
        class8_subfraction=certified[8] / n8 if n8 else 0.0,
        class8_prediction=sieve_factor,
    )


# ---------------------------------------------------------------------------
# The quadratic-twist scan feeding the degree-12 construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanReport:
    limit: int
    members: tuple[int, ...]
    undetermined: tuple[int, ...]
    examined: int


def scan_S_prop44(
    limit: int,
    config: RankConfig | None = None,
    cache: ApCache | None = None,
) -> ScanReport:
    """Square-free D with |D| <= limit and positive rank evidence for
    E_{-432 D^3} (the quadratic twist of E_{-432} by D)."""
    if limit < 2:
        raise ValueError("limit must be >= 2")
    members: list[int] = []
    undecided: list[int] = []
    examined = 0
    for d in range(-limit, limit + 1):
        if d in (0, 1) or not arith.is_square_free(d):
            continue
        examined += 1
        ev = rank_evidence(MordellCurve(-432 * d**3), config, cache)
        if ev.is_positive:
            members.append(d)
        elif ev.verdict is Verdict.UNDETERMINED:
            undecided.append(d)
    return ScanReport(
        limit=limit,
        members=tuple(sorted(members)),
        undetermined=tuple(sorted(undecided)),
        examined=examined,
    )


# ---------------------------------------------------------------------------
# Degree-12 composition
# ---------------------------------------------------------------------------


def degree12_certificate(
    d: int,
    p: int,
    config: RankConfig | None = None,
    cache: ApCache | None = None,
) -> H10Certificate | NoDecision:
    """Certificate for Q(zeta3, sqrt(D), cbrt(p)) with p = 2, 5 (mod 9).

    Needs: positive rank evidence for the quadratic twist E_{-432 D^3};
    Sylvester zero evidence for E_{-432 p^2} and E_{-432 p^4}; zero
    evidence for E_{-432} itself; and an embedded degree-6 certificate
    for p.
    """
    if not arith.is_prime(p) or p % 9 not in (2, 5):
        raise ValueError(f"p = {p} is not a prime = 2, 5 (mod 9)")
    if d in (0, 1):
        raise ValueError("D must be a square-free integer outside {0, 1}")
    if not arith.is_square_free(d):
        raise ValueError(f"{d} is not square-free")
    field = FieldDescriptor(kind="degree12", d=d, p=p)

    ev_twist = rank_evidence(MordellCurve(-432 * d**3), config, cache)
    if not ev_twist.is_positive:
        return NoDecision(
            reason=f"no positive rank evidence for the quadratic twist (D = {d})",
            blocking=(-432 * d**3,),
            field=field,
        )
    ev_p2 = rank_evidence(MordellCurve(-432 * p * p), config, cache)
    ev_p4 = rank_evidence(MordellCurve(-432 * p**4), config, cache)
    if not (ev_p2.verdict is Verdict.ZERO_BY_CONGRUENCE and ev_p4.verdict is Verdict.ZERO_BY_CONGRUENCE):
        return NoDecision(
            reason="Sylvester zero evidence missing for the p-twists",
            blocking=(-432 * p * p, -432 * p**4),
            field=field,
        )
    ev_base = rank_evidence(MordellCurve(-432), config, cache)
    if not ev_base.is_zero:
        return NoDecision(
            reason="no rank-zero evidence for y^2 = x^3 - 432",
            blocking=(-432,),
            field=field,
        )
    deg6 = certify_prime_degree6(p, config, cache)
    if not isinstance(deg6, H10Certificate):
        return NoDecision(
            reason=f"degree-6 certificate for p = {p} unavailable: {deg6.reason}",
            field=field,
        )

    links = [
        _evidence_link(-432, ev_base),
        _evidence_link(-432 * d**3, ev_twist),
        ChainLink(
            claim=(
                f"rk E_-432(Q(sqrt({d}))) = rk E_-432(Q) + rk E_{{-432*{d}^3}}(Q) > 0 "
                "(quadratic-twist rank decomposition)"
            ),
            rule="quadratic-twist-rank",
            data={"d": d},
        ),
        _evidence_link(-432 * p * p, ev_p2),
        _evidence_link(-432 * p**4, ev_p4),
        ChainLink(
            claim=(
                f"rk E_-432(F) = 0 for F = Q(zeta3, cbrt({p})): the twist-triple rank "
                "sum over Q(zeta3) vanishes term by term"
            ),
            rule="cubic-twist-rank-sum",
            data={"p": p},
        ),
        ChainLink(
            claim=f"H10 unsolvable over the ring of integers of Q(zeta3, cbrt({p}))",
            rule="degree6-certificate",
            data={"certificate": deg6.to_json_dict()},
        ),
        ChainLink(
            claim=(
                f"rk E(F) = 0 and rk E(Q(sqrt({d}))) > 0 make O_L/O_F integrally "
                f"Diophantine for L = Q(zeta3, sqrt({d}), cbrt({p})); with H10 "
                "unsolvable over O_F it is unsolvable over O_L"
            ),
            rule="quadratic-compositum-transfer",
            data={"d": d, "p": p},
        ),
    ]
    cert = H10Certificate(field=field, chain=tuple(links))
    cert.audit()
    return cert
