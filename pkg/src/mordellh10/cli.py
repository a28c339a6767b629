"""Command-line surface: table reproduction, certification, density and
twist scans, with optional a_p cache persistence.

Exit codes: 0 success, 1 mismatch or NoDecision where a decision was
required, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

from . import fixtures, h10, lseries
from .cache import ApCache
from .h10 import H10Certificate, NoDecision
from .lseries import RankConfig
from .mordell import CoprimalityWarning

CACHE_ENV = "MORDELL_H10_CACHE"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mordell-h10",
        description="Rank evidence for Mordell twist triples and Hilbert-10 "
        "unsolvability certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rt = sub.add_parser("reproduce-table1", help="re-run the twist-table rows")
    rt.add_argument("--max-d", type=int, default=50)
    rt.add_argument("--cache", default=None)
    rt.add_argument("--format", choices=("text", "json"), default="text")

    ct = sub.add_parser("certify", help="emit one certificate")
    group = ct.add_mutually_exclusive_group(required=True)
    group.add_argument("--prime", type=int, default=None)
    group.add_argument("--field", type=int, default=None)
    group.add_argument("--degree12", default=None, metavar="D,P")
    ct.add_argument("--cache", default=None)
    ct.add_argument("--format", choices=("text", "json"), default="json")

    de = sub.add_parser("density", help="congruence-certified prime density")
    de.add_argument("--limit", type=int, required=True)
    de.add_argument("--depth", type=int, required=True)
    de.add_argument("--format", choices=("text", "json"), default="text")

    sc = sub.add_parser("scan-s", help="square-free D with positive twist rank")
    sc.add_argument("--limit", type=int, required=True)
    sc.add_argument("--cache", default=None)
    sc.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _cache_path(args: argparse.Namespace) -> str | None:
    explicit = getattr(args, "cache", None)
    return explicit or os.environ.get(CACHE_ENV) or None


def _with_cache(args: argparse.Namespace) -> tuple[ApCache, str | None]:
    cache = ApCache()
    path = _cache_path(args)
    if path:
        cache.load(path)
    lseries.set_default_cache(cache)
    return cache, path


def _emit(obj: dict, fmt: str, text: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        print(text)


def _cmd_reproduce_table1(args: argparse.Namespace) -> int:
    cache, path = _with_cache(args)
    try:
        rows = fixtures.table1_rows(args.max_d)
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error: fixture unavailable: {exc}", file=sys.stderr)
        return 2
    if not rows:
        print("error: fixture has no rows in range", file=sys.stderr)
        return 2
    config = RankConfig()
    out_rows = []
    mismatches = 0
    for d, a in rows:
        res = h10.lemma1_check(a, d, config)
        if isinstance(res, H10Certificate):
            pos = next(
                link.data["curve"]
                for link in res.chain
                if link.rule in ("point-witness", "gzk-analytic-rank-one")
            )
            out_rows.append({"D": d, "a": a, "status": "issued", "positive_curve": pos})
        elif isinstance(res, NoDecision):
            mismatches += 1
            out_rows.append(
                {"D": d, "a": a, "status": "no-decision", "reason": res.reason}
            )
        else:
            mismatches += 1
            out_rows.append(
                {"D": d, "a": a, "status": "mismatch",
                 "reason": "triple is not exactly-one-positive"}
            )
    if path:
        cache.save(path)
    summary = {"rows": out_rows, "mismatches": mismatches, "total": len(out_rows)}
    lines = [f"{'D':>4} {'a':>4}  {'status':<12} detail"]
    for r in out_rows:
        detail = r.get("positive_curve", r.get("reason", ""))
        lines.append(f"{r['D']:>4} {r['a']:>4}  {r['status']:<12} {detail}")
    lines.append(f"rows: {len(out_rows)}  mismatches: {mismatches}")
    _emit(summary, args.format, "\n".join(lines))
    return 0 if mismatches == 0 else 1


def _certificate_text(obj: dict) -> str:
    lines = [f"field: {obj['field']}  issued: {obj['issued']}"]
    for link in obj["chain"]:
        lines.append(f"  [{link['rule']}] {link['claim']}")
    return "\n".join(lines)


def _cmd_certify(args: argparse.Namespace) -> int:
    cache, path = _with_cache(args)
    config = RankConfig()
    try:
        if args.prime is not None:
            result = h10.certify_prime_degree6(args.prime, config)
        elif args.field is not None:
            result = _certify_field(args.field, config)
        else:
            parts = args.degree12.split(",")
            if len(parts) != 2:
                print("error: --degree12 expects D,P", file=sys.stderr)
                return 2
            d, p = int(parts[0]), int(parts[1])
            result = h10.degree12_certificate(d, p, config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if path:
        cache.save(path)
    obj = result.to_json_dict()
    _emit(obj, args.format, _certificate_text(obj))
    return 0 if obj["issued"] else 1


def _certify_field(d: int, config: RankConfig):
    """Degree-6 certificate for Q(zeta3, cbrt(D)): fixture base first,
    then every known base constant."""
    if d <= 1:
        raise ValueError("field radicand must be > 1")
    tried: list[int] = []
    preferred = fixtures.TABLE1_BASE.get(d)
    candidates = ([preferred] if preferred else []) + [
        a for a in fixtures.BASE_CONSTANTS if a != preferred
    ]
    last_nodecision = None
    for a in candidates:
        tried.append(a)
        res = h10.lemma1_check(a, d, config)
        if isinstance(res, H10Certificate):
            return res
        if isinstance(res, NoDecision):
            last_nodecision = res
    if last_nodecision is not None:
        return last_nodecision
    return NoDecision(
        reason=f"no base constant in {tried} gives exactly-one-positive for D={d}",
        field=h10.FieldDescriptor(kind="degree6", d=h10.canonical_cube_radicand(d)),
    )


def _cmd_density(args: argparse.Namespace) -> int:
    try:
        rep = h10.density_experiment(args.limit, args.depth)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    obj = {
        "limit": rep.limit,
        "depth": rep.depth,
        "sieve_primes": list(rep.sieve_primes),
        "class_totals": {str(k): v for k, v in sorted(rep.class_totals.items())},
        "class_certified": {str(k): v for k, v in sorted(rep.class_certified.items())},
        "total_primes": rep.total_primes,
        "certified": rep.certified,
        "certified_fraction": rep.certified_fraction,
        "predicted_fraction": rep.predicted_fraction,
        "class8_subfraction": rep.class8_subfraction,
        "class8_prediction": rep.class8_prediction,
        "asymptotic_prediction": rep.asymptotic_prediction,
    }
    lines = [
        f"primes <= {rep.limit}: {rep.total_primes}  (sieve depth {rep.depth}: "
        f"{', '.join(map(str, rep.sieve_primes))})",
        f"{'class':>6} {'total':>8} {'certified':>10}",
    ]
    for c in (1, 2, 4, 5, 7, 8):
        lines.append(
            f"{c:>6} {rep.class_totals[c]:>8} {rep.class_certified[c]:>10}"
        )
    lines.append(
        f"certified fraction: {rep.certified_fraction:.5f}  "
        f"predicted: {rep.predicted_fraction:.5f}"
    )
    lines.append(
        f"class-8 subfraction: {rep.class8_subfraction:.5f}  "
        f"predicted: {rep.class8_prediction:.5f}"
    )
    _emit(obj, args.format, "\n".join(lines))
    return 0


def _cmd_scan_s(args: argparse.Namespace) -> int:
    cache, path = _with_cache(args)
    try:
        rep = h10.scan_S_prop44(args.limit)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if path:
        cache.save(path)
    obj = {
        "limit": rep.limit,
        "members": list(rep.members),
        "count": len(rep.members),
        "undetermined": list(rep.undetermined),
        "examined": rep.examined,
    }
    text = (
        f"square-free |D| <= {rep.limit} with positive twist rank: "
        f"{len(rep.members)} of {rep.examined} examined\n"
        f"members: {', '.join(map(str, rep.members))}\n"
        f"undetermined: {', '.join(map(str, rep.undetermined)) or '-'}"
    )
    _emit(obj, args.format, text)
    return 0


def main(argv: list[str] | None = None) -> int:
    warnings.simplefilter("once", CoprimalityWarning)
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "reproduce-table1": _cmd_reproduce_table1,
        "certify": _cmd_certify,
        "density": _cmd_density,
        "scan-s": _cmd_scan_s,
    }
    return handlers[args.command](args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
