"""Command line entry point: counts, theorem tables, lemma suites, identity and sum scans.

Exit codes: 0 success or all checks pass, 1 a check failed, 2 usage error.
Data goes to stdout (or --out); progress and errors go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields
from decimal import Decimal, InvalidOperation
from typing import List, Optional, Sequence

from . import sieve
from .arith import GammaExponent, GammaPair
from .count import count_report, report_dicts, reports_to_csv, theorem_report
from .errors import HypothesisError, NumericError, PslabError
from .expsum.families import lemma_suite
from .expsum.heath_brown import MAX_K, heath_brown_decompose
from .expsum.phase import PhaseSpec
from .expsum.reports import DEFAULT_SLACK, LemmaId, reports_to_json
from .expsum.scans import COEFF_KINDS, SCAN_COLUMNS, bilinear_scan, raw_json, tstar_scan

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
HB_TOLERANCE = 1e-8
ENV_THREADS = "PSLAB_THREADS"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    threads: int = 1
    epsilon: float = 0.01
    eta: float = 0.05
    slack: float = DEFAULT_SLACK
    seed: int = 0
    segment_size: int = sieve.SEGMENT_SIZE
    output_path: str = "-"
    format: str = "csv"

    def validate(self) -> "RunConfig":
        if not (isinstance(self.threads, int) and self.threads >= 1):
            raise UsageError(f"threads must be a positive integer, got {self.threads!r}")
        if not 0 < self.epsilon <= 0.1:
            raise UsageError(f"epsilon must lie in (0, 0.1], got {self.epsilon}")
        if not 0 < self.eta <= 0.5:
            raise UsageError(f"eta must lie in (0, 0.5], got {self.eta}")
        if not self.slack >= 1:
            raise UsageError(f"slack must be >= 1, got {self.slack}")
        if not -(2**63) <= self.seed < 2**64:
            raise UsageError(f"seed must fit in 64 bits, got {self.seed}")
        if not (isinstance(self.segment_size, int) and self.segment_size >= 1):
            raise UsageError(f"segment size must be a positive integer, got {self.segment_size!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")
        return self


_CONFIG_FLAGS = {
    "threads": "threads",
    "epsilon": "epsilon",
    "eta": "eta",
    "slack": "slack",
    "seed": "seed",
    "segment_size": "segment_size",
    "out": "output_path",
    "format": "format",
}


def resolve_config(args: argparse.Namespace, env=None, default_format: str = "csv") -> RunConfig:
    """Flags > --config JSON file > PSLAB_THREADS > defaults."""
    env = os.environ if env is None else env
    cfg = RunConfig(format=default_format)
    if env.get(ENV_THREADS):
        try:
            cfg.threads = int(env[ENV_THREADS])
        except ValueError:
            raise UsageError(f"{ENV_THREADS} must be a positive integer, got {env[ENV_THREADS]!r}")
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        known = {f.name for f in fields(RunConfig)}
        for key, value in data.items():
            if key not in known:
                raise UsageError(f"unknown config key {key!r}; known keys: {', '.join(sorted(known))}")
            setattr(cfg, key, value)
    for flag, attr in _CONFIG_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    return cfg.validate()


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path in ("-", ""):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        _progress(f"wrote {cfg.output_path}")


def _json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _csv(header: Sequence[str], rows: List[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if r.get(c) is None else (repr(r[c]) if isinstance(r[c], float) else r[c]) for c in header])
    return buf.getvalue()


def parse_int(text: str) -> int:
    """Integer given plainly or in exact scientific notation such as 1e6."""
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def parse_int_list(text: str) -> List[int]:
    return [parse_int(t) for t in text.split(",") if t.strip()]


def parse_gamma(text: str) -> GammaExponent:
    try:
        g = GammaExponent.parse(text)
    except (PslabError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if not g.num * 2 > g.den:
        raise argparse.ArgumentTypeError(f"gamma must lie in (1/2, 1), got {g}")
    return g


def parse_terms(text: str) -> PhaseSpec:
    """``a:alpha[:u],a:alpha[:u],...``"""
    terms = []
    try:
        for part in text.split(","):
            bits = [float(b) for b in part.split(":")]
            if len(bits) == 2:
                bits.append(0.0)
            if len(bits) != 3:
                raise ValueError(part)
            terms.append(tuple(bits))
        return PhaseSpec(tuple(terms))
    except (ValueError, PslabError) as exc:
        raise argparse.ArgumentTypeError(f"bad phase terms {text!r}: {exc}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_count(args, cfg: RunConfig) -> int:
    gammas = args.gamma
    if len({g.fraction for g in gammas}) != len(gammas):
        raise UsageError("repeated --gamma values")
    gammas = sorted(gammas, reverse=True)
    _progress(f"counting up to x={args.x} for gammas {', '.join(map(str, gammas))}")
    rep = count_report(args.x, gammas, cfg.threads, cfg.segment_size)
    _emit(reports_to_csv([rep]) if cfg.format == "csv" else _json(report_dicts([rep])), cfg)
    return EXIT_OK


def cmd_theorem(args, cfg: RunConfig) -> int:
    try:
        pair = GammaPair(args.gamma1, args.gamma2)
    except PslabError as exc:
        raise UsageError(str(exc))
    pair.require_theorem_range()
    _progress(f"theorem table for {pair.gamma1}, {pair.gamma2} on {args.x_grid}")
    rep = theorem_report(pair, args.x_grid, cfg.threads, cfg.segment_size)
    if rep.note:
        _progress(f"fitted exponent left empty: {rep.note}")
    if cfg.format == "csv":
        text = reports_to_csv(rep.rows, rep.fitted_exponent)
    else:
        text = _json(report_dicts(rep.rows, rep.fitted_exponent))
    _emit(text, cfg)
    return EXIT_OK


def cmd_lemma(args, cfg: RunConfig) -> int:
    _progress(f"lemma suite {args.id}")
    reports = lemma_suite(args.id, slack=cfg.slack, eta=cfg.eta, seed=cfg.seed, trials=args.trials, workers=cfg.threads)
    if cfg.format == "json":
        text = reports_to_json(reports) + "\n"
    else:
        rows = [
            dict(r.to_dict(), params=json.dumps(r.to_dict()["params"], sort_keys=True)) for r in reports
        ]
        text = _csv(["lemma_id", "measured", "envelope", "fitted_constant", "pass", "params"], rows)
    _emit(text, cfg)
    failed = sum(not r.passed for r in reports)
    _progress(f"{len(reports) - failed}/{len(reports)} passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_hb(args, cfg: RunConfig) -> int:
    _progress(f"Heath-Brown identity, k={args.k}, n <= {args.limit}")
    r = heath_brown_decompose(args.limit, args.k, args.z)
    ok = r.max_residual <= HB_TOLERANCE
    row = {"n_limit": r.n_limit, "k": r.k, "z": r.z, "max_residual": r.max_residual, "worst_n": r.worst_n, "pass": ok}
    _emit(_json(row) if cfg.format == "json" else _csv(list(row), [row]), cfg)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_expsum(args, cfg: RunConfig) -> int:
    if args.kind == "raw":
        if args.terms is None or args.M is None or args.M1 is None:
            raise UsageError("raw needs --terms, --M and --M1")
        text = raw_json(args.terms, args.M, args.M1, cfg.threads)
        if cfg.format == "json":
            _emit(text, cfg)
        else:
            rec = json.loads(text)
            rec["terms"] = json.dumps(rec["terms"])
            _emit(_csv(list(rec), [rec]), cfg)
        return EXIT_OK
    if args.h1 == 0 or args.h2 == 0:
        raise UsageError("h1 and h2 must be nonzero")
    try:
        pair = GammaPair(args.gamma1, args.gamma2)
    except PslabError as exc:
        raise UsageError(str(exc))
    if args.kind == "tstar":
        if not args.x_list:
            raise UsageError("tstar needs --x-list")
        rows = tstar_scan(args.x_list, args.h1, args.h2, pair, cfg.epsilon, cfg.threads)
    else:
        if not args.m_list or not args.n_list:
            raise UsageError(f"{args.kind} needs --m-list and --n-list")
        rows = bilinear_scan(
            args.kind, args.m_list, args.n_list, args.h1, args.h2, pair, cfg.epsilon,
            args.a_coeffs, args.b_coeffs, cfg.seed, cfg.threads,
        )
    _emit(_csv(SCAN_COLUMNS, rows) if cfg.format == "csv" else _json(rows), cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--threads", type=int, help=f"worker threads (env {ENV_THREADS})")
    g.add_argument("--epsilon", type=float, help="epsilon in (0, 0.1] (default 0.01)")
    g.add_argument("--eta", type=float, help="eta in (0, 0.5] (default 0.05)")
    g.add_argument("--slack", type=float, help="allowed fitted constant (default 10)")
    g.add_argument("--seed", type=int, help="64-bit seed (default 0)")
    g.add_argument("--segment-size", dest="segment_size", type=int, help="sieve segment length")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--config", help="JSON file with RunConfig fields")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="pslab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count primes in one or several sets")
    p.add_argument("--gamma", type=parse_gamma, action="append", required=True, help="exponent a/b, repeatable")
    p.add_argument("--x", type=parse_int, required=True)
    p.set_defaults(func=cmd_count, default_format="csv")

    p = sub.add_parser("theorem", parents=[common], help="count table with fitted error exponent")
    p.add_argument("--gamma1", type=parse_gamma, required=True)
    p.add_argument("--gamma2", type=parse_gamma, required=True)
    p.add_argument("--x-grid", dest="x_grid", type=parse_int_list, required=True, help="comma list, ascending")
    p.set_defaults(func=cmd_theorem, default_format="csv")

    p = sub.add_parser("lemma", parents=[common], help="run a lemma check suite")
    p.add_argument("--id", required=True, choices=[lid.value for lid in LemmaId])
    p.add_argument("--trials", type=int, help="sample count for randomized suites")
    p.set_defaults(func=cmd_lemma, default_format="json")

    p = sub.add_parser("hb", parents=[common], help="check Heath-Brown's identity against the sieve")
    p.add_argument("--limit", type=parse_int, required=True)
    p.add_argument("--k", type=int, default=4, choices=range(1, MAX_K + 1))
    p.add_argument("--z", type=int, help="cutoff (default: smallest z with z^k >= 2 limit)")
    p.set_defaults(func=cmd_hb, default_format="json")

    p = sub.add_parser("expsum", parents=[common], help="scan exponential sums")
    p.add_argument("--kind", required=True, choices=("tstar", "type1", "type2", "raw"))
    p.add_argument("--gamma1", type=parse_gamma, default=GammaExponent(49, 50))
    p.add_argument("--gamma2", type=parse_gamma, default=GammaExponent(97, 100))
    p.add_argument("--h1", type=int, default=1)
    p.add_argument("--h2", type=int, default=1)
    p.add_argument("--x-list", dest="x_list", type=parse_int_list)
    p.add_argument("--m-list", dest="m_list", type=parse_int_list)
    p.add_argument("--n-list", dest="n_list", type=parse_int_list)
    p.add_argument("--a-coeffs", dest="a_coeffs", choices=COEFF_KINDS, default="mobius")
    p.add_argument("--b-coeffs", dest="b_coeffs", choices=COEFF_KINDS, default="random")
    p.add_argument("--terms", type=parse_terms, help="raw phase a:alpha[:u],...")
    p.add_argument("--M", type=float)
    p.add_argument("--M1", type=float)
    p.set_defaults(func=cmd_expsum, default_format="csv")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = resolve_config(args, default_format=args.default_format)
        return args.func(args, cfg)
    except (HypothesisError, NumericError) as exc:
        print(f"pslab {args.command}: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, PslabError, ValueError) as exc:
        print(f"pslab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else is a failed run, not a usage error
        print(f"pslab {args.command}: failed: {exc!r}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
