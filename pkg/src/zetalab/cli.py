"""Command-line driver.

    zetalab report --out results/
    zetalab lemma1 --zero 1 --radii 0.4,0.2,0.1,0.05
    zetalab zeros --generate 10 100 --out tables/

Exit status: 0 every claim passed, 1 at least one failed, 2 inconclusive
(and none failed).  Settings come from flags, then a key=value config file,
then $ZETA_LAB_ZEROS for the table path, then built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from . import claims, specfun
from .claims import RunConfig
from .core import Report
from .errors import ZetaLabError
from .lemmas import (
    beta_scaling_fit,
    lemma2_check,
    lemma3_component_bound,
    lemma3_positive_part_bound,
    re_midl_check,
)
from .zeros import Zero, find_zeros, load_zero_table, t1_min_bound, write_zero_table

ENV_ZEROS = "ZETA_LAB_ZEROS"
DEFAULTS = {"zeros": None, "zero_count": 10_000, "out": ".", "parallelism": 1}


# ---------------------------------------------------------------------------
# formatting


def fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float) or hasattr(v, "__float__"):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(v)


def _json_float(v):
    v = float(v)
    return float(f"{v:.12g}") if math.isfinite(v) else None


def write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def report_record(rep: Report, runtime: float | None = None) -> dict:
    rec = rep.to_record()
    rec["measured"] = {k: _json_float(v) for k, v in rec["measured"].items()}
    rec["tolerance"] = _json_float(rec["tolerance"])
    if runtime is not None:
        rec["runtime"] = _json_float(runtime)
    return rec


def summary_line(rep: Report) -> str:
    status = "INCONCLUSIVE" if rep.inconclusive else ("PASS" if rep.passed else "FAIL")
    vals = ", ".join(f"{k}={fmt(v)}" for k, v in rep.measured.items())
    line = f"{status} {rep.claim_id}: {vals}"
    return line + (f" [{rep.notes}]" if rep.notes else "")


def parse_range(text: str, default_n: int = 20) -> list[float]:
    """'lo..hi' or 'lo..hi:n' -> n evenly spaced values; a single number -> [number]."""
    if ".." not in text:
        return [float(text)]
    span, _, n = text.partition(":")
    lo, _, hi = span.partition("..")
    n = int(n) if n else default_n
    lo, hi = float(lo), float(hi)
    if n < 1:
        raise argparse.ArgumentTypeError(f"bad count in {text!r}")
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def parse_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


# ---------------------------------------------------------------------------
# configuration


def read_config_file(path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SystemExit(f"{path}:{lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _tol_pairs(items) -> tuple[dict[str, float], float | None]:
    per, plain = {}, None
    for item in items or []:
        if "=" in item:
            k, v = item.split("=", 1)
            per[k.strip()] = float(v)
        else:
            plain = float(item)
    return per, plain


def build_run_config(args, claim_ids=None) -> RunConfig:
    file_cfg = read_config_file(args.config) if args.config else {}
    env_zeros = os.environ.get(ENV_ZEROS)

    def pick(flag, key, conv=str):
        if flag is not None:
            return flag
        if key in file_cfg:
            return conv(file_cfg[key])
        return None

    def first(*vals):
        return next(v for v in vals if v is not None)

    zeros = first(pick(args.zeros, "zeros"), env_zeros, DEFAULTS["zeros"], "") or None
    zero_count = first(pick(args.zero_count, "zero_count", int), DEFAULTS["zero_count"])
    out = first(pick(args.out, "out"), DEFAULTS["out"])
    par = first(pick(args.parallelism, "parallelism", int), DEFAULTS["parallelism"])

    file_tols = [f"{k[4:]}={v}" for k, v in file_cfg.items() if k.startswith("tol.")]
    if "tol" in file_cfg:
        file_tols.append(file_cfg["tol"])
    per_file, plain_file = _tol_pairs(file_tols)
    per_flag, plain_flag = _tol_pairs(args.tol)
    plain = plain_flag if plain_flag is not None else plain_file
    tols = {}
    if plain is not None:
        tols.update({cid: plain for cid in (claim_ids or claims.CLAIMS)})
    tols.update(per_file)
    tols.update(per_flag)
    return RunConfig(zero_table_path=zeros, zero_count=zero_count,
                     tolerance_overrides=tols, output_dir=out, parallelism=par)


# ---------------------------------------------------------------------------
# commands


def _finish(reports: list[Report]) -> int:
    for r in reports:
        print(summary_line(r))
    return claims.exit_code(reports)


def _emit_outcomes(cfg: RunConfig, outcomes) -> int:
    out = Path(cfg.output_dir)
    for o in outcomes:
        for name, (header, rows) in o.tables.items():
            write_csv(out / f"{name}.csv", header, rows)
    return _finish([o.report for o in outcomes])


def cmd_verify_constants(args) -> int:
    cfg = build_run_config(args, ["c01_constants"])
    c = specfun.CONSTANTS
    print(f"rho_sum_const = {c.rho_sum_const:.7f}")
    print(f"a_const = {c.a_const:.7f}")
    print(f"t1_min_bound = {t1_min_bound():.7f}")
    return _finish([claims.check_constants(cfg).report])


def cmd_verify_identities(args) -> int:
    ids = ["c05_identity_grids", "c06_ip_antisymmetry", "c07_dzeta_re"]
    cfg = build_run_config(args, ids)
    xs, ys = parse_range(args.x), parse_range(args.y)
    grid = claims.identity_grid(xs[0], xs[-1], len(xs), ys[0], ys[-1], len(ys), exclude=args.exclude)
    for s in grid[1]:
        print(f"skipped {fmt(s.real)},{fmt(s.imag)}: near a zero", file=sys.stderr)
    outcomes = [claims.check_identity_grids(cfg, grid)]
    outcomes += [claims.run_claim(i, cfg) for i in ids[1:]]
    return _emit_outcomes(cfg, outcomes)


def cmd_lemma1(args) -> int:
    cfg = build_run_config(args, ["c08_lemma1_probes", "c09_re_midl"])
    radii = tuple(sorted(parse_list(args.radii), reverse=True))
    runs = claims.lemma1_runs(cfg, [args.zero], radii)
    i, pc, results = runs[0]
    reports = []
    for p in results:
        reports.append(Report(f"lemma1_zero{i}_r{p.r:g}", p.found,
                              {"residual": p.residual, "beta_tan": p.beta_tan}, pc.tol_root,
                              p.note))
        reports.append(re_midl_check(pc, p.r, p))
    try:
        reports.append(beta_scaling_fit(pc, results))
    except ZetaLabError as exc:
        reports.append(Report(f"beta_scaling_zero{i}", False, {}, 0.2, str(exc)))
    write_csv(Path(cfg.output_dir) / "lemma1.csv", claims.LEMMA1_HEADER, claims._lemma1_rows(runs))
    return _finish(reports)


def cmd_lemma2(args) -> int:
    cfg = build_run_config(args)
    table = cfg.table(max(args.zero, 1))
    q = table[args.zero - 1]
    if args.sigma is not None:
        q = Zero(q.t, sigma=args.sigma)
    tol = cfg.tolerance_overrides.get("c10_lemma2_endpoint", 1e-10)
    rep = lemma2_check(q, tol)
    write_csv(Path(cfg.output_dir) / "lemma2.csv", ("zero", "sigma", "t", "diff"),
              [(args.zero, q.sigma, q.t, rep.measured["diff"])])
    return _finish([rep])


def cmd_lemma3(args) -> int:
    cfg = build_run_config(args, ["c11_lemma3"])
    xs, ys = parse_range(args.x), parse_range(args.y)
    out = claims.check_lemma3(cfg, xs, ys)
    rows = out.tables["lemma3"][1]
    min_g = min(r[3] for r in rows)
    print(f"G range: [{fmt(min_g)}, {fmt(out.report.measured['max_G'])}]")
    print(f"positive part at y=4: {fmt(lemma3_positive_part_bound(4.0).value)}; "
          f"component: {fmt(lemma3_component_bound(4.0))}")
    return _emit_outcomes(cfg, [out])


def cmd_alpha_scan(args) -> int:
    cfg = build_run_config(args, ["c12_alpha_negativity"])
    sigmas, ts = parse_range(args.sigma), parse_range(args.t)
    out = claims.check_alpha_negativity(cfg, sigmas, ts)
    return _emit_outcomes(cfg, [out])


def cmd_zeros(args) -> int:
    cfg = build_run_config(args)
    try:
        if args.generate:
            lo, hi = args.generate
            table = find_zeros(lo, hi, tol=args.root_tol)
            path = Path(args.output) if args.output else Path(cfg.output_dir) / "zeros.txt"
            path.parent.mkdir(parents=True, exist_ok=True)
            write_zero_table(table, path, header=table.source)
            print(f"{table.count} ordinates written to {path}")
        else:
            table = load_zero_table(args.ingest)
            print(f"{table.count} ordinates ok in {args.ingest}")
    except ZetaLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_report(args) -> int:
    cfg = build_run_config(args)
    outcomes = claims.run_claims(cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = [report_record(o.report, o.runtime if args.timings else None) for o in outcomes]
    (out / "report.json").write_text(json.dumps(records, indent=2) + "\n", encoding="utf-8")
    for o in outcomes:
        for name, (header, rows) in o.tables.items():
            write_csv(out / f"{name}.csv", header, rows)
    reports = [o.report for o in outcomes]
    code = _finish(reports)
    passed = sum(r.passed for r in reports)
    print(f"{passed}/{len(reports)} claims passed; report written to {out / 'report.json'}")
    return code


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--zeros", help="zero table file (default: $ZETA_LAB_ZEROS, else generated)")
    common.add_argument("--zero-count", type=int, help="zero budget for I_P-based checks (default 10000)")
    common.add_argument("--out", help="output directory for CSV/JSON (default .)")
    common.add_argument("--tol", action="append", metavar="CLAIM=VAL",
                        help="tolerance override; a bare value applies to every claim run")
    common.add_argument("--parallelism", type=int, help="worker processes (default 1)")
    common.add_argument("--config", help="key=value config file")

    p = argparse.ArgumentParser(prog="zetalab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verify-constants", parents=[common], help="printed constants")
    sp.set_defaults(func=cmd_verify_constants)

    sp = sub.add_parser("verify-identities", parents=[common], help="identity residual grids")
    sp.add_argument("--x", default="0.2..0.8:20")
    sp.add_argument("--y", default="5..60:20")
    sp.add_argument("--exclude", type=float, default=0.05, help="skip points this close to a zero")
    sp.set_defaults(func=cmd_verify_identities)

    sp = sub.add_parser("lemma1", parents=[common], help="balance-point probes around one zero")
    sp.add_argument("--zero", type=int, default=1, help="1-based zero index")
    sp.add_argument("--radii", default="0.4,0.2,0.1,0.05")
    sp.set_defaults(func=cmd_lemma1)

    sp = sub.add_parser("lemma2", parents=[common], help="trigamma endpoint equality")
    sp.add_argument("--zero", type=int, default=1)
    sp.add_argument("--sigma", type=float, help="move the zero off the line (hypothetical)")
    sp.set_defaults(func=cmd_lemma2)

    sp = sub.add_parser("lemma3", parents=[common], help="S/G series and bounds")
    sp.add_argument("--x", default="0.025..0.5:20")
    sp.add_argument("--y", default="4..50:20")
    sp.set_defaults(func=cmd_lemma3)

    sp = sub.add_parser("alpha-scan", parents=[common], help="alpha and d alpha/dy negativity")
    sp.add_argument("--sigma", default="0.05..0.5:10")
    sp.add_argument("--t", default="8..60:27")
    sp.set_defaults(func=cmd_alpha_scan)

    sp = sub.add_parser("zeros", parents=[common], help="generate or validate zero tables")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--generate", nargs=2, type=float, metavar=("T_LO", "T_HI"))
    g.add_argument("--ingest", metavar="PATH")
    sp.add_argument("--output", help="file for --generate (default OUT/zeros.txt)")
    sp.add_argument("--root-tol", type=float, default=1e-10)
    sp.set_defaults(func=cmd_zeros)

    sp = sub.add_parser("report", parents=[common], help="run every claim")
    sp.add_argument("--timings", action="store_true", help="add runtimes to report.json")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
