"""Command-line entry point: ``fracrisk {rank,sweep,validate,synth,entropy}``.

Exit codes: 0 success, 1 domain or ingestion error, 2 usage error.
The default output directory is ``$FRACRISK_OUTPUT_DIR`` or ``./fracrisk_out``.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .entropy_core import EntropyParams, fractional_entropy, normalized_fractional_entropy
from .errors import FracRiskError
from .market_ingest import (FORMATS, bin_panel, load_price_csv, log_returns, nifty50_tickers, synth_panel,
                            write_price_csv)
from .ml_validation.features import feature_names
from .ml_validation.protocol import DEFAULTS, MEASURE_ORDER, Model, run_validation
from .risk_measures import Measure, RiskConfig
from .sweep_report import (DEFAULT_LAMBDA_VALUES, DEFAULT_Q_VALUES, SweepGrid, emit_report, sweep, top_k,
                           validation_table)

OUTPUT_ENV = "FRACRISK_OUTPUT_DIR"


def _bounded(kind, lo=None, hi=None, lo_open=False):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a valid {kind.__name__}: {text!r}") from None
        if (lo is not None and (value <= lo if lo_open else value < lo)) or (hi is not None and value > hi):
            left = "(" if lo_open else "["
            raise argparse.ArgumentTypeError(
                f"{value} outside {left}{'-inf' if lo is None else lo}, {'inf' if hi is None else hi}]")
        return value
    return parse


def _unit_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError("values must lie in [0, 1]")
    return values


def _choice_list(choices):
    def parse(text):
        items = [t.strip() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in choices]
        if not items or bad:
            raise argparse.ArgumentTypeError(f"choose from {', '.join(choices)}")
        return items
    return parse


unit = _bounded(float, 0.0, 1.0)
positive_int = _bounded(int, 1)
MEASURES = [m.value for m in Measure]
MODELS = [m.value for m in Model]


def _add_input(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input (choose one source)")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path, help="price CSV file")
    src.add_argument("--synth", action="store_true", help="use a synthetic geometric random walk panel")
    g.add_argument("--format", choices=FORMATS, default="long",
                   help="CSV layout: long = date,ticker,close; wide = date,<ticker>,... (default: long)")
    g.add_argument("--allow-list", metavar="PATH|nifty50",
                   help="keep only these tickers; 'nifty50' uses the shipped 48-symbol list")
    g.add_argument("--seed", type=int, default=7, help="synthetic panel seed (default: 7)")
    g.add_argument("--tickers", type=_bounded(int, 2), default=48, help="synthetic tickers, >= 2 (default: 48)")
    g.add_argument("--days", type=_bounded(int, 2), default=246, help="synthetic days, >= 2 (default: 246)")
    g.add_argument("--vol", type=_bounded(float, 0.0, lo_open=True), default=0.01,
                   help="synthetic daily log-return volatility, > 0 (default: 0.01)")


def _add_risk(p: argparse.ArgumentParser, measure: str = "neu-fev", with_q: bool = True) -> None:
    g = p.add_argument_group("risk measure")
    g.add_argument("--bins", type=positive_int, default=15, help="number of return bins J, >= 1 (default: 15)")
    g.add_argument("--support", choices=("fixed", "nonzero"), default="fixed",
                   help="entropy normalizer count: fixed = J bins, nonzero = occupied bins (default: fixed)")
    g.add_argument("--measure", choices=MEASURES, default=measure, help=f"risk measure (default: {measure})")
    if with_q:
        g.add_argument("--q", type=unit, default=0.5, help="fractional order in [0, 1] (default: 0.5)")
        g.add_argument("--lambda", dest="lam", type=unit, default=0.5,
                       help="risk trade-off factor in [0, 1] (default: 0.5)")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=None,
                   help=f"output directory (default: ${OUTPUT_ENV} or ./fracrisk_out)")
    p.add_argument("--threads", type=positive_int, default=1, help="worker threads, >= 1 (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracrisk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="rank stocks by risk and print the top k")
    _add_input(p)
    _add_risk(p)
    p.add_argument("--k", type=_bounded(int, 0), default=5, help="rows to print, >= 0 (default: 5)")
    _add_output(p)

    p = sub.add_parser("sweep", help="risk heatmaps over q and lambda grids")
    _add_input(p)
    _add_risk(p, with_q=False)
    p.add_argument("--q-values", type=_unit_list, default=list(DEFAULT_Q_VALUES),
                   help="comma-separated ascending q values in [0, 1] (default: 0.05,0.10,...,1.00)")
    p.add_argument("--lambda-values", type=_unit_list, default=list(DEFAULT_LAMBDA_VALUES),
                   help="comma-separated ascending lambda values in [0, 1] (default: 0,0.25,0.5,0.75,1)")
    _add_output(p)

    p = sub.add_parser("validate", help="fit Ridge/Lasso/forest/ANN to the risk targets")
    _add_input(p)
    _add_risk(p)
    p.add_argument("--models", type=_choice_list(MODELS), default=list(MODELS),
                   help=f"comma-separated subset of {','.join(MODELS)} (default: all)")
    p.add_argument("--measures", type=_choice_list(MEASURES), default=list(MEASURE_ORDER),
                   help="comma-separated risk targets (default: neu-fe,eu-fe,neu-fev,eu-fev)")
    p.add_argument("--split-seed", type=int, default=7, help="train/test shuffle seed (default: 7)")
    p.add_argument("--feature-seed", type=int, default=0, help="bootstrap feature seed (default: 0)")
    p.add_argument("--bootstrap-reps", type=_bounded(int, 10), default=50,
                   help="bootstrap resamples per stock, >= 10 (default: 50)")
    _add_output(p)

    p = sub.add_parser("synth", help="write a synthetic price CSV")
    p.add_argument("--seed", type=int, default=7, help="generator seed (default: 7)")
    p.add_argument("--tickers", type=_bounded(int, 2), default=48, help="tickers, >= 2 (default: 48)")
    p.add_argument("--days", type=_bounded(int, 2), default=246, help="days, >= 2 (default: 246)")
    p.add_argument("--vol", type=_bounded(float, 0.0, lo_open=True), default=0.01,
                   help="daily log-return volatility, > 0 (default: 0.01)")
    p.add_argument("--format", choices=FORMATS, default="long", help="CSV layout (default: long)")
    p.add_argument("--output", type=Path, required=True, help="destination CSV path")

    p = sub.add_parser("entropy", help="print S_q and NS_q of an inline distribution")
    p.add_argument("probs", help="comma-separated probabilities summing to 1")
    p.add_argument("--q", type=unit, default=0.5, help="fractional order in [0, 1] (default: 0.5)")
    p.add_argument("--bins", type=positive_int, default=None,
                   help="fixed outcome count for the normalizer (default: nonzero support size)")
    return parser


def _out_dir(args) -> Path:
    if args.out is not None:
        return args.out
    return Path(os.environ.get(OUTPUT_ENV, "fracrisk_out"))


def _load_prospects(args):
    if args.synth:
        panel = synth_panel(args.seed, args.tickers, args.days, args.vol)
    else:
        if not args.input.is_file():
            raise FracRiskError(f"input file not found: {args.input}")
        allow = None
        if args.allow_list == "nifty50":
            allow = nifty50_tickers()
        elif args.allow_list:
            allow = [t.strip() for t in Path(args.allow_list).read_text().split() if t.strip()]
        panel = load_price_csv(args.input, args.format, allow)
    returns = log_returns(panel)
    grid, prospects = bin_panel(returns, args.bins, args.threads)
    source = ({"synth": {"seed": args.seed, "tickers": args.tickers, "days": args.days, "vol": args.vol}}
              if args.synth else {"input": str(args.input), "format": args.format, "allow_list": args.allow_list})
    meta = {"source": source, "bins": args.bins, "r_min": returns.r_min, "r_max": returns.r_max,
            "bin_width": grid.width, "returns_per_ticker": int(returns.returns.shape[1])}
    return prospects, meta


def _config(args, q=None, lam=None) -> RiskConfig:
    bin_count = args.bins if args.support == "fixed" else None
    return RiskConfig(Measure(args.measure), args.lam if lam is None else lam,
                      EntropyParams(args.q if q is None else q, bin_count))


def cmd_rank(args) -> int:
    prospects, meta = _load_prospects(args)
    cfg = _config(args)
    full = top_k(prospects, cfg, len(prospects))
    out = _out_dir(args)
    emit_report(out, rankings=[full], bundle_name="report_rank.json", metadata={
        **meta, "command": "rank", "measure": cfg.measure.value, "q": cfg.q, "lambda": cfg.lam,
        "support_rule": cfg.entropy.support_rule})
    k = min(args.k, len(full))
    print(f"{'rank':>4}  {'stock':<8} {'total':>12}")
    for i, (label, s) in enumerate(full.entries[:k]):
        print(f"{i + 1:>4}  {label:<8} {s.total:>12.6f}")
    return 0


def cmd_sweep(args) -> int:
    prospects, meta = _load_prospects(args)
    grid = SweepGrid(tuple(args.q_values), tuple(args.lambda_values), Measure(args.measure))
    base = RiskConfig(grid.measure, 0.5, EntropyParams(0.5, args.bins if args.support == "fixed" else None))
    h = sweep(prospects, grid, base, args.threads)
    out = _out_dir(args)
    files = emit_report(out, heatmaps=[h], bundle_name="report_sweep.json", metadata={
        **meta, "command": "sweep", "measure": grid.measure.value, "support_rule": base.entropy.support_rule})
    print(f"{h.shape[0]} stocks x {h.shape[1]} q x {h.shape[2]} lambda -> {out}")
    for name in files["heatmaps"]:
        print(f"  {name}")
    return 0


def cmd_validate(args) -> int:
    prospects, meta = _load_prospects(args)
    cfg = _config(args)
    models = [Model(m) for m in args.models]
    F, reports = run_validation(prospects, cfg, models, args.measures, args.split_seed, args.feature_seed,
                                args.bootstrap_reps, meta["returns_per_ticker"], args.threads)
    out = _out_dir(args)
    emit_report(out, fit_reports=reports, bundle_name="report_validate.json", metadata={
        **meta, "command": "validate", "q": cfg.q, "lambda": cfg.lam, "support_rule": cfg.entropy.support_rule,
        "split_seed": args.split_seed, "features": list(feature_names()), "feature_meta": F.meta,
        "constant_columns": F.constant_columns,
        "model_defaults": {m.value: {k: list(v) if isinstance(v, tuple) else v for k, v in DEFAULTS[m].items()}
                           for m in models}})
    header, rows = validation_table(reports)
    print(",".join(header))
    for row in rows:
        print(",".join([row[0], *(f"{float(v):.6g}" for v in row[1:] if v)]))
    return 0


def cmd_synth(args) -> int:
    panel = synth_panel(args.seed, args.tickers, args.days, args.vol)
    write_price_csv(panel, args.output, args.format)
    print(f"wrote {len(panel.tickers)} tickers x {len(panel.dates)} days to {args.output}")
    return 0


def cmd_entropy(args) -> int:
    try:
        probs = [float(v) for v in args.probs.split(",")]
    except ValueError:
        raise FracRiskError(f"cannot parse probabilities {args.probs!r}") from None
    params = EntropyParams(args.q, args.bins)
    print(f"S_q={fractional_entropy(probs, args.q)!r}")
    print(f"NS_q={normalized_fractional_entropy(probs, params)!r}")
    return 0


COMMANDS = {"rank": cmd_rank, "sweep": cmd_sweep, "validate": cmd_validate, "synth": cmd_synth,
            "entropy": cmd_entropy}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (FracRiskError, OSError) as exc:
        print(f"fracrisk: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
