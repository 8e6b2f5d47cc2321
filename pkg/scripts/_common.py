"""Shared argument handling for the experiment scripts."""
from __future__ import annotations

import argparse
from pathlib import Path

from fracrisk.market_ingest import bin_panel, load_price_csv, log_returns, nifty50_tickers, synth_panel


def add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", type=Path, help="price CSV (default: synthetic panel)")
    p.add_argument("--format", choices=("long", "wide"), default="long")
    p.add_argument("--seed", type=int, default=7, help="synthetic panel seed")
    p.add_argument("--bins", type=int, default=15)
    p.add_argument("--out", type=Path, default=Path("results"))


def load_universe(args):
    if args.input is not None:
        panel = load_price_csv(args.input, args.format, nifty50_tickers())
    else:
        panel = synth_panel(args.seed)
    return bin_panel(log_returns(panel), args.bins)
