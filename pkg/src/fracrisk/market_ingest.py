"""Daily closing prices -> log returns -> binned prospects.

All tickers share one global grid spanning the pooled return range, so the
resulting prospects are directly comparable. CSV input comes in two layouts:

* ``long``: header ``date,ticker,close``, one row per observation
* ``wide``: header ``date,<ticker1>,<ticker2>,...``, one row per date
"""
from __future__ import annotations

import csv
import datetime as dt
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, IngestionError
from .prospects import Prospect

FORMATS = ("long", "wide")


def nifty50_tickers() -> list[str]:
    """The 48 NIFTY50 component symbols shipped as the default allow-list."""
    text = resources.files("fracrisk").joinpath("data/nifty50.txt").read_text()
    return [line.strip() for line in text.splitlines() if line.strip()]


@dataclass(frozen=True, eq=False)
class PricePanel:
    tickers: tuple[str, ...]
    dates: tuple[dt.date, ...]
    closes: np.ndarray  # (ticker, day)

    def __post_init__(self):
        closes = np.asarray(self.closes, dtype=np.float64)
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "closes", closes)
        if closes.shape != (len(self.tickers), len(self.dates)):
            raise IngestionError(
                f"closes shape {closes.shape} does not match "
                f"{len(self.tickers)} tickers x {len(self.dates)} dates")
        if len(set(self.tickers)) != len(self.tickers):
            raise IngestionError("duplicate ticker symbols")
        if len(self.dates) < 2:
            raise IngestionError("need at least 2 days of prices per ticker")
        for i in range(1, len(self.dates)):
            if not self.dates[i] > self.dates[i - 1]:
                raise IngestionError(f"dates not strictly increasing at row {i}: {self.dates[i]}")
        bad = np.argwhere(~(closes > 0.0) | ~np.isfinite(closes))
        if bad.size:
            i, t = bad[0]
            raise IngestionError(
                f"non-positive price {closes[i, t]!r} for ticker {self.tickers[i]} "
                f"on {self.dates[t]} (row {t})")

    def __eq__(self, other):
        if not isinstance(other, PricePanel):
            return NotImplemented
        return (self.tickers == other.tickers and self.dates == other.dates
                and np.array_equal(self.closes, other.closes))


@dataclass(frozen=True, eq=False)
class ReturnPanel:
    tickers: tuple[str, ...]
    returns: np.ndarray  # (ticker, day - 1)
    r_min: float
    r_max: float

    def series(self, ticker: str) -> np.ndarray:
        return self.returns[self.tickers.index(ticker)]


@dataclass(frozen=True)
class BinGrid:
    """``J`` equal-width bins; the last is closed, the rest half-open."""

    bin_count: int
    width: float
    edges: tuple[float, ...]

    @property
    def r_min(self) -> float:
        return self.edges[0]

    @property
    def r_max(self) -> float:
        return self.edges[-1]

    def locate(self, r: np.ndarray) -> np.ndarray:
        """Bin index of each return; raises if any return is off the grid."""
        r = np.asarray(r, dtype=np.float64)
        off = (r < self.r_min) | (r > self.r_max) | ~np.isfinite(r)
        if off.any():
            bad = r[off][0]
            raise DomainError(f"return {bad!r} outside grid [{self.r_min!r}, {self.r_max!r}]")
        idx = np.searchsorted(np.asarray(self.edges), r, side="right") - 1
        return np.minimum(idx, self.bin_count - 1)


def log_returns(panel: PricePanel) -> ReturnPanel:
    returns = np.log(panel.closes[:, 1:] / panel.closes[:, :-1])
    return ReturnPanel(panel.tickers, returns, float(returns.min()), float(returns.max()))


def make_bin_grid(r_min: float, r_max: float, bin_count: int) -> BinGrid:
    if not r_max > r_min:
        raise DomainError(f"r_max ({r_max!r}) must exceed r_min ({r_min!r})")
    if bin_count < 1:
        raise DomainError(f"bin count must be >= 1, got {bin_count}")
    width = (r_max - r_min) / bin_count
    edges = [r_min + k * width for k in range(bin_count)] + [r_max]
    return BinGrid(int(bin_count), width, tuple(edges))


def bin_prospect(returns: Sequence[float], grid: BinGrid, label: str = "") -> Prospect:
    """Histogram a return series on ``grid``.

    Each occupied bin becomes one outcome whose probability is its relative
    frequency and whose payoff is the mean return inside it. Empty bins are
    dropped.
    """
    r = np.asarray(returns, dtype=np.float64)
    if r.size == 0:
        raise DomainError("cannot bin an empty return series")
    idx = grid.locate(r)
    counts = np.bincount(idx, minlength=grid.bin_count)
    sums = np.bincount(idx, weights=r, minlength=grid.bin_count)
    occupied = np.flatnonzero(counts)
    return Prospect(tuple(sums[occupied] / counts[occupied]),
                    tuple(counts[occupied] / r.size), label)


def bin_panel(ret: ReturnPanel, bin_count: int = 15, threads: int = 1) -> tuple[BinGrid, list[Prospect]]:
    """Bin every ticker on the shared grid, in ticker order."""
    grid = make_bin_grid(ret.r_min, ret.r_max, bin_count)
    jobs = list(zip(ret.returns, ret.tickers))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            prospects = list(pool.map(lambda job: bin_prospect(job[0], grid, job[1]), jobs))
    else:
        prospects = [bin_prospect(r, grid, t) for r, t in jobs]
    return grid, prospects


# --- CSV -------------------------------------------------------------------

def _parse_date(text: str, row: int) -> dt.date:
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise IngestionError(f"row {row}: unparsable date {text!r}") from None


def _parse_price(text: str, row: int, ticker: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise IngestionError(f"row {row}: unparsable price {text!r} for {ticker}") from None
    if not (value > 0.0 and math.isfinite(value)):
        raise IngestionError(f"row {row}: non-positive price {value!r} for {ticker}")
    return value


def _read_long(reader, path) -> tuple[list[str], list[dt.date], list[list[float]]]:
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["date", "ticker", "close"]:
        raise IngestionError(f"{path}: long format needs header 'date,ticker,close', got {header}")
    series: dict[str, tuple[list[dt.date], list[float]]] = {}
    for row, fields in enumerate(reader, start=2):
        if not fields:
            continue
        if len(fields) != 3:
            raise IngestionError(f"{path}: row {row}: expected 3 fields, got {len(fields)}")
        date = _parse_date(fields[0], row)
        ticker = fields[1].strip()
        dates, closes = series.setdefault(ticker, ([], []))
        if dates and not date > dates[-1]:
            raise IngestionError(f"{path}: row {row}: dates for {ticker} not strictly increasing")
        dates.append(date)
        closes.append(_parse_price(fields[2], row, ticker))
    if not series:
        raise IngestionError(f"{path}: no data rows")
    tickers = list(series)
    dates = series[tickers[0]][0]
    for t in tickers[1:]:
        if series[t][0] != dates:
            raise IngestionError(f"{path}: ticker {t} has a different date set than {tickers[0]}")
    return tickers, dates, [series[t][1] for t in tickers]


def _read_wide(reader, path) -> tuple[list[str], list[dt.date], list[list[float]]]:
    header = next(reader, None)
    if header is None or len(header) < 2 or header[0].strip() != "date":
        raise IngestionError(f"{path}: wide format needs header 'date,<ticker>,...', got {header}")
    tickers = [h.strip() for h in header[1:]]
    dates: list[dt.date] = []
    cols: list[list[float]] = [[] for _ in tickers]
    for row, fields in enumerate(reader, start=2):
        if not fields:
            continue
        if len(fields) != len(header):
            raise IngestionError(f"{path}: row {row}: expected {len(header)} fields, got {len(fields)}")
        date = _parse_date(fields[0], row)
        if dates and not date > dates[-1]:
            raise IngestionError(f"{path}: row {row}: dates not strictly increasing")
        dates.append(date)
        for j, t in enumerate(tickers):
            cols[j].append(_parse_price(fields[j + 1], row, t))
    return tickers, dates, cols


def load_price_csv(path: str | Path, format: str = "long",
                   allow: Iterable[str] | None = None) -> PricePanel:
    """Read a price panel, optionally keeping only tickers in ``allow``."""
    if format not in FORMATS:
        raise IngestionError(f"unknown CSV format {format!r}; expected one of {FORMATS}")
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        tickers, dates, closes = (_read_long if format == "long" else _read_wide)(reader, path)
    if allow is not None:
        keep = set(allow)
        pairs = [(t, c) for t, c in zip(tickers, closes) if t in keep]
        if not pairs:
            raise IngestionError(f"{path}: no tickers left after applying the allow-list")
        tickers, closes = [t for t, _ in pairs], [c for _, c in pairs]
    try:
        return PricePanel(tuple(tickers), tuple(dates), np.array(closes, dtype=np.float64))
    except IngestionError as exc:
        raise IngestionError(f"{path}: {exc}") from None


def write_price_csv(panel: PricePanel, path: str | Path, format: str = "long") -> None:
    if format not in FORMATS:
        raise IngestionError(f"unknown CSV format {format!r}; expected one of {FORMATS}")
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if format == "long":
            w.writerow(["date", "ticker", "close"])
            for i, t in enumerate(panel.tickers):
                for d, c in zip(panel.dates, panel.closes[i]):
                    w.writerow([d.isoformat(), t, repr(float(c))])
        else:
            w.writerow(["date", *panel.tickers])
            for j, d in enumerate(panel.dates):
                w.writerow([d.isoformat(), *(repr(float(c)) for c in panel.closes[:, j])])


# --- synthetic data ----------------------------------------------------------

def box_muller(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` standard normals from pairs of PCG64 uniforms (cosine branch only)."""
    u1 = 1.0 - rng.random(n)  # (0, 1]
    u2 = rng.random(n)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def _business_days(start: dt.date, count: int) -> list[dt.date]:
    days, d = [], start
    while len(days) < count:
        if d.weekday() < 5:
            days.append(d)
        d += dt.timedelta(days=1)
    return days


def synth_panel(seed: int, tickers: int = 48, days: int = 246, vol: float = 0.01) -> PricePanel:
    """Geometric random walk panel with Gaussian log increments.

    Each ticker draws its own volatility multiplier in [0.6, 1.8], a small
    drift, and a starting price in [50, 500]. Reproducible for a given seed:
    every draw comes from a single PCG64 stream in a fixed order.
    """
    if tickers < 2 or days < 2:
        raise DomainError("synthetic panel needs at least 2 tickers and 2 days")
    if not vol > 0.0:
        raise DomainError(f"vol must be positive, got {vol!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    names = nifty50_tickers()
    symbols = names[:tickers] if tickers <= len(names) else [f"T{i + 1:03d}" for i in range(tickers)]
    closes = np.empty((tickers, days))
    for i in range(tickers):
        vol_mult = 0.6 + 1.2 * rng.random()
        drift = 0.1 * vol * box_muller(rng, 1)[0]
        start = 50.0 + 450.0 * rng.random()
        steps = drift + vol * vol_mult * box_muller(rng, days - 1)
        closes[i, 0] = start
        closes[i, 1:] = start * np.exp(np.cumsum(steps))
    return PricePanel(tuple(symbols), tuple(_business_days(dt.date(2017, 3, 6), days)), closes)
