"""q / lambda sweeps over a stock universe and plot-ready report files.

Output files written by :func:`emit_report` into one directory:

``heatmap_<measure>.csv``
    long form, one row per (stock, q, lambda):
    ``stock,q,lambda,measure,total,entropy_term,variance_term,utility_term``
``heatmap_<measure>_lambda<l>.csv``
    the same totals as a stock x q matrix for each lambda (``stock,<q1>,<q2>,...``)
``ranking.csv``
    ``rank,stock,total`` (one file per ranking; suffixed when there are several)
``validation_table.csv``
    model rows, (MSE, R^2) column pairs per measure
``r2_comparison.csv``
    ``model,measure,r2`` one row per (model, measure)
``report.json``
    everything above plus run metadata (the CLI names it ``report_<command>.json``)

Floats are written with ``repr`` so a re-read reproduces them exactly.
"""
from __future__ import annotations

import csv
import json
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .errors import DomainError, FracRiskError
from .prospects import Prospect
from .risk_measures import ActionSpace, Measure, Ranking, RiskConfig, rank, risk_score

HEATMAP_COLUMNS = ("stock", "q", "lambda", "measure", "total", "entropy_term", "variance_term", "utility_term")
RANKING_COLUMNS = ("rank", "stock", "total")

DEFAULT_Q_VALUES = tuple(round(0.05 * i, 2) for i in range(1, 21))
DEFAULT_LAMBDA_VALUES = (0.0, 0.25, 0.5, 0.75, 1.0)


def _check_axis(name: str, values: Sequence[float]) -> tuple[float, ...]:
    values = tuple(float(v) for v in values)
    if not values:
        raise DomainError(f"{name} grid must not be empty")
    if any(not (0.0 <= v <= 1.0) for v in values):
        raise DomainError(f"{name} values must lie in [0, 1]")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise DomainError(f"{name} values must be strictly ascending")
    return values


@dataclass(frozen=True)
class SweepGrid:
    q_values: tuple[float, ...] = DEFAULT_Q_VALUES
    lambda_values: tuple[float, ...] = DEFAULT_LAMBDA_VALUES
    measure: Measure = Measure.NEU_FEV

    def __post_init__(self):
        object.__setattr__(self, "q_values", _check_axis("q", self.q_values))
        object.__setattr__(self, "lambda_values", _check_axis("lambda", self.lambda_values))
        object.__setattr__(self, "measure", Measure(self.measure))


@dataclass(frozen=True, eq=False)
class HeatmapData:
    """Risk totals and their terms on a stocks x q x lambda grid."""

    stocks: tuple[str, ...]
    q_values: tuple[float, ...]
    lambda_values: tuple[float, ...]
    measure: Measure
    total: np.ndarray
    entropy_term: np.ndarray = field(repr=False)
    variance_term: np.ndarray = field(repr=False)
    utility_term: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.total.shape

    def matrix(self, lambda_index: int | None = None) -> np.ndarray:
        """Stocks x q totals at one lambda (the only one if the grid has a single lambda).

        A grid with a single q and several lambdas gives stocks x lambda.
        """
        if lambda_index is not None:
            return self.total[:, :, lambda_index]
        if len(self.lambda_values) == 1:
            return self.total[:, :, 0]
        if len(self.q_values) == 1:
            return self.total[:, 0, :]
        raise DomainError("grid has several q and lambda values; pass lambda_index")


def sweep(actions: Sequence[Prospect], grid: SweepGrid, base: RiskConfig, threads: int = 1) -> HeatmapData:
    """Score every action at every (q, lambda) point of ``grid``.

    ``base`` supplies the support rule; its q, lambda and measure are
    overridden by the grid. Normalizers come from the full action set.
    """
    space = ActionSpace(actions)
    nq, nl = len(grid.q_values), len(grid.lambda_values)
    shape = (len(space), nq, nl)
    arrays = {k: np.empty(shape) for k in ("total", "entropy_term", "variance_term", "utility_term")}

    def column(cell):
        j, k = cell
        cfg = base.replace(measure=grid.measure, q=grid.q_values[j], lam=grid.lambda_values[k])
        return cell, [risk_score(p, space, cfg) for p in space]

    cells = [(j, k) for j in range(nq) for k in range(nl)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(column, cells))
    else:
        results = [column(c) for c in cells]
    for (j, k), scores in results:
        for i, s in enumerate(scores):
            arrays["total"][i, j, k] = s.total
            arrays["entropy_term"][i, j, k] = s.entropy_term
            arrays["variance_term"][i, j, k] = s.variance_term
            arrays["utility_term"][i, j, k] = s.utility_term
    if not np.isfinite(arrays["total"]).all():
        raise DomainError("sweep produced non-finite risk totals")
    return HeatmapData(tuple(p.label for p in space), grid.q_values, grid.lambda_values, grid.measure, **arrays)


def top_k(actions: Sequence[Prospect], cfg: RiskConfig, k: int) -> Ranking:
    if k < 0 or k > len(actions):
        raise DomainError(f"k must be between 0 and {len(actions)}, got {k}")
    if k == 0:
        return Ranking(())
    return Ranking(rank(actions, cfg).entries[:k])


# --- file output ---------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def _label(x: float) -> str:
    return f"{x:g}"


def _write_csv(path: Path, header, rows) -> None:
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise FracRiskError(f"cannot write {path}: {exc.strerror or exc}") from exc


def heatmap_rows(h: HeatmapData):
    for i, stock in enumerate(h.stocks):
        for j, q in enumerate(h.q_values):
            for k, lam in enumerate(h.lambda_values):
                yield (stock, _fmt(q), _fmt(lam), h.measure.value, _fmt(h.total[i, j, k]),
                       _fmt(h.entropy_term[i, j, k]), _fmt(h.variance_term[i, j, k]),
                       _fmt(h.utility_term[i, j, k]))


def write_heatmap(h: HeatmapData, out_dir: Path) -> list[Path]:
    stem = f"heatmap_{h.measure.value}"
    paths = [out_dir / f"{stem}.csv"]
    _write_csv(paths[0], HEATMAP_COLUMNS, heatmap_rows(h))
    for k, lam in enumerate(h.lambda_values):
        path = out_dir / f"{stem}_lambda{_label(lam)}.csv"
        rows = ([stock, *(_fmt(v) for v in h.total[i, :, k])] for i, stock in enumerate(h.stocks))
        _write_csv(path, ["stock", *(_fmt(q) for q in h.q_values)], rows)
        paths.append(path)
    return paths


def read_heatmap_matrix(path: str | Path) -> tuple[list[str], list[float], np.ndarray]:
    """Parse a ``stock,<q1>,...`` matrix file back into (stocks, q values, totals)."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    return [r[0] for r in rows], [float(q) for q in header[1:]], np.array([[float(v) for v in r[1:]] for r in rows])


def read_heatmap_long(path: str | Path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def write_ranking(r: Ranking, path: Path) -> None:
    _write_csv(path, RANKING_COLUMNS,
               ((i + 1, label, _fmt(s.total)) for i, (label, s) in enumerate(r.entries)))


def validation_table(fit_reports) -> tuple[list[str], list[list]]:
    """One row per model, an (MSE, R^2) column pair per measure."""
    models = list(dict.fromkeys(r.model for r in fit_reports))
    measures = list(dict.fromkeys(_measure_of(r) for r in fit_reports))
    cell = {(r.model, _measure_of(r)): r for r in fit_reports}
    header = ["model"]
    for m in measures:
        header += [f"{m}_mse", f"{m}_r2"]
    rows = []
    for model in models:
        row = [model.title]
        for m in measures:
            r = cell.get((model, m))
            row += [_fmt(r.mse), _fmt(r.r2)] if r else ["", ""]
        rows.append(row)
    return header, rows


def _measure_of(report) -> str:
    return report.target.split("(")[0] if report.target else ""


def run_metadata(**extra) -> dict:
    return {
        "package_version": __version__,
        "numpy_version": np.__version__,
        "python_version": platform.python_version(),
        **extra,
    }


def emit_report(out_dir: str | Path, heatmaps: Sequence[HeatmapData] = (), rankings: Sequence[Ranking] = (),
                fit_reports: Sequence = (), metadata: dict | None = None,
                bundle_name: str = "report.json") -> dict[str, list[str]]:
    """Write every artefact into ``out_dir`` and return the file names by kind."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise FracRiskError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc
    files: dict[str, list[str]] = {"heatmaps": [], "rankings": [], "validation": []}
    bundle: dict = {"metadata": run_metadata(**(metadata or {}))}

    if heatmaps:
        bundle["heatmaps"] = []
        for h in heatmaps:
            files["heatmaps"] += [p.name for p in write_heatmap(h, out)]
            bundle["heatmaps"].append({
                "measure": h.measure.value, "stocks": list(h.stocks), "q_values": list(h.q_values),
                "lambda_values": list(h.lambda_values), "total": h.total.tolist(),
            })
    if rankings:
        bundle["rankings"] = []
        for n, r in enumerate(rankings):
            name = "ranking.csv" if len(rankings) == 1 else f"ranking_{n + 1}.csv"
            write_ranking(r, out / name)
            files["rankings"].append(name)
            bundle["rankings"].append([{"rank": i + 1, "stock": label, "total": s.total,
                                        "measure": s.measure.value, "lambda": s.lam}
                                       for i, (label, s) in enumerate(r.entries)])
    if fit_reports:
        header, rows = validation_table(fit_reports)
        _write_csv(out / "validation_table.csv", header, rows)
        _write_csv(out / "r2_comparison.csv", ("model", "measure", "r2"),
                   ((r.model.title, _measure_of(r), _fmt(r.r2)) for r in fit_reports))
        files["validation"] += ["validation_table.csv", "r2_comparison.csv"]
        bundle["validation"] = [r.as_dict() for r in fit_reports]
    try:
        (out / bundle_name).write_text(json.dumps(bundle, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise FracRiskError(f"cannot write {out / bundle_name}: {exc.strerror or exc}") from exc
    files["bundle"] = [bundle_name]
    return files
