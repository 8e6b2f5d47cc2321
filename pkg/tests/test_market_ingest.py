import datetime as dt
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracrisk.errors import DomainError, IngestionError
from fracrisk.market_ingest import (BinGrid, PricePanel, bin_panel, bin_prospect, box_muller, load_price_csv,
                                    log_returns, make_bin_grid, nifty50_tickers, synth_panel, write_price_csv)

import oracles

D0 = dt.date(2020, 1, 1)


def days(n):
    return tuple(D0 + dt.timedelta(days=i) for i in range(n))


def test_nifty_list():
    names = nifty50_tickers()
    assert len(names) == 48 == len(set(names))
    assert names[0] == "ADEL" and names[-1] == "WIPR"


class TestPanel:
    def test_log_returns(self):
        r = log_returns(PricePanel(("A", "B"), days(3), [[100, 105, 105], [100, 100, 100]]))
        assert r.returns.shape == (2, 2)
        assert r.series("A")[0] == pytest.approx(oracles.EU_A1, abs=1e-6)
        assert np.array_equal(r.series("B"), [0.0, 0.0])
        assert r.r_min == 0.0 and r.r_max == pytest.approx(math.log(1.05))

    def test_nonpositive_price_names_ticker_and_row(self):
        with pytest.raises(IngestionError, match=r"ticker B .*row 1"):
            PricePanel(("A", "B"), days(2), [[1.0, 2.0], [1.0, 0.0]])

    @pytest.mark.parametrize("kwargs", [
        dict(tickers=("A",), dates=days(1), closes=[[1.0]]),
        dict(tickers=("A", "A"), dates=days(2), closes=[[1.0, 1.0], [1.0, 1.0]]),
        dict(tickers=("A",), dates=(D0, D0), closes=[[1.0, 1.0]]),
        dict(tickers=("A",), dates=days(3), closes=[[1.0, 1.0]]),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(IngestionError):
            PricePanel(**kwargs)


class TestGrid:
    def test_width_example(self):
        assert abs(make_bin_grid(-0.187, 0.128, 15).width - oracles.GRID_WIDTH) < 1e-15

    def test_examples(self):
        g = make_bin_grid(0.0, 1.0, 1)
        assert g.edges == (0.0, 1.0)
        assert make_bin_grid(0.0, 1.0, 4).edges == (0.0, 0.25, 0.5, 0.75, 1.0)

    @pytest.mark.parametrize("args", [(1.0, 1.0, 3), (1.0, 0.0, 3), (0.0, 1.0, 0)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            make_bin_grid(*args)

    @given(st.floats(-1, 0.5), st.floats(1e-3, 1), st.integers(1, 40))
    def test_uniform(self, lo, span, j):
        g = make_bin_grid(lo, lo + span, j)
        assert len(g.edges) == j + 1 and g.edges[0] == lo and g.edges[-1] == lo + span
        assert np.allclose(np.diff(g.edges), g.width, rtol=0, atol=1e-12)

    def test_boundaries(self):
        g = make_bin_grid(0.0, 1.0, 4)
        assert list(g.locate([0.0, 0.25, 0.4999, 0.5, 1.0])) == [0, 1, 1, 2, 3]
        with pytest.raises(DomainError):
            g.locate([1.0 + 1e-12])
        with pytest.raises(DomainError):
            g.locate([-1e-12])


class TestBinning:
    def test_hand_example(self):
        p = bin_prospect([0.1, 0.3, 0.3, 0.9], make_bin_grid(0.0, 1.0, 2))
        assert p.probs == (0.75, 0.25)
        assert p.payoffs[0] == pytest.approx(0.7 / 3) and p.payoffs[1] == pytest.approx(0.9)

    def test_single_bin(self):
        p = bin_prospect([0.11, 0.12, 0.13], make_bin_grid(0.0, 1.0, 2))
        assert p.probs == (1.0,) and p.payoffs[0] == pytest.approx(0.12)

    def test_empty_bins_dropped(self):
        g = make_bin_grid(0.0, 1.5, 15)
        p = bin_prospect([0.05, 0.06, 0.71, 0.72, 1.45], g)
        assert len(p.payoffs) == 3

    def test_off_grid(self):
        with pytest.raises(DomainError):
            bin_prospect([0.5, 2.0], make_bin_grid(0.0, 1.0, 2))

    @given(st.lists(st.floats(-0.2, 0.2), min_size=2, max_size=300), st.integers(1, 20))
    def test_round_trip(self, r, j):
        r = np.asarray(r)
        if r.max() <= r.min():
            return
        g = make_bin_grid(r.min(), r.max(), j)
        p = bin_prospect(r, g)
        assert math.fsum(p.probs) == pytest.approx(1.0, abs=1e-12)
        assert math.fsum(x * w for x, w in zip(p.payoffs, p.probs)) == pytest.approx(r.mean(), abs=1e-12)
        counts = np.bincount(g.locate(r), minlength=j)
        assert counts.sum() == r.size  # exhaustive and exclusive

    def test_panel_order_invariance(self, returns):
        grid, ps = bin_panel(returns, 15)
        assert grid.r_min == returns.r_min and grid.r_max == returns.r_max
        rev = type(returns)(returns.tickers[::-1], returns.returns[::-1], returns.r_min, returns.r_max)
        _, ps_rev = bin_panel(rev, 15)
        assert ps_rev[::-1] == ps

    def test_threads_do_not_change_result(self, returns):
        assert bin_panel(returns, 15, threads=4) == bin_panel(returns, 15)


class TestSynth:
    def test_deterministic(self):
        assert synth_panel(7, 2, 3, 0.01) == synth_panel(7, 2, 3, 0.01)
        assert synth_panel(7, 2, 3) != synth_panel(8, 2, 3)

    def test_shape(self, panel, returns):
        assert len(panel.tickers) == 48 and len(panel.dates) == 246
        assert returns.returns.shape == (48, 245)
        assert panel.tickers == tuple(nifty50_tickers())
        assert all(d.weekday() < 5 for d in panel.dates)

    def test_vol(self, returns):
        sd = returns.returns.std(axis=1, ddof=1)
        assert ((sd > 0.005) & (sd < 0.02)).all()

    def test_many_tickers_get_generic_names(self):
        p = synth_panel(1, 50, 3)
        assert p.tickers[0] == "T001" and len(set(p.tickers)) == 50

    @pytest.mark.parametrize("args", [(0, 1, 5), (0, 5, 1), (0, 5, 5, 0.0)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            synth_panel(*args)

    def test_box_muller_moments(self):
        z = box_muller(np.random.default_rng(0), 200_000)
        assert abs(z.mean()) < 0.01 and abs(z.std() - 1) < 0.01


class TestCsv:
    @pytest.mark.parametrize("fmt", ["long", "wide"])
    def test_round_trip(self, tmp_path, fmt):
        panel = synth_panel(3, 5, 20)
        path = tmp_path / f"p_{fmt}.csv"
        write_price_csv(panel, path, fmt)
        assert load_price_csv(path, fmt) == panel

    def test_two_by_two(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("date,ticker,close\n2020-01-01,A,10\n2020-01-02,A,11\n2020-01-01,B,5\n2020-01-02,B,4\n")
        r = log_returns(load_price_csv(f))
        assert r.returns.shape == (2, 1)

    def test_allow_list(self, tmp_path):
        f = tmp_path / "p.csv"
        write_price_csv(synth_panel(3, 5, 4), f)
        panel = load_price_csv(f, allow=["ADEL", "ZZZZ"])
        assert panel.tickers == ("ADEL",)
        with pytest.raises(IngestionError, match="allow-list"):
            load_price_csv(f, allow=["ZZZZ"])

    @pytest.mark.parametrize("body,match", [
        ("date,ticker,close\n2020-01-01,A,10\n2020-01-02,A,0\n", "row 3"),
        ("date,ticker,close\n2020-01-01,A,10\n2020-01-02,A,abc\n", "row 3: unparsable price"),
        ("date,ticker,close\n2020-01-02,A,10\n2020-01-01,A,11\n", "row 3: dates"),
        ("date,ticker,close\n2020-13-01,A,10\n", "row 2: unparsable date"),
        ("date,ticker\n2020-01-01,A\n", "header"),
        ("date,ticker,close\n2020-01-01,A\n", "row 2: expected 3"),
        ("date,ticker,close\n", "no data"),
        ("date,ticker,close\n2020-01-01,A,1\n2020-01-02,A,1\n2020-01-01,B,1\n2020-01-03,B,1\n", "date set"),
    ])
    def test_long_errors(self, tmp_path, body, match):
        f = tmp_path / "bad.csv"
        f.write_text(body)
        with pytest.raises(IngestionError, match=match):
            load_price_csv(f)

    def test_wide_errors(self, tmp_path):
        f = tmp_path / "bad.csv"
        f.write_text("date,A,B\n2020-01-01,1,2\n2020-01-02,1,-2\n")
        with pytest.raises(IngestionError, match="row 3: non-positive price -2.0 for B"):
            load_price_csv(f, "wide")
        f.write_text("day,A\n2020-01-01,1\n")
        with pytest.raises(IngestionError, match="header"):
            load_price_csv(f, "wide")

    def test_unknown_format(self, tmp_path):
        with pytest.raises(IngestionError):
            load_price_csv(tmp_path / "x.csv", "json")
