"""Five most preferred stocks for investors from risk-averse (small q) to risk-tolerant (q = 1).

    python scripts/top5.py [--input prices.csv] [--measure neu-fev] [--lam 0.5]
"""
import argparse

from fracrisk.entropy_core import EntropyParams
from fracrisk.risk_measures import Measure, RiskConfig
from fracrisk.sweep_report import emit_report, top_k

from _common import add_source_args, load_universe


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    add_source_args(p)
    p.add_argument("--measure", default="neu-fev", choices=[m.value for m in Measure])
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--qs", default="0.1,0.5,1.0")
    args = p.parse_args()

    _, stocks = load_universe(args)
    rankings = []
    for q in (float(v) for v in args.qs.split(",")):
        cfg = RiskConfig(Measure(args.measure), args.lam, EntropyParams(q, args.bins))
        r = top_k(stocks, cfg, 5)
        rankings.append(r)
        print(f"q={q:<4g} " + "  ".join(f"{label}({s.total:+.4f})" for label, s in r.entries))
    emit_report(args.out / "top5", rankings=rankings,
                metadata={"script": "top5", "measure": args.measure, "lambda": args.lam, "qs": args.qs},
                bundle_name="top5.json")


if __name__ == "__main__":
    main()
