"""MSE / R^2 of Ridge, Lasso, Random Forest and ANN on all four risk targets.

    python scripts/model_comparison.py [--input prices.csv] [--split-seed 7] [--loo]
"""
import argparse

from fracrisk.entropy_core import EntropyParams
from fracrisk.ml_validation import Model, fit_model, run_validation
from fracrisk.ml_validation.features import risk_targets, target_name
from fracrisk.risk_measures import Measure, RiskConfig
from fracrisk.sweep_report import emit_report, validation_table

from _common import add_source_args, load_universe


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    add_source_args(p)
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--split-seed", type=int, default=7)
    p.add_argument("--loo", action="store_true", help="leave-one-out instead of the 80/20 split")
    args = p.parse_args()

    _, stocks = load_universe(args)
    cfg = RiskConfig(Measure.NEU_FE, args.lam, EntropyParams(args.q, args.bins))
    F, reports = run_validation(stocks, cfg, split_seed=args.split_seed)
    if args.loo:
        reports = []
        for m in ("neu-fe", "eu-fe", "neu-fev", "eu-fev"):
            mcfg = cfg.replace(measure=m)
            Fm = F.with_target(risk_targets(stocks, mcfg), target_name(mcfg))
            reports += [fit_model(model, Fm, args.split_seed, protocol="loo") for model in Model]
    emit_report(args.out, fit_reports=reports, metadata={"script": "model_comparison", "q": args.q, "lambda": args.lam,
                                                          "split_seed": args.split_seed, "loo": args.loo},
                bundle_name="model_comparison.json")
    header, rows = validation_table(reports)
    print(" ".join(f"{h:>14}" for h in header))
    for row in rows:
        print(f"{row[0]:>14} " + " ".join(f"{float(v):>14.6g}" for v in row[1:]))
    print(f"\nwritten to {args.out}/validation_table.csv")


if __name__ == "__main__":
    main()
