"""Command-line interface: simulate -> rank -> select -> evaluate.

Exit status is 0 on success, 2 on usage errors and 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import chains, dataset, evaluation, rankers, synth
from .parallel import THREADS_ENV


class RuntimeFailure(Exception):
    pass


def _load(args) -> dataset.MultiLabelDataset:
    return dataset.load_csv(args.data, args.labels, has_header=not args.no_header,
                            labels_first=args.labels_first)


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_simulate(args) -> int:
    spec = synth.ScenarioSpec(args.scenario, args.n, args.p, args.K, args.seed, args.sweeps)
    ds, relevant = synth.make_artdata(spec)
    out = _outdir(args.out)
    dataset.write_csv(ds, out / "data.csv")
    (out / "relevant.txt").write_text("".join(f"{j + 1}\n" for j in relevant), encoding="utf-8")
    print(f"{args.scenario}: n={ds.n} p={ds.p} K={ds.K} relevant={len(relevant)} -> {out}")
    return 0


def cmd_rank(args) -> int:
    ds = _load(args)
    cfg = rankers.RankerConfig(
        method=args.method, bins=args.bins, lambda_factor=args.lambda_factor, tau=args.tau,
        standardize=not args.no_standardize, joint=args.joint, threads=args.threads,
    )
    ranking = rankers.rank(ds, cfg)
    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    rankers.write_ranking(ranking, out)
    top = ", ".join(ranking.feature_names[j] for j in ranking.order[:5])
    print(f"{args.method}: ranked {ranking.p} features; top: {top}")
    return 0


def cmd_select(args) -> int:
    ds = _load(args)
    ranking = rankers.read_ranking(args.ranking)
    if ranking.p != ds.p:
        raise RuntimeFailure(f"ranking has {ranking.p} features but dataset has {ds.p}")
    if args.train_frac < 1.0:
        ds = ds.subset(rows=dataset.split(ds, args.train_frac, 0.0, args.seed).train_idx)
    res = evaluation.select_features(ds, ranking, args.budget_frac, args.val_frac, args.seed)
    out = _outdir(args.out)
    best = len(res.chosen_subset)
    with (out / "selection.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["prefix_size", "val_subset_accuracy", "chosen"])
        for s, acc in enumerate(res.prefix_scores, start=1):
            w.writerow([s, _fmt(acc), int(s == best)])
    (out / "chosen.txt").write_text("".join(f"{j + 1}\n" for j in res.chosen_subset),
                                    encoding="utf-8")
    chains.save_chain(res.model, out / "model.json")
    if not args.no_plot:
        from .plotting import plot_selection
        plot_selection(res.prefix_scores, best, out / "selection.png")
    names = ", ".join(ds.feature_names[j] for j in res.chosen_subset)
    print(f"budget L={res.budget}; chose {best} features: {names}")
    return 0


def _read_relevant(path, p: int) -> list[int]:
    text = Path(path).read_text(encoding="utf-8").replace(",", " ").split()
    try:
        idx = [int(t) - 1 for t in text]
    except ValueError:
        raise RuntimeFailure(f"{path}: relevant-set file must list integer feature indices") from None
    if any(j < 0 or j >= p for j in idx):
        raise RuntimeFailure(f"{path}: feature index outside 1..{p}")
    return idx


def cmd_evaluate(args) -> int:
    out = _outdir(args.out)
    if args.mode == "ranking":
        rankings = [rankers.read_ranking(r) for r in args.ranking]
        p = rankings[0].p
        if any(r.p != p for r in rankings):
            raise RuntimeFailure("ranking files cover different numbers of features")
        relevant = _read_relevant(args.relevant, p)
        curves = [(Path(r).stem, evaluation.ranking_roc(rk, relevant))
                  for r, rk in zip(args.ranking, rankings)]
        mean_fpr = np.mean([c.fpr for _, c in curves], axis=0)
        mean_tpr = np.mean([c.tpr for _, c in curves], axis=0)
        mean_auc = float(np.mean([c.auc for _, c in curves]))
        with (out / "roc.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["run", "k", "fpr", "tpr"])
            for name, c in curves:
                for k in range(p):
                    w.writerow([name, k + 1, _fmt(c.fpr[k]), _fmt(c.tpr[k])])
            for k in range(p):
                w.writerow(["mean", k + 1, _fmt(mean_fpr[k]), _fmt(mean_tpr[k])])
        with (out / "auc.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["run", "auc"])
            for name, c in curves:
                w.writerow([name, _fmt(c.auc)])
            w.writerow(["mean", _fmt(mean_auc)])
        if not args.no_plot:
            from .plotting import plot_roc
            plot_roc(curves, out / "roc.png", mean=(mean_fpr, mean_tpr, mean_auc))
        print(f"mean AUC over {len(curves)} ranking(s): {mean_auc:.4f}")
        return 0

    model = chains.load_chain(args.model)
    ds = _load(args)
    if max(model.feature_subset) >= ds.p:
        raise RuntimeFailure("model refers to features beyond the dataset width")
    if len(model.label_order) != ds.K:
        raise RuntimeFailure(f"model predicts {model.K} labels but dataset has {ds.K}")
    pred = chains.predict_chain(model, ds.features[:, list(model.feature_subset)])
    report = evaluation.classification_metrics(ds.labels, pred)
    with (out / "metrics.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["measure", "value"])
        for name, value in report.as_dict().items():
            w.writerow([name, _fmt(value)])
    print(" ".join(f"{k}={v:.4f}" for k, v in report.as_dict().items()))
    return 0


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _data_args(p: argparse.ArgumentParser):
    p.add_argument("--data", required=True, help="dataset CSV")
    p.add_argument("--labels", required=True, type=_positive_int, help="number of label columns")
    p.add_argument("--labels-first", action="store_true", help="labels lead each row")
    p.add_argument("--no-header", action="store_true", help="CSV has no header row")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="generate a synthetic benchmark dataset")
    s.add_argument("--scenario", required=True, choices=[c for c in synth.SCENARIOS if c != "custom"])
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=_positive_int)
    s.add_argument("--p", type=_positive_int)
    s.add_argument("--K", type=_positive_int)
    s.add_argument("--sweeps", type=_positive_int, default=synth.DEFAULT_SWEEPS)
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("rank", help="rank features")
    _data_args(r)
    r.add_argument("--method", default="ising+score", choices=rankers.METHODS)
    r.add_argument("--out", required=True, help="ranking CSV to write")
    r.add_argument("--bins", type=int, default=10)
    r.add_argument("--lambda-factor", type=float, default=1e-4)
    r.add_argument("--tau", type=int, default=0, help="LP pruning threshold")
    r.add_argument("--no-standardize", action="store_true")
    r.add_argument("--joint", action="store_true",
                   help="ising-inter+score: use the joint multivariate statistic")
    r.add_argument("--threads", type=_positive_int,
                   help=f"worker threads (default: ${THREADS_ENV} or all cores)")
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_rank)

    c = sub.add_parser("select", help="choose a ranking prefix with classifier chains")
    _data_args(c)
    c.add_argument("--ranking", required=True)
    c.add_argument("--out", required=True, help="output directory")
    c.add_argument("--budget-frac", type=float, default=0.2)
    c.add_argument("--val-frac", type=float, default=0.3)
    c.add_argument("--train-frac", type=float, default=1.0,
                   help="use only this random share of rows (rest left for testing)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--no-plot", action="store_true")
    c.set_defaults(func=cmd_select)

    e = sub.add_parser("evaluate", help="score rankings or a trained chain")
    e.add_argument("--mode", required=True, choices=("ranking", "classify"))
    e.add_argument("--out", required=True, help="output directory")
    e.add_argument("--ranking", nargs="+", help="ranking CSV(s), one per run")
    e.add_argument("--relevant", help="file listing relevant feature indices (1-based)")
    e.add_argument("--model", help="chain model JSON")
    e.add_argument("--data", help="test dataset CSV")
    e.add_argument("--labels", type=_positive_int)
    e.add_argument("--labels-first", action="store_true")
    e.add_argument("--no-header", action="store_true")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--no-plot", action="store_true")
    e.set_defaults(func=cmd_evaluate)
    return parser


def _check_paths(parser, args):
    def need(flag, value):
        if value is None:
            parser.error(f"{args.command} requires {flag}")

    def exists(value):
        for v in value if isinstance(value, list) else [value]:
            if not Path(v).is_file():
                parser.error(f"no such file: {v}")

    if args.command == "evaluate":
        if args.mode == "ranking":
            need("--ranking", args.ranking)
            need("--relevant", args.relevant)
            exists(args.ranking)
            exists(args.relevant)
        else:
            need("--model", args.model)
            need("--data", args.data)
            need("--labels", args.labels)
            exists(args.model)
            exists(args.data)
    elif args.command in ("rank", "select"):
        exists(args.data)
        if args.command == "select":
            exists(args.ranking)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_paths(parser, args)
    try:
        return args.func(args)
    except (RuntimeFailure, ValueError, OSError) as exc:
        print(f"mlrank {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
