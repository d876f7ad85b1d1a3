"""Command-line interface.

Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure
(disconnected graph, non-uniqueness sample set), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .active import (
    Criterion,
    LabeledSet,
    classify_bandlimited,
    classify_map,
    random_select,
    sigma_optimal_order,
    sigma_optimal_select,
    v_optimal_order,
    v_optimal_select,
)
from .exceptions import NumericalError
from .experiments import (
    ExperimentConfig,
    emit,
    run_classification,
    run_regression,
)
from .graph import LaplacianKind, is_connected, knn_graph, laplacian
from .grf import (
    covariance,
    low_rank_covariance,
    map_estimate,
    predictive_covariance,
)
from .sampling import SampleSet, bl_reconstruct, greedy_select_max_cutoff
from .spectral import eigendecompose

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _write_lines(lines, out_path):
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _sigma_arg(value: str):
    return "auto" if value == "auto" else float(value)


def cmd_build_graph(args) -> int:
    X = io.read_features(args.features)
    g = knn_graph(X, args.knn, _sigma_arg(args.sigma))
    lines = [str(g.n)] + [f"{i} {j} {w!r}" for i, j, w in g.edges]
    _write_lines(lines, args.out)
    return EXIT_OK


def cmd_select(args) -> int:
    g = io.read_edgelist(args.graph)
    L = laplacian(g, LaplacianKind.COMBINATORIAL)
    sset, estimate = greedy_select_max_cutoff(L, args.budget, args.k)
    lines = [str(i) for i in sset.members]
    lines.append(f"# omega_{estimate.k} = {estimate.value!r}")
    _write_lines(lines, args.out)
    return EXIT_OK


def cmd_label_select(args) -> int:
    g = io.read_edgelist(args.graph)
    L = laplacian(g, LaplacianKind.COMBINATORIAL)
    criterion = Criterion(kind=args.criterion, k=args.k, seed=args.seed)
    if criterion.kind == "maxfreq":
        return cmd_select(args)
    if criterion.kind == "random":
        sset = random_select(g.n, args.budget, 0 if args.seed is None else args.seed)
        _write_lines([str(i) for i in sset.members], args.out)
        return EXIT_OK
    model = covariance(L, args.delta)
    if criterion.kind == "vopt":
        order = v_optimal_order(model, args.budget)
        sset = SampleSet.from_indices(order, g.n)
        trace = float(np.trace(predictive_covariance(model, sset)))
        tail = f"# trace = {trace!r}"
    else:
        order = sigma_optimal_order(model, args.budget)
        sset = SampleSet.from_indices(order, g.n)
        total = float(predictive_covariance(model, sset).sum())
        tail = f"# entry_sum = {total!r}"
    _write_lines([str(i) for i in sset.members] + [tail], args.out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    g = io.read_edgelist(args.graph)
    spectrum = eigendecompose(laplacian(g, LaplacianKind.COMBINATORIAL))
    indices, values = io.read_samples(args.samples)
    sset = SampleSet.from_indices(indices, g.n)
    signal = bl_reconstruct(spectrum, sset, values, args.rank)
    _write_lines([repr(float(v)) for v in signal], args.out)
    return EXIT_OK


def cmd_infer(args) -> int:
    g = io.read_edgelist(args.graph)
    if not is_connected(g):
        raise NumericalError("graph is disconnected")
    L = laplacian(g, LaplacianKind.COMBINATORIAL)
    indices, values = io.read_samples(args.samples)
    sset = SampleSet.from_indices(indices, g.n)
    full = covariance(L, args.delta)
    if args.rank is None:
        model = full
    else:
        model = low_rank_covariance(full.spectrum, args.delta, rank=args.rank)
    mean = map_estimate(model, sset, values)
    comp = sset.complement()
    lines = [f"{int(i)},{float(v)!r}" for i, v in zip(comp, mean)]
    if args.with_covariance:
        cov = predictive_covariance(model, sset)
        lines.append("")
        lines.extend(",".join(repr(float(v)) for v in row) for row in cov)
    _write_lines(lines, args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    g = io.read_edgelist(args.graph)
    y = io.read_labels(args.labels)
    if len(y) != g.n:
        raise ValueError(f"label file has {len(y)} lines for a graph of {g.n} nodes")
    nodes = io.read_node_list(args.labeled)
    sset = SampleSet.from_indices(nodes, g.n)
    labeled = LabeledSet(
        nodes=sset,
        labels=y[sset.members_array()],
        num_classes=int(y.max()) + 1,
    )
    L = laplacian(g, LaplacianKind.COMBINATORIAL)
    if args.model == "bl":
        spectrum = eigendecompose(L)
        predicted = classify_bandlimited(spectrum, labeled, rank=args.rank)
    else:
        predicted = classify_map(covariance(L, args.delta), labeled)
    _write_lines([str(int(c)) for c in predicted], args.out)
    return EXIT_OK


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_file(args.config)
    if args.seed is not None:
        cfg = ExperimentConfig(
            dataset=cfg.dataset,
            knn=cfg.knn,
            sigma=cfg.sigma,
            delta=cfg.delta,
            k_power=cfg.k_power,
            criteria=cfg.criteria,
            models=cfg.models,
            budgets=cfg.budgets,
            trials=cfg.trials,
            seed=args.seed,
        )
    return cfg


def _emit_table(table, args) -> int:
    if args.out is None:
        text = table.to_csv() if args.format == "csv" else table.to_jsonl()
        sys.stdout.write(text)
    else:
        emit(table, args.out, args.format)
    return EXIT_OK


def cmd_bench_classify(args) -> int:
    return _emit_table(run_classification(_load_config(args)), args)


def cmd_bench_regress(args) -> int:
    return _emit_table(run_regression(_load_config(args)), args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphsamp",
        description="Graph-signal sampling, GRF inference, and benchmark runs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="K-NN graph from a feature CSV")
    p.add_argument("--features", required=True)
    p.add_argument("--knn", type=int, required=True)
    p.add_argument("--sigma", default="auto")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_graph)

    p = sub.add_parser("select", help="greedy max-cutoff sampling set")
    p.add_argument("--graph", required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--criterion", choices=["maxfreq"], default="maxfreq")
    p.add_argument("--out")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("label-select", help="sampling set under a chosen criterion")
    p.add_argument("--graph", required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument(
        "--criterion",
        choices=["maxfreq", "vopt", "sigmaopt", "random"],
        required=True,
    )
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_label_select)

    p = sub.add_parser("reconstruct", help="bandlimited reconstruction from samples")
    p.add_argument("--graph", required=True)
    p.add_argument("--samples", required=True, help="file of 'index,value' lines")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("infer", help="GRF posterior mean on unobserved nodes")
    p.add_argument("--graph", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--rank", type=int, help="low-rank model rank; omit for full rank")
    p.add_argument("--samples", required=True, help="file of 'index,value' lines")
    p.add_argument("--with-covariance", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("classify", help="predict class ids from queried labels")
    p.add_argument("--graph", required=True)
    p.add_argument("--labels", required=True, help="one class id per line, full length")
    p.add_argument("--labeled", required=True, help="file of queried node indices")
    p.add_argument("--model", choices=["bl", "map"], default="bl")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--rank", type=int, help="bandlimited rank; default is the set size")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    for name, func in (("bench-classify", cmd_bench_classify),
                       ("bench-regress", cmd_bench_regress)):
        p = sub.add_parser(name, help=f"run the {name.split('-')[1]} benchmark grid")
        p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int, help="override the config master seed")
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"graphsamp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"graphsamp: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"graphsamp: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
