"""Command-line surface: CSV/JSON I/O and the four subcommands.

Commands are deterministic given their ``--seed``; artifacts are
written with full round-trip float precision, and JSON documents carry
a schema version that loaders check before use.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, direct
from .bootstrap import bootstrap_cis
from .core import CausalOrder, ConnectionMatrix, Dataset, center
from .errors import (
    DimensionMismatch,
    LingamError,
    NonNumericCell,
    ParseError,
    RaggedRows,
    SchemaVersionError,
)
from .evaluation import BenchmarkGrid, run_benchmark
from .ica import FastIcaConfig, ica_lingam_fit
from .synth import SynthConfig, generate

SCHEMA_MAJOR = 1
SCHEMA_MINOR = 0


def _schema(name: str) -> dict:
    return {"name": name, "major": SCHEMA_MAJOR, "minor": SCHEMA_MINOR}


def _check_schema(doc: dict, name: str) -> None:
    schema = doc.get("schema")
    if not isinstance(schema, dict) or schema.get("name") != name:
        raise SchemaVersionError(f"not a {name} document")
    if schema.get("major") != SCHEMA_MAJOR:
        raise SchemaVersionError(
            f"unsupported major schema version {schema.get('major')} (supported: {SCHEMA_MAJOR})"
        )


def load_csv(path, header: bool = True, variables_as_rows: bool = False) -> Dataset:
    """Read a rectangular numeric CSV into a centered dataset.

    By default rows are observations and columns are variables (labels
    from the header when present); ``variables_as_rows`` flips the
    orientation, in which case a header row is discarded and labels are
    generated. Completely empty records are skipped.
    """
    records: list[tuple[int, list[str]]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        while True:
            try:
                row = next(reader)
            except StopIteration:
                break
            except csv.Error as exc:
                raise ParseError(reader.line_num, 1, f"malformed CSV: {exc}") from exc
            if row:
                records.append((reader.line_num, row))
    if not records:
        raise ParseError(1, 1, "empty CSV file")

    labels = None
    if header:
        head_line, head = records.pop(0)
        if not variables_as_rows:
            labels = tuple(cell.strip() for cell in head)
        if not records:
            raise ParseError(head_line, 1, "no data rows after header")

    width = len(records[0][1])
    table = np.empty((len(records), width))
    for r, (line, row) in enumerate(records):
        if len(row) != width:
            raise RaggedRows(line, width, len(row))
        for c, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise NonNumericCell(line, c + 1, cell) from None
            if not np.isfinite(value):
                raise NonNumericCell(line, c + 1, cell)
            table[r, c] = value

    values = table if variables_as_rows else table.T
    if labels is not None and len(labels) != values.shape[0]:
        raise RaggedRows(1, values.shape[0], len(labels))
    return center(values, labels=labels)


def write_dataset_csv(path, dataset: Dataset) -> None:
    """Write observations as rows with a label header, full float precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(dataset.labels)
        for col in range(dataset.n):
            writer.writerow([repr(float(v)) for v in dataset.values[:, col]])


@dataclass(frozen=True)
class ModelDocument:
    """Serialized estimation result; restores everything bit-for-bit."""

    labels: tuple[str, ...]
    order: tuple[int, ...]
    strengths: tuple[tuple[float, ...], ...]
    diagnostics: tuple[tuple[tuple[int, float], ...], ...]
    estimator: str
    seed: int
    version: str
    pruned: tuple[tuple[float, ...], ...] | None = None
    converged: bool | None = None

    def to_dict(self) -> dict:
        return {
            "schema": _schema("lingamkit-model"),
            "labels": list(self.labels),
            "order": list(self.order),
            "strengths": [list(row) for row in self.strengths],
            "diagnostics": [[[s, t] for s, t in step] for step in self.diagnostics],
            "estimator": self.estimator,
            "seed": self.seed,
            "version": self.version,
            "pruned": None if self.pruned is None else [list(row) for row in self.pruned],
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelDocument":
        _check_schema(doc, "lingamkit-model")
        return cls(
            labels=tuple(doc["labels"]),
            order=tuple(int(s) for s in doc["order"]),
            strengths=tuple(tuple(float(v) for v in row) for row in doc["strengths"]),
            diagnostics=tuple(
                tuple((int(s), float(t)) for s, t in step) for step in doc["diagnostics"]
            ),
            estimator=doc["estimator"],
            seed=int(doc["seed"]),
            version=doc["version"],
            pruned=(
                None
                if doc.get("pruned") is None
                else tuple(tuple(float(v) for v in row) for row in doc["pruned"])
            ),
            converged=doc.get("converged"),
        )


def _matrix_rows(m: ConnectionMatrix) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(float(v) for v in row) for row in m.entries)


def _write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _print_edges(matrix, labels) -> None:
    arr = np.asarray(matrix)
    for i in range(arr.shape[0]):
        for j in range(arr.shape[1]):
            if arr[i, j] != 0.0:
                print(f"  {labels[j]} -> {labels[i]} : {arr[i, j]:.6g}")


def _cmd_fit(args) -> int:
    data = load_csv(args.input, header=not args.no_header, variables_as_rows=args.variables_as_rows)
    if args.method == "direct":
        model = direct.fit(data)
        order, strengths = model.order, model.strengths
        diagnostics = tuple(tuple(sorted(step.items())) for step in model.diagnostics)
        pruned = None
        converged = None
        printable = strengths
    else:
        baseline = ica_lingam_fit(data, FastIcaConfig(seed=args.seed))
        order, strengths = baseline.order, baseline.strengths
        diagnostics = ()
        pruned = _matrix_rows(baseline.pruned)
        converged = baseline.converged
        printable = baseline.pruned

    doc = ModelDocument(
        labels=data.labels,
        order=order.order,
        strengths=_matrix_rows(strengths),
        diagnostics=diagnostics,
        estimator=args.method,
        seed=args.seed,
        version=__version__,
        pruned=pruned,
        converged=converged,
    )
    _write_json(args.output, doc.to_dict())
    print(f"estimator: {args.method}")
    print("causal order: " + " ".join(data.labels[s - 1] for s in order))
    print("edges:")
    _print_edges(printable.entries, data.labels)
    return 0


def _cmd_simulate(args) -> int:
    network = "random-choice" if args.network == "random" else args.network
    cfg = SynthConfig(p=args.p, n=args.n, network=network, seed=args.seed)
    dataset, truth = generate(cfg)
    write_dataset_csv(args.out_data, dataset)
    payload = {
        "schema": _schema("lingamkit-truth"),
        "p": args.p,
        "n": args.n,
        "network": args.network,
        "seed": args.seed,
        "version": __version__,
        "b_true": _matrix_rows(truth.b_true),
        "noise_stds": list(truth.noise_stds),
        "exponents": list(truth.exponents),
        "shuffle": list(truth.shuffle.order),
    }
    _write_json(args.out_truth, payload)
    print(f"wrote {dataset.p} variables x {dataset.n} observations to {args.out_data}")
    return 0


def _cmd_benchmark(args) -> int:
    with open(args.grid, encoding="utf-8") as fh:
        grid_doc = json.load(fh)
    _check_schema(grid_doc, "lingamkit-grid")
    grid = BenchmarkGrid(
        p_values=tuple(grid_doc["p_values"]),
        n_values=tuple(grid_doc["n_values"]),
        trials=int(grid_doc["trials"]),
        estimators=tuple(grid_doc.get("estimators", ("direct", "ica_baseline"))),
        master_seed=int(grid_doc.get("master_seed", 0)),
    )
    report = run_benchmark(grid, threads=args.threads)
    payload = {"schema": _schema("lingamkit-benchmark-report"), "version": __version__}
    payload.update(report.to_dict(include_timings=args.timings))
    _write_json(args.out, payload)
    if args.csv:
        report.write_csv(args.csv, include_timings=args.timings)
    if args.summary:
        print(report.summary_table())
    return 0


def _cmd_bootstrap(args) -> int:
    data = load_csv(args.input, header=not args.no_header, variables_as_rows=args.variables_as_rows)
    with open(args.model, encoding="utf-8") as fh:
        doc = ModelDocument.from_dict(json.load(fh))
    if doc.labels != data.labels:
        raise DimensionMismatch(
            f"model labels {list(doc.labels)} do not match dataset labels {list(data.labels)}"
        )
    report = bootstrap_cis(
        data,
        CausalOrder(doc.order),
        level=args.level,
        resamples=args.resamples,
        rng=np.random.default_rng(args.seed),
    )
    payload = {
        "schema": _schema("lingamkit-edges"),
        "version": __version__,
        "estimator": doc.estimator,
        "level": report.level,
        "resamples": report.resamples,
        "singular_redraws": report.singular_redraws,
        "seed": args.seed,
        "edges": [
            {
                "i": e.i,
                "j": e.j,
                "point": e.point,
                "lower": e.lower,
                "upper": e.upper,
                "significant": e.significant,
            }
            for e in report.edges
        ],
    }
    _write_json(args.out, payload)
    for edge in report.edges:
        print(edge.as_text(data.labels))
    return 0


def _add_csv_options(parser) -> None:
    parser.add_argument("--no-header", action="store_true", help="CSV has no header row")
    parser.add_argument(
        "--variables-as-rows",
        action="store_true",
        help="CSV rows are variables instead of observations",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lingamkit",
        description="Causal discovery in linear non-Gaussian acyclic models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="estimate a causal order and strengths from a CSV")
    p_fit.add_argument("--input", required=True)
    p_fit.add_argument("--method", choices=("direct", "ica"), default="direct")
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--output", required=True)
    _add_csv_options(p_fit)
    p_fit.set_defaults(handler=_cmd_fit)

    p_sim = sub.add_parser("simulate", help="generate a synthetic dataset and its ground truth")
    p_sim.add_argument("--p", type=int, required=True)
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--network", choices=("dense", "sparse", "random"), default="random")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out-data", required=True)
    p_sim.add_argument("--out-truth", required=True)
    p_sim.set_defaults(handler=_cmd_simulate)

    p_bench = sub.add_parser("benchmark", help="run a benchmark sweep from a grid file")
    p_bench.add_argument("--grid", required=True)
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--csv", default=None)
    p_bench.add_argument("--summary", action="store_true", help="print a median table")
    p_bench.add_argument("--threads", type=int, default=1)
    p_bench.add_argument(
        "--timings",
        action="store_true",
        help="include wall times in artifacts (breaks byte-for-byte reproducibility)",
    )
    p_bench.set_defaults(handler=_cmd_benchmark)

    p_boot = sub.add_parser("bootstrap", help="bootstrap confidence intervals for a fitted order")
    p_boot.add_argument("--input", required=True)
    p_boot.add_argument("--model", required=True)
    p_boot.add_argument("--level", type=float, default=0.99)
    p_boot.add_argument("--resamples", type=int, default=2000)
    p_boot.add_argument("--seed", type=int, default=0)
    p_boot.add_argument("--out", required=True)
    _add_csv_options(p_boot)
    p_boot.set_defaults(handler=_cmd_bootstrap)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except LingamError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
