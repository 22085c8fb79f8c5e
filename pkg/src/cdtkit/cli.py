"""Command-line front end: reproducible transform/classify experiment runs.

Every command is a pure function of its inputs, flags, and seed; outputs are
written atomically (temp file, then rename) so a failed run never leaves a
truncated artifact behind.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import cdt as cdt_mod
from . import classify, datagen, density, features, plotting
from .errors import (
    AllZero,
    BadRank,
    CdtkitError,
    DomainEscape,
    EmptyInput,
    LabelMissing,
    NonFinite,
    NonMonotone,
    NonPositiveScale,
    NotConverged,
    OutOfDomain,
    OutOfRange,
    ParseError,
    RangeMismatch,
    ReferenceMismatch,
    SingularScatter,
    TooFewSamples,
)

SCHEMA_VERSION = 1

_INPUT_ERRORS = (ParseError, LabelMissing, EmptyInput, FileNotFoundError, ValueError, KeyError)
_NUMERIC_ERRORS = (
    AllZero,
    BadRank,
    DomainEscape,
    NonFinite,
    NonMonotone,
    NonPositiveScale,
    NotConverged,
    OutOfDomain,
    OutOfRange,
    RangeMismatch,
    ReferenceMismatch,
    SingularScatter,
    TooFewSamples,
)


class _RowFailure(CdtkitError):
    def __init__(self, row: int, cause: Exception):
        super().__init__(f"row {row}: {cause}")
        self.cause = cause


def _thread_count() -> int:
    raw = os.environ.get("CDTKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_rows(fn, rows):
    threads = _thread_count()
    if threads == 1 or len(rows) < 2:
        return [fn(i, row) for i, row in enumerate(rows)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ir: fn(*ir), enumerate(rows)))


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)


def _csv_text(rows) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _feature_rows(features_matrix, labels=None):
    rows = []
    for i, row in enumerate(features_matrix):
        cells = [repr(float(v)) for v in np.asarray(row).ravel()]
        if labels is not None:
            cells = [str(labels[i])] + cells
        rows.append(cells)
    return rows


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _out_dir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


def _load_reference(spec: str, ref_domain) -> cdt_mod.ReferenceDensity:
    if spec == "uniform":
        return cdt_mod.ReferenceDensity.uniform(*ref_domain)
    raw = features.load_csv(spec, labeled=False, kind="signals")
    values = raw.signals[0]
    lo, hi = ref_domain
    spacing = (hi - lo) / values.size
    d = density.from_samples(values, lo + 0.5 * spacing, spacing, epsilon_floor=0.0)
    return cdt_mod.ReferenceDensity(d)


def _reference_meta(spec: str, ref: cdt_mod.ReferenceDensity) -> dict:
    left, right = ref.domain
    meta = {"kind": "uniform" if spec == "uniform" else "file", "left": left, "right": right}
    if meta["kind"] == "file":
        meta["values"] = [float(v) for v in ref.density.values]
    return meta


def _reference_from_meta(meta: dict) -> cdt_mod.ReferenceDensity:
    if meta["kind"] == "uniform":
        return cdt_mod.ReferenceDensity.uniform(meta["left"], meta["right"])
    values = np.asarray(meta["values"], dtype=np.float64)
    spacing = (meta["right"] - meta["left"]) / values.size
    d = density.DiscreteDensity(values, meta["left"] + 0.5 * spacing, spacing)
    return cdt_mod.ReferenceDensity(d)


def _sidecar_path(csv_path) -> Path:
    return Path(str(csv_path) + ".grid.json")


def cmd_transform(args) -> int:
    signal_set = features.load_csv(
        args.input, labeled=args.labeled, header=args.header, kind="signals"
    )
    ref = _load_reference(args.reference, tuple(args.ref_domain))
    lo, hi = args.domain

    def one(i, values):
        try:
            spacing = (hi - lo) / values.size
            d = density.from_samples(
                values, lo + 0.5 * spacing, spacing, epsilon_floor=args.epsilon_floor
            )
            return cdt_mod.forward(d, ref, args.grid).values
        except Exception as exc:  # noqa: BLE001 - re-raised with row context
            raise _RowFailure(i, exc) from exc

    transformed = _map_rows(one, list(signal_set.signals))
    labels = signal_set.labels if args.labeled else None
    out = Path(args.output)
    _atomic_write_text(out, _csv_text(_feature_rows(transformed, labels)))
    grid = ref.grid(args.grid)
    _atomic_write_text(
        _sidecar_path(out),
        _json_text(
            {
                "schema_version": SCHEMA_VERSION,
                "m": args.grid,
                "grid": [float(g) for g in grid],
                "reference": _reference_meta(args.reference, ref),
                "epsilon_floor": args.epsilon_floor,
                "input_domain": [lo, hi],
                "labeled": bool(args.labeled),
            }
        ),
    )
    _say(args, f"transformed {len(transformed)} signals -> {out}")
    return 0


def cmd_inverse(args) -> int:
    sidecar = _sidecar_path(args.input)
    if not sidecar.exists():
        raise FileNotFoundError(f"missing grid sidecar {sidecar}")
    meta = json.loads(sidecar.read_text())
    labeled = bool(meta.get("labeled", False))
    data = features.load_csv(args.input, labeled=labeled, header=False, kind="dataset")
    rows = data.features if labeled else np.vstack(data.signals)
    ref = _reference_from_meta(meta["reference"])
    grid = np.asarray(meta["grid"], dtype=np.float64)

    signals = []
    for i, row in enumerate(rows):
        try:
            signals.append(cdt_mod.CdtSignal(row, grid, ref))
        except Exception as exc:  # noqa: BLE001
            raise _RowFailure(i, exc) from exc
    spans = [cdt_mod.transport_map_of(t) for t in signals]
    lo = min(float(m.knots_y[0]) for m in spans)
    hi = max(float(m.knots_y[-1]) for m in spans)
    spacing = (hi - lo) / args.grid
    out_grid = lo + spacing * (np.arange(args.grid) + 0.5)

    def one(i, t):
        try:
            return cdt_mod.inverse(t, out_grid).values
        except Exception as exc:  # noqa: BLE001
            raise _RowFailure(i, exc) from exc

    densities = _map_rows(one, signals)
    out = Path(args.output)
    labels = data.labels if labeled else None
    _atomic_write_text(out, _csv_text(_feature_rows(densities, labels)))
    _atomic_write_text(
        _sidecar_path(out),
        _json_text(
            {
                "schema_version": SCHEMA_VERSION,
                "k": args.grid,
                "domain": [lo, hi],
                "labeled": labeled,
            }
        ),
    )
    _say(args, f"reconstructed {len(densities)} densities -> {out}")
    return 0


def _require(config: dict, key: str):
    if key not in config:
        raise ValueError(f"config is missing required key {key!r}")
    return config[key]


def _load_config(path) -> dict:
    config = json.loads(Path(path).read_text())
    version = _require(config, "schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version}")
    seed = _require(config, "seed")
    if not isinstance(seed, int):
        raise ValueError("seed must be an integer")
    return config


def cmd_generate(args) -> int:
    config = _load_config(args.config)
    out_dir = _out_dir(args)
    kind = config.get("kind", "texture")
    seed = config["seed"]

    if kind == "texture":
        grid_size = int(config.get("grid_size", 1024))
        cdt_size = int(config.get("cdt_size", 256))
        raw, cdt_data = datagen.texture_simulation(seed, grid_size, cdt_size)
        provenance = {
            "schema_version": SCHEMA_VERSION,
            "kind": "texture",
            "seed": seed,
            "family_kind": "affine",
            "translation_range": list(datagen.TEXTURE_TRANSLATION_RANGE),
            "scaling_range": list(datagen.TEXTURE_SCALING_RANGE),
            "samples_per_class": 64,
            "grid_size": grid_size,
            "cdt_size": cdt_size,
        }
    elif kind == "generative":
        family_cfg = _require(config, "family")
        ranges = {k: tuple(v) for k, v in family_cfg.get("ranges", {}).items()}
        family = datagen.ConfoundFamily(_require(family_cfg, "kind"), ranges, rng_seed=seed)
        mothers = []
        lo, hi = config.get("domain", [0.0, 1.0])
        for path in _require(config, "mothers"):
            raw_rows = features.load_csv(path, labeled=False, kind="signals")
            values = raw_rows.signals[0]
            spacing = (hi - lo) / values.size
            mothers.append(
                density.from_samples(values, lo + 0.5 * spacing, spacing, epsilon_floor=1e-8)
            )
        if len(mothers) != 2:
            raise ValueError("generative config needs exactly 2 mother csv paths")
        spec = datagen.GenerativeSpec(
            mothers[0], mothers[1], family, int(_require(config, "samples_per_class"))
        )
        ref = cdt_mod.ReferenceDensity.uniform()
        cdt_size = int(config.get("cdt_size", mothers[0].n_bins))
        raw_rows, cdt_rows, labels = [], [], []
        for class_idx in (0, 1):
            for sample in datagen.sample_class(spec, class_idx):
                raw_rows.append(sample.values)
                cdt_rows.append(cdt_mod.forward(sample, ref, cdt_size).values)
                labels.append(class_idx)
        raw = classify.LabeledDataset(np.vstack(raw_rows), np.array(labels))
        cdt_data = classify.LabeledDataset(np.vstack(cdt_rows), np.array(labels))
        provenance = {
            "schema_version": SCHEMA_VERSION,
            "kind": "generative",
            "seed": seed,
            "family_kind": family.kind,
            "ranges": {k: list(v) for k, v in ranges.items()},
            "samples_per_class": spec.samples_per_class,
            "cdt_size": cdt_size,
            "domain": [lo, hi],
        }
    else:
        raise ValueError(f"unknown generate kind {kind!r}")

    _atomic_write_text(out_dir / "raw.csv", _csv_text(_feature_rows(raw.features, raw.labels)))
    _atomic_write_text(
        out_dir / "cdt.csv", _csv_text(_feature_rows(cdt_data.features, cdt_data.labels))
    )
    _atomic_write_text(out_dir / "provenance.json", _json_text(provenance))
    _say(args, f"wrote raw.csv, cdt.csv, provenance.json to {out_dir}")
    return 0


def cmd_evaluate(args) -> int:
    config = _load_config(args.config)
    out_dir = _out_dir(args)
    seed = config["seed"]
    classifiers = config.get("classifiers", ["lda", "plda", "svm"])
    datasets = _require(config, "datasets")
    param_grids = config.get("param_grids", {})

    summary = [["space", "classifier", "mean_train_error", "mean_test_error", "cohen_kappa"]]
    for space, path in datasets.items():
        data = features.load_csv(path, labeled=True, kind="dataset")
        folds_cfg = config.get("folds", 5)
        folds = data.n_samples if folds_cfg == "loo" else int(folds_cfg)
        for method in classifiers:
            report = classify.cross_validate(
                data, method, folds=folds, param_grid=param_grids.get(method), seed=seed
            )
            name = f"report_{space}_{method}.csv"
            _atomic_write_text(out_dir / name, _csv_text(report.to_csv_rows()))
            summary.append(
                [
                    space,
                    method,
                    repr(report.mean_train_error),
                    repr(report.mean_test_error),
                    repr(report.cohen_kappa),
                ]
            )
            _say(args, f"[{space}/{method}]\n{report.to_text()}")
    _atomic_write_text(out_dir / "summary.csv", _csv_text(summary))
    _say(args, f"wrote summary.csv to {out_dir}")
    return 0


def cmd_extract(args) -> int:
    if args.mode in ("energy", "energy-histogram"):
        signal_set = features.load_triaxis_csv(args.input, labeled=args.labeled, header=args.header)
        if args.zero_pad:
            signal_set = features.zero_pad(signal_set)
        traces = [features.energy(s) for s in signal_set.signals]
    else:
        signal_set = features.load_csv(
            args.input, labeled=args.labeled, header=args.header, kind="signals"
        )
        traces = list(signal_set.signals)
    labels = signal_set.labels if args.labeled else None

    if args.mode == "energy":
        _atomic_write_text(Path(args.output), _csv_text(_feature_rows(traces, labels)))
        _say(args, f"wrote {len(traces)} energy traces -> {args.output}")
        return 0

    if args.range is not None:
        lo, hi = args.range
    elif args.range_file is not None:
        saved = json.loads(Path(args.range_file).read_text())
        lo, hi = saved["low"], saved["high"]
    else:
        lo = min(float(np.min(t)) for t in traces)
        hi = max(float(np.max(t)) for t in traces)
        if hi <= lo:
            hi = lo + 1.0
    rows = [features.histogram(t, args.bins, (lo, hi)).values for t in traces]
    out = Path(args.output)
    _atomic_write_text(out, _csv_text(_feature_rows(rows, labels)))
    _atomic_write_text(
        Path(str(out) + ".range.json"),
        _json_text({"schema_version": SCHEMA_VERSION, "low": lo, "high": hi, "bins": args.bins}),
    )
    _say(args, f"wrote {len(rows)} histograms ({args.bins} bins) -> {out}")
    return 0


def cmd_project(args) -> int:
    data = features.load_csv(args.input, labeled=True, kind="dataset")
    if not 0.0 < args.train_frac <= 1.0:
        raise ValueError("train fraction must be in (0, 1]")
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, data.n_samples]))
    train_idx = []
    for c in data.class_labels:
        idx = np.flatnonzero(data.labels == c)
        idx = idx[rng.permutation(idx.size)]
        keep = max(1, int(round(args.train_frac * idx.size)))
        train_idx.append(idx[:keep])
    train_idx = np.sort(np.concatenate(train_idx))
    coords = classify.project_2d(data, train_idx)
    _atomic_write_text(Path(args.svg), plotting.scatter_svg(coords, data.labels))
    rows = [
        [str(lab), repr(float(p[0])), repr(float(p[1]))]
        for lab, p in zip(data.labels, coords)
    ]
    _atomic_write_text(Path(args.coords), _csv_text(rows))
    _say(args, f"projected {data.n_samples} samples -> {args.svg}, {args.coords}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdtkit",
        description="Cumulative distribution transform toolkit for 1-D densities",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for seeded commands")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser.add_argument("--output-dir", default=".", help="directory for config-driven outputs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="forward transform of density rows")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--grid", type=int, default=256, help="transform grid size")
    p.add_argument("--reference", default="uniform", help="'uniform' or a density csv path")
    p.add_argument("--ref-domain", type=float, nargs=2, default=[0.0, 1.0])
    p.add_argument("--epsilon-floor", type=float, default=1e-8)
    p.add_argument("--domain", type=float, nargs=2, default=[0.0, 1.0], help="input signal domain")
    p.add_argument("--labeled", action="store_true", help="first column is a class label")
    p.add_argument("--header", action="store_true", help="skip a header row")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("inverse", help="reconstruct densities from transform rows")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--grid", type=int, default=256, help="output density bins")
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("generate", help="generate synthetic datasets from a config")
    p.add_argument("config")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("extract", help="energy / histogram feature extraction")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--mode", choices=("energy", "histogram", "energy-histogram"), required=True)
    p.add_argument("--bins", type=int, default=1024)
    p.add_argument("--range", type=float, nargs=2, default=None, help="histogram range")
    p.add_argument("--range-file", default=None, help="reuse a persisted range sidecar")
    p.add_argument("--zero-pad", action="store_true", help="pad signals to equal length first")
    p.add_argument("--labeled", action="store_true")
    p.add_argument("--header", action="store_true")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="cross-validated classification from a config")
    p.add_argument("config")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("project", help="2-D discriminant embedding scatter plot")
    p.add_argument("input")
    p.add_argument("svg")
    p.add_argument("coords")
    p.add_argument("--train-frac", type=float, default=0.8)
    p.set_defaults(func=cmd_project)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _RowFailure as exc:
        code = 2 if isinstance(exc.cause, _INPUT_ERRORS) else 3
        print(f"error: {exc}", file=sys.stderr)
        return code
    except _NUMERIC_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON config: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
