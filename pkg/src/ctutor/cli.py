"""Operator and researcher front door.

Everything here runs offline against plain files: single-file parses and
normalizations, pairwise distance experiments, whole-directory clustering
with UI-ready exports, and the marks-variance evaluation. `serve` starts
the HTTP service. Exit codes: 0 success, 2 input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .cluster import (
    DistanceMatrix, build_snapshot, clusters_flat_text, dendrogram_dict,
    forcegraph_dict, linkage_tree, snapshot_canonical_json, snapshot_to_dict,
)
from .cparse import dump, parse
from .distance import Weights, program_distance
from .linear import program_to_text
from .normalize import normalize
from .spans import SourceError


def _load_weights(path: str | None) -> Weights:
    if not path:
        return Weights()
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "weights" in data:
        data = data["weights"]
    known = {f for f in Weights.__dataclass_fields__}
    return Weights(**{k: v for k, v in data.items() if k in known})


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _normalize_file(path: str):
    return normalize(parse(_read(path), name=path))


def cmd_parse(args) -> int:
    try:
        ast = parse(_read(args.file), name=args.file)
    except SourceError as err:
        print(f"{args.file}:{err}", file=sys.stderr)
        return 2
    sys.stdout.write(dump(ast))
    return 0


def cmd_normalize(args) -> int:
    try:
        program = _normalize_file(args.file)
    except SourceError as err:
        print(f"{args.file}:{err}", file=sys.stderr)
        return 2
    sys.stdout.write(program_to_text(program))
    return 0


def cmd_dist(args) -> int:
    weights = _load_weights(args.weights)
    try:
        a = _normalize_file(args.file_a)
        b = _normalize_file(args.file_b)
    except SourceError as err:
        print(str(err), file=sys.stderr)
        return 2
    result = program_distance(a, b, weights)
    print(f"distance {result.total:g}")
    print(f"leftout {result.leftout_cost:g} ordering {result.ordering_cost:g}")
    text = result.script_text()
    if text:
        print(text)
    return 0


def _corpus_programs(directory: str):
    files = sorted(Path(directory).glob("*.c"))
    if not files:
        print(f"no .c files under {directory}", file=sys.stderr)
        raise SystemExit(2)
    programs = {}
    for f in files:
        try:
            programs[f.stem] = normalize(parse(f.read_text(encoding="utf-8"), name=str(f)))
        except SourceError as err:
            print(f"skipping {f}: {err}", file=sys.stderr)
    if not programs:
        print("no parseable submissions", file=sys.stderr)
        raise SystemExit(2)
    return programs


def build_matrix(programs: dict, weights: Weights, jobs: int = 1) -> DistanceMatrix:
    ids = tuple(sorted(programs))
    n = len(ids)
    d = np.zeros((n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def cost(pair):
        i, j = pair
        return program_distance(programs[ids[i]], programs[ids[j]], weights).total

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            costs = list(pool.map(cost, pairs))
    else:
        costs = [cost(p) for p in pairs]
    for (i, j), c in zip(pairs, costs):
        d[i, j] = d[j, i] = c
    return DistanceMatrix(ids, d)


def cmd_cluster(args) -> int:
    weights = _load_weights(args.weights)
    programs = _corpus_programs(args.dir)
    matrix = build_matrix(programs, weights, args.jobs)
    snapshot = build_snapshot(matrix, problem_id=Path(args.dir).name,
                              threshold_dist=args.threshold_dist)
    flat = clusters_flat_text(snapshot)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "snapshot.json").write_text(snapshot_canonical_json(snapshot), encoding="utf-8")
        (out / "clusters.tsv").write_text(flat, encoding="utf-8")
        if matrix.n > 0:
            method = snapshot.linkage or "single"
            tree = dendrogram_dict(linkage_tree(matrix, method))
            (out / "dendrogram.json").write_text(
                json.dumps(tree, sort_keys=True) + "\n", encoding="utf-8")
        (out / "forcegraph.json").write_text(
            json.dumps(forcegraph_dict(matrix, snapshot), sort_keys=True) + "\n",
            encoding="utf-8")
        print(f"wrote exports to {out}")
    else:
        sys.stdout.write(flat)
    print(f"programs {matrix.n} clusters {len(snapshot.clusters)} "
          f"linkage {snapshot.linkage} cophenetic {snapshot.cophenetic_c:.4f}",
          file=sys.stderr)
    return 0


def _read_marks(path: str) -> dict[str, float]:
    marks = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or \
                [f.strip() for f in reader.fieldnames[:2]] != ["submission_id", "marks"]:
            print(f"{path}: expected header 'submission_id,marks'", file=sys.stderr)
            raise SystemExit(2)
        for row in reader:
            try:
                marks[row["submission_id"].strip()] = float(row["marks"])
            except (TypeError, ValueError):
                print(f"skipping marks row {row}", file=sys.stderr)
    return marks


def cmd_variance(args) -> int:
    weights = _load_weights(args.weights)
    programs = _corpus_programs(args.dir)
    marks = _read_marks(args.marks)
    matrix = build_matrix(programs, weights, args.jobs)
    snapshot = build_snapshot(matrix, problem_id=Path(args.dir).name,
                              threshold_dist=args.threshold_dist)

    missing = [pid for pid in matrix.ids if pid not in marks]
    for pid in missing:
        print(f"warning: no marks for {pid}, excluded", file=sys.stderr)

    rows = []
    weighted_sum = 0.0
    weight_total = 0
    all_marks = []
    for k, cluster in enumerate(snapshot.clusters):
        got = [marks[m] for m in cluster.members if m in marks]
        if not got:
            continue
        var = float(np.var(got))
        rows.append((k, len(got), float(np.mean(got)), var))
        weighted_sum += var * len(got)
        weight_total += len(got)
        all_marks.extend(got)

    overall = float(np.var(all_marks)) if all_marks else 0.0
    weighted = weighted_sum / weight_total if weight_total else 0.0

    writer = csv.writer(sys.stdout)
    writer.writerow(["cluster", "size", "mean_marks", "variance"])
    for row in rows:
        writer.writerow([row[0], row[1], f"{row[2]:.4f}", f"{row[3]:.4f}"])
    print(f"overall_variance,{overall:.4f}")
    print(f"weighted_cluster_variance,{weighted:.4f}")
    if overall > 0:
        print(f"reduction,{1 - weighted / overall:.4f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.api import create_app
    from .service.config import load_config
    from .service.engine import Engine

    config = load_config(args.config)
    overrides = {}
    if args.listen:
        overrides["listen"] = args.listen
    if args.store:
        overrides["store_path"] = args.store
    if overrides:
        import dataclasses
        config = dataclasses.replace(config, **overrides)

    engine = Engine(config)
    if args.scheduler:
        engine.start_scheduler()
    app = create_app(engine)
    host, _, port = config.listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


def main(argv=None) -> int:
    top = argparse.ArgumentParser(prog="ctutor", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="dump the AST of one C file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("normalize", help="print the canonical linear form")
    p.add_argument("file")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("dist", help="distance and edit script between two files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--weights", help="JSON weights config")
    p.set_defaults(fn=cmd_dist)

    p = sub.add_parser("cluster", help="cluster a directory of .c submissions")
    p.add_argument("dir")
    p.add_argument("--out", help="directory for snapshot and exports")
    p.add_argument("--weights")
    p.add_argument("--threshold-dist", type=float, default=None, dest="threshold_dist")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_cluster)

    p = sub.add_parser("variance", help="marks variance with and without clustering")
    p.add_argument("dir")
    p.add_argument("marks", help="CSV with header submission_id,marks")
    p.add_argument("--weights")
    p.add_argument("--threshold-dist", type=float, default=None, dest="threshold_dist")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_variance)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", help="JSON service config")
    p.add_argument("--listen", help="host:port")
    p.add_argument("--store", help="store path or :memory:")
    p.add_argument("--scheduler", action="store_true",
                   help="recluster active problems periodically")
    p.set_defaults(fn=cmd_serve)

    args = top.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else 2
    except OSError as err:
        print(str(err), file=sys.stderr)
        return 2
    except Exception as err:  # internal error contract
        print(f"internal error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
