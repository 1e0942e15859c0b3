"""Command-line surface: enumeration, simulation, ranking, sequences, service.

Exit codes: 0 success, 1 runtime failure, 2 usage error.  Metric tables are
printed at four decimal places; stored artifacts keep full precision.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import PcmFillError
from .graphs import enumerate_connected_classes
from .metagraph import (
    FillingSequence,
    build_metagraph,
    export_metagraph,
    extract_sequences,
    mark_optimal,
)
from .pcm import NAMED_LEVELS
from .simulate import SimConfig, cr_calibration, run_level_sweep
from .store import RunArtifact, load_run, save_run

LEVEL_ORDER = ("weak", "modest", "strong")


def _flags_text(cls) -> str:
    flags = []
    if cls.is_star:
        flags.append("star")
    elif cls.is_tree:
        flags.append("tree")
    if cls.is_cycle:
        flags.append("cycle")
    if cls.is_bipartite:
        flags.append("bipartite")
    if cls.k_regular is not None:
        flags.append(f"{cls.k_regular}-regular")
    if cls.k_quasi_regular is not None:
        flags.append(f"{cls.k_quasi_regular}-quasi-regular")
    return " ".join(flags) or "-"


def cmd_enumerate(args) -> int:
    n = args.n
    levels = [args.e] if args.e is not None else list(range(n - 1, n * (n - 1) // 2 + 1))
    total = 0
    counts = []
    for e in levels:
        classes = enumerate_connected_classes(n, e)
        counts.append((e, len(classes)))
        total += len(classes)
        for cls in classes:
            deg = ",".join(map(str, cls.degree_sequence))
            print(f"{cls.g6:10s} e={cls.e:<3d} deg=({deg})  {_flags_text(cls)}")
    print("levels: " + " ".join(f"e={e}:{k}" for e, k in counts))
    print(f"total {total}")
    return 0


def cmd_simulate(args) -> int:
    with open(args.config) as fh:
        raw = json.load(fh)
    out = args.out or raw.pop("out", None)
    if out is None:
        print("simulate: no output path (use --out or an 'out' config key)", file=sys.stderr)
        return 1
    raw.setdefault("levels", list(LEVEL_ORDER))
    if isinstance(raw["levels"], list) and raw["levels"] and isinstance(raw["levels"][0], str):
        raw["levels"] = [{"name": name, "delta_halfwidth": NAMED_LEVELS[name].delta_halfwidth}
                         for name in raw["levels"]]
    raw.setdefault("e", None)
    raw.setdefault("classes", None)
    raw["n_jobs"] = args.jobs or raw.get("n_jobs", 1)
    config = SimConfig.from_dict(raw)
    done = []

    def progress(g6):
        done.append(g6)
        print(f"simulate: {len(done)} cells done (last {g6})", file=sys.stderr)

    scores = run_level_sweep(config, progress=progress)
    artifact = RunArtifact.build(config, scores)
    save_run(artifact, out)
    print(f"wrote {out} ({len(scores)} classes, N={config.n_samples} per level)")
    return 0


def _level_names(artifact) -> list[str]:
    names = {level.name for level in artifact.config.resolved_levels()}
    return [name for name in LEVEL_ORDER if name in names] + sorted(
        names - set(LEVEL_ORDER)
    )


def cmd_rank(args) -> int:
    artifact = load_run(args.run)
    level = args.level
    by_e: dict[int, list] = {}
    for score in artifact.scores.values():
        by_e.setdefault(score.graph_class.e, []).append(score)
    for e in sorted(by_e):
        rows = sorted(by_e[e], key=lambda s: s.levels[level].mean_d_euc)
        print(f"n={artifact.config.n} e={e} level={level}")
        for rank, score in enumerate(rows):
            stats = score.levels[level]
            mark = "*" if rank == 0 else " "
            print(
                f" {mark} {score.g6:10s} d_euc={stats.mean_d_euc:.4f} "
                f"tau={stats.mean_tau:.4f} sd_d={stats.sd_d_euc:.4f} sd_tau={stats.sd_tau:.4f}"
            )
    return 0


def _scored_from_artifact(artifact):
    meta = build_metagraph(artifact.config.n)
    return mark_optimal(meta, artifact.scores, margins=artifact.margins or None)


def cmd_metagraph(args) -> int:
    artifact = load_run(args.run)
    scored = _scored_from_artifact(artifact)
    text = export_metagraph(scored, args.format)
    sys.stdout.write(text)
    if args.save:
        artifact.metagraph = json.loads(export_metagraph(scored, "json"))
        save_run(artifact, args.run)
    return 0


def cmd_sequence(args) -> int:
    artifact = load_run(args.run)
    scored = _scored_from_artifact(artifact)
    sequences = extract_sequences(scored)
    for seq in sequences:
        print(f"{seq.kind} sequence (first constrained prefix at e={seq.start_level}):")
        bounds = seq.group_boundaries()
        for idx, (i, j) in enumerate(seq.steps):
            group = seq.group_of_step(idx)
            interchangeable = seq.groups[group] > 1
            mark = "'" if interchangeable else " "
            e = idx + 1
            flag = seq.realized_levels.get(e, "")
            note = f"  [{flag}]" if flag == "near_optimal" else ""
            print(f"  #{idx + 1}{mark} a{i + 1}{j + 1}{note}")
        print()
    if args.save:
        artifact.sequences = [seq.to_dict() for seq in sequences]
        save_run(artifact, args.run)
    return 0


def cmd_plotdata(args) -> int:
    artifact = load_run(args.run)
    scored = _scored_from_artifact(artifact)
    names = _level_names(artifact)
    print("n,e,level,mean_d_euc,mean_tau")
    for e in sorted(scored.optimal):
        score = artifact.scores[scored.optimal[e]]
        for name in names:
            stats = score.levels[name]
            print(f"{artifact.config.n},{e},{name},{stats.mean_d_euc:.4f},{stats.mean_tau:.4f}")
    return 0


def cmd_calibrate(args) -> int:
    rng = np.random.default_rng(args.seed)
    summary = cr_calibration(args.n, args.level, args.matrices, rng)
    print(f"CR calibration n={args.n} level={args.level} matrices={args.matrices}")
    print(
        f"min={summary.minimum:.4f} q1={summary.lower_quartile:.4f} "
        f"median={summary.median:.4f} q3={summary.upper_quartile:.4f} max={summary.maximum:.4f}"
    )
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(port=args.port, host=args.host, store_path=args.store, reference_dir=args.reference)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcmfill",
        description="Optimal filling-in patterns and sequences for incomplete pairwise comparison matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list connected comparison-graph classes")
    p.add_argument("n", type=int)
    p.add_argument("e", type=int, nargs="?", default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("simulate", help="run a Monte Carlo sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rank", help="per-level score table with the optimal class marked")
    p.add_argument("run")
    p.add_argument("--level", required=True, choices=list(LEVEL_ORDER))
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("metagraph", help="export the scored GRAPH of graphs")
    p.add_argument("run")
    p.add_argument("--format", default="dot", choices=["dot", "json"])
    p.add_argument("--save", action="store_true", help="store the export back into the artifact")
    p.set_defaults(func=cmd_metagraph)

    p = sub.add_parser("sequence", help="print the extracted filling-in sequences")
    p.add_argument("run")
    p.add_argument("--save", action="store_true", help="store sequences back into the artifact")
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("plotdata", help="CSV of the optimal-curve points per level")
    p.add_argument("run")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("calibrate", help="five-number summary of CR after perturbation")
    p.add_argument("n", type=int)
    p.add_argument("--level", required=True)
    p.add_argument("--matrices", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("serve", help="start the elicitation HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store", default="sessions.jsonl")
    p.add_argument("--reference", default=None)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PcmFillError, OSError, ValueError, KeyError) as exc:
        print(f"pcmfill: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
