"""Command line interface binding every pipeline stage.

Each subcommand wraps one library operation: file in, serialized result
out. JSON results are printed sorted and indented; JSONL and FMAT results
use the library serializations unchanged. Exit codes: 0 success, 1
validation error (including usage errors), 2 I/O error.
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import sys
from collections.abc import Sequence
from pathlib import Path

from . import acceval, corpus, georegion, knnmatch


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract is 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def _p_targets(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid operating points {text!r}") from None
    return values


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _write_bytes(out: str | None, data: bytes) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
    else:
        Path(out).write_bytes(data)


def _dump_json(out: str | None, obj: object) -> None:
    _write_text(out, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _default_regions_path() -> Path:
    return Path(str(importlib.resources.files("accentkit.data").joinpath("regions.json")))


def _load_regions(path: str | None) -> georegion.RegionSet:
    if path is None:
        return georegion.default_regions()
    return georegion.parse_regions(Path(path).read_text("utf-8"))


def _load_aliases(path: str | None) -> dict[str, str] | None:
    if path is None:
        return None
    doc = json.loads(Path(path).read_text("utf-8"))
    if not isinstance(doc, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in doc.items()
    ):
        raise ValueError("alias file must be a JSON object mapping labels to accents")
    return doc


def _load_selection(path: str) -> tuple[corpus.SelectionEntry, ...]:
    return corpus.parse_selection_entries(Path(path).read_text("utf-8"))


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_select(args: argparse.Namespace) -> int:
    manifest = corpus.load_manifest(args.manifest)
    strategy = corpus.Strategy(args.strategy)
    if strategy is not corpus.Strategy.UNFILTERED and args.geo is None:
        raise ValueError(f"--geo is required for strategy {strategy.value!r}")
    predictions = corpus.load_geo_predictions(args.geo) if args.geo else {}
    regions = _load_regions(args.regions)
    aliases = _load_aliases(args.aliases)
    selection = corpus.select(manifest, predictions, regions, strategy, aliases=aliases)
    _write_text(args.out, corpus.selection_to_jsonl(selection))
    report = {
        "no_prediction": selection.skipped.no_prediction,
        "no_region_for_label": selection.skipped.no_region_for_label,
        "rejected": selection.skipped.rejected,
    }
    report_text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.report is None:
        sys.stderr.write(report_text)
    else:
        Path(args.report).write_text(report_text, encoding="utf-8")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    entries = _load_selection(args.selection)
    manifest = corpus.load_manifest(args.manifest)
    result = corpus.stats(entries, manifest)
    _dump_json(
        args.out,
        {
            accent: {
                "hours": s.hours,
                "n_utterances": s.n_utterances,
                "n_speakers": s.n_speakers,
            }
            for accent, s in result.items()
        },
    )
    return 0


def _cmd_precision(args: argparse.Namespace) -> int:
    entries = _load_selection(args.selection)
    if args.from_manifest is not None:
        manifest = corpus.load_manifest(args.from_manifest)
        reference = {
            r.utt_id: r.self_accent for r in manifest.records if r.self_accent.strip()
        }
    else:
        reference = {e.utt_id: e.accent for e in _load_selection(args.reference)}
    _dump_json(args.out, corpus.label_precision(entries, reference))
    return 0


def _cmd_batches(args: argparse.Namespace) -> int:
    entries = _load_selection(args.selection)
    plan = corpus.balanced_batches(entries, args.batch_size, args.seed)
    accent_of = {e.utt_id: e.accent for e in entries}
    _write_text(args.out, corpus.epoch_plan_to_jsonl(plan, accent_of))
    return 0


def _cmd_augment_plan(args: argparse.Namespace) -> int:
    entries = _load_selection(args.selection)
    donors: list[str] = []
    if args.donors is not None:
        donors = [
            line.strip()
            for line in Path(args.donors).read_text("utf-8").splitlines()
            if line.strip()
        ]
    plan = corpus.make_augment_plan(
        entries, corpus.AugmentMethod(args.method), donors, args.seed
    )
    _write_text(args.out, corpus.augment_plan_to_jsonl(plan))
    return 0


def _cmd_knn_convert(args: argparse.Namespace) -> int:
    source = knnmatch.read_fmat(args.source)
    pool = knnmatch.build_pool([knnmatch.read_fmat(p) for p in args.pool])
    converted = knnmatch.knn_convert(source, pool, k=args.k, block_rows=args.block_rows)
    _write_bytes(args.out, knnmatch.fmat_bytes(converted))
    return 0


def _cmd_eval_gt_sim(args: argparse.Namespace) -> int:
    eval_set = acceval.load_embeddings(args.eval)
    ref_set = acceval.load_embeddings(args.ref)
    pairing = json.loads(Path(args.pairing).read_text("utf-8"))
    if not isinstance(pairing, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in pairing.items()
    ):
        raise ValueError("pairing file must be a JSON object mapping utt_id to utt_id")
    result = acceval.gt_similarity(eval_set, ref_set, pairing)
    _dump_json(args.out, {"per_accent": result.per_accent, "overall": result.overall})
    return 0


def _cmd_eval_dcf(args: argparse.Namespace) -> int:
    if args.trials is not None:
        if args.ref is not None or args.eval is not None:
            raise ValueError("--trials cannot be combined with --ref/--eval")
        trials = acceval.parse_trials_jsonl(Path(args.trials).read_text("utf-8"))
    else:
        if args.ref is None or args.eval is None:
            raise ValueError("need either --trials or both --ref and --eval")
        backend = acceval.fit_backend(
            acceval.load_embeddings(args.ref), args.pca_dim, args.reg_lambda
        )
        trials = acceval.score_trials(backend, acceval.load_embeddings(args.eval))
        if args.dump_trials is not None:
            Path(args.dump_trials).write_text(
                acceval.trials_to_jsonl(trials), encoding="utf-8"
            )
    result = acceval.dcf(trials, args.p_targets)
    _dump_json(args.out, {"per_accent": result.per_accent, "average": result.average})
    return 0


def _cmd_sim_matrix(args: argparse.Namespace) -> int:
    embeddings = acceval.load_embeddings(args.embeddings)
    matrix = acceval.mean_embedding_similarity_matrix(embeddings)
    _write_text(args.out, acceval.sim_matrix_to_csv(matrix))
    return 0


def _cmd_cluster(args: argparse.Namespace) -> int:
    matrix = acceval.parse_sim_matrix_csv(Path(args.matrix).read_text("utf-8"))
    _dump_json(args.out, acceval.spectral_cluster(matrix, args.n_clusters, seed=args.seed))
    return 0


def _cmd_wer(args: argparse.Namespace) -> int:
    result = acceval.wer(args.ref, args.hyp)
    _dump_json(
        args.out,
        {
            "wer": round(result.wer, 4),
            "substitutions": result.substitutions,
            "deletions": result.deletions,
            "insertions": result.insertions,
            "n_ref_words": result.n_ref_words,
        },
    )
    return 0


def _cmd_mos(args: argparse.Namespace) -> int:
    result = acceval.mos_ci(args.scores)
    _dump_json(args.out, {"mean": result.mean, "ci95_halfwidth": result.ci95_halfwidth})
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app, load_state

    regions_path = args.regions if args.regions is not None else _default_regions_path()
    state = load_state(args.manifest, args.geo, regions_path, args.aliases)
    app = create_app(state, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="accentkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("select", help="select utterances by labeling strategy")
    p.add_argument("--manifest", required=True, help="manifest TSV")
    p.add_argument("--geo", help="geolocation predictions JSONL")
    p.add_argument("--regions", help="region config JSON (default: bundled example)")
    p.add_argument(
        "--strategy", required=True, choices=[s.value for s in corpus.Strategy]
    )
    p.add_argument("--aliases", help="JSON object mapping self labels to accents")
    p.add_argument("--out", help="selection JSONL path (default: stdout)")
    p.add_argument("--report", help="skipped-count JSON path (default: stderr)")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("stats", help="per-accent hours/utterances/speakers")
    p.add_argument("--selection", required=True, help="selection JSONL")
    p.add_argument("--manifest", required=True, help="manifest TSV")
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("precision", help="label precision against a reference")
    p.add_argument("--selection", required=True, help="selection JSONL to score")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--reference", help="reference labels as selection JSONL")
    group.add_argument(
        "--from-manifest", help="use self-reported labels from this manifest TSV"
    )
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=_cmd_precision)

    p = sub.add_parser("batches", help="plan accent-balanced training batches")
    p.add_argument("--selection", required=True, help="selection JSONL")
    p.add_argument("--batch-size", required=True, type=int)
    p.add_argument("--seed", required=True, type=_u64)
    p.add_argument("--out", help="epoch JSONL path (default: stdout)")
    p.set_defaults(func=_cmd_batches)

    p = sub.add_parser("augment-plan", help="plan per-utterance augmentation")
    p.add_argument("--selection", required=True, help="selection JSONL")
    p.add_argument(
        "--method", required=True, choices=[m.value for m in corpus.AugmentMethod]
    )
    p.add_argument("--donors", help="donor speaker ids, one per line (knn-vc only)")
    p.add_argument("--seed", required=True, type=_u64)
    p.add_argument("--out", help="plan JSONL path (default: stdout)")
    p.set_defaults(func=_cmd_augment_plan)

    p = sub.add_parser("knn-convert", help="replace frames by k-nearest pool means")
    p.add_argument("--source", required=True, help="source FMAT file")
    p.add_argument(
        "--pool", required=True, action="append", help="pool FMAT file (repeatable)"
    )
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--block-rows", type=int, help="chunk source rows to bound memory")
    p.add_argument("--out", help="converted FMAT path (default: stdout)")
    p.set_defaults(func=_cmd_knn_convert)

    p = sub.add_parser("eval-gt-sim", help="mean similarity to paired references")
    p.add_argument("--eval", required=True, help="synthetic embeddings JSONL")
    p.add_argument("--ref", required=True, help="reference embeddings JSONL")
    p.add_argument("--pairing", required=True, help="JSON object eval utt_id -> ref utt_id")
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=_cmd_eval_gt_sim)

    p = sub.add_parser("eval-dcf", help="detection cost from LLR trials")
    p.add_argument("--trials", help="trial scores JSONL")
    p.add_argument("--ref", help="reference embeddings JSONL (fits the scorer)")
    p.add_argument("--eval", help="evaluation embeddings JSONL to score")
    p.add_argument("--pca-dim", type=int, default=18)
    p.add_argument("--reg-lambda", type=float)
    p.add_argument("--dump-trials", help="also write scored trials JSONL here")
    p.add_argument(
        "--p-targets", type=_p_targets, default=(0.1, 0.5), metavar="P1,P2,...",
        help="target priors (default: 0.1,0.5)",
    )
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=_cmd_eval_dcf)

    p = sub.add_parser("sim-matrix", help="accent-mean cosine similarity matrix CSV")
    p.add_argument("--embeddings", required=True, help="embeddings JSONL")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_sim_matrix)

    p = sub.add_parser("cluster", help="spectral clustering of a similarity matrix")
    p.add_argument("--matrix", required=True, help="similarity matrix CSV")
    p.add_argument("--n-clusters", required=True, type=int)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("wer", help="word error rate of a hypothesis transcript")
    p.add_argument("--ref", required=True, help="reference transcript text")
    p.add_argument("--hyp", required=True, help="hypothesis transcript text")
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=_cmd_wer)

    p = sub.add_parser("mos", help="mean opinion score with a 95%% interval")
    p.add_argument("scores", nargs="+", type=float, help="scores in [1, 5]")
    p.add_argument("--out", help="JSON path (default: stdout)")
    p.set_defaults(func=_cmd_mos)

    p = sub.add_parser("serve", help="run the read-only stats service")
    p.add_argument("--manifest", required=True, help="manifest TSV")
    p.add_argument("--geo", required=True, help="geolocation predictions JSONL")
    p.add_argument("--regions", help="region config JSON (default: bundled example)")
    p.add_argument("--aliases", help="JSON object mapping self labels to accents")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui-dir", help="serve this directory at /ui")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
