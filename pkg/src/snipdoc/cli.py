"""Command-line pipeline: mine -> extract -> link -> encode -> retrieve ->
eval -> stats -> serve.

Every subcommand reads and writes the versioned file schemas from
SCHEMAS.md. Logs go to stderr, data only to files. Exit codes: 2 for usage
errors, 3 for schema-version or id mismatches, 1 for other fatal errors.
One --seed drives every stochastic step through derived per-stage seeds.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import figures, schemas
from .encoder import SplitSpec, build_datasets, snippet_tokens
from .extractor import MineConfig, mine_corpus
from .forest import ForestConfig, link_forest, load_model, save_model, train_forest
from .linkers import extract_features, link_blank_line, link_token_similarity
from .metrics import (
    aggregate_link_scores,
    bleu_all,
    corpus_bleu,
    link_scores,
    meteor,
    rouge_lcs,
)
from .stats import (
    cliffs_delta,
    holm,
    mcnemar,
    odds_ratio_paired,
    wilcoxon_signed_rank,
)
from .util import derive_seed

logger = logging.getLogger("snipdoc")

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_USAGE = 2
EXIT_SCHEMA = 3

DEFAULT_SEED = 7
ENGINES = ("blank-line", "token-sim", "forest")


class IdMismatchError(Exception):
    def __init__(self, offending_id: str, detail: str):
        self.offending_id = offending_id
        super().__init__(f"{detail}: first offending id {offending_id!r}")


def _parse_ratios(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("ratios must be three comma-separated numbers")
    try:
        ratios = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return ratios  # validated later by SplitSpec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snipdoc",
        description="Mine, link, encode, and evaluate inner code comments.",
    )
    parser.add_argument(
        "--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="walk a corpus root and write the method manifest")
    p.add_argument("--root", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-tokens", type=int, default=1024)
    p.add_argument("--include-tests", action="store_true")

    p = sub.add_parser("extract", help="flatten a manifest into a comment table")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("link", help="predict comment scopes with a link engine")
    p.add_argument("--manifest", required=True)
    p.add_argument("--engine", required=True, choices=ENGINES)
    p.add_argument("--lam", type=float, default=0.2, help="token-sim threshold")
    p.add_argument("--model", help="forest model file (load, or save with --fit)")
    p.add_argument("--fit", help="gold links file: train the forest before predicting")
    p.add_argument("--n-trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=12)
    p.add_argument("--min-split", type=int, default=2)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("encode", help="build task datasets from manifest + gold labels")
    p.add_argument("--manifest", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--ratios", type=_parse_ratios, default=(0.8, 0.1, 0.1))
    p.add_argument("--group-key", default="file", choices=["file", "none"])
    p.add_argument("--summarization-cap", type=int, default=512)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("retrieve", help="nearest-neighbor summary predictions")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="score predictions against gold")
    p.add_argument("--task", required=True, choices=["linking", "summarization"])
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("stats", help="compare two evaluation reports")
    p.add_argument("--report-a", required=True)
    p.add_argument("--report-b", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--store", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--batch-from", help="manifest: create tasks when store is empty")
    p.add_argument("--per-file-cap", type=int, default=10)
    p.add_argument("--static", help="directory with the browser UI build")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8700)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    return parser


def cmd_mine(args) -> int:
    config = MineConfig(max_tokens=args.max_tokens, include_tests=args.include_tests)
    manifest = mine_corpus(args.root, config)
    schemas.write_jsonl(args.out, schemas.MANIFEST, schemas.manifest_records(manifest))
    logger.info(
        "mined %d methods (skips: %s)",
        len(manifest.entries),
        dict(sorted(manifest.skip_counts.items())) or "none",
    )
    return EXIT_OK


def _load_manifest(path: str):
    return schemas.manifest_from_records(schemas.read_jsonl(path, schemas.MANIFEST))


def cmd_extract(args) -> int:
    manifest = _load_manifest(args.manifest)
    records = []
    for entry in manifest.entries:
        for c in entry.comments:
            records.append(
                {
                    "method_id": entry.method.id,
                    "comment_id": c.id,
                    "project": entry.project,
                    "path": entry.path,
                    "kind": c.kind,
                    "text": c.text,
                    "start_line": c.start_line,
                    "end_line": c.end_line,
                    "trailing": c.trailing,
                }
            )
    schemas.write_jsonl(args.out, schemas.COMMENTS, records)
    logger.info("extracted %d comments", len(records))
    return EXIT_OK


def _fit_forest(manifest, gold_path: str, args):
    gold_records = schemas.read_jsonl(gold_path, schemas.GOLD)
    gold_by_comment = {r["comment_id"]: r for r in gold_records}
    instances = []
    for entry in manifest.entries:
        for comment in entry.comments:
            gold = gold_by_comment.get(comment.id)
            if gold is None:
                continue
            linked = set(gold["lines"])
            for stmt in entry.method.body_lines:
                if stmt.is_linkable:
                    instances.append(
                        (
                            extract_features(entry.method, comment, stmt),
                            stmt.line_no in linked,
                        )
                    )
    config = ForestConfig(
        n_trees=args.n_trees, max_depth=args.max_depth, min_split=args.min_split
    )
    model = train_forest(instances, config, seed=derive_seed(args.seed, "forest"))
    logger.info(
        "trained forest on %d instances (%d trees)", len(instances), config.n_trees
    )
    return model


def cmd_link(args) -> int:
    manifest = _load_manifest(args.manifest)
    if args.engine == "forest":
        if args.fit:
            if not args.model:
                raise ValueError("--fit requires --model to store the trained forest")
            model = _fit_forest(manifest, args.fit, args)
            save_model(model, args.model)
        elif args.model:
            model = load_model(args.model)
        else:
            raise ValueError("forest engine needs --model (or --fit to train one)")

    records = []
    for entry in manifest.entries:
        for comment in entry.comments:
            if args.engine == "blank-line":
                lines = link_blank_line(entry.method, comment)
            elif args.engine == "token-sim":
                lines = link_token_similarity(entry.method, comment, args.lam)
            else:
                lines = link_forest(model, entry.method, comment)
            records.append(
                {
                    "method_id": entry.method.id,
                    "comment_id": comment.id,
                    "lines": sorted(lines),
                }
            )
    schemas.write_jsonl(args.out, schemas.LINKS, records)
    logger.info("linked %d comments with %s", len(records), args.engine)
    return EXIT_OK


def cmd_encode(args) -> int:
    manifest = _load_manifest(args.manifest)
    gold_records = schemas.read_jsonl(args.gold, schemas.GOLD)
    spec = SplitSpec(ratios=args.ratios, group_key=args.group_key, seed=args.seed)
    spec.validate()
    datasets = build_datasets(
        manifest,
        gold_records,
        seed=args.seed,
        ratios=args.ratios,
        group_key=args.group_key,
        summarization_cap=args.summarization_cap,
    )
    out_dir = Path(args.out_dir)
    for task, splits in datasets.items():
        for split, instances in splits.items():
            path = out_dir / f"{task}.{split}.jsonl"
            schemas.write_jsonl(
                path, schemas.DATASET, [inst.to_record(split) for inst in instances]
            )
            logger.info("wrote %s (%d instances)", path, len(instances))
    return EXIT_OK


def cmd_retrieve(args) -> int:
    from .retrieval import build_index, retrieve_summary

    train = schemas.read_jsonl(args.train, schemas.DATASET)
    test = schemas.read_jsonl(args.test, schemas.DATASET)
    pairs = [
        (set(snippet_tokens(r["input_text"])), r["target_text"], r["comment_id"])
        for r in train
    ]
    index = build_index(pairs)
    records = []
    for r in test:
        summary, score, source = retrieve_summary(
            set(snippet_tokens(r["input_text"])), index
        )
        records.append(
            {
                "comment_id": r["comment_id"],
                "predicted_summary": summary,
                "score": score,
                "source_comment_id": source,
            }
        )
    schemas.write_jsonl(args.out, schemas.PREDICTIONS, records)
    logger.info("retrieved %d summaries from %d indexed pairs", len(records), len(pairs))
    return EXIT_OK


def _check_ids(pred_ids: list[str], gold_ids: list[str]) -> None:
    missing = sorted(set(pred_ids) ^ set(gold_ids))
    if missing:
        raise IdMismatchError(missing[0], "prediction/gold ids do not match")


def cmd_eval(args) -> int:
    out = Path(args.out)
    if args.task == "linking":
        preds = schemas.read_jsonl(args.pred, schemas.LINKS)
        gold = schemas.read_jsonl(args.gold, schemas.GOLD)
        _check_ids([p["comment_id"] for p in preds], [g["comment_id"] for g in gold])
        gold_by_id = {g["comment_id"]: g for g in gold}
        rows = []
        scores = []
        for p in sorted(preds, key=lambda r: r["comment_id"]):
            g = gold_by_id[p["comment_id"]]
            score = link_scores(set(p["lines"]), set(g["lines"]))
            scores.append(score)
            rows.append(
                {
                    "kind": "instance",
                    "task": "linking",
                    "comment_id": p["comment_id"],
                    "correct": score.correct,
                    "tp": score.tp,
                    "fp": score.fp,
                    "fn": score.fn,
                    "precision": score.precision,
                    "recall": score.recall,
                }
            )
        aggregates = aggregate_link_scores(scores)
        rows.append({"kind": "aggregate", "task": "linking", **aggregates})
        schemas.write_jsonl(out, schemas.REPORT, rows)
        figures.render_link_eval(aggregates, out.with_suffix(".png"))
    else:
        preds = schemas.read_jsonl(args.pred, schemas.PREDICTIONS)
        gold = schemas.read_jsonl(args.gold, schemas.DATASET)
        _check_ids([p["comment_id"] for p in preds], [g["comment_id"] for g in gold])
        gold_by_id = {g["comment_id"]: g for g in gold}
        rows = []
        pairs = []
        for p in sorted(preds, key=lambda r: r["comment_id"]):
            reference = gold_by_id[p["comment_id"]]["target_text"].split()
            candidate = p["predicted_summary"].split()
            pairs.append((candidate, reference))
            bleu_scores = bleu_all(candidate, reference)
            rouge = rouge_lcs(candidate, reference)
            rows.append(
                {
                    "kind": "instance",
                    "task": "summarization",
                    "comment_id": p["comment_id"],
                    "bleu1": bleu_scores[1],
                    "bleu2": bleu_scores[2],
                    "bleu3": bleu_scores[3],
                    "bleu4": bleu_scores[4],
                    "rouge_precision": rouge["precision"],
                    "rouge_recall": rouge["recall"],
                    "rouge_f": rouge["fmeasure"],
                    "meteor": meteor(candidate, reference),
                }
            )
        n = max(1, len(rows))
        aggregate = {
            "kind": "aggregate",
            "task": "summarization",
            "count": len(rows),
            "corpus_bleu4": corpus_bleu(pairs) if pairs else 0.0,
        }
        for key in (
            "bleu1", "bleu2", "bleu3", "bleu4",
            "rouge_precision", "rouge_recall", "rouge_f", "meteor",
        ):
            aggregate[f"mean_{key}"] = sum(r[key] for r in rows) / n
        rows.append(aggregate)
        schemas.write_jsonl(out, schemas.REPORT, rows)
        figures.render_summary_eval(
            [r["bleu4"] for r in rows if r["kind"] == "instance"],
            out.with_suffix(".png"),
        )
    logger.info("evaluation report written to %s", out)
    return EXIT_OK


def _report_instances(path: str) -> tuple[str, dict[str, dict]]:
    rows = schemas.read_jsonl(path, schemas.REPORT)
    instances = {r["comment_id"]: r for r in rows if r.get("kind") == "instance"}
    tasks = {r.get("task") for r in rows}
    if len(tasks) != 1:
        raise ValueError(f"{path}: report must contain exactly one task, got {tasks}")
    return tasks.pop(), instances


def cmd_stats(args) -> int:
    task_a, inst_a = _report_instances(args.report_a)
    task_b, inst_b = _report_instances(args.report_b)
    if task_a != task_b:
        raise ValueError(f"cannot compare a {task_a} report with a {task_b} report")
    _check_ids(list(inst_a), list(inst_b))
    ids = sorted(inst_a)

    rows: list[dict] = []
    if task_a == "linking":
        a_correct = [bool(inst_a[i]["correct"]) for i in ids]
        b_correct = [bool(inst_b[i]["correct"]) for i in ids]
        statistic, p, b, c = mcnemar(a_correct, b_correct)
        raw_or, haldane_or = odds_ratio_paired(b, c)
        rows.append(
            {
                "metric": "correct",
                "test": "mcnemar",
                "p_value": p,
                "statistic": statistic,
                "b": b,
                "c": c,
                "odds_ratio": raw_or if raw_or != float("inf") else None,
                "odds_ratio_haldane": haldane_or,
                "effect": raw_or if raw_or != float("inf") else haldane_or,
                "effect_label": None,
            }
        )
        paired_metrics = ["precision", "recall"]
    else:
        paired_metrics = ["bleu4", "rouge_f", "meteor"]

    for metric in paired_metrics:
        a_vals = [float(inst_a[i][metric]) for i in ids]
        b_vals = [float(inst_b[i][metric]) for i in ids]
        diffs = [x - y for x, y in zip(a_vals, b_vals)]
        p = wilcoxon_signed_rank(diffs)
        d, label = cliffs_delta(a_vals, b_vals)
        rows.append(
            {
                "metric": metric,
                "test": "wilcoxon",
                "p_value": p,
                "effect": d,
                "effect_label": label,
            }
        )

    adjustable = [i for i, r in enumerate(rows) if r["p_value"] is not None]
    adjusted = holm([rows[i]["p_value"] for i in adjustable])
    for row in rows:
        row["p_adjusted"] = None
    for i, adj in zip(adjustable, adjusted):
        rows[i]["p_adjusted"] = adj

    out = Path(args.out)
    schemas.write_jsonl(
        out, schemas.REPORT, [{"kind": "comparison", "task": task_a, **r} for r in rows]
    )
    figures.render_comparison(rows, out.with_suffix(".png"))
    logger.info("comparison written to %s", out)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.api import ServiceConfig, create_app
    from .service.store import AnnotationStore

    config = ServiceConfig.load(args.config)
    store = AnnotationStore(args.store)
    if args.batch_from and not store.tasks:
        manifest = _load_manifest(args.batch_from)
        pool = sorted(set(config.tokens.values()))
        created = store.create_batch(
            manifest, pool, per_file_cap=args.per_file_cap, seed=args.seed
        )
        logger.info("created %d annotation tasks", len(created))
    app = create_app(store, config, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_config=None)
    return EXIT_OK


_COMMANDS = {
    "mine": cmd_mine,
    "extract": cmd_extract,
    "link": cmd_link,
    "encode": cmd_encode,
    "retrieve": cmd_retrieve,
    "eval": cmd_eval,
    "stats": cmd_stats,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except schemas.SchemaVersionError as exc:
        logger.error("schema mismatch: %s", exc)
        return EXIT_SCHEMA
    except IdMismatchError as exc:
        logger.error("%s", exc)
        return EXIT_SCHEMA
    except Exception as exc:  # fatal, but never a traceback to the user
        logger.error("%s", exc)
        if logger.isEnabledFor(logging.DEBUG):
            raise
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
