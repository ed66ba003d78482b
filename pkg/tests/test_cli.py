"""End-to-end command line runs over the bundled fixture corpus.

Every subcommand is exercised in-process through ``main`` so exit codes
and artifacts are checked exactly as a shell user would see them.
"""

import json
import time
from pathlib import Path

import pytest

from snipdoc import schemas
from snipdoc.cli import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def run_pipeline(corpus_dir: Path, gold_path: Path, out: Path) -> dict[str, Path]:
    """mine -> extract -> link (all engines) -> eval -> stats -> encode ->
    retrieve -> eval, everything seeded, returning the artifact map."""
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "manifest": out / "manifest.jsonl",
        "comments": out / "comments.jsonl",
        "links_blank": out / "links_blank.jsonl",
        "links_sim": out / "links_sim.jsonl",
        "links_forest": out / "links_forest.jsonl",
        "model": out / "model.jsonl",
        "report_blank": out / "report_blank.jsonl",
        "report_sim": out / "report_sim.jsonl",
        "comparison": out / "comparison.jsonl",
        "data_dir": out / "data",
        "retrieved": out / "retrieved.jsonl",
        "report_sum": out / "report_sum.jsonl",
    }
    steps = [
        ["mine", "--root", str(corpus_dir), "--out", str(paths["manifest"])],
        ["extract", "--manifest", str(paths["manifest"]), "--out", str(paths["comments"])],
        ["link", "--manifest", str(paths["manifest"]), "--engine", "blank-line",
         "--out", str(paths["links_blank"])],
        ["link", "--manifest", str(paths["manifest"]), "--engine", "token-sim",
         "--lam", "0.2", "--out", str(paths["links_sim"])],
        ["link", "--manifest", str(paths["manifest"]), "--engine", "forest",
         "--fit", str(gold_path), "--model", str(paths["model"]),
         "--n-trees", "30", "--out", str(paths["links_forest"])],
        ["eval", "--task", "linking", "--pred", str(paths["links_blank"]),
         "--gold", str(gold_path), "--out", str(paths["report_blank"])],
        ["eval", "--task", "linking", "--pred", str(paths["links_sim"]),
         "--gold", str(gold_path), "--out", str(paths["report_sim"])],
        ["stats", "--report-a", str(paths["report_blank"]),
         "--report-b", str(paths["report_sim"]), "--out", str(paths["comparison"])],
        ["encode", "--manifest", str(paths["manifest"]), "--gold", str(gold_path),
         "--out-dir", str(paths["data_dir"])],
        ["retrieve", "--train", str(paths["data_dir"] / "summarization.train.jsonl"),
         "--test", str(paths["data_dir"] / "summarization.test.jsonl"),
         "--out", str(paths["retrieved"])],
        ["eval", "--task", "summarization", "--pred", str(paths["retrieved"]),
         "--gold", str(paths["data_dir"] / "summarization.test.jsonl"),
         "--out", str(paths["report_sum"])],
    ]
    for argv in steps:
        code = main(argv)
        assert code == 0, f"{argv[0]} exited {code}"
    return paths


@pytest.fixture(scope="module")
def pipeline(corpus_dir, gold_path, tmp_path_factory):
    out = tmp_path_factory.mktemp("pipeline")
    started = time.monotonic()
    paths = run_pipeline(corpus_dir, gold_path, out)
    paths["elapsed"] = time.monotonic() - started
    return paths


def test_pipeline_completes_quickly(pipeline):
    assert pipeline["elapsed"] < 60.0


def test_mine_writes_manifest_matching_library_walk(pipeline, manifest):
    records = schemas.read_jsonl(pipeline["manifest"], schemas.MANIFEST)
    methods = [r for r in records if r.get("kind") != "mining_summary"]
    assert len(methods) == len(manifest.entries)
    summary = records[0]
    assert summary["kind"] == "mining_summary"
    assert summary["skip_counts"] == dict(manifest.skip_counts)


def test_extract_flattens_every_comment(pipeline, manifest):
    records = schemas.read_jsonl(pipeline["comments"], schemas.COMMENTS)
    assert len(records) == sum(len(e.comments) for e in manifest.entries)
    sample = records[0]
    assert {"method_id", "comment_id", "project", "path", "kind", "text",
            "start_line", "end_line", "trailing"} <= set(sample)


def test_every_link_engine_covers_every_comment(pipeline, gold_records):
    gold_ids = {r["comment_id"] for r in gold_records}
    for key in ("links_blank", "links_sim", "links_forest"):
        records = schemas.read_jsonl(pipeline[key], schemas.LINKS)
        assert {r["comment_id"] for r in records} == gold_ids
        for r in records:
            assert r["lines"] == sorted(r["lines"])


def test_eval_report_shape_and_figure(pipeline, gold_records):
    rows = schemas.read_jsonl(pipeline["report_blank"], schemas.REPORT)
    instances = [r for r in rows if r["kind"] == "instance"]
    aggregates = [r for r in rows if r["kind"] == "aggregate"]
    assert len(instances) == len(gold_records)
    assert len(aggregates) == 1
    agg = aggregates[0]
    assert 0.0 <= agg["correct_rate"] <= 1.0
    assert 0.0 <= agg["micro_precision"] <= 1.0
    figure = pipeline["report_blank"].with_suffix(".png")
    assert figure.read_bytes()[:8] == PNG_MAGIC


def test_stats_comparison_rows_and_figure(pipeline):
    rows = schemas.read_jsonl(pipeline["comparison"], schemas.REPORT)
    by_metric = {r["metric"]: r for r in rows}
    assert set(by_metric) == {"correct", "precision", "recall"}
    assert by_metric["correct"]["test"] == "mcnemar"
    assert by_metric["precision"]["test"] == "wilcoxon"
    for row in rows:
        if row["p_value"] is not None:
            assert row["p_adjusted"] >= row["p_value"]
    figure = pipeline["comparison"].with_suffix(".png")
    assert figure.read_bytes()[:8] == PNG_MAGIC


def test_encode_writes_nine_dataset_files(pipeline):
    files = sorted(p.name for p in pipeline["data_dir"].glob("*.jsonl"))
    expected = sorted(
        f"{task}.{split}.jsonl"
        for task in ("classification", "linking", "summarization")
        for split in ("train", "eval", "test")
    )
    assert files == expected
    for name in files:
        records = schemas.read_jsonl(pipeline["data_dir"] / name, schemas.DATASET)
        split = name.split(".")[1]
        assert all(r["split"] == split for r in records)


def test_retrieve_scores_every_test_instance(pipeline):
    test_records = schemas.read_jsonl(
        pipeline["data_dir"] / "summarization.test.jsonl", schemas.DATASET
    )
    preds = schemas.read_jsonl(pipeline["retrieved"], schemas.PREDICTIONS)
    assert {p["comment_id"] for p in preds} == {r["comment_id"] for r in test_records}
    for p in preds:
        assert 0.0 <= p["score"] <= 1.0
        assert p["predicted_summary"]
        assert p["source_comment_id"]


def test_summarization_report_metrics_bounded(pipeline):
    rows = schemas.read_jsonl(pipeline["report_sum"], schemas.REPORT)
    agg = next(r for r in rows if r["kind"] == "aggregate")
    for key in ("mean_bleu4", "mean_rouge_f", "mean_meteor", "corpus_bleu4"):
        assert 0.0 <= agg[key] <= 1.0
    figure = pipeline["report_sum"].with_suffix(".png")
    assert figure.read_bytes()[:8] == PNG_MAGIC


# -- self-consistency: gold fed back as predictions -----------------------


def test_linking_gold_self_eval_scores_one(pipeline, gold_records, gold_path, tmp_path):
    pred_path = tmp_path / "gold_as_links.jsonl"
    schemas.write_jsonl(
        pred_path,
        schemas.LINKS,
        [
            {"method_id": r["method_id"], "comment_id": r["comment_id"],
             "lines": sorted(r["lines"])}
            for r in gold_records
        ],
    )
    report = tmp_path / "self_report.jsonl"
    assert main(["eval", "--task", "linking", "--pred", str(pred_path),
                 "--gold", str(gold_path), "--out", str(report)]) == 0
    agg = next(
        r for r in schemas.read_jsonl(report, schemas.REPORT)
        if r["kind"] == "aggregate"
    )
    assert agg["correct_rate"] == 1.0
    assert agg["micro_precision"] == 1.0
    assert agg["micro_recall"] == 1.0
    assert agg["mean_precision"] == 1.0
    assert agg["mean_recall"] == 1.0


def test_summarization_gold_self_eval_scores_one(pipeline, tmp_path):
    gold_file = pipeline["data_dir"] / "summarization.test.jsonl"
    test_records = schemas.read_jsonl(gold_file, schemas.DATASET)
    pred_path = tmp_path / "gold_as_preds.jsonl"
    schemas.write_jsonl(
        pred_path,
        schemas.PREDICTIONS,
        [
            {"comment_id": r["comment_id"], "predicted_summary": r["target_text"],
             "score": 1.0}
            for r in test_records
        ],
    )
    report = tmp_path / "self_report.jsonl"
    assert main(["eval", "--task", "summarization", "--pred", str(pred_path),
                 "--gold", str(gold_file), "--out", str(report)]) == 0
    agg = next(
        r for r in schemas.read_jsonl(report, schemas.REPORT)
        if r["kind"] == "aggregate"
    )
    assert agg["mean_bleu4"] == pytest.approx(1.0)
    assert agg["mean_rouge_f"] == pytest.approx(1.0)
    assert agg["corpus_bleu4"] == pytest.approx(1.0)
    assert agg["mean_meteor"] > 0.95


def test_self_retrieval_scores_one_end_to_end(pipeline, tmp_path):
    train = pipeline["data_dir"] / "summarization.train.jsonl"
    out = tmp_path / "self_retrieved.jsonl"
    assert main(["retrieve", "--train", str(train), "--test", str(train),
                 "--out", str(out)]) == 0
    preds = schemas.read_jsonl(out, schemas.PREDICTIONS)
    assert preds and all(p["score"] == 1.0 for p in preds)
    report = tmp_path / "self_report.jsonl"
    assert main(["eval", "--task", "summarization", "--pred", str(out),
                 "--gold", str(train), "--out", str(report)]) == 0
    agg = next(
        r for r in schemas.read_jsonl(report, schemas.REPORT)
        if r["kind"] == "aggregate"
    )
    assert agg["mean_bleu4"] == pytest.approx(1.0)


# -- failure modes --------------------------------------------------------


def test_unknown_command_and_missing_args_exit_two(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit) as excinfo:
        main(["mine", "--root", "somewhere"])  # --out missing
    assert excinfo.value.code == 2
    capsys.readouterr()


def test_missing_corpus_root_is_fatal(tmp_path):
    code = main(["mine", "--root", str(tmp_path / "no-such-dir"),
                 "--out", str(tmp_path / "m.jsonl")])
    assert code == 1


def test_missing_gold_file_is_fatal(pipeline, tmp_path):
    code = main(["eval", "--task", "linking", "--pred", str(pipeline["links_blank"]),
                 "--gold", str(tmp_path / "no-gold.jsonl"),
                 "--out", str(tmp_path / "r.jsonl")])
    assert code == 1


def test_wrong_schema_header_exits_three(pipeline, gold_path, tmp_path):
    report = tmp_path / "r.jsonl"
    # a manifest is not a links file; the schema header catches it
    code = main(["eval", "--task", "linking", "--pred", str(pipeline["manifest"]),
                 "--gold", str(gold_path), "--out", str(report)])
    assert code == 3


def test_prediction_gold_id_mismatch_exits_three(pipeline, gold_records, gold_path, tmp_path):
    subset = tmp_path / "subset.jsonl"
    schemas.write_jsonl(
        subset,
        schemas.LINKS,
        [
            {"method_id": r["method_id"], "comment_id": r["comment_id"], "lines": r["lines"]}
            for r in gold_records[:-3]
        ],
    )
    code = main(["eval", "--task", "linking", "--pred", str(subset),
                 "--gold", str(gold_path), "--out", str(tmp_path / "r.jsonl")])
    assert code == 3


def test_forest_engine_requires_model_or_fit(pipeline, tmp_path):
    code = main(["link", "--manifest", str(pipeline["manifest"]),
                 "--engine", "forest", "--out", str(tmp_path / "l.jsonl")])
    assert code == 1
    code = main(["link", "--manifest", str(pipeline["manifest"]),
                 "--engine", "forest", "--fit", "whatever.jsonl",
                 "--out", str(tmp_path / "l.jsonl")])
    assert code == 1


# -- determinism ----------------------------------------------------------


def test_pipeline_reruns_byte_identical(pipeline, corpus_dir, gold_path, tmp_path):
    rerun = run_pipeline(corpus_dir, gold_path, tmp_path / "second")
    first_root = pipeline["manifest"].parent
    second_root = rerun["manifest"].parent
    first_files = sorted(
        p.relative_to(first_root) for p in first_root.rglob("*") if p.is_file()
    )
    second_files = sorted(
        p.relative_to(second_root) for p in second_root.rglob("*") if p.is_file()
    )
    assert first_files == second_files
    for rel in first_files:
        assert (first_root / rel).read_bytes() == (second_root / rel).read_bytes(), (
            f"{rel} differs between identically seeded runs"
        )
