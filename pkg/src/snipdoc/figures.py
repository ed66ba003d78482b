"""Figure rendering for evaluation and comparison reports.

Every report-producing subcommand drops a PNG next to its delimited
output. Rendering uses the non-interactive backend and pinned metadata so
identical inputs produce identical image bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_SAVE_KWARGS = {"dpi": 100, "metadata": {"Software": "snipdoc"}}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    return path


def render_link_eval(aggregates: dict[str, float], path: str | Path) -> Path:
    """Bar chart of the linking aggregates (correct rate, P, R)."""
    keys = [
        "correct_rate",
        "micro_precision",
        "micro_recall",
        "mean_precision",
        "mean_recall",
    ]
    values = [aggregates.get(k, 0.0) for k in keys]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(keys)), values, color="#4878a8")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels([k.replace("_", "\n") for k in keys], fontsize=8)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.set_title("Linking evaluation")
    fig.tight_layout()
    return _save(fig, path)


def render_summary_eval(bleu4_scores: list[float], path: str | Path) -> Path:
    """Histogram of per-instance BLEU-4 scores."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.hist(bleu4_scores, bins=20, range=(0, 1), color="#4878a8", edgecolor="white")
    ax.set_xlabel("sentence BLEU-4")
    ax.set_ylabel("instances")
    ax.set_title("Summarization evaluation")
    fig.tight_layout()
    return _save(fig, path)


def render_comparison(rows: list[dict], path: str | Path) -> Path:
    """Adjusted p-values and effect sizes for a two-system comparison."""
    names = [r["metric"] for r in rows]
    pvals = [r.get("p_adjusted") if r.get("p_adjusted") is not None else 1.0 for r in rows]
    effects = [r.get("effect") if r.get("effect") is not None else 0.0 for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.bar(range(len(names)), pvals, color="#a85448")
    ax1.axhline(0.05, color="black", linestyle="--", linewidth=1)
    ax1.set_xticks(range(len(names)))
    ax1.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax1.set_ylabel("adjusted p")
    ax1.set_title("Significance")
    ax2.bar(range(len(names)), effects, color="#48a878")
    ax2.set_xticks(range(len(names)))
    ax2.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax2.set_ylabel("effect size")
    ax2.set_title("Effect")
    fig.tight_layout()
    return _save(fig, path)
