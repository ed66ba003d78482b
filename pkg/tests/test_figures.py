"""Figure rendering: files appear and bytes are stable for fixed input."""

from snipdoc.figures import render_comparison, render_link_eval, render_summary_eval

LINK_AGGREGATE = {
    "correct_rate": 0.58,
    "micro_precision": 0.86,
    "micro_recall": 0.89,
    "mean_precision": 0.81,
    "mean_recall": 0.84,
}

COMPARISON_ROWS = [
    {"metric": "correct", "test": "mcnemar", "p_adjusted": 0.001, "effect": 4.1},
    {"metric": "precision", "test": "wilcoxon", "p_adjusted": 0.04, "effect": 0.3},
    {"metric": "recall", "test": "wilcoxon", "p_adjusted": 0.9, "effect": -0.05},
]


def test_link_eval_figure_written(tmp_path):
    out = tmp_path / "link.png"
    render_link_eval(LINK_AGGREGATE, out)
    assert out.exists()
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_summary_eval_figure_written(tmp_path):
    out = tmp_path / "summary.png"
    render_summary_eval([0.1, 0.4, 0.4, 0.8, 1.0], out)
    assert out.exists()
    assert out.stat().st_size > 1000


def test_comparison_figure_written(tmp_path):
    out = tmp_path / "cmp.png"
    render_comparison(COMPARISON_ROWS, out)
    assert out.exists()


def test_figure_bytes_deterministic(tmp_path):
    first = tmp_path / "a.png"
    second = tmp_path / "b.png"
    render_link_eval(LINK_AGGREGATE, first)
    render_link_eval(LINK_AGGREGATE, second)
    assert first.read_bytes() == second.read_bytes()
