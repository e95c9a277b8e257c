"""Box-plot figure rendering from precomputed summaries."""

from __future__ import annotations

import pytest

from maintkit.evaluation import distributions
from maintkit.figures import render_metric_boxplots


def summaries():
    return {
        "sloc": distributions({"Dataset": [5, 6, 7, 8], "FT Model": [3, 4, 5]}),
        "maintainability_index": distributions(
            {"Dataset": [60.0, 70.0, 80.0], "FT Model": [75.0, 85.0, 95.0]}),
    }


def test_renders_png(tmp_path):
    path = tmp_path / "plots.png"
    returned = render_metric_boxplots(summaries(), str(path), title="Metrics")
    assert returned == str(path)
    data = path.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000


def test_render_is_byte_deterministic(tmp_path):
    first = tmp_path / "a.png"
    second = tmp_path / "b.png"
    render_metric_boxplots(summaries(), str(first))
    render_metric_boxplots(summaries(), str(second))
    assert first.read_bytes() == second.read_bytes()


def test_render_rejects_empty_input(tmp_path):
    with pytest.raises(ValueError):
        render_metric_boxplots({}, str(tmp_path / "x.png"))
