"""Box-plot figure rendering for the evaluate report path.

Figures are drawn from the already-computed BoxPlotSummary values via
``Axes.bxp``, never recomputed from raw data, so the picture can't
disagree with the emitted tables. The Agg backend keeps rendering
headless and byte-deterministic for a fixed matplotlib install.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .evaluation import METRIC_LABELS, BoxPlotSummary

__all__ = ["render_metric_boxplots"]


def _bxp_stats(summary: BoxPlotSummary) -> list[dict]:
    return [
        {
            "label": label,
            "med": series.median,
            "q1": series.q1,
            "q3": series.q3,
            "whislo": series.whisker_low,
            "whishi": series.whisker_high,
            "fliers": list(series.outliers),
        }
        for label, series in summary.series.items()
    ]


def render_metric_boxplots(summaries: dict, path: str, title: str = "") -> str:
    """Draw one subplot per metric into a single PNG.

    ``summaries`` maps metric keys (sloc, halstead_effort,
    maintainability_index, cc) to multi-series BoxPlotSummary values.
    Returns the path it wrote.
    """
    if not summaries:
        raise ValueError("no box-plot summaries to render")
    count = len(summaries)
    columns = 2 if count > 1 else 1
    rows = (count + columns - 1) // columns
    fig, axes = plt.subplots(rows, columns, figsize=(6 * columns, 4.5 * rows),
                             squeeze=False)
    flat = [ax for row in axes for ax in row]
    for ax, (metric, summary) in zip(flat, summaries.items()):
        ax.bxp(_bxp_stats(summary), showfliers=True)
        ax.set_title(METRIC_LABELS.get(metric, metric))
        ax.grid(axis="y", linewidth=0.4, alpha=0.6)
    for ax in flat[count:]:
        ax.set_visible(False)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, format="png", dpi=110)
    plt.close(fig)
    return path
