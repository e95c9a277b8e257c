"""Comparative evaluation over metric reports.

Conventions, documented because libraries disagree:

* standard deviation is the sample convention (n - 1 denominator),
  defined as 0.0 for a single value;
* quartiles use linear interpolation between order statistics (the
  "inclusive" method), whiskers sit on the most extreme data points
  within 1.5 IQR of the quartiles, outliers lie strictly beyond;
* aggregates exclude degenerate reports and say how many they dropped;
* markdown output rounds to two decimals, JSON keeps full precision,
  CSV rows are metric,group,count,mean,median,std,min,max.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Protocol

from .errors import EmptyCorpus, UnsupportedFormat
from .metrics import METRIC_KEYS, MaintainabilityReport, percent_change
from .source_analysis import SourceUnit, tokenize

__all__ = [
    "MetricStats",
    "AggregateStats",
    "ComparisonTable",
    "BoxSeries",
    "BoxPlotSummary",
    "SimilarityScores",
    "SimilarityBackend",
    "TokenMultisetBackend",
    "RemoteEmbeddingBackend",
    "corpus_stats",
    "compare",
    "distribution",
    "distributions",
    "token_similarity",
    "emit_report",
    "METRIC_LABELS",
]

# Display names used in emitted tables.
METRIC_LABELS = {
    "sloc": "SLOC",
    "halstead_effort": "Effort",
    "maintainability_index": "MI Score",
    "cc": "CC Score",
}
_TABLE_ORDER = ("sloc", "halstead_effort", "maintainability_index", "cc")


@dataclass(frozen=True, slots=True)
class MetricStats:
    count: int
    mean: float
    median: float
    std: float
    min: float
    max: float


@dataclass(frozen=True, slots=True)
class AggregateStats:
    group: str
    per_metric: dict  # metric key -> MetricStats
    excluded: int  # degenerate/unanalyzable reports left out


@dataclass(frozen=True, slots=True)
class ComparisonTable:
    dataset: AggregateStats
    baseline: AggregateStats
    candidate: AggregateStats
    percent: dict  # metric key -> percent_change(baseline mean, candidate mean) or None


@dataclass(frozen=True, slots=True)
class BoxSeries:
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


@dataclass(frozen=True, slots=True)
class BoxPlotSummary:
    series: dict  # series label -> BoxSeries


@dataclass(frozen=True, slots=True)
class SimilarityScores:
    precision: float
    recall: float
    f1: float
    f3: float


def _stats(values: list[float]) -> MetricStats:
    return MetricStats(
        count=len(values),
        mean=statistics.fmean(values),
        median=statistics.median(values),
        std=statistics.stdev(values) if len(values) > 1 else 0.0,
        min=min(values),
        max=max(values),
    )


def corpus_stats(reports: list[MaintainabilityReport],
                 group: str = "corpus") -> AggregateStats:
    """Aggregate the four metrics over the analyzable part of a corpus."""
    included = [r for r in reports if not r.degenerate]
    if not included:
        raise EmptyCorpus(f"{group}: no analyzable reports "
                          f"({len(reports)} degenerate or missing)")
    per_metric = {key: _stats([r.metric(key) for r in included])
                  for key in METRIC_KEYS}
    return AggregateStats(group=group, per_metric=per_metric,
                          excluded=len(reports) - len(included))


def compare(dataset_stats: AggregateStats, baseline_stats: AggregateStats,
            candidate_stats: AggregateStats) -> ComparisonTable:
    """Percent-change table: positive when the candidate reduced a metric."""
    for stats in (baseline_stats, candidate_stats):
        if stats.per_metric.keys() != dataset_stats.per_metric.keys():
            raise ValueError("comparison inputs cover different metric sets")
    percent: dict = {}
    for key in dataset_stats.per_metric:
        try:
            percent[key] = percent_change(baseline_stats.per_metric[key].mean,
                                          candidate_stats.per_metric[key].mean)
        except ZeroDivisionError:
            percent[key] = None
    return ComparisonTable(dataset=dataset_stats, baseline=baseline_stats,
                           candidate=candidate_stats, percent=percent)


def _quartiles(ordered: list[float]) -> tuple[float, float, float]:
    if len(ordered) == 1:
        return ordered[0], ordered[0], ordered[0]
    q1, med, q3 = statistics.quantiles(ordered, n=4, method="inclusive")
    return q1, med, q3


def distribution(values: list[float], label: str = "values") -> BoxPlotSummary:
    """Box-plot summary of one series (quartiles, whiskers, outliers)."""
    if not values:
        raise EmptyCorpus(f"{label}: no values to summarize")
    ordered = sorted(values)
    q1, med, q3 = _quartiles(ordered)
    reach = 1.5 * (q3 - q1)
    whisker_low = min(v for v in ordered if v >= q1 - reach)
    whisker_high = max(v for v in ordered if v <= q3 + reach)
    outliers = tuple(v for v in ordered if v < whisker_low or v > whisker_high)
    series = BoxSeries(q1=q1, median=med, q3=q3, whisker_low=whisker_low,
                       whisker_high=whisker_high, outliers=outliers)
    return BoxPlotSummary(series={label: series})


def distributions(named_values: dict) -> BoxPlotSummary:
    """Several series side by side, e.g. dataset vs. baseline vs. candidate."""
    merged: dict = {}
    for label, values in named_values.items():
        merged[label] = distribution(values, label=label).series[label]
    return BoxPlotSummary(series=merged)


_SIMILARITY_KINDS = frozenset(
    {"operator-candidate", "operand-candidate", "keyword", "string", "other"})


def _token_multiset(unit: SourceUnit) -> Counter:
    return Counter((tok.kind, tok.lexeme) for tok in tokenize(unit)
                   if tok.kind in _SIMILARITY_KINDS)


def _f_beta(precision: float, recall: float, beta: float) -> float:
    denominator = beta * beta * precision + recall
    if denominator == 0:
        return 0.0
    return (1 + beta * beta) * precision * recall / denominator


def token_similarity(reference: SourceUnit, candidate: SourceUnit) -> SimilarityScores:
    """Multiset precision/recall over non-comment tokens, plus F1 and F3.

    Comments and pure layout tokens are excluded so "# Changes made"
    annotations don't depress the scores. Two empty units count as
    identical; one-sided emptiness scores zero.
    """
    ref_tokens = _token_multiset(reference)
    cand_tokens = _token_multiset(candidate)
    ref_total = sum(ref_tokens.values())
    cand_total = sum(cand_tokens.values())
    if ref_total == 0 and cand_total == 0:
        return SimilarityScores(1.0, 1.0, 1.0, 1.0)
    if ref_total == 0 or cand_total == 0:
        return SimilarityScores(0.0, 0.0, 0.0, 0.0)
    overlap = sum((ref_tokens & cand_tokens).values())
    precision = overlap / cand_total
    recall = overlap / ref_total
    return SimilarityScores(precision=precision, recall=recall,
                            f1=_f_beta(precision, recall, 1.0),
                            f3=_f_beta(precision, recall, 3.0))


class SimilarityBackend(Protocol):
    """Anything that scores a (reference, candidate) pair."""

    def score(self, reference: SourceUnit, candidate: SourceUnit) -> SimilarityScores:
        ...


class TokenMultisetBackend:
    """The shipped baseline: exact token-multiset overlap."""

    def score(self, reference: SourceUnit, candidate: SourceUnit) -> SimilarityScores:
        return token_similarity(reference, candidate)


class RemoteEmbeddingBackend:
    """Neural similarity via a remote encoder; contract only.

    Soft token similarity needs a pretrained encoder, which this
    artifact deliberately does not bundle. The class pins down the
    constructor and contract so a deployment can drop one in.
    """

    def __init__(self, endpoint: str, model: str = "") -> None:
        self.endpoint = endpoint
        self.model = model

    def score(self, reference: SourceUnit, candidate: SourceUnit) -> SimilarityScores:
        raise NotImplementedError(
            "remote embedding scoring is not implemented; "
            "use TokenMultisetBackend")


def _fmt2(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def _markdown_aggregate(stats: AggregateStats) -> str:
    lines = [f"| Metric | Count | Mean | Median | Std | Min | Max |",
             "|---|---|---|---|---|---|---|"]
    for key in _TABLE_ORDER:
        m = stats.per_metric[key]
        lines.append(f"| {METRIC_LABELS[key]} | {m.count} | {_fmt2(m.mean)} | "
                     f"{_fmt2(m.median)} | {_fmt2(m.std)} | {_fmt2(m.min)} | "
                     f"{_fmt2(m.max)} |")
    lines.append("")
    lines.append(f"Excluded (degenerate or unanalyzable): {stats.excluded}")
    return "\n".join(lines) + "\n"


def _markdown_comparison(table: ComparisonTable) -> str:
    d, b, c = table.dataset, table.baseline, table.candidate
    lines = [f"| Metrics | {d.group} | {b.group} | {c.group} | "
             f"% ({b.group} vs. {c.group}) |",
             "|---|---|---|---|---|"]
    for key in _TABLE_ORDER:
        lines.append(f"| {METRIC_LABELS[key]} | {_fmt2(d.per_metric[key].mean)} | "
                     f"{_fmt2(b.per_metric[key].mean)} | "
                     f"{_fmt2(c.per_metric[key].mean)} | "
                     f"{_fmt2(table.percent[key])} |")
    lines.append("")
    lines.append(f"Included snippets: {d.group} {d.per_metric['sloc'].count}, "
                 f"{b.group} {b.per_metric['sloc'].count}, "
                 f"{c.group} {c.per_metric['sloc'].count}; excluded: "
                 f"{d.excluded}/{b.excluded}/{c.excluded}")
    return "\n".join(lines) + "\n"


def _markdown_boxplot(summary: BoxPlotSummary) -> str:
    lines = ["| Series | Q1 | Median | Q3 | Whisker Low | Whisker High | Outliers |",
             "|---|---|---|---|---|---|---|"]
    for label, s in summary.series.items():
        shown = ", ".join(f"{v:.2f}" for v in s.outliers)
        lines.append(f"| {label} | {_fmt2(s.q1)} | {_fmt2(s.median)} | {_fmt2(s.q3)} | "
                     f"{_fmt2(s.whisker_low)} | {_fmt2(s.whisker_high)} | [{shown}] |")
    return "\n".join(lines) + "\n"


def _csv_rows_for_stats(stats: AggregateStats) -> list[list]:
    return [[key, stats.group, m.count, m.mean, m.median, m.std, m.min, m.max]
            for key in _TABLE_ORDER
            for m in [stats.per_metric[key]]]


def _csv(rows: list[list], header: list[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


_STATS_HEADER = ["metric", "group", "count", "mean", "median", "std", "min", "max"]


def _aggregate_dict(stats: AggregateStats) -> dict:
    return {
        "group": stats.group,
        "excluded": stats.excluded,
        "metrics": {key: {"count": m.count, "mean": m.mean, "median": m.median,
                          "std": m.std, "min": m.min, "max": m.max}
                    for key in _TABLE_ORDER
                    for m in [stats.per_metric[key]]},
    }


def emit_report(payload, fmt: str) -> str:
    """Render stats, a comparison table, or a box-plot summary.

    ``fmt`` is one of markdown, csv, json. Identical payloads render to
    identical bytes.
    """
    if fmt not in ("markdown", "csv", "json"):
        raise UnsupportedFormat(f"unknown report format {fmt!r}")

    if isinstance(payload, AggregateStats):
        if fmt == "markdown":
            return _markdown_aggregate(payload)
        if fmt == "csv":
            return _csv(_csv_rows_for_stats(payload), _STATS_HEADER)
        return json.dumps(_aggregate_dict(payload), indent=2) + "\n"

    if isinstance(payload, ComparisonTable):
        if fmt == "markdown":
            return _markdown_comparison(payload)
        if fmt == "csv":
            rows = (_csv_rows_for_stats(payload.dataset)
                    + _csv_rows_for_stats(payload.baseline)
                    + _csv_rows_for_stats(payload.candidate))
            return _csv(rows, _STATS_HEADER)
        return json.dumps({
            "dataset": _aggregate_dict(payload.dataset),
            "baseline": _aggregate_dict(payload.baseline),
            "candidate": _aggregate_dict(payload.candidate),
            "percent_change": {key: payload.percent[key] for key in _TABLE_ORDER},
        }, indent=2) + "\n"

    if isinstance(payload, BoxPlotSummary):
        if fmt == "markdown":
            return _markdown_boxplot(payload)
        if fmt == "csv":
            rows = [[label, s.q1, s.median, s.q3, s.whisker_low, s.whisker_high,
                     ";".join(repr(v) for v in s.outliers)]
                    for label, s in payload.series.items()]
            return _csv(rows, ["series", "q1", "median", "q3", "whisker_low",
                               "whisker_high", "outliers"])
        return json.dumps({
            label: {"q1": s.q1, "median": s.median, "q3": s.q3,
                    "whisker_low": s.whisker_low, "whisker_high": s.whisker_high,
                    "outliers": list(s.outliers)}
            for label, s in payload.series.items()
        }, indent=2) + "\n"

    raise UnsupportedFormat(f"cannot render {type(payload).__name__}")
