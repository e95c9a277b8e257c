"""The four snippet metrics: SLOC, CC, Halstead effort, and MI.

Formula conventions, frozen by the golden and differential tests:

* ``V = N * log2(eta)``, ``D = (eta1 / 2) * (N2 / eta2)``, ``E = D * V``,
  all zero when ``eta == 0`` or ``eta2 == 0``.
* ``MI = clamp(100 * (171 - 5.2 ln V - 0.23 G - 16.2 ln L
  + 50 sin(sqrt(2.4 C'))) / 171, 0, 100)`` where L is sloc, G is the
  snippet complexity, and C' is the comment percentage expressed in
  radians (``radians(100 * C)``). ``V == 0`` or ``L == 0`` short-circuits
  to 100.
* Snippet complexity is the mean of per-block complexities over
  function/method/class blocks, falling back to the module block when a
  snippet defines none.
* ``percent_change(before, after) = (before - after) / after * 100``:
  positive numbers mean the candidate reduced the metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import Unanalyzable, MaintkitError
from .source_analysis import (
    BlockTree,
    OperatorOperandCounts,
    RawCounts,
    SourceUnit,
    classify_halstead,
    count_raw,
    parse_blocks,
)

__all__ = [
    "HalsteadReport",
    "BlockComplexity",
    "ComplexityReport",
    "MaintainabilityReport",
    "MetricsDelta",
    "halstead",
    "cyclomatic",
    "maintainability_index",
    "snippet_report",
    "percent_change",
    "delta",
    "METRIC_KEYS",
]

# Stable metric key names used in JSON reports and aggregate tables.
METRIC_KEYS = ("sloc", "cc", "halstead_effort", "maintainability_index")


@dataclass(frozen=True, slots=True)
class HalsteadReport:
    eta1: int
    eta2: int
    n1: int
    n2: int
    vocabulary: int
    length: int
    volume: float
    difficulty: float
    effort: float

    def to_dict(self) -> dict:
        return {
            "eta1": self.eta1, "eta2": self.eta2,
            "n1": self.n1, "n2": self.n2,
            "vocabulary": self.vocabulary, "length": self.length,
            "volume": self.volume, "difficulty": self.difficulty,
            "effort": self.effort,
        }


@dataclass(frozen=True, slots=True)
class BlockComplexity:
    name: str
    kind: str
    complexity: int


@dataclass(frozen=True, slots=True)
class ComplexityReport:
    per_block: tuple[BlockComplexity, ...]
    snippet_cc: float


@dataclass(frozen=True, slots=True)
class MaintainabilityReport:
    """All four metrics plus the counts they were derived from."""

    sloc: int
    cc: float
    halstead: HalsteadReport
    comment_ratio: float
    mi: float
    raw: RawCounts
    per_block: tuple[BlockComplexity, ...]
    degenerate: bool
    origin: str = "inline"

    def to_dict(self, precision: int | None = None) -> dict:
        """Serialize with stable field names.

        ``precision`` rounds the float fields for display-oriented
        output; None keeps full precision.
        """

        def fmt(value: float) -> float:
            return round(value, precision) if precision is not None else value

        return {
            "sloc": self.sloc,
            "cc": fmt(self.cc),
            "halstead_effort": fmt(self.halstead.effort),
            "maintainability_index": fmt(self.mi),
            "comment_ratio": fmt(self.comment_ratio),
            "degenerate": self.degenerate,
            "halstead": {k: fmt(v) if isinstance(v, float) else v
                         for k, v in self.halstead.to_dict().items()},
            "raw": {"loc": self.raw.loc, "sloc": self.raw.sloc,
                    "comment_lines": self.raw.comment_lines, "blank": self.raw.blank},
            "blocks": [{"name": b.name, "kind": b.kind, "complexity": b.complexity}
                       for b in self.per_block],
        }

    def metric(self, key: str) -> float:
        if key == "sloc":
            return float(self.sloc)
        if key == "cc":
            return self.cc
        if key == "halstead_effort":
            return self.halstead.effort
        if key == "maintainability_index":
            return self.mi
        raise KeyError(key)

    @classmethod
    def from_dict(cls, data: dict, origin: str = "inline") -> "MaintainabilityReport":
        hal = data.get("halstead", {})
        raw = data.get("raw", {})
        halstead_report = HalsteadReport(
            eta1=hal.get("eta1", 0), eta2=hal.get("eta2", 0),
            n1=hal.get("n1", 0), n2=hal.get("n2", 0),
            vocabulary=hal.get("vocabulary", 0), length=hal.get("length", 0),
            volume=hal.get("volume", 0.0), difficulty=hal.get("difficulty", 0.0),
            effort=hal.get("effort", data.get("halstead_effort", 0.0)),
        )
        blocks = tuple(BlockComplexity(b["name"], b["kind"], b["complexity"])
                       for b in data.get("blocks", ()))
        return cls(
            sloc=data["sloc"],
            cc=data["cc"],
            halstead=halstead_report,
            comment_ratio=data.get("comment_ratio", 0.0),
            mi=data["maintainability_index"],
            raw=RawCounts(loc=raw.get("loc", 0), sloc=raw.get("sloc", data["sloc"]),
                          comment_lines=raw.get("comment_lines", 0),
                          blank=raw.get("blank", 0)),
            per_block=blocks,
            degenerate=data.get("degenerate", False),
            origin=origin,
        )


@dataclass(frozen=True, slots=True)
class MetricsDelta:
    before: MaintainabilityReport
    after: MaintainabilityReport
    percent_change: dict  # metric key -> percent or None when undefined


def halstead(counts: OperatorOperandCounts) -> HalsteadReport:
    """Volume, difficulty and effort from operator/operand counts."""
    eta = counts.eta1 + counts.eta2
    length = counts.n1 + counts.n2
    if eta == 0 or counts.eta2 == 0:
        volume = difficulty = effort = 0.0
    else:
        volume = length * math.log2(eta)
        difficulty = (counts.eta1 / 2.0) * (counts.n2 / counts.eta2)
        effort = difficulty * volume
    return HalsteadReport(eta1=counts.eta1, eta2=counts.eta2,
                          n1=counts.n1, n2=counts.n2,
                          vocabulary=eta, length=length,
                          volume=volume, difficulty=difficulty, effort=effort)


def cyclomatic(tree: BlockTree) -> ComplexityReport:
    """Per-block complexities (1 + decision points) and their aggregate."""
    per_block = tuple(BlockComplexity(name=b.name, kind=b.kind,
                                      complexity=1 + b.decision_points)
                      for b in tree.blocks)
    definitions = [b for b in per_block if b.kind != "module"]
    if definitions:
        snippet_cc = sum(b.complexity for b in definitions) / len(definitions)
    else:
        snippet_cc = float(per_block[0].complexity)
    return ComplexityReport(per_block=per_block, snippet_cc=snippet_cc)


def maintainability_index(volume: float, complexity: float, sloc: int,
                          comment_ratio: float) -> float:
    """MI on the 0-100 scale; 100 for empty or volume-free snippets."""
    if volume <= 0 or sloc <= 0:
        return 100.0
    comment_radians = math.radians(100.0 * comment_ratio)
    raw = (171.0
           - 5.2 * math.log(volume)
           - 0.23 * complexity
           - 16.2 * math.log(sloc)
           + 50.0 * math.sin(math.sqrt(2.4 * comment_radians)))
    return min(100.0, max(0.0, raw * 100.0 / 171.0))


def snippet_report(unit: SourceUnit) -> MaintainabilityReport:
    """Full metric report for one source unit.

    Raises Unanalyzable when the unit does not parse; empty or
    code-free units produce the degenerate report (SLOC 0, CC 1, HE 0,
    MI 100) flagged ``degenerate`` so aggregates can exclude them.
    """
    raw = count_raw(unit)
    try:
        blocks = parse_blocks(unit)
        counts = classify_halstead(unit)
    except MaintkitError as exc:
        raise Unanalyzable(unit.origin, exc) from exc
    complexity = cyclomatic(blocks)
    hal = halstead(counts)
    mi = maintainability_index(hal.volume, complexity.snippet_cc, raw.sloc,
                               raw.comment_ratio)
    return MaintainabilityReport(
        sloc=raw.sloc,
        cc=complexity.snippet_cc,
        halstead=hal,
        comment_ratio=raw.comment_ratio,
        mi=mi,
        raw=raw,
        per_block=complexity.per_block,
        degenerate=raw.sloc == 0,
        origin=unit.origin,
    )


def percent_change(before: float, after: float) -> float:
    """Percent improvement of ``after`` relative to ``before``.

    Positive when the metric decreased (a SLOC or effort reduction is
    a gain under this convention; an MI increase prints negative).
    Raises ZeroDivisionError when ``after`` is 0; tables show those
    entries as "n/a".
    """
    if after == 0:
        raise ZeroDivisionError("percent_change undefined for after == 0")
    return (before - after) / after * 100.0


def delta(before: MaintainabilityReport, after: MaintainabilityReport) -> MetricsDelta:
    changes: dict = {}
    for key in METRIC_KEYS:
        try:
            changes[key] = percent_change(before.metric(key), after.metric(key))
        except ZeroDivisionError:
            changes[key] = None
    return MetricsDelta(before=before, after=after, percent_change=changes)
