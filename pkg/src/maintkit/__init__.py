"""Maintainability metrics, dataset augmentation, and refactoring evaluation.

The package splits into six areas:

* ``source_analysis`` — tokens, blocks, raw line counts, Halstead counts.
* ``metrics`` — SLOC/CC/HE/MI reports and percent-change deltas.
* ``dataset`` — JSONL instruction records, metric augmentation, the
  refactoring prompt, and seeded splits.
* ``refactor_client`` — completion-endpoint client, code extraction,
  and the metric improvement gate.
* ``evaluation`` — aggregate statistics, comparison tables, box-plot
  summaries, token similarity, and report rendering.
* ``cli`` — the ``maintkit`` command.
"""

from .errors import (
    AuthError,
    CompletionError,
    CompletionTimeout,
    ConfigError,
    DatasetError,
    EmptyCandidate,
    EmptyCorpus,
    LexError,
    MaintkitError,
    MalformedResponse,
    MissingMetrics,
    ParseError,
    RateLimited,
    ServerError,
    Unanalyzable,
    UnsupportedFormat,
)
from .metrics import (
    HalsteadReport,
    MaintainabilityReport,
    MetricsDelta,
    delta,
    halstead,
    cyclomatic,
    maintainability_index,
    percent_change,
    snippet_report,
)
from .source_analysis import (
    BlockTree,
    OperatorOperandCounts,
    RawCounts,
    SourceUnit,
    Token,
    classify_halstead,
    count_raw,
    parse_blocks,
    tokenize,
)

__version__ = "0.1.0"
