"""Instruction-record ingestion, metric augmentation, prompting, splits.

Records travel as line-delimited JSON. Two source shapes are known out
of the box and both are remappable through configuration: commitpack
(commit message as the instruction, old/new file contents as the code
pair) and codealpaca (instruction plus input, output as the code).
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .errors import DatasetError, MaintkitError, MissingMetrics
from .metrics import MaintainabilityReport, snippet_report
from .source_analysis import SourceUnit

__all__ = [
    "DatasetRecord",
    "AugmentedRecord",
    "SchemaMap",
    "SplitSpec",
    "SplitResult",
    "LoadResult",
    "LoadFailure",
    "SCHEMA_MAPS",
    "load_records",
    "augment",
    "render_prompt",
    "split",
    "write_records",
    "write_augmented",
    "load_augmented",
]


@dataclass(frozen=True, slots=True)
class SchemaMap:
    """Names the JSON keys one source schema stores its fields under."""

    instruction_keys: tuple[str, ...]
    code_key: str
    refactored_key: str | None = None
    id_key: str | None = None


SCHEMA_MAPS: dict[str, SchemaMap] = {
    "commitpack": SchemaMap(instruction_keys=("message",), code_key="old_contents",
                            refactored_key="new_contents", id_key="commit"),
    "codealpaca": SchemaMap(instruction_keys=("instruction", "input"),
                            code_key="output"),
}


@dataclass(frozen=True, slots=True)
class DatasetRecord:
    id: str
    schema: str
    instruction: str
    original_code: str
    refactored_code: str | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class AugmentedRecord:
    """A record plus the metrics and prompt derived from it."""

    record: DatasetRecord
    original_metrics: MaintainabilityReport | None = None
    refactored_metrics: MaintainabilityReport | None = None
    rendered_prompt: str | None = None
    analysis_error: str | None = None

    @property
    def analyzable(self) -> bool:
        return self.original_metrics is not None


@dataclass(frozen=True, slots=True)
class LoadFailure:
    line: int
    message: str


@dataclass(frozen=True, slots=True)
class LoadResult:
    records: list[DatasetRecord]
    failures: list[LoadFailure]


@dataclass(frozen=True, slots=True)
class SplitSpec:
    """Ratios plus seed; ``sizes`` overrides the ratio arithmetic."""

    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0
    sizes: tuple[int, int, int] | None = None

    def __post_init__(self) -> None:
        if self.sizes is None:
            if any(r < 0 or r > 1 for r in self.ratios):
                raise DatasetError(f"split ratios must lie in [0,1]: {self.ratios}")
            if abs(sum(self.ratios) - 1.0) > 1e-9:
                raise DatasetError(f"split ratios must sum to 1: {self.ratios}")
        elif any(s < 0 for s in self.sizes):
            raise DatasetError(f"split sizes must be non-negative: {self.sizes}")


@dataclass(frozen=True, slots=True)
class SplitResult:
    train: list[DatasetRecord]
    validation: list[DatasetRecord]
    test: list[DatasetRecord]

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (len(self.train), len(self.validation), len(self.test))


def _record_from_obj(obj: dict, schema: str, schema_map: SchemaMap,
                     line_number: int) -> DatasetRecord:
    mapped = {schema_map.code_key, *schema_map.instruction_keys}
    if schema_map.refactored_key:
        mapped.add(schema_map.refactored_key)
    if schema_map.id_key:
        mapped.add(schema_map.id_key)

    if "original_code" in obj:  # our own writer's shape round-trips as-is
        return DatasetRecord(
            id=str(obj.get("id", f"{schema}-{line_number:06d}")),
            schema=obj.get("schema", schema),
            instruction=obj.get("instruction", ""),
            original_code=obj["original_code"],
            refactored_code=obj.get("refactored_code"),
            extra=obj.get("extra", {}),
        )

    if schema_map.code_key not in obj:
        raise KeyError(schema_map.code_key)
    instruction = "\n".join(str(obj[k]) for k in schema_map.instruction_keys
                            if obj.get(k))
    refactored = obj.get(schema_map.refactored_key) if schema_map.refactored_key else None
    if schema_map.id_key and obj.get(schema_map.id_key):
        record_id = f"{obj[schema_map.id_key]}-{line_number:06d}"
    else:
        record_id = f"{schema}-{line_number:06d}"
    extra = {k: v for k, v in obj.items() if k not in mapped}
    return DatasetRecord(id=record_id, schema=schema, instruction=instruction,
                         original_code=str(obj[schema_map.code_key]),
                         refactored_code=None if refactored is None else str(refactored),
                         extra=extra)


def load_records(path: str, schema: str, schema_map: SchemaMap | None = None,
                 max_failures: int | None = None) -> LoadResult:
    """Read line-delimited JSON records under a schema map.

    Malformed lines are collected (with line numbers) instead of
    aborting; when ``max_failures`` is set and exceeded, the whole load
    raises DatasetError. Blank lines are skipped silently.
    """
    if schema_map is None:
        try:
            schema_map = SCHEMA_MAPS[schema]
        except KeyError:
            raise DatasetError(f"unknown schema {schema!r}; "
                               f"known: {sorted(SCHEMA_MAPS)}") from None
    records: list[DatasetRecord] = []
    failures: list[LoadFailure] = []
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    with handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise TypeError(f"expected object, got {type(obj).__name__}")
                records.append(_record_from_obj(obj, schema, schema_map, number))
            except (json.JSONDecodeError, TypeError, KeyError) as exc:
                failures.append(LoadFailure(line=number, message=f"{type(exc).__name__}: {exc}"))
                if max_failures is not None and len(failures) > max_failures:
                    raise DatasetError(
                        f"{path}: {len(failures)} malformed lines exceeds "
                        f"limit {max_failures}") from exc
    return LoadResult(records=records, failures=failures)


def _augment_one(record: DatasetRecord) -> AugmentedRecord:
    try:
        original = snippet_report(SourceUnit(record.original_code, origin=record.id))
    except MaintkitError as exc:
        return AugmentedRecord(record=record, analysis_error=str(exc))
    refactored = None
    note = None
    if record.refactored_code is not None:
        try:
            refactored = snippet_report(
                SourceUnit(record.refactored_code, origin=f"{record.id}:refactored"))
        except MaintkitError as exc:
            note = f"refactored: {exc}"  # record stays analyzable; pair metrics absent
    out = AugmentedRecord(record=record, original_metrics=original,
                          refactored_metrics=refactored, analysis_error=note)
    return replace(out, rendered_prompt=render_prompt(out))


def augment(records: list[DatasetRecord], jobs: int = 1) -> list[AugmentedRecord]:
    """Attach metrics (and the inference prompt) to every record.

    Output order equals input order regardless of worker count;
    unanalyzable records come back flagged, never dropped.
    """
    if jobs <= 1 or len(records) < 2:
        return [_augment_one(record) for record in records]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_augment_one, records))


_PROMPT_BODY = (
    "You are a Python expert specialising in code optimisation.\n"
    "    Your main task is to refactor the given Python code to improve upon the listed metrics:\n"
    "    Source Lines of Code (SLOC), Effort, and Maintainability Index (MI), while retaining the original functionality\n"
    "### Input:\n"
    "{original_code}\n"
    "### Context:\n"
    "Objective\n"
    "- Improve Source Lines of Code (SLOC): Lower numbers are generally better without compromising readability or functionality.\n"
    "- Improve Maintainability Index (MI): Higher scores are desired.\n"
    "- Reduce Effort: Lower numbers are preferred.\n"
    "Original Metrics\n"
    "- Source Lines of Code (SLOC): {original_SLOC}\n"
    "- Maintainability Index (MI): {original_maintainability_index}\n"
    "- Effort: {original_effort}\n"
    "Provide only the refactored version of the code with comments on what changes are made on the code and do not provide the metrics.\n"
)

_PROMPT_RESPONSE = "### Response:\n{refactored_code}\n"


def render_prompt(augmented: AugmentedRecord, mode: str = "inference") -> str:
    """Instantiate the maintainability prompt for one record.

    The code is embedded verbatim; SLOC is printed as an integer, MI
    and effort with two decimals. ``mode="training"`` appends the
    response section with the refactored code; inference mode omits
    that section entirely.
    """
    if mode not in ("inference", "training"):
        raise ValueError(f"unknown prompt mode {mode!r}")
    metrics = augmented.original_metrics
    if metrics is None:
        raise MissingMetrics(
            f"record {augmented.record.id} is unanalyzable; no prompt metrics")
    prompt = _PROMPT_BODY.format(
        original_code=augmented.record.original_code,
        original_SLOC=metrics.sloc,
        original_maintainability_index=f"{metrics.mi:.2f}",
        original_effort=f"{metrics.halstead.effort:.2f}",
    )
    if mode == "training":
        refactored = augmented.record.refactored_code
        if refactored is None:
            raise MissingMetrics(
                f"record {augmented.record.id} has no refactored_code for training mode")
        prompt += _PROMPT_RESPONSE.format(refactored_code=refactored)
    return prompt


def _fisher_yates(indices: list[int], rng: random.Random) -> None:
    for i in range(len(indices) - 1, 0, -1):
        j = rng.randrange(i + 1)
        indices[i], indices[j] = indices[j], indices[i]


def split(records: list[DatasetRecord], spec: SplitSpec) -> SplitResult:
    """Deterministic seeded shuffle-split.

    Ratio mode sizes validation/test at floor(n * ratio) and gives the
    remainder to train; ``spec.sizes`` states all three sizes directly
    (they must sum to the record count). Same records + same seed means
    identical membership, on any platform.
    """
    n = len(records)
    if spec.sizes is not None:
        n_train, n_val, n_test = spec.sizes
        if n_train + n_val + n_test != n:
            raise DatasetError(
                f"size override {spec.sizes} does not sum to record count {n}")
    else:
        # epsilon keeps floor(n * ratio) honest when the product lands a
        # hair under an integer (e.g. 100 * 0.29)
        n_val = int(n * spec.ratios[1] + 1e-9)
        n_test = int(n * spec.ratios[2] + 1e-9)
        n_train = n - n_val - n_test
    indices = list(range(n))
    _fisher_yates(indices, random.Random(spec.seed))
    picked = [records[i] for i in indices]
    return SplitResult(train=picked[:n_train],
                       validation=picked[n_train:n_train + n_val],
                       test=picked[n_train + n_val:])


def _record_to_obj(record: DatasetRecord) -> dict:
    obj = {"id": record.id, "schema": record.schema,
           "instruction": record.instruction,
           "original_code": record.original_code}
    if record.refactored_code is not None:
        obj["refactored_code"] = record.refactored_code
    if record.extra:
        obj["extra"] = record.extra
    return obj


def write_records(records: list[DatasetRecord], path: str) -> None:
    """Write records as line-delimited JSON with a stable key order."""
    try:
        with open(path, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(_record_to_obj(record), ensure_ascii=False))
                handle.write("\n")
    except OSError as exc:
        raise DatasetError(f"cannot write {path}: {exc}") from exc


def write_augmented(augmented: list[AugmentedRecord], path: str) -> None:
    """Write augmented records; metric reports become nested objects."""
    try:
        with open(path, "w", encoding="utf-8") as handle:
            for item in augmented:
                obj = _record_to_obj(item.record)
                if item.original_metrics is not None:
                    obj["original_metrics"] = item.original_metrics.to_dict()
                if item.refactored_metrics is not None:
                    obj["refactored_metrics"] = item.refactored_metrics.to_dict()
                if item.rendered_prompt is not None:
                    obj["prompt"] = item.rendered_prompt
                if item.analysis_error is not None:
                    obj["analysis_error"] = item.analysis_error
                handle.write(json.dumps(obj, ensure_ascii=False))
                handle.write("\n")
    except OSError as exc:
        raise DatasetError(f"cannot write {path}: {exc}") from exc


def load_augmented(path: str) -> list[AugmentedRecord]:
    """Read back a file produced by write_augmented."""
    out: list[AugmentedRecord] = []
    result = load_records(path, schema="codealpaca",
                          schema_map=SchemaMap(instruction_keys=("instruction",),
                                               code_key="original_code"))
    if result.failures:
        first = result.failures[0]
        raise DatasetError(f"{path}: malformed augmented record at line "
                           f"{first.line}: {first.message}")
    with open(path, "r", encoding="utf-8") as handle:
        raw_lines = [json.loads(line) for line in handle if line.strip()]
    for record, obj in zip(result.records, raw_lines):
        original = obj.get("original_metrics")
        refactored = obj.get("refactored_metrics")
        out.append(AugmentedRecord(
            record=record,
            original_metrics=None if original is None else
            MaintainabilityReport.from_dict(original, origin=record.id),
            refactored_metrics=None if refactored is None else
            MaintainabilityReport.from_dict(refactored, origin=f"{record.id}:refactored"),
            rendered_prompt=obj.get("prompt"),
            analysis_error=obj.get("analysis_error"),
        ))
    return out
