"""The ``maintkit`` command.

Subcommands mirror the pipeline: metrics, augment, split, prompt,
refactor, evaluate. Exit codes follow the CI contract: 0 clean, 1 data
errors (malformed records, unanalyzable files), 2 usage or config
errors. Every run ends with one deterministic summary line on stderr.
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import dataset as ds
from .config import ToolConfig, load_config
from .errors import (
    ConfigError,
    DatasetError,
    EmptyCandidate,
    EmptyCorpus,
    MaintkitError,
    MissingMetrics,
)
from .evaluation import METRIC_KEYS, compare, corpus_stats, distributions, emit_report
from .metrics import MaintainabilityReport, snippet_report
from .refactor_client import CompletionClient, CompletionError, extract_code, gate
from .source_analysis import SourceUnit

_EXIT_DATA = 1


def _config(path: str | None) -> ToolConfig:
    try:
        return load_config(path)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc


def _summary(line: str) -> None:
    click.echo(line, err=True)


@click.group()
def main() -> None:
    """Maintainability metrics and refactoring evaluation for Python."""


# ---------------------------------------------------------------- metrics

def _gather_inputs(paths: tuple[str, ...]) -> list[tuple[str, str | None]]:
    """Resolve CLI paths to (origin, file path); None path means stdin."""
    if not paths:
        return [("<stdin>", None)]
    units: list[tuple[str, str | None]] = []
    for raw in paths:
        if raw == "-":
            units.append(("<stdin>", None))
            continue
        path = Path(raw)
        if path.is_dir():
            found = sorted(p for p in path.rglob("*.py"))
            units.extend((str(p), str(p)) for p in found)
        elif path.is_file():
            units.append((str(path), str(path)))
        else:
            raise click.UsageError(f"no such input: {raw}")
    return units


def _metrics_rows(reports: list[tuple[str, MaintainabilityReport]], fmt: str) -> str:
    if fmt == "json":
        lines = [json.dumps({"origin": origin, **report.to_dict(precision=2)},
                            ensure_ascii=False)
                 for origin, report in reports]
        return "\n".join(lines) + "\n" if lines else ""
    if fmt == "csv":
        lines = ["origin,sloc,cc,halstead_effort,maintainability_index,"
                 "comment_ratio,degenerate"]
        for origin, r in reports:
            lines.append(f"{origin},{r.sloc},{r.cc:.2f},{r.halstead.effort:.2f},"
                         f"{r.mi:.2f},{r.comment_ratio:.2f},{str(r.degenerate).lower()}")
        return "\n".join(lines) + "\n"
    lines = ["| Origin | SLOC | CC Score | Effort | MI Score |",
             "|---|---|---|---|---|"]
    for origin, r in reports:
        lines.append(f"| {origin} | {r.sloc} | {r.cc:.2f} | "
                     f"{r.halstead.effort:.2f} | {r.mi:.2f} |")
    return "\n".join(lines) + "\n"


@main.command("metrics")
@click.argument("paths", nargs=-1)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "markdown"]),
              default="json", show_default=True, help="Report format on stdout.")
@click.option("--jobs", type=int, default=None, help="Analysis workers.")
@click.option("--config", "config_path", default=None, help="Config file.")
@click.option("--dry-run", is_flag=True, help="Validate inputs, write nothing.")
def cmd_metrics(paths: tuple[str, ...], fmt: str, jobs: int | None,
                config_path: str | None, dry_run: bool) -> None:
    """Print one metric report per input file (or stdin)."""
    cfg = _config(config_path)
    inputs = _gather_inputs(paths)
    if dry_run:
        _summary(f"metrics: inputs={len(inputs)} dry-run")
        return

    def analyze(item: tuple[str, str | None]):
        origin, path = item
        try:
            if path is None:
                unit = SourceUnit(sys.stdin.read(), origin=origin)
            else:
                unit = SourceUnit.from_path(path)
            return origin, snippet_report(unit), None
        except (MaintkitError, OSError, UnicodeDecodeError) as exc:
            return origin, None, str(exc)

    workers = jobs if jobs is not None else cfg.jobs
    if workers > 1 and len(inputs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(analyze, inputs))
    else:
        outcomes = [analyze(item) for item in inputs]

    reports = [(origin, report) for origin, report, _ in outcomes if report]
    failures = [(origin, error) for origin, _, error in outcomes if error]
    click.echo(_metrics_rows(reports, fmt), nl=False)
    for origin, error in failures:
        click.echo(f"error: {origin}: {error}", err=True)
    _summary(f"metrics: inputs={len(inputs)} analyzed={len(reports)} "
             f"failed={len(failures)} format={fmt}")
    if failures:
        sys.exit(_EXIT_DATA)


# ---------------------------------------------------------------- augment

@main.command("augment")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Source JSONL.")
@click.option("--schema", default="commitpack", show_default=True,
              help="Source record shape (built in or from config).")
@click.option("--output", "output_path", required=True, help="Augmented JSONL.")
@click.option("--jobs", type=int, default=None, help="Analysis workers.")
@click.option("--config", "config_path", default=None, help="Config file.")
@click.option("--dry-run", is_flag=True, help="Validate inputs, write nothing.")
def cmd_augment(input_path: str, schema: str, output_path: str, jobs: int | None,
                config_path: str | None, dry_run: bool) -> None:
    """Attach maintainability metrics and the prompt to every record."""
    cfg = _config(config_path)
    try:
        schema_map = cfg.schema_map(schema)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    if dry_run:
        _summary(f"augment: input={input_path} schema={schema} dry-run")
        return
    try:
        loaded = ds.load_records(input_path, schema, schema_map,
                                 max_failures=cfg.max_load_failures)
    except DatasetError as exc:
        raise click.ClickException(str(exc)) from exc
    augmented = ds.augment(loaded.records, jobs=jobs if jobs is not None else cfg.jobs)
    ds.write_augmented(augmented, output_path)
    for failure in loaded.failures[:20]:
        click.echo(f"error: {input_path}:{failure.line}: {failure.message}", err=True)
    flagged = sum(1 for a in augmented if not a.analyzable)
    _summary(f"augment: in={len(loaded.records)} out={len(augmented)} "
             f"analyzable={len(augmented) - flagged} flagged={flagged} "
             f"load_errors={len(loaded.failures)}")
    if loaded.failures:
        sys.exit(_EXIT_DATA)


# ---------------------------------------------------------------- split

_ROUND_TRIP_MAP = ds.SchemaMap(instruction_keys=("instruction",),
                               code_key="original_code")


@main.command("split")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Records JSONL.")
@click.option("--schema", default=None,
              help="Source shape; omit for files this tool wrote.")
@click.option("--output-dir", "output_dir", required=True,
              help="Receives train/validation/test.jsonl.")
@click.option("--ratios", default=None, help="train,val,test e.g. 0.8,0.1,0.1.")
@click.option("--sizes", default=None, help="Exact train,val,test counts.")
@click.option("--seed", type=int, default=None, help="Shuffle seed.")
@click.option("--config", "config_path", default=None, help="Config file.")
@click.option("--dry-run", is_flag=True, help="Validate inputs, write nothing.")
def cmd_split(input_path: str, schema: str | None, output_dir: str,
              ratios: str | None, sizes: str | None, seed: int | None,
              config_path: str | None, dry_run: bool) -> None:
    """Seeded train/validation/test split of a record file."""
    cfg = _config(config_path)
    base = cfg.split
    try:
        spec = ds.SplitSpec(
            ratios=tuple(float(r) for r in ratios.split(",")) if ratios else base.ratios,
            seed=seed if seed is not None else base.seed,
            sizes=tuple(int(s) for s in sizes.split(",")) if sizes else base.sizes,
        )
    except (DatasetError, ValueError) as exc:
        raise click.UsageError(f"bad split options: {exc}") from exc
    if dry_run:
        _summary(f"split: input={input_path} seed={spec.seed} dry-run")
        return
    schema_map = cfg.schema_map(schema) if schema else _ROUND_TRIP_MAP
    try:
        loaded = ds.load_records(input_path, schema or "records", schema_map,
                                 max_failures=cfg.max_load_failures)
        result = ds.split(loaded.records, spec)
    except DatasetError as exc:
        raise click.ClickException(str(exc)) from exc
    os.makedirs(output_dir, exist_ok=True)
    for name, part in (("train", result.train), ("validation", result.validation),
                       ("test", result.test)):
        ds.write_records(part, os.path.join(output_dir, f"{name}.jsonl"))
    a, b, c = result.sizes
    _summary(f"split: {a}/{b}/{c} seed={spec.seed} in={len(loaded.records)} "
             f"load_errors={len(loaded.failures)} out={output_dir}")
    if loaded.failures:
        sys.exit(_EXIT_DATA)


# ---------------------------------------------------------------- prompt

@main.command("prompt")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Augmented JSONL.")
@click.option("--mode", type=click.Choice(["inference", "training"]),
              default="inference", show_default=True)
@click.option("--output", "output_path", default="-", show_default=True,
              help="Destination JSONL ('-' for stdout).")
@click.option("--config", "config_path", default=None, help="Config file.")
@click.option("--dry-run", is_flag=True, help="Validate inputs, write nothing.")
def cmd_prompt(input_path: str, mode: str, output_path: str,
               config_path: str | None, dry_run: bool) -> None:
    """Render the maintainability prompt for augmented records."""
    _config(config_path)
    if dry_run:
        _summary(f"prompt: input={input_path} mode={mode} dry-run")
        return
    try:
        augmented = ds.load_augmented(input_path)
    except DatasetError as exc:
        raise click.ClickException(str(exc)) from exc
    rendered: list[str] = []
    skipped = 0
    for item in augmented:
        try:
            prompt = ds.render_prompt(item, mode=mode)
        except MissingMetrics as exc:
            skipped += 1
            click.echo(f"skip: {exc}", err=True)
            continue
        rendered.append(json.dumps({"id": item.record.id, "prompt": prompt},
                                   ensure_ascii=False))
    body = "\n".join(rendered) + ("\n" if rendered else "")
    if output_path == "-":
        click.echo(body, nl=False)
    else:
        Path(output_path).write_text(body, encoding="utf-8")
    _summary(f"prompt: in={len(augmented)} rendered={len(rendered)} "
             f"skipped={skipped} mode={mode}")


# ---------------------------------------------------------------- refactor

def _gate_json(decision) -> dict:
    return {
        "accepted": decision.accepted,
        "reasons": [{"metric": r.metric, "before": r.before, "after": r.after,
                     "rule": r.rule} for r in decision.reasons],
    }


@main.command("refactor")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Augmented JSONL.")
@click.option("--output", "output_path", required=True, help="Destination JSONL.")
@click.option("--config", "config_path", default=None,
              help="Config file (completion section required).")
@click.option("--dry-run", is_flag=True, help="Validate inputs, write nothing.")
def cmd_refactor(input_path: str, output_path: str, config_path: str | None,
                 dry_run: bool) -> None:
    """Request refactorings from the completion endpoint and gate them."""
    cfg = _config(config_path)
    if cfg.completion is None:
        raise click.UsageError("refactor needs a completion section in the config")
    if dry_run:
        _summary(f"refactor: input={input_path} model={cfg.completion.model} dry-run")
        return
    try:
        augmented = ds.load_augmented(input_path)
    except DatasetError as exc:
        raise click.ClickException(str(exc)) from exc

    workable = [item for item in augmented if item.analyzable]
    prompts = [item.rendered_prompt or ds.render_prompt(item) for item in workable]
    client = CompletionClient(cfg.completion)
    completions = client.complete_many(prompts)

    accepted = rejected = failed = 0
    by_id: dict[str, ds.AugmentedRecord] = {}
    for item, outcome in zip(workable, completions):
        if isinstance(outcome, CompletionError):
            failed += 1
            by_id[item.record.id] = _annotate(item, status=f"completion_error: {outcome}")
            continue
        try:
            code = extract_code(outcome.text)
            refactored = snippet_report(SourceUnit(code, origin=f"{item.record.id}:refactored"))
        except (EmptyCandidate, MaintkitError) as exc:
            failed += 1
            by_id[item.record.id] = _annotate(item, status=f"candidate_error: {exc}")
            continue
        decision = gate(item.original_metrics, refactored, cfg.gate)
        accepted += decision.accepted
        rejected += not decision.accepted
        record = dataclasses.replace(
            item.record, refactored_code=code,
            extra={**item.record.extra, "refactor_status": "ok",
                   "gate": _gate_json(decision)})
        by_id[item.record.id] = dataclasses.replace(
            item, record=record, refactored_metrics=refactored)

    out: list[ds.AugmentedRecord] = []
    for item in augmented:
        if item.record.id in by_id:
            out.append(by_id[item.record.id])
        else:
            out.append(_annotate(item, status="skipped: unanalyzable input"))
    ds.write_augmented(out, output_path)
    _summary(f"refactor: in={len(augmented)} attempted={len(workable)} "
             f"accepted={accepted} rejected={rejected} failed={failed} "
             f"model={cfg.completion.model}")


def _annotate(item: ds.AugmentedRecord, status: str) -> ds.AugmentedRecord:
    record = dataclasses.replace(
        item.record, extra={**item.record.extra, "refactor_status": status})
    return dataclasses.replace(item, record=record)


# ---------------------------------------------------------------- evaluate

_EXTENSIONS = {"markdown": "md", "csv": "csv", "json": "json"}


def _load_reports(path: str) -> tuple[list[MaintainabilityReport], int]:
    """Pick the evaluation-side report for each record.

    Refactored metrics when a record has them, original metrics
    otherwise; records with neither count as missing.
    """
    augmented = ds.load_augmented(path)
    reports: list[MaintainabilityReport] = []
    missing = 0
    for item in augmented:
        report = item.refactored_metrics or item.original_metrics
        if report is None:
            missing += 1
        else:
            reports.append(report)
    return reports, missing


@main.command("evaluate")
@click.option("--dataset", "dataset_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Augmented JSONL with the original-code metrics.")
@click.option("--baseline", "baseline_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Augmented JSONL for the baseline model output.")
@click.option("--candidate", "candidate_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Augmented JSONL for the candidate model output.")
@click.option("--output-dir", "output_dir", required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "markdown"]),
              default=None, help="Comparison table format (default from config).")
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="Also render box-plot figures.")
@click.option("--config", "config_path", default=None, help="Config file.")
@click.option("--dry-run", is_flag=True, help="Validate inputs, write nothing.")
def cmd_evaluate(dataset_path: str, baseline_path: str, candidate_path: str,
                 output_dir: str, fmt: str | None, figures: bool,
                 config_path: str | None, dry_run: bool) -> None:
    """Compare dataset, baseline, and candidate metric distributions."""
    cfg = _config(config_path)
    fmt = fmt or cfg.report_format
    if dry_run:
        _summary(f"evaluate: format={fmt} figures={int(figures)} dry-run")
        return
    groups = (("Dataset", dataset_path), ("Base Model", baseline_path),
              ("FT Model", candidate_path))
    stats = []
    values: dict[str, dict[str, list[float]]] = {key: {} for key in METRIC_KEYS}
    try:
        for label, path in groups:
            reports, missing = _load_reports(path)
            included = [r for r in reports if not r.degenerate]
            aggregate = corpus_stats(reports, group=label)
            stats.append(dataclasses.replace(
                aggregate, excluded=aggregate.excluded + missing))
            for key in METRIC_KEYS:
                values[key][label] = [r.metric(key) for r in included]
        table = compare(*stats)
    except (DatasetError, EmptyCorpus) as exc:
        raise click.ClickException(str(exc)) from exc

    os.makedirs(output_dir, exist_ok=True)
    table_path = Path(output_dir) / f"comparison.{_EXTENSIONS[fmt]}"
    table_path.write_text(emit_report(table, fmt), encoding="utf-8")

    summaries = {key: distributions(values[key]) for key in METRIC_KEYS}
    box_payload = {
        key: {label: {"q1": s.q1, "median": s.median, "q3": s.q3,
                      "whisker_low": s.whisker_low, "whisker_high": s.whisker_high,
                      "outliers": list(s.outliers)}
              for label, s in summaries[key].series.items()}
        for key in METRIC_KEYS
    }
    (Path(output_dir) / "boxplots.json").write_text(
        json.dumps(box_payload, indent=2) + "\n", encoding="utf-8")
    if figures:
        from .figures import render_metric_boxplots  # import cost only when used
        render_metric_boxplots(summaries, str(Path(output_dir) / "boxplots.png"),
                               title="Metric distributions")

    counts = "/".join(str(s.per_metric["sloc"].count) for s in stats)
    excluded = "/".join(str(s.excluded) for s in stats)
    _summary(f"evaluate: included={counts} excluded={excluded} format={fmt} "
             f"figures={int(figures)} out={output_dir}")


if __name__ == "__main__":
    main()
