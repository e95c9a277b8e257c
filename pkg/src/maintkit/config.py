"""Tool configuration: one YAML file, flags override, secrets stay out.

The completion credential is never stored in the file; the config only
names the environment variable that holds it (``credential_env``), and
the client reads that variable at request time.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import yaml

from .dataset import SCHEMA_MAPS, SchemaMap, SplitSpec
from .errors import ConfigError, DatasetError
from .refactor_client import CompletionConfig, GatePolicy

__all__ = ["ToolConfig", "load_config"]

_FORMATS = ("markdown", "csv", "json")


@dataclass(frozen=True, slots=True)
class ToolConfig:
    schema_maps: dict = field(default_factory=dict)
    split: SplitSpec = field(default_factory=SplitSpec)
    completion: CompletionConfig | None = None
    gate: GatePolicy = field(default_factory=GatePolicy)
    report_format: str = "markdown"
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    max_load_failures: int | None = None

    def schema_map(self, schema: str) -> SchemaMap:
        try:
            return self.schema_maps[schema]
        except KeyError:
            raise ConfigError(f"unknown schema {schema!r}; known: "
                              f"{sorted(self.schema_maps)}") from None


def _as_mapping(value, where: str) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a mapping, got {type(value).__name__}")
    return value


def _schema_maps(raw: dict) -> dict:
    maps = dict(SCHEMA_MAPS)
    for name, body in _as_mapping(raw, "schema_maps").items():
        body = _as_mapping(body, f"schema_maps.{name}")
        try:
            instruction = body["instruction"]
            code_key = body["code"]
        except KeyError as exc:
            raise ConfigError(f"schema_maps.{name} needs 'instruction' and "
                              f"'code' keys") from exc
        if isinstance(instruction, str):
            instruction = [instruction]
        maps[name] = SchemaMap(instruction_keys=tuple(instruction),
                               code_key=code_key,
                               refactored_key=body.get("refactored"),
                               id_key=body.get("id"))
    return maps


def _split_spec(raw: dict) -> SplitSpec:
    body = _as_mapping(raw, "split")
    ratios = body.get("ratios", (0.8, 0.1, 0.1))
    sizes = body.get("sizes")
    try:
        return SplitSpec(ratios=tuple(float(r) for r in ratios),
                         seed=int(body.get("seed", 0)),
                         sizes=None if sizes is None else tuple(int(s) for s in sizes))
    except (TypeError, ValueError, DatasetError) as exc:
        raise ConfigError(f"bad split section: {exc}") from exc


def _completion(raw: dict) -> CompletionConfig | None:
    body = _as_mapping(raw, "completion")
    if not body:
        return None
    if "endpoint" not in body or "model" not in body:
        raise ConfigError("completion section needs 'endpoint' and 'model'")
    try:
        return CompletionConfig(
            endpoint=str(body["endpoint"]),
            model=str(body["model"]),
            temperature=float(body.get("temperature", 0.0)),
            max_tokens=int(body.get("max_tokens", 1024)),
            timeout=float(body.get("timeout", 30.0)),
            max_retries=int(body.get("max_retries", 3)),
            max_concurrency=int(body.get("max_concurrency", 4)),
            credential_env=body.get("credential_env", "COMPLETION_API_KEY"),
            backoff_base=float(body.get("backoff_base", 0.5)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad completion section: {exc}") from exc


def _gate(raw: dict) -> GatePolicy:
    body = _as_mapping(raw, "gate")
    try:
        return GatePolicy(
            require_mi=bool(body.get("require_mi", True)),
            require_effort=bool(body.get("require_effort", True)),
            require_sloc=bool(body.get("require_sloc", True)),
            sloc_tolerance=float(body.get("sloc_tolerance", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad gate section: {exc}") from exc


def load_config(path: str | None = None) -> ToolConfig:
    """Read the YAML config; a missing path means library defaults."""
    if path is None:
        raw: dict = {}
    else:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as handle:
                raw = yaml.safe_load(handle) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        raw = _as_mapping(raw, path)

    report = _as_mapping(raw.get("report"), "report")
    fmt = report.get("format", "markdown")
    if fmt not in _FORMATS:
        raise ConfigError(f"report.format must be one of {_FORMATS}, got {fmt!r}")

    jobs = raw.get("jobs", os.cpu_count() or 1)
    if not isinstance(jobs, int) or jobs < 1:
        raise ConfigError(f"jobs must be a positive integer, got {jobs!r}")

    dataset = _as_mapping(raw.get("dataset"), "dataset")
    max_failures = dataset.get("max_failures")
    if max_failures is not None and (not isinstance(max_failures, int) or max_failures < 0):
        raise ConfigError(f"dataset.max_failures must be a non-negative integer")

    return ToolConfig(
        schema_maps=_schema_maps(raw.get("schema_maps")),
        split=_split_spec(raw.get("split")),
        completion=_completion(raw.get("completion")),
        gate=_gate(raw.get("gate")),
        report_format=fmt,
        jobs=jobs,
        max_load_failures=max_failures,
    )
