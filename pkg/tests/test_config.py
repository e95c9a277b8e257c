"""Config file loading and validation."""

from __future__ import annotations

import pytest

from maintkit.config import load_config
from maintkit.errors import ConfigError


def write(tmp_path, text: str) -> str:
    path = tmp_path / "config.yaml"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_defaults_without_file():
    cfg = load_config(None)
    assert set(cfg.schema_maps) == {"commitpack", "codealpaca"}
    assert cfg.split.ratios == (0.8, 0.1, 0.1)
    assert cfg.completion is None
    assert cfg.gate.require_mi and cfg.gate.sloc_tolerance == 0.0
    assert cfg.report_format == "markdown"
    assert cfg.jobs >= 1
    assert cfg.max_load_failures is None


def test_missing_file_is_config_error():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/config.yaml")


def test_full_config_round_trip(tmp_path):
    path = write(tmp_path, """
schema_maps:
  myshape:
    instruction: [title, body]
    code: before
    refactored: after
    id: sha
split:
  ratios: [0.7, 0.2, 0.1]
  seed: 99
completion:
  endpoint: http://localhost:9999/v1/chat/completions
  model: local-model
  temperature: 0.2
  max_retries: 1
  credential_env: MY_TOKEN
gate:
  require_sloc: false
  sloc_tolerance: 2
report:
  format: csv
jobs: 2
dataset:
  max_failures: 5
""")
    cfg = load_config(path)
    shape = cfg.schema_map("myshape")
    assert shape.instruction_keys == ("title", "body")
    assert (shape.code_key, shape.refactored_key, shape.id_key) == (
        "before", "after", "sha")
    assert cfg.schema_map("commitpack").code_key == "old_contents"  # defaults kept
    assert cfg.split.seed == 99 and cfg.split.ratios == (0.7, 0.2, 0.1)
    assert cfg.completion.model == "local-model"
    assert cfg.completion.credential_env == "MY_TOKEN"
    assert not cfg.gate.require_sloc and cfg.gate.sloc_tolerance == 2.0
    assert cfg.report_format == "csv"
    assert (cfg.jobs, cfg.max_load_failures) == (2, 5)


def test_credential_is_env_var_name_not_secret(tmp_path):
    # the config stores the *name* of the variable, never a key value
    path = write(tmp_path, """
completion:
  endpoint: http://x/v1
  model: m
""")
    cfg = load_config(path)
    assert cfg.completion.credential_env == "COMPLETION_API_KEY"


def test_unknown_schema_is_config_error():
    with pytest.raises(ConfigError):
        load_config(None).schema_map("nope")


def test_invalid_sections_rejected(tmp_path):
    for text in (
        "completion:\n  endpoint: http://x\n",        # missing model
        "report:\n  format: pdf\n",                    # unknown format
        "jobs: 0\n",                                   # not positive
        "jobs: many\n",                                # not an int
        "dataset:\n  max_failures: -3\n",              # negative
        "split:\n  ratios: [0.5, 0.2, 0.2]\n",          # does not sum to 1
        "schema_maps:\n  broken:\n    code: x\n",      # missing instruction
        "split: [not, a, mapping]\n",
    ):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, text))


def test_bad_yaml_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "completion: [unclosed\n"))


def test_non_mapping_document_rejected(tmp_path):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "- just\n- a\n- list\n"))
