"""End-to-end checks of the ``maintkit`` command line.

Everything runs through click's CliRunner; the refactor command talks
to the scripted stub server from conftest. Exit-code contract: 0 clean,
1 data errors, 2 usage/config errors.
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from conftest import FIXTURES

from maintkit import dataset as ds
from maintkit.cli import main
from maintkit.evaluation import METRIC_KEYS

CODEALPACA = FIXTURES / "datasets" / "codealpaca_10.jsonl"


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def write_bubble(tmp_path: Path, bubble: str) -> Path:
    path = tmp_path / "bubble.py"
    path.write_text(bubble, encoding="utf-8")
    return path


# ---------------------------------------------------------------- metrics

def test_metrics_json_anchors(runner, tmp_path, bubble_original):
    src = write_bubble(tmp_path, bubble_original)
    res = runner.invoke(main, ["metrics", str(src)])
    assert res.exit_code == 0
    obj = json.loads(res.stdout)
    assert obj["origin"] == str(src)
    assert obj["sloc"] == 6
    assert obj["cc"] == 4.0
    assert obj["halstead_effort"] == 209.28
    assert obj["maintainability_index"] == 69.58
    assert obj["degenerate"] is False
    assert "metrics: inputs=1 analyzed=1 failed=0 format=json" in res.stderr


def test_metrics_stdin(runner):
    res = runner.invoke(main, ["metrics"], input="x = 1\n")
    assert res.exit_code == 0
    obj = json.loads(res.stdout)
    assert obj["origin"] == "<stdin>"
    assert obj["sloc"] == 1


def test_metrics_empty_stdin_is_degenerate_not_an_error(runner):
    res = runner.invoke(main, ["metrics"], input="")
    assert res.exit_code == 0
    obj = json.loads(res.stdout)
    assert obj["degenerate"] is True
    assert obj["sloc"] == 0


def test_metrics_directory_partial_failure(runner, tmp_path):
    (tmp_path / "a.py").write_text("x = 1\n", encoding="utf-8")
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "b.py").write_text("def f():\n    return 2\n",
                                           encoding="utf-8")
    (tmp_path / "c.py").write_text("def broken(:\n", encoding="utf-8")
    res = runner.invoke(main, ["metrics", str(tmp_path)])
    assert res.exit_code == 1
    reports = [json.loads(line) for line in res.stdout.splitlines()]
    assert len(reports) == 2
    assert [r["origin"] for r in reports] == [str(tmp_path / "a.py"),
                                              str(tmp_path / "sub" / "b.py")]
    assert "error: " in res.stderr and "c.py" in res.stderr
    assert "analyzed=2 failed=1" in res.stderr


def test_metrics_parallel_matches_sequential(runner, tmp_path):
    for i in range(3):
        (tmp_path / f"m{i}.py").write_text(f"def f{i}(x):\n    return x + {i}\n",
                                           encoding="utf-8")
    one = runner.invoke(main, ["metrics", str(tmp_path), "--jobs", "1"])
    four = runner.invoke(main, ["metrics", str(tmp_path), "--jobs", "4"])
    assert one.exit_code == four.exit_code == 0
    assert one.stdout == four.stdout


def test_metrics_missing_path_is_usage_error(runner):
    res = runner.invoke(main, ["metrics", "/no/such/file.py"])
    assert res.exit_code == 2
    assert "no such input" in res.stderr


def test_metrics_bad_config_is_usage_error(runner, tmp_path, bubble_original):
    src = write_bubble(tmp_path, bubble_original)
    res = runner.invoke(main, ["metrics", str(src),
                               "--config", "/no/such/config.yaml"])
    assert res.exit_code == 2


def test_metrics_dry_run_writes_nothing(runner, tmp_path, bubble_original):
    src = write_bubble(tmp_path, bubble_original)
    res = runner.invoke(main, ["metrics", str(src), "--dry-run"])
    assert res.exit_code == 0
    assert res.stdout == ""
    assert "dry-run" in res.stderr


def test_metrics_csv_format(runner, tmp_path, bubble_original):
    src = write_bubble(tmp_path, bubble_original)
    res = runner.invoke(main, ["metrics", str(src), "--format", "csv"])
    lines = res.stdout.splitlines()
    assert lines[0] == ("origin,sloc,cc,halstead_effort,maintainability_index,"
                        "comment_ratio,degenerate")
    assert lines[1] == f"{src},6,4.00,209.28,69.58,0.00,false"


def test_metrics_markdown_format(runner, tmp_path, bubble_original):
    src = write_bubble(tmp_path, bubble_original)
    res = runner.invoke(main, ["metrics", str(src), "--format", "markdown"])
    lines = res.stdout.splitlines()
    assert lines[0] == "| Origin | SLOC | CC Score | Effort | MI Score |"
    assert lines[2] == f"| {src} | 6 | 4.00 | 209.28 | 69.58 |"


# ---------------------------------------------------------------- augment

def test_augment_keeps_good_lines_reports_bad(runner, tmp_path):
    out = tmp_path / "aug.jsonl"
    res = runner.invoke(main, ["augment", "--input", str(CODEALPACA),
                               "--schema", "codealpaca", "--output", str(out)])
    assert res.exit_code == 1  # two malformed source lines
    items = ds.load_augmented(str(out))
    assert len(items) == 8
    assert all(item.rendered_prompt for item in items if item.analyzable)
    assert ":5:" in res.stderr and ":10:" in res.stderr
    assert "load_errors=2" in res.stderr


def test_augment_unknown_schema_is_usage_error(runner, tmp_path):
    res = runner.invoke(main, ["augment", "--input", str(CODEALPACA),
                               "--schema", "nope",
                               "--output", str(tmp_path / "x.jsonl")])
    assert res.exit_code == 2


def test_augment_dry_run_writes_nothing(runner, tmp_path):
    out = tmp_path / "aug.jsonl"
    res = runner.invoke(main, ["augment", "--input", str(CODEALPACA),
                               "--schema", "codealpaca", "--output", str(out),
                               "--dry-run"])
    assert res.exit_code == 0
    assert not out.exists()


# ---------------------------------------------------------------- split

def make_records(n: int) -> list[ds.DatasetRecord]:
    return [ds.DatasetRecord(id=f"r{i:05d}", schema="records",
                             instruction="inline", original_code=f"x = {i}\n")
            for i in range(n)]


def test_split_ratio_sizes_and_determinism(runner, tmp_path):
    source = tmp_path / "records.jsonl"
    ds.write_records(make_records(2000), str(source))
    outs = []
    for name in ("one", "two"):
        out_dir = tmp_path / name
        res = runner.invoke(main, ["split", "--input", str(source),
                                   "--output-dir", str(out_dir),
                                   "--ratios", "0.8,0.1,0.1", "--seed", "7"])
        assert res.exit_code == 0
        assert "split: 1600/200/200 seed=7" in res.stderr
        outs.append(out_dir)
    for name, expected in (("train", 1600), ("validation", 200), ("test", 200)):
        first = (outs[0] / f"{name}.jsonl").read_bytes()
        second = (outs[1] / f"{name}.jsonl").read_bytes()
        assert first == second  # same seed, same membership, same bytes
        assert first.count(b"\n") == expected


def test_split_size_override(runner, tmp_path):
    source = tmp_path / "records.jsonl"
    ds.write_records(make_records(2000), str(source))
    res = runner.invoke(main, ["split", "--input", str(source),
                               "--output-dir", str(tmp_path / "out"),
                               "--sizes", "1900,50,50", "--seed", "1"])
    assert res.exit_code == 0
    assert "split: 1900/50/50" in res.stderr


def test_split_bad_ratios_is_usage_error(runner, tmp_path):
    source = tmp_path / "records.jsonl"
    ds.write_records(make_records(10), str(source))
    res = runner.invoke(main, ["split", "--input", str(source),
                               "--output-dir", str(tmp_path / "out"),
                               "--ratios", "0.5,0.2,0.2"])
    assert res.exit_code == 2
    assert "bad split options" in res.stderr


def test_split_size_sum_mismatch_is_data_error(runner, tmp_path):
    source = tmp_path / "records.jsonl"
    ds.write_records(make_records(10), str(source))
    res = runner.invoke(main, ["split", "--input", str(source),
                               "--output-dir", str(tmp_path / "out"),
                               "--sizes", "9,9,9"])
    assert res.exit_code == 1


# ---------------------------------------------------------------- prompt

def augmented_file(tmp_path: Path, records: list[ds.DatasetRecord],
                   name: str = "aug.jsonl") -> Path:
    path = tmp_path / name
    ds.write_augmented(ds.augment(records), str(path))
    return path


def test_prompt_inference_and_training(runner, tmp_path):
    rec = ds.DatasetRecord(id="p1", schema="records", instruction="inline",
                           original_code="x = 1\n", refactored_code="y = 2\n")
    path = augmented_file(tmp_path, [rec])
    res = runner.invoke(main, ["prompt", "--input", str(path)])
    assert res.exit_code == 0
    obj = json.loads(res.stdout)
    assert obj["id"] == "p1"
    assert "- Source Lines of Code (SLOC): 1" in obj["prompt"]
    assert "### Response:" not in obj["prompt"]

    res = runner.invoke(main, ["prompt", "--input", str(path),
                               "--mode", "training"])
    obj = json.loads(res.stdout)
    assert obj["prompt"].endswith("### Response:\ny = 2\n\n")


def test_prompt_skips_unanalyzable_and_writes_file(runner, tmp_path):
    records = [
        ds.DatasetRecord(id="ok", schema="records", instruction="",
                         original_code="x = 1\n"),
        ds.DatasetRecord(id="broken", schema="records", instruction="",
                         original_code="def broken(:\n"),
    ]
    path = augmented_file(tmp_path, records)
    out = tmp_path / "prompts.jsonl"
    res = runner.invoke(main, ["prompt", "--input", str(path),
                               "--output", str(out)])
    assert res.exit_code == 0
    assert res.stdout == ""
    assert "skip: " in res.stderr
    assert "rendered=1 skipped=1" in res.stderr
    lines = out.read_text(encoding="utf-8").splitlines()
    assert [json.loads(l)["id"] for l in lines] == ["ok"]


# ---------------------------------------------------------------- refactor

KEY = "test-key-123"
ENV = {"COMPLETION_API_KEY": KEY}

GOOD_ORIGINAL = ("# task-01\n"
                 "def add(a, b):\n"
                 "    result = a + b\n"
                 "    return result\n")
GOOD_COMPLETION = ("```python\n"
                   "# Return the sum directly\n"
                   "def add(a, b):\n"
                   "    return a + b\n"
                   "```\n")
# every line is a metric report, so nothing survives extraction
EMPTY_COMPLETION = "SLOC: 2\nMI Score: 99.00\n"


def stub_config(tmp_path: Path, endpoint: str, model: str) -> Path:
    path = tmp_path / "cfg.yaml"
    path.write_text(
        "completion:\n"
        f"  endpoint: {endpoint}\n"
        f"  model: {model}\n"
        "  timeout: 5.0\n"
        "  max_retries: 0\n",
        encoding="utf-8",
    )
    return path


def refactor_input(tmp_path: Path) -> Path:
    records = [
        ds.DatasetRecord(id="t1", schema="records", instruction="",
                         original_code=GOOD_ORIGINAL),
        ds.DatasetRecord(id="t2", schema="records", instruction="",
                         original_code="def broken(:\n"),
        ds.DatasetRecord(id="t3", schema="records", instruction="",
                         original_code="# task-03\ny = [1]\ny.append(2)\n"),
    ]
    return augmented_file(tmp_path, records)


def test_refactor_end_to_end(runner, tmp_path, stub_server):
    stub = stub_server(script={"stub-base": {"task-01": GOOD_COMPLETION,
                                             "task-03": EMPTY_COMPLETION}})
    cfg = stub_config(tmp_path, stub.endpoint, "stub-base")
    source = refactor_input(tmp_path)
    out = tmp_path / "refactored.jsonl"
    res = runner.invoke(main, ["refactor", "--input", str(source),
                               "--output", str(out), "--config", str(cfg)],
                        env=ENV)
    assert res.exit_code == 0
    assert ("refactor: in=3 attempted=2 accepted=1 rejected=0 failed=1 "
            "model=stub-base") in res.stderr

    items = {item.record.id: item for item in ds.load_augmented(str(out))}
    assert len(items) == 3
    good = items["t1"]
    assert good.record.refactored_code == ("# Return the sum directly\n"
                                           "def add(a, b):\n    return a + b")
    assert good.record.extra["refactor_status"] == "ok"
    assert good.record.extra["gate"]["accepted"] is True
    assert good.refactored_metrics is not None
    assert good.refactored_metrics.sloc < good.original_metrics.sloc
    assert items["t2"].record.extra["refactor_status"] == "skipped: unanalyzable input"
    assert items["t3"].record.extra["refactor_status"].startswith("candidate_error:")

    # the credential reached the wire from the environment, not the config
    assert all(req["auth"] == f"Bearer {KEY}" for req in stub.requests)
    assert all(req["body"]["model"] == "stub-base" for req in stub.requests)


def test_refactor_records_completion_failures(runner, tmp_path, stub_server):
    stub = stub_server(script={"stub-base": {"task-01": 418}})
    cfg = stub_config(tmp_path, stub.endpoint, "stub-base")
    records = [ds.DatasetRecord(id="t1", schema="records", instruction="",
                                original_code=GOOD_ORIGINAL)]
    source = augmented_file(tmp_path, records)
    out = tmp_path / "refactored.jsonl"
    res = runner.invoke(main, ["refactor", "--input", str(source),
                               "--output", str(out), "--config", str(cfg)],
                        env=ENV)
    assert res.exit_code == 0  # failure is recorded on the record, not fatal
    items = ds.load_augmented(str(out))
    assert items[0].record.extra["refactor_status"].startswith("completion_error:")
    assert items[0].record.refactored_code is None
    assert "failed=1" in res.stderr


def test_refactor_requires_completion_config(runner, tmp_path):
    source = refactor_input(tmp_path)
    res = runner.invoke(main, ["refactor", "--input", str(source),
                               "--output", str(tmp_path / "o.jsonl")], env=ENV)
    assert res.exit_code == 2
    assert "completion section" in res.stderr


def test_refactor_dry_run_sends_nothing(runner, tmp_path, stub_server):
    stub = stub_server()
    cfg = stub_config(tmp_path, stub.endpoint, "stub-base")
    source = refactor_input(tmp_path)
    out = tmp_path / "refactored.jsonl"
    res = runner.invoke(main, ["refactor", "--input", str(source),
                               "--output", str(out), "--config", str(cfg),
                               "--dry-run"], env=ENV)
    assert res.exit_code == 0
    assert not out.exists()
    assert stub.requests == []


# ---------------------------------------------------------------- evaluate

ORIGINALS = [
    "def f0(a):\n    total = 0\n    for v in a:\n        total += v\n    return total\n",
    "def f1(a):\n    out = []\n    for v in a:\n        if v:\n            out.append(v)\n    return out\n",
    "def f2(x):\n    if x > 2:\n        return x * 2\n    return x\n",
    "def f3(s):\n    text = s.strip()\n    text = text.lower()\n    return text\n",
    "def f4(n):\n    out = []\n    for i in range(n):\n        out.append(i * i)\n    return out\n",
]
REFACTORED = [
    "def f0(a):\n    return sum(a)\n",
    "def f1(a):\n    return [v for v in a if v]\n",
    "def f2(x):\n    return x * 2 if x > 2 else x\n",
    "def f3(s):\n    return s.strip().lower()\n",
    "def f4(n):\n    return [i * i for i in range(n)]\n",
]


def eval_inputs(tmp_path: Path) -> tuple[Path, Path, Path]:
    base = [ds.DatasetRecord(id=f"s{i}", schema="records", instruction="",
                             original_code=code)
            for i, code in enumerate(ORIGINALS)]
    broken = ds.DatasetRecord(id="s-broken", schema="records", instruction="",
                              original_code="def broken(:\n")
    dataset = augmented_file(tmp_path, base + [broken], "dataset.jsonl")
    refactored = [ds.DatasetRecord(id=f"s{i}", schema="records", instruction="",
                                   original_code=code, refactored_code=new)
                  for i, (code, new) in enumerate(zip(ORIGINALS, REFACTORED))]
    baseline = augmented_file(tmp_path, refactored, "baseline.jsonl")
    candidate = augmented_file(tmp_path, refactored, "candidate.jsonl")
    return dataset, baseline, candidate


def test_evaluate_writes_table_boxplots_and_figure(runner, tmp_path):
    dataset, baseline, candidate = eval_inputs(tmp_path)
    out_dir = tmp_path / "report"
    res = runner.invoke(main, ["evaluate", "--dataset", str(dataset),
                               "--baseline", str(baseline),
                               "--candidate", str(candidate),
                               "--output-dir", str(out_dir)])
    assert res.exit_code == 0
    assert "included=5/5/5 excluded=1/0/0" in res.stderr

    table = (out_dir / "comparison.md").read_text(encoding="utf-8")
    assert table.splitlines()[0] == ("| Metrics | Dataset | Base Model | "
                                     "FT Model | % (Base Model vs. FT Model) |")
    assert "| SLOC |" in table

    box = json.loads((out_dir / "boxplots.json").read_text(encoding="utf-8"))
    assert set(box) == set(METRIC_KEYS)
    for key in METRIC_KEYS:
        assert set(box[key]) == {"Dataset", "Base Model", "FT Model"}
        assert set(box[key]["Dataset"]) == {"q1", "median", "q3", "whisker_low",
                                            "whisker_high", "outliers"}

    png = (out_dir / "boxplots.png").read_bytes()
    assert png[:8] == b"\x89PNG\r\n\x1a\n"


def test_evaluate_no_figures_and_config_format(runner, tmp_path):
    dataset, baseline, candidate = eval_inputs(tmp_path)
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("report:\n  format: csv\n", encoding="utf-8")
    out_dir = tmp_path / "report"
    res = runner.invoke(main, ["evaluate", "--dataset", str(dataset),
                               "--baseline", str(baseline),
                               "--candidate", str(candidate),
                               "--output-dir", str(out_dir),
                               "--no-figures", "--config", str(cfg)])
    assert res.exit_code == 0
    assert "format=csv" in res.stderr
    csv = (out_dir / "comparison.csv").read_text(encoding="utf-8")
    assert csv.splitlines()[0] == "metric,group,count,mean,median,std,min,max"
    assert not (out_dir / "boxplots.png").exists()
    assert (out_dir / "boxplots.json").exists()


def test_evaluate_all_degenerate_is_data_error(runner, tmp_path):
    records = [ds.DatasetRecord(id="d1", schema="records", instruction="",
                                original_code="# only a comment\n")]
    path = augmented_file(tmp_path, records)
    res = runner.invoke(main, ["evaluate", "--dataset", str(path),
                               "--baseline", str(path),
                               "--candidate", str(path),
                               "--output-dir", str(tmp_path / "report")])
    assert res.exit_code == 1


def test_evaluate_missing_input_is_usage_error(runner, tmp_path):
    dataset, baseline, _ = eval_inputs(tmp_path)
    res = runner.invoke(main, ["evaluate", "--dataset", str(dataset),
                               "--baseline", str(baseline),
                               "--candidate", str(tmp_path / "missing.jsonl"),
                               "--output-dir", str(tmp_path / "report")])
    assert res.exit_code == 2


def test_evaluate_dry_run_creates_nothing(runner, tmp_path):
    dataset, baseline, candidate = eval_inputs(tmp_path)
    out_dir = tmp_path / "report"
    res = runner.invoke(main, ["evaluate", "--dataset", str(dataset),
                               "--baseline", str(baseline),
                               "--candidate", str(candidate),
                               "--output-dir", str(out_dir), "--dry-run"])
    assert res.exit_code == 0
    assert not out_dir.exists()
