"""Record loading, metric augmentation, prompt rendering, splits, I/O."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maintkit import (
    DatasetError,
    MissingMetrics,
    dataset,
)
from maintkit.dataset import (
    DatasetRecord,
    SplitSpec,
    augment,
    load_augmented,
    load_records,
    render_prompt,
    split,
    write_augmented,
    write_records,
)

from conftest import FIXTURES

ALPACA_FIXTURE = str(FIXTURES / "datasets" / "codealpaca_10.jsonl")
PIPELINE_FIXTURE = str(FIXTURES / "datasets" / "pipeline_20.jsonl")


def make_records(n: int) -> list[DatasetRecord]:
    return [DatasetRecord(id=f"r{i:04d}", schema="codealpaca", instruction="",
                          original_code=f"x = {i}\n") for i in range(n)]


# ----------------------------------------------------------- load_records


def test_load_single_codealpaca_line(tmp_path):
    path = tmp_path / "one.jsonl"
    path.write_text(json.dumps({
        "instruction": "Sort a list.",
        "input": "numbers = [3, 1]",
        "output": "numbers.sort()\n",
    }) + "\n", encoding="utf-8")
    result = load_records(str(path), "codealpaca")
    assert not result.failures
    (record,) = result.records
    assert record.schema == "codealpaca"
    assert record.instruction == "Sort a list.\nnumbers = [3, 1]"
    assert record.original_code == "numbers.sort()\n"
    assert record.refactored_code is None
    assert record.id == "codealpaca-000001"


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    result = load_records(str(path), "codealpaca")
    assert result.records == [] and result.failures == []


def test_load_collects_failures_with_line_numbers():
    result = load_records(ALPACA_FIXTURE, "codealpaca")
    assert len(result.records) == 8
    assert [f.line for f in result.failures] == [5, 10]


def test_load_failure_threshold():
    with pytest.raises(DatasetError):
        load_records(ALPACA_FIXTURE, "codealpaca", max_failures=1)
    result = load_records(ALPACA_FIXTURE, "codealpaca", max_failures=2)
    assert len(result.failures) == 2


def test_load_unknown_schema(tmp_path):
    path = tmp_path / "x.jsonl"
    path.write_text("{}\n", encoding="utf-8")
    with pytest.raises(DatasetError):
        load_records(str(path), "mystery")


def test_commitpack_mapping_and_extra_passthrough():
    result = load_records(PIPELINE_FIXTURE, "commitpack")
    assert len(result.records) == 20 and not result.failures
    first = result.records[0]
    assert first.id == "c01-000001"
    assert first.instruction.startswith("Refactor sum_evens")
    assert "def sum_evens" in first.original_code
    assert first.refactored_code is not None
    assert first.extra == {"repo": "fixtures/pipeline"}


def test_ids_unique_within_fixture():
    result = load_records(PIPELINE_FIXTURE, "commitpack")
    ids = [r.id for r in result.records]
    assert len(set(ids)) == len(ids)


# ---------------------------------------------------------------- augment


def test_augment_preserves_count_and_order():
    records = make_records(25)
    for jobs in (1, 4):
        augmented = augment(records, jobs=jobs)
        assert [a.record.id for a in augmented] == [r.id for r in records]


def test_augment_bubble_metrics(bubble_original):
    record = DatasetRecord(id="b", schema="codealpaca", instruction="",
                           original_code=bubble_original)
    (item,) = augment([record])
    assert item.analyzable
    assert item.original_metrics.sloc == 6
    assert item.original_metrics.mi == pytest.approx(69.58, abs=0.01)
    assert item.rendered_prompt is not None


def test_augment_flags_unanalyzable_without_dropping():
    records = [
        DatasetRecord(id="ok", schema="codealpaca", instruction="",
                      original_code="x = 1\n"),
        DatasetRecord(id="bad", schema="codealpaca", instruction="",
                      original_code="def broken(:\n"),
    ]
    augmented = augment(records)
    assert len(augmented) == 2
    assert augmented[0].analyzable
    assert not augmented[1].analyzable
    assert augmented[1].analysis_error
    assert augmented[1].rendered_prompt is None


def test_augment_empty_code_degenerate():
    record = DatasetRecord(id="e", schema="codealpaca", instruction="",
                           original_code="")
    (item,) = augment([record])
    assert item.analyzable and item.original_metrics.degenerate


def test_augment_refactored_side_failure_keeps_record_analyzable():
    record = DatasetRecord(id="p", schema="commitpack", instruction="",
                           original_code="x = 1\n",
                           refactored_code="def broken(:\n")
    (item,) = augment([record])
    assert item.analyzable
    assert item.refactored_metrics is None
    assert item.analysis_error.startswith("refactored:")


# ------------------------------------------------------------ render_prompt


EXPECTED_BUBBLE_PROMPT = (
    "You are a Python expert specialising in code optimisation.\n"
    "    Your main task is to refactor the given Python code to improve upon the listed metrics:\n"
    "    Source Lines of Code (SLOC), Effort, and Maintainability Index (MI), while retaining the original functionality\n"
    "### Input:\n"
    "{code}\n"
    "### Context:\n"
    "Objective\n"
    "- Improve Source Lines of Code (SLOC): Lower numbers are generally better without compromising readability or functionality.\n"
    "- Improve Maintainability Index (MI): Higher scores are desired.\n"
    "- Reduce Effort: Lower numbers are preferred.\n"
    "Original Metrics\n"
    "- Source Lines of Code (SLOC): 6\n"
    "- Maintainability Index (MI): 69.58\n"
    "- Effort: 209.28\n"
    "Provide only the refactored version of the code with comments on what"
    " changes are made on the code and do not provide the metrics.\n"
)


def test_prompt_golden_bytes(bubble_original):
    record = DatasetRecord(id="b", schema="codealpaca", instruction="",
                           original_code=bubble_original)
    (item,) = augment([record])
    assert item.rendered_prompt == EXPECTED_BUBBLE_PROMPT.format(code=bubble_original)


def test_prompt_formats_mi_with_two_decimals():
    record = DatasetRecord(id="p", schema="codealpaca", instruction="",
                           original_code="pass\n")
    (item,) = augment([record])
    assert "- Maintainability Index (MI): 100.00\n" in item.rendered_prompt
    assert "- Source Lines of Code (SLOC): 1\n" in item.rendered_prompt
    assert "- Effort: 0.00\n" in item.rendered_prompt


def test_prompt_training_mode_appends_response():
    record = DatasetRecord(id="t", schema="commitpack", instruction="",
                           original_code="x = 1\n", refactored_code="y = 2\n")
    (item,) = augment([record])
    inference = render_prompt(item, mode="inference")
    training = render_prompt(item, mode="training")
    assert "### Response:" not in inference
    assert training == inference + "### Response:\ny = 2\n\n"
    assert training.endswith("y = 2\n\n")


def test_prompt_training_requires_refactored_code():
    record = DatasetRecord(id="t", schema="codealpaca", instruction="",
                           original_code="x = 1\n")
    (item,) = augment([record])
    with pytest.raises(MissingMetrics):
        render_prompt(item, mode="training")


def test_prompt_unknown_mode_and_missing_metrics():
    record = DatasetRecord(id="u", schema="codealpaca", instruction="",
                           original_code="def broken(:\n")
    (item,) = augment([record])
    with pytest.raises(MissingMetrics):
        render_prompt(item)
    good = augment([DatasetRecord(id="g", schema="codealpaca", instruction="",
                                  original_code="x = 1\n")])[0]
    with pytest.raises(ValueError):
        render_prompt(good, mode="verbose")


def test_prompt_injective_on_code():
    records = [DatasetRecord(id=str(i), schema="codealpaca", instruction="",
                             original_code=f"x = {i}\n") for i in range(10)]
    prompts = [a.rendered_prompt for a in augment(records)]
    assert len(set(prompts)) == len(prompts)


# ------------------------------------------------------------------ split


def test_split_ratio_mode_2000():
    result = split(make_records(2000), SplitSpec(ratios=(0.8, 0.1, 0.1), seed=7))
    assert result.sizes == (1600, 200, 200)


def test_split_size_override_shapes():
    result = split(make_records(17_981),
                   SplitSpec(seed=1, sizes=(13_983, 1_998, 2_000)))
    assert result.sizes == (13_983, 1_998, 2_000)
    result = split(make_records(16_158),
                   SplitSpec(seed=1, sizes=(12_927, 1_617, 1_614)))
    assert result.sizes == (12_927, 1_617, 1_614)


def test_split_size_override_must_sum():
    with pytest.raises(DatasetError):
        split(make_records(10), SplitSpec(seed=0, sizes=(5, 3, 3)))


def test_split_bad_ratios_rejected():
    with pytest.raises(DatasetError):
        SplitSpec(ratios=(0.5, 0.2, 0.2))
    with pytest.raises(DatasetError):
        SplitSpec(ratios=(1.2, -0.1, -0.1))


def test_split_same_seed_same_membership():
    records = make_records(500)
    first = split(records, SplitSpec(seed=42))
    second = split(records, SplitSpec(seed=42))
    assert [r.id for r in first.train] == [r.id for r in second.train]
    assert [r.id for r in first.validation] == [r.id for r in second.validation]
    assert [r.id for r in first.test] == [r.id for r in second.test]


def test_split_different_seed_differs():
    records = make_records(500)
    assert ([r.id for r in split(records, SplitSpec(seed=1)).train]
            != [r.id for r in split(records, SplitSpec(seed=2)).train])


def test_split_remainder_goes_to_train():
    result = split(make_records(7), SplitSpec(ratios=(0.5, 0.25, 0.25), seed=0))
    assert result.sizes == (5, 1, 1)


@settings(max_examples=100)
@given(n=st.integers(0, 200), seed=st.integers(0, 2**32),
       cut=st.tuples(st.floats(0.0, 1.0), st.floats(0.0, 1.0)))
def test_split_partition_laws(n, seed, cut):
    lo, hi = sorted(cut)
    spec = SplitSpec(ratios=(lo, hi - lo, 1.0 - hi), seed=seed)
    records = make_records(n)
    result = split(records, spec)
    ids = [r.id for r in result.train + result.validation + result.test]
    assert len(ids) == n
    assert set(ids) == {r.id for r in records}
    assert not (set(r.id for r in result.train)
                & set(r.id for r in result.validation))
    assert not (set(r.id for r in result.validation)
                & set(r.id for r in result.test))
    assert not (set(r.id for r in result.train)
                & set(r.id for r in result.test))


# ------------------------------------------------------------------- I/O


def test_write_records_round_trip(tmp_path):
    records = [
        DatasetRecord(id="a", schema="commitpack", instruction="do it",
                      original_code="x = 1\n", refactored_code="x = 2\n",
                      extra={"repo": "r"}),
        DatasetRecord(id="b", schema="codealpaca", instruction="",
                      original_code="pass\n"),
    ]
    path = tmp_path / "out.jsonl"
    write_records(records, str(path))
    result = load_records(str(path), "codealpaca")
    assert not result.failures
    assert result.records == records


def test_write_records_empty(tmp_path):
    path = tmp_path / "none.jsonl"
    write_records([], str(path))
    assert path.read_text(encoding="utf-8") == ""


def test_write_records_hash_stable(tmp_path):
    records = make_records(100)
    first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_records(records, str(first))
    write_records(records, str(second))
    assert first.read_bytes() == second.read_bytes()


def test_augmented_round_trip(tmp_path, bubble_original):
    records = [
        DatasetRecord(id="b", schema="commitpack", instruction="refactor",
                      original_code=bubble_original, refactored_code="pass\n"),
        DatasetRecord(id="bad", schema="commitpack", instruction="",
                      original_code="def broken(:\n"),
    ]
    augmented = augment(records)
    path = tmp_path / "aug.jsonl"
    write_augmented(augmented, str(path))
    loaded = load_augmented(str(path))
    assert len(loaded) == 2
    assert loaded[0].record == records[0]
    assert loaded[0].original_metrics.mi == augmented[0].original_metrics.mi
    assert loaded[0].refactored_metrics.sloc == 1
    assert loaded[0].rendered_prompt == augmented[0].rendered_prompt
    assert not loaded[1].analyzable
    assert loaded[1].analysis_error == augmented[1].analysis_error


def test_load_augmented_rejects_malformed(tmp_path):
    path = tmp_path / "broken.jsonl"
    path.write_text('{"not quite\n', encoding="utf-8")
    with pytest.raises(DatasetError):
        load_augmented(str(path))


def test_schema_maps_cover_both_sources():
    assert set(dataset.SCHEMA_MAPS) == {"commitpack", "codealpaca"}
