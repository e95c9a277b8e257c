"""One-shot generator for the pipeline integration fixtures.

Writes the 20-record source dataset, the scripted completion bodies the
stub server replays for the two stub models, and a small codealpaca
file with deliberate load failures. Every snippet is checked through
the installed package (parses, intended gate outcomes) before anything
is written, so the committed fixtures cannot drift from the code paths
they exercise.

Run from the repository root:

    python3 tools/make_pipeline_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from maintkit.metrics import snippet_report
from maintkit.refactor_client import GatePolicy, extract_code, gate
from maintkit.source_analysis import SourceUnit

ROOT = Path(__file__).resolve().parent.parent
DATASET_DIR = ROOT / "tests" / "fixtures" / "datasets"
WIRE_DIR = ROOT / "tests" / "fixtures" / "wire"


def fenced(code: str, lang: str = "python") -> str:
    return f"```{lang}\n{code}```\n"


# Each task: original code (with a task-NN marker the stub keys on), the
# human refactoring stored in the dataset, and the two scripted model
# completions. "expect" states the intended gate outcome per model so
# the generator can refuse to write fixtures that drift.
TASKS = [
    {
        "marker": "task-01",
        "name": "sum_evens",
        "original": """\
# task-01
def sum_evens(numbers):
    total = 0
    for value in numbers:
        if value % 2 == 0:
            total = total + value
    return total
""",
        "human": """\
# task-01
def sum_evens(numbers):
    return sum(v for v in numbers if v % 2 == 0)
""",
        "base": fenced("""\
# task-01
def sum_evens(numbers):
    total = 0
    for value in numbers:
        if value % 2 == 0:
            total += value
    return total
"""),
        "ft": fenced("""\
# task-01
# Replaced the manual accumulator with a generator expression
def sum_evens(numbers):
    return sum(v for v in numbers if v % 2 == 0)
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        "marker": "task-02",
        "name": "find_max",
        "original": """\
# task-02
def find_max(items):
    best = items[0]
    for item in items:
        if item > best:
            best = item
    return best
""",
        "human": """\
# task-02
def find_max(items):
    return max(items)
""",
        "base": fenced("""\
# task-02
def find_max(items):
    best = items[0]
    for item in items[1:]:
        if item > best:
            best = item
    return best
"""),
        "ft": fenced("""\
# task-02
# Delegate to the builtin
def find_max(items):
    return max(items)
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        # Base model pads the function out; the gate must reject it.
        "marker": "task-03",
        "name": "count_vowels",
        "original": """\
# task-03
def count_vowels(text):
    count = 0
    for ch in text:
        if ch in "aeiou":
            count += 1
    return count
""",
        "human": """\
# task-03
def count_vowels(text):
    return sum(1 for ch in text if ch in "aeiou")
""",
        "base": fenced("""\
# task-03
def count_vowels(text):
    count = 0
    vowels = "aeiou"
    for ch in text:
        lowered = ch.lower()
        if lowered in vowels:
            if lowered:
                count = count + 1
    return count
"""),
        "ft": fenced("""\
# task-03
# Collapsed the counting loop into one expression
def count_vowels(text):
    return sum(1 for ch in text if ch in "aeiou")
"""),
        "expect": {"base": "rejected", "ft": "accepted"},
    },
    {
        "marker": "task-04",
        "name": "reverse_words",
        "original": """\
# task-04
def reverse_words(sentence):
    words = sentence.split()
    result = []
    for word in words:
        result.insert(0, word)
    return " ".join(result)
""",
        "human": """\
# task-04
def reverse_words(sentence):
    return " ".join(reversed(sentence.split()))
""",
        "base": fenced("""\
# task-04
def reverse_words(sentence):
    words = sentence.split()
    words.reverse()
    return " ".join(words)
"""),
        "ft": fenced("""\
# task-04
# Reversed iterator avoids the in-place mutation
def reverse_words(sentence):
    return " ".join(reversed(sentence.split()))
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        "marker": "task-05",
        "name": "flatten",
        "original": """\
# task-05
def flatten(rows):
    flat = []
    for row in rows:
        for cell in row:
            flat.append(cell)
    return flat
""",
        "human": """\
# task-05
def flatten(rows):
    return [cell for row in rows for cell in row]
""",
        "base": fenced("""\
# task-05
def flatten(rows):
    flat = []
    for row in rows:
        flat.extend(row)
    return flat
"""),
        "ft": fenced("""\
# task-05
# Single comprehension instead of nested loops
def flatten(rows):
    return [cell for row in rows for cell in row]
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        "marker": "task-06",
        "name": "fibonacci",
        "original": """\
# task-06
def fibonacci(count):
    first = 0
    second = 1
    sequence = []
    for _ in range(count):
        sequence.append(first)
        swap = first
        first = second
        second = swap + second
    return sequence
""",
        "human": """\
# task-06
def fibonacci(count):
    sequence = []
    first, second = 0, 1
    for _ in range(count):
        sequence.append(first)
        first, second = second, first + second
    return sequence
""",
        "base": fenced("""\
# task-06
def fibonacci(count):
    first = 0
    second = 1
    sequence = []
    for _ in range(count):
        sequence.append(first)
        first, second = second, first + second
    return sequence
"""),
        "ft": fenced("""\
# task-06
# Tuple assignment removes the temporary variable
def fibonacci(count):
    sequence = []
    first, second = 0, 1
    for _ in range(count):
        sequence.append(first)
        first, second = second, first + second
    return sequence
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        # Base model introduces an else branch and scratch variables.
        "marker": "task-07",
        "name": "filter_positive",
        "original": """\
# task-07
def filter_positive(values):
    kept = []
    for value in values:
        if value > 0:
            kept.append(value)
    return kept
""",
        "human": """\
# task-07
def filter_positive(values):
    return [v for v in values if v > 0]
""",
        "base": fenced("""\
# task-07
def filter_positive(values):
    kept = []
    for value in values:
        if value > 0:
            current = value
            kept.append(current)
        else:
            continue
    return kept
"""),
        "ft": fenced("""\
# task-07
# Comprehension keeps only the positive values
def filter_positive(values):
    return [v for v in values if v > 0]
"""),
        "expect": {"base": "rejected", "ft": "accepted"},
    },
    {
        "marker": "task-08",
        "name": "dedupe",
        "original": """\
# task-08
def dedupe(items):
    seen = []
    for item in items:
        if item not in seen:
            seen.append(item)
    return seen
""",
        "human": """\
# task-08
def dedupe(items):
    return list(dict.fromkeys(items))
""",
        "base": fenced("""\
# task-08
def dedupe(items):
    seen = []
    for item in items:
        if item not in seen:
            seen.append(item)
    return seen
"""),
        "ft": fenced("""\
# task-08
# dict.fromkeys keeps first occurrences and preserves order
def dedupe(items):
    return list(dict.fromkeys(items))
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        "marker": "task-09",
        "name": "clamp",
        "original": """\
# task-09
def clamp(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value
""",
        "human": """\
# task-09
def clamp(value, low, high):
    return max(low, min(value, high))
""",
        "base": fenced("""\
# task-09
def clamp(value, low, high):
    if value < low:
        return low
    return min(value, high)
"""),
        "ft": fenced("""\
# task-09
# min/max pair replaces the branch ladder
def clamp(value, low, high):
    return max(low, min(value, high))
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        "marker": "task-10",
        "name": "word_count",
        "original": """\
# task-10
def word_count(text):
    counts = {}
    for word in text.split():
        if word in counts:
            counts[word] = counts[word] + 1
        else:
            counts[word] = 1
    return counts
""",
        "human": """\
# task-10
def word_count(text):
    counts = {}
    for word in text.split():
        counts[word] = counts.get(word, 0) + 1
    return counts
""",
        "base": fenced("""\
# task-10
def word_count(text):
    counts = {}
    for word in text.split():
        counts[word] = counts.get(word, 0) + 1
    return counts
"""),
        "ft": fenced("""\
# task-10
# counts.get collapses the membership branch
def word_count(text):
    counts = {}
    for word in text.split():
        counts[word] = counts.get(word, 0) + 1
    return counts
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        # FT model adds a guard line: better MI story but one more SLOC,
        # so the default policy rejects it.
        "marker": "task-11",
        "name": "mean_of",
        "original": """\
# task-11
def mean_of(values):
    total = 0
    for value in values:
        total += value
    return total / len(values)
""",
        "human": """\
# task-11
def mean_of(values):
    return sum(values) / len(values)
""",
        "base": fenced("""\
# task-11
def mean_of(values):
    return sum(values) / len(values)
"""),
        "ft": fenced("""\
# task-11
# Added an emptiness guard before dividing
def mean_of(values):
    if not values:
        return 0.0
    total = sum(values)
    count = len(values)
    total = total + 0
    return total / count
"""),
        "expect": {"base": "accepted", "ft": "rejected"},
    },
    {
        "marker": "task-12",
        "name": "is_palindrome",
        "original": """\
# task-12
def is_palindrome(text):
    length = len(text)
    for index in range(length // 2):
        if text[index] != text[length - index - 1]:
            return False
    return True
""",
        "human": """\
# task-12
def is_palindrome(text):
    return text == text[::-1]
""",
        "base": fenced("""\
# task-12
def is_palindrome(text):
    for index in range(len(text) // 2):
        if text[index] != text[len(text) - index - 1]:
            return False
    return True
"""),
        "ft": fenced("""\
# task-12
# Slice reversal makes the comparison one line
def is_palindrome(text):
    return text == text[::-1]
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        "marker": "task-13",
        "name": "grade",
        "original": """\
# task-13
def grade(score):
    if score >= 90:
        return "A"
    elif score >= 80:
        return "B"
    elif score >= 70:
        return "C"
    elif score >= 60:
        return "D"
    else:
        return "F"
""",
        "human": """\
# task-13
def grade(score):
    for floor, letter in ((90, "A"), (80, "B"), (70, "C"), (60, "D")):
        if score >= floor:
            return letter
    return "F"
""",
        "base": fenced("""\
# task-13
def grade(score):
    if score >= 90:
        return "A"
    if score >= 80:
        return "B"
    if score >= 70:
        return "C"
    if score >= 60:
        return "D"
    return "F"
"""),
        "ft": fenced("""\
# task-13
# Threshold table replaces the elif ladder
def grade(score):
    for floor, letter in ((90, "A"), (80, "B"), (70, "C"), (60, "D")):
        if score >= floor:
            return letter
    return "F"
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        "marker": "task-14",
        "name": "running_total",
        "original": """\
# task-14
def running_total(values):
    totals = []
    current = 0
    for value in values:
        current = current + value
        totals.append(current)
    return totals
""",
        "human": """\
# task-14
from itertools import accumulate


def running_total(values):
    return list(accumulate(values))
""",
        "base": fenced("""\
# task-14
def running_total(values):
    totals = []
    current = 0
    for value in values:
        current += value
        totals.append(current)
    return totals
"""),
        "ft": fenced("""\
# task-14
# itertools.accumulate already computes prefix sums
from itertools import accumulate


def running_total(values):
    return list(accumulate(values))
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        "marker": "task-15",
        "name": "strip_lines",
        "original": """\
# task-15
def strip_lines(text):
    cleaned = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped:
            cleaned.append(stripped)
    return cleaned
""",
        "human": """\
# task-15
def strip_lines(text):
    return [line.strip() for line in text.splitlines() if line.strip()]
""",
        "base": fenced("""\
# task-15
def strip_lines(text):
    cleaned = []
    for line in text.splitlines():
        if line.strip():
            cleaned.append(line.strip())
    return cleaned
"""),
        "ft": fenced("""\
# task-15
# Comprehension with the emptiness filter inline
def strip_lines(text):
    return [line.strip() for line in text.splitlines() if line.strip()]
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        # Base completion does not parse; the pipeline records a failure.
        "marker": "task-16",
        "name": "normalize_spaces",
        "original": """\
# task-16
def normalize_spaces(text):
    parts = text.split()
    result = ""
    for part in parts:
        if result:
            result = result + " " + part
        else:
            result = part
    return result
""",
        "human": """\
# task-16
def normalize_spaces(text):
    return " ".join(text.split())
""",
        "base": fenced("""\
# task-16
def normalize_spaces(text):
    return " ".join(text.split()
"""),
        "ft": fenced("""\
# task-16
# join over split normalizes all runs of whitespace
def normalize_spaces(text):
    return " ".join(text.split())
"""),
        "expect": {"base": "failed", "ft": "accepted"},
    },
    {
        # Base completion has nothing inside the fence.
        "marker": "task-17",
        "name": "join_csv",
        "original": """\
# task-17
def join_csv(fields):
    line = ""
    for field in fields:
        if line == "":
            line = str(field)
        else:
            line = line + "," + str(field)
    return line
""",
        "human": """\
# task-17
def join_csv(fields):
    return ",".join(str(field) for field in fields)
""",
        "base": "```python\n\nSLOC: 3\n```\n",
        "ft": fenced("""\
# task-17
# Generator feeds str conversions straight into join
def join_csv(fields):
    return ",".join(str(field) for field in fields)
"""),
        "expect": {"base": "failed", "ft": "accepted"},
    },
    {
        # Base completion arrives without a fence plus a metric footer.
        "marker": "task-18",
        "name": "parity_label",
        "original": """\
# task-18
def parity_label(number):
    if number % 2 == 0:
        label = "even"
    else:
        label = "odd"
    return label
""",
        "human": """\
# task-18
def parity_label(number):
    return "even" if number % 2 == 0 else "odd"
""",
        "base": """\
# task-18
def parity_label(number):
    return "even" if number % 2 == 0 else "odd"

SLOC: 3
MI Score: 90.00
""",
        "ft": fenced("""\
# task-18
# Conditional expression instead of the assignment branch
def parity_label(number):
    return "even" if number % 2 == 0 else "odd"
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        # Base wraps the fence in prose; FT leaves metric lines inside.
        "marker": "task-19",
        "name": "interleave",
        "original": """\
# task-19
def interleave(left, right):
    merged = []
    for index in range(len(left)):
        merged.append(left[index])
        merged.append(right[index])
    return merged
""",
        "human": """\
# task-19
def interleave(left, right):
    merged = []
    for a, b in zip(left, right):
        merged.extend((a, b))
    return merged
""",
        "base": (
            "Here is the refactored version:\n"
            + fenced("""\
# task-19
def interleave(left, right):
    merged = []
    for a, b in zip(left, right):
        merged.append(a)
        merged.append(b)
    return merged
""")
            + "The loop now pairs items with zip.\n"
        ),
        "ft": fenced("""\
# task-19
# zip pairs the inputs; extend flattens each pair
def interleave(left, right):
    merged = []
    for a, b in zip(left, right):
        merged.extend((a, b))
    return merged

SLOC: 6
Effort: 25.0
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
    {
        # Comment-only module: degenerate on every side of the pipeline.
        "marker": "task-20",
        "name": "placeholder",
        "original": """\
# task-20 placeholder module
# reserved for future configuration constants
""",
        "human": """\
# task-20 placeholder module
""",
        "base": fenced("""\
# task-20 placeholder module
# nothing to refactor here
"""),
        "ft": fenced("""\
# task-20 placeholder module
"""),
        "expect": {"base": "accepted", "ft": "accepted"},
    },
]


def outcome(original: str, completion: str) -> str:
    """Replay the pipeline's accept/reject/fail decision for one pair."""
    before = snippet_report(SourceUnit(original, origin="original"))
    try:
        code = extract_code(completion)
        after = snippet_report(SourceUnit(code, origin="candidate"))
    except Exception:
        return "failed"
    return "accepted" if gate(before, after, GatePolicy()).accepted else "rejected"


def check_tasks() -> None:
    problems = []
    for task in TASKS:
        for side in ("original", "human"):
            snippet_report(SourceUnit(task[side], origin=task["marker"]))
        for model in ("base", "ft"):
            got = outcome(task["original"], task[model])
            want = task["expect"][model]
            status = "ok" if got == want else "MISMATCH"
            print(f"{task['marker']} {model:4s} want={want:8s} got={got:8s} {status}")
            if got != want:
                problems.append((task["marker"], model, want, got))
    if problems:
        raise SystemExit(f"fixture intents not met: {problems}")


def write_pipeline_dataset() -> None:
    DATASET_DIR.mkdir(parents=True, exist_ok=True)
    lines = []
    for index, task in enumerate(TASKS, start=1):
        obj = {
            "commit": f"c{index:02d}",
            "message": f"Refactor {task['name']} to improve maintainability",
            "old_contents": task["original"],
            "new_contents": task["human"],
            "repo": "fixtures/pipeline",
        }
        lines.append(json.dumps(obj, sort_keys=True, ensure_ascii=False))
    path = DATASET_DIR / "pipeline_20.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(lines)} records)")


def write_stub_responses() -> None:
    WIRE_DIR.mkdir(parents=True, exist_ok=True)
    payload = {
        "stub-base": {task["marker"]: task["base"] for task in TASKS},
        "stub-ft": {task["marker"]: task["ft"] for task in TASKS},
    }
    path = WIRE_DIR / "stub_responses.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True,
                               ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def write_codealpaca_fixture() -> None:
    """Eight good records, one broken JSON line, one missing key."""
    DATASET_DIR.mkdir(parents=True, exist_ok=True)
    good = [
        {"instruction": f"Rewrite helper {n} for clarity.",
         "input": "",
         "output": f"def helper_{n}(x):\n    return x + {n}\n"}
        for n in range(1, 9)
    ]
    lines = [json.dumps(obj, sort_keys=True) for obj in good[:4]]
    lines.append('{"instruction": "broken line", "output": ')  # bad JSON
    lines.extend(json.dumps(obj, sort_keys=True) for obj in good[4:8])
    lines.append(json.dumps({"instruction": "no code field", "input": ""},
                            sort_keys=True))  # missing "output"
    path = DATASET_DIR / "codealpaca_10.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(lines)} lines)")


if __name__ == "__main__":
    check_tasks()
    write_pipeline_dataset()
    write_stub_responses()
    write_codealpaca_fixture()
