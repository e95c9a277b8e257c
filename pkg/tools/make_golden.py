"""One-shot generator for the committed pipeline golden outputs.

Replays the whole pipeline over tests/fixtures/datasets/pipeline_20.jsonl
against the scripted stub server (tests/fixtures/wire/stub_responses.json),
asserts the expected stage counts, then freezes the evaluate outputs under
tests/fixtures/golden/. Run from the repository root:

    python3 tools/make_golden.py
"""

from __future__ import annotations

import json
import os
import shutil
import sys
import tempfile
import threading
from http.server import ThreadingHTTPServer
from pathlib import Path

from click.testing import CliRunner

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from conftest import _StubHandler, _StubState  # noqa: E402

from maintkit.cli import main  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = FIXTURES / "golden"
KEY = "test-key-123"


def start_stub(script: dict) -> tuple[ThreadingHTTPServer, str]:
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
    httpd.daemon_threads = True
    httpd.stub = _StubState(script, None, KEY, 0.0)  # type: ignore[attr-defined]
    threading.Thread(target=httpd.serve_forever, daemon=True).start()
    return httpd, f"http://127.0.0.1:{httpd.server_address[1]}/v1/chat/completions"


def run(runner: CliRunner, args: list[str]) -> str:
    res = runner.invoke(main, args, env={"COMPLETION_API_KEY": KEY})
    if res.exit_code != 0:
        raise SystemExit(f"command failed ({res.exit_code}): {args}\n{res.stderr}")
    print(res.stderr.strip())
    return res.stderr


def main_() -> None:
    script = json.loads(
        (FIXTURES / "wire" / "stub_responses.json").read_text(encoding="utf-8"))
    httpd, endpoint = start_stub(script)
    runner = CliRunner()
    work = Path(tempfile.mkdtemp(prefix="golden-"))
    try:
        augmented = work / "augmented.jsonl"
        run(runner, ["augment", "--input",
                     str(FIXTURES / "datasets" / "pipeline_20.jsonl"),
                     "--schema", "commitpack", "--output", str(augmented)])

        outputs = {}
        expected = {"stub-base": "accepted=16 rejected=2 failed=2",
                    "stub-ft": "accepted=19 rejected=1 failed=0"}
        for model in ("stub-base", "stub-ft"):
            cfg = work / f"{model}.yaml"
            cfg.write_text(f"completion:\n  endpoint: {endpoint}\n"
                           f"  model: {model}\n  max_retries: 0\n",
                           encoding="utf-8")
            out = work / f"{model}.jsonl"
            summary = run(runner, ["refactor", "--input", str(augmented),
                                   "--output", str(out), "--config", str(cfg)])
            if expected[model] not in summary:
                raise SystemExit(f"{model}: unexpected gate totals: {summary}")
            outputs[model] = out

        report = work / "report"
        summary = run(runner, ["evaluate", "--dataset", str(augmented),
                               "--baseline", str(outputs["stub-base"]),
                               "--candidate", str(outputs["stub-ft"]),
                               "--output-dir", str(report), "--no-figures"])
        if "included=19/19/19 excluded=1/1/1" not in summary:
            raise SystemExit(f"unexpected evaluate counts: {summary}")

        GOLDEN.mkdir(parents=True, exist_ok=True)
        for name in ("comparison.md", "boxplots.json"):
            shutil.copy(report / name, GOLDEN / name)
            print(f"wrote {GOLDEN / name}")
        print((report / "comparison.md").read_text(encoding="utf-8"))
    finally:
        httpd.shutdown()
        httpd.server_close()
        shutil.rmtree(work, ignore_errors=True)


if __name__ == "__main__":
    os.environ.setdefault("COMPLETION_API_KEY", KEY)
    main_()
