"""Shared fixtures: anchor snippets, a scripted completion stub server."""

from __future__ import annotations

import json
import re
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# The worked bubble-sort example the metric anchors are pinned to. The
# original carries two trailing spaces and a shallow-indented swap line
# on purpose; byte changes here move the frozen expected values.
BUBBLE_ORIGINAL = (
    "def bubbleSort(arr): \n"
    "    n = len(arr) \n"
    "    for i in range(n-1):\n"
    "        for j in range(0, n-i-1):\n"
    "            if arr[j] > arr[j+1]:\n"
    "               arr[j],arr[j+1] = arr[j+1],arr[j]"
)

BUBBLE_REFACTORED_COMMENTED = (
    "def bubbleSort(arr):\n"
    "    n = len(arr)\n"
    "    # Using a single loop with the itertools product function\n"
    "    from itertools import product\n"
    "    for i, j in product(range(n-1), range(n-1)):\n"
    "        # Swapping if the current element is greater than the next\n"
    "        if arr[j] > arr[j+1]:\n"
    "            arr[j], arr[j+1] = arr[j+1], arr[j]\n"
)

BUBBLE_REFACTORED = "\n".join(
    line for line in BUBBLE_REFACTORED_COMMENTED.split("\n")
    if not line.lstrip().startswith("#")
)


@pytest.fixture
def bubble_original() -> str:
    return BUBBLE_ORIGINAL


@pytest.fixture
def bubble_refactored() -> str:
    return BUBBLE_REFACTORED


@pytest.fixture
def bubble_refactored_commented() -> str:
    return BUBBLE_REFACTORED_COMMENTED


# ------------------------------------------------------------------ stub

_MARKER_RE = re.compile(r"task-\d+")
_DEFAULT_CONTENT = "```python\npass\n```\n"


class _StubState:
    """Mutable book-keeping shared between the server and the test."""

    def __init__(self, script, sequence, api_key, hold):
        self.script = script or {}
        self.sequence = list(sequence) if sequence else None
        self.api_key = api_key
        self.hold = hold
        self.lock = threading.Lock()
        self.requests: list[dict] = []
        self.in_flight = 0
        self.max_in_flight = 0
        self.endpoint = ""

    def next_step(self, body: dict):
        if self.sequence is not None:
            return self.sequence.pop(0) if self.sequence else _DEFAULT_CONTENT
        model = body.get("model", "")
        content = body.get("messages", [{}])[0].get("content", "")
        marker = _MARKER_RE.search(content)
        by_model = self.script.get(model, {})
        if marker and marker.group(0) in by_model:
            return by_model[marker.group(0)]
        return by_model.get("default", _DEFAULT_CONTENT)


class _StubHandler(BaseHTTPRequestHandler):
    def log_message(self, *args):  # keep test output quiet
        pass

    def _reply(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        state: _StubState = self.server.stub  # type: ignore[attr-defined]
        with state.lock:
            state.in_flight += 1
            state.max_in_flight = max(state.max_in_flight, state.in_flight)
        try:
            if state.hold:
                time.sleep(state.hold)
            length = int(self.headers.get("Content-Length") or 0)
            body = json.loads(self.rfile.read(length) or b"{}")
            auth = self.headers.get("Authorization")
            with state.lock:
                state.requests.append(
                    {"path": self.path, "auth": auth, "body": body})
                step = state.next_step(body)
            if state.api_key is not None and auth != f"Bearer {state.api_key}":
                self._reply(401, {"error": {"message": "invalid credentials"}})
                return
            if isinstance(step, int):
                self._reply(step, {"error": {"message": f"scripted {step}"}})
            elif isinstance(step, dict):  # raw payload, shape tests
                self._reply(200, step)
            else:
                self._reply(200, {"choices": [{"message": {"content": step}}]})
        finally:
            with state.lock:
                state.in_flight -= 1


@pytest.fixture
def stub_server():
    """Factory for scripted completion servers on an ephemeral port.

    ``script`` maps model name to {marker: step}; ``sequence`` replays
    steps in request order instead. A step is a content string, an HTTP
    status int, or a raw response dict.
    """
    servers = []

    def make(script=None, sequence=None, api_key="test-key-123", hold=0.0):
        httpd = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
        httpd.daemon_threads = True
        state = _StubState(script, sequence, api_key, hold)
        httpd.stub = state  # type: ignore[attr-defined]
        threading.Thread(target=httpd.serve_forever, daemon=True).start()
        state.endpoint = (
            f"http://127.0.0.1:{httpd.server_address[1]}/v1/chat/completions")
        servers.append(httpd)
        return state

    yield make
    for httpd in servers:
        httpd.shutdown()
        httpd.server_close()


@pytest.fixture
def wire_script() -> dict:
    """The committed stub-model completions for the pipeline fixture."""
    path = FIXTURES / "wire" / "stub_responses.json"
    return json.loads(path.read_text(encoding="utf-8"))
