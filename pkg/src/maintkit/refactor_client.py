"""Completion-endpoint client, response parsing, and the metric gate.

One chat-completions-style HTTP contract covers both corpus generation
and fine-tuned-model inference: POST a messages array, read back the
first choice's message content. Everything provider-specific lives in
CompletionConfig so evaluation runs can target a hosted API or a local
stub interchangeably.
"""

from __future__ import annotations

import logging
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import requests

from .errors import (
    AuthError,
    CompletionError,
    CompletionTimeout,
    EmptyCandidate,
    MalformedResponse,
    RateLimited,
    ServerError,
)
from .metrics import MaintainabilityReport

logger = logging.getLogger(__name__)

__all__ = [
    "CompletionConfig",
    "CompletionResult",
    "CompletionClient",
    "GatePolicy",
    "GateCheck",
    "GateDecision",
    "generate_refactoring",
    "extract_code",
    "gate",
]


@dataclass(frozen=True, slots=True)
class CompletionConfig:
    endpoint: str
    model: str
    temperature: float = 0.0  # deterministic sampling by default
    max_tokens: int = 1024
    timeout: float = 30.0
    max_retries: int = 3
    max_concurrency: int = 4
    credential_env: str | None = "COMPLETION_API_KEY"
    backoff_base: float = 0.5

    def __post_init__(self) -> None:
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be >= 1")


@dataclass(frozen=True, slots=True)
class CompletionResult:
    text: str
    attempts: int


class CompletionClient:
    """Thin requests-based client with retry, backoff, and a bounded pool.

    ``sleep`` is injectable so retry schedules are testable without
    waiting out real backoff delays.
    """

    def __init__(self, config: CompletionConfig,
                 session: requests.Session | None = None,
                 sleep: Callable[[float], None] = time.sleep) -> None:
        self.config = config
        self._session = session or requests.Session()
        self._sleep = sleep

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        env_name = self.config.credential_env
        if env_name:
            credential = os.environ.get(env_name)
            if not credential:
                raise AuthError(f"credential environment variable {env_name} is not set")
            headers["Authorization"] = f"Bearer {credential}"
        return headers

    def complete(self, prompt: str) -> CompletionResult:
        """One prompt in, first choice text out; retries transient failures."""
        config = self.config
        headers = self._headers()
        payload = {
            "model": config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": config.temperature,
            "max_tokens": config.max_tokens,
        }
        failure: CompletionError | None = None
        for attempt in range(config.max_retries + 1):
            if attempt:
                self._sleep(config.backoff_base * 2 ** (attempt - 1))
            try:
                response = self._session.post(config.endpoint, json=payload,
                                              headers=headers, timeout=config.timeout)
            except requests.Timeout:
                failure = CompletionTimeout(f"{config.endpoint}: request timed out")
                continue
            except requests.ConnectionError as exc:
                failure = CompletionTimeout(f"{config.endpoint}: {exc}")
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"endpoint rejected credential "
                                f"(HTTP {response.status_code})")
            if response.status_code == 429:
                failure = RateLimited(f"{config.endpoint}: rate limited")
                continue
            if response.status_code >= 500:
                failure = ServerError(f"{config.endpoint}: HTTP {response.status_code}")
                continue
            if response.status_code != 200:
                raise CompletionError(f"{config.endpoint}: unexpected "
                                      f"HTTP {response.status_code}")
            return CompletionResult(text=self._first_choice(response),
                                    attempts=attempt + 1)
        assert failure is not None
        logger.warning("completion failed after %d attempts: %s",
                       config.max_retries + 1, failure)
        raise failure

    @staticmethod
    def _first_choice(response: requests.Response) -> str:
        try:
            body = response.json()
            content = body["choices"][0]["message"]["content"]
        except (ValueError, LookupError, TypeError) as exc:
            raise MalformedResponse(
                f"response body does not match the chat-completions shape: {exc}"
            ) from exc
        if not isinstance(content, str):
            raise MalformedResponse("choice content is not a string")
        return content

    def complete_many(self, prompts: list[str]) -> list[CompletionResult | CompletionError]:
        """All prompts through a pool of at most max_concurrency workers.

        Results (or the per-prompt error) come back in input order, so
        callers can zip them against their records.
        """
        if not prompts:
            return []
        workers = min(self.config.max_concurrency, len(prompts))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(self.complete, prompt) for prompt in prompts]
            out: list[CompletionResult | CompletionError] = []
            for future in futures:
                try:
                    out.append(future.result())
                except CompletionError as exc:
                    out.append(exc)
        return out


def generate_refactoring(prompt: str, config: CompletionConfig,
                         session: requests.Session | None = None,
                         sleep: Callable[[float], None] = time.sleep) -> str:
    """Convenience wrapper: one prompt, raw completion text back."""
    return CompletionClient(config, session=session, sleep=sleep).complete(prompt).text


_FENCE_RE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)
# A metric report line is a label plus a bare number ("MI Score: 80",
# "- Effort: 12.5"); requiring the numeric tail keeps real code like
# "sloc = compute()" from being eaten.
_METRIC_LINE_RE = re.compile(
    r"^\s*(?:[-*]\s*)?(?:source lines of code|sloc|mi score|"
    r"maintainability index|mi|halstead effort|effort|he|cc score|"
    r"cyclomatic complexity|cc)\b[^:\n]*:\s*[-+]?\d+(?:\.\d+)?\s*$",
    re.IGNORECASE)


def extract_code(completion: str) -> str:
    """Pull the code candidate out of a raw completion.

    Takes the first fenced block when present (else the whole text) and
    peels trailing metric-report lines such as "SLOC: 5" or "MI Score:
    80" that models emit despite instructions. Comment lines are never
    peeled, so "# Changes made" blocks survive. Idempotent.
    """
    match = _FENCE_RE.search(completion)
    if match is not None:
        inner = match.group(1)
        if inner.endswith("\n"):
            inner = inner[:-1]
        return extract_code(inner)

    lines = completion.split("\n")
    while lines and (not lines[-1].strip() or _METRIC_LINE_RE.match(lines[-1])):
        lines.pop()
    if not lines:
        raise EmptyCandidate("nothing code-like left after extraction")
    return "\n".join(lines)


@dataclass(frozen=True, slots=True)
class GatePolicy:
    """Which improvement rules are mandatory; all of them by default."""

    require_mi: bool = True
    require_effort: bool = True
    require_sloc: bool = True
    sloc_tolerance: float = 0.0


@dataclass(frozen=True, slots=True)
class GateCheck:
    metric: str
    before: float
    after: float
    rule: str


@dataclass(frozen=True, slots=True)
class GateDecision:
    accepted: bool
    reasons: tuple[GateCheck, ...]  # the failed mandatory rules


def gate(before: MaintainabilityReport, after: MaintainabilityReport,
         policy: GatePolicy = GatePolicy()) -> GateDecision:
    """Accept a refactoring only when no enabled rule regressed.

    Comparisons are non-strict: a candidate with identical metrics
    passes. Relaxing the policy (disabling a rule, raising the SLOC
    tolerance) can only accept more candidates, never fewer.
    """
    failed: list[GateCheck] = []
    if policy.require_mi and not after.mi >= before.mi:
        failed.append(GateCheck("maintainability_index", before.mi, after.mi,
                                "MI(after) >= MI(before)"))
    if policy.require_effort and not after.halstead.effort <= before.halstead.effort:
        failed.append(GateCheck("halstead_effort", before.halstead.effort,
                                after.halstead.effort, "HE(after) <= HE(before)"))
    if policy.require_sloc and not after.sloc <= before.sloc + policy.sloc_tolerance:
        failed.append(GateCheck("sloc", before.sloc, after.sloc,
                                f"SLOC(after) <= SLOC(before) + {policy.sloc_tolerance:g}"))
    return GateDecision(accepted=not failed, reasons=tuple(failed))
