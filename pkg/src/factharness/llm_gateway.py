"""Uniform client for text-generation endpoints.

Decoding parameters are fixed per run (temperature 0.1, 256 new tokens by
default). Transient failures (timeout, 429, 5xx) are retried with exponential
backoff; authentication failures are not. A process-wide semaphore bounds
in-flight requests. Transports adapt provider wire formats; tests inject
scripted ones.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

import requests

from .prompt_engine import RenderedPrompt, render_summary_request

logger = logging.getLogger(__name__)

DEFAULT_API_KEY_ENV = "HARNESS_API_KEY"


@dataclass(frozen=True)
class GenerationParams:
    model_id: str
    endpoint: str
    temperature: float = 0.1
    max_new_tokens: int = 256

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_new_tokens <= 0:
            raise ValueError("max_new_tokens must be positive")


@dataclass(frozen=True)
class GenerationResult:
    text: str
    latency: float
    attempt_count: int
    truncated: bool


class GatewayError(Exception):
    pass


class AuthenticationError(GatewayError):
    pass


class TransientError(GatewayError):
    """Timeouts, 429s, and 5xx responses; eligible for retry."""


class RetryExhausted(GatewayError):
    def __init__(self, cause: Exception, attempts: int):
        super().__init__(f"gave up after {attempts} attempts: {cause}")
        self.cause = cause
        self.attempts = attempts


class MalformedResponse(GatewayError):
    pass


@dataclass(frozen=True)
class TransportReply:
    text: str
    truncated: bool = False


class Transport(Protocol):
    def complete(self, prompt: str, params: GenerationParams) -> TransportReply: ...


class HttpTransport:
    """Adapter for HTTP completion endpoints.

    ``style`` selects the wire format: "openai-chat" posts a chat-completions
    body and reads choices[0].message.content; "tgi" posts {"inputs": ...}
    and reads generated_text.
    """

    def __init__(
        self,
        style: str = "openai-chat",
        api_key_env: str = DEFAULT_API_KEY_ENV,
        session: requests.Session | None = None,
        timeout: float = 120.0,
    ):
        if style not in ("openai-chat", "tgi"):
            raise ValueError(f"unknown transport style: {style}")
        self.style = style
        self.api_key_env = api_key_env
        self.timeout = timeout
        self._session = session or requests.Session()

    def complete(self, prompt: str, params: GenerationParams) -> TransportReply:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        if self.style == "openai-chat":
            body = {
                "model": params.model_id,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": params.temperature,
                "max_tokens": params.max_new_tokens,
            }
        else:
            body = {
                "inputs": prompt,
                "parameters": {
                    "temperature": params.temperature,
                    "max_new_tokens": params.max_new_tokens,
                },
            }
        try:
            response = self._session.post(params.endpoint, json=body, headers=headers, timeout=self.timeout)
        except requests.Timeout as exc:
            raise TransientError(f"timeout calling {params.endpoint}") from exc
        except requests.RequestException as exc:
            raise TransientError(f"connection failure calling {params.endpoint}: {exc}") from exc
        if response.status_code in (401, 403):
            raise AuthenticationError(f"HTTP {response.status_code} from {params.endpoint}")
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientError(f"HTTP {response.status_code} from {params.endpoint}")
        if response.status_code >= 400:
            raise GatewayError(f"HTTP {response.status_code} from {params.endpoint}")
        try:
            payload = response.json()
            if self.style == "openai-chat":
                choice = payload["choices"][0]
                text = choice["message"]["content"]
                truncated = choice.get("finish_reason") == "length"
            else:
                entry = payload[0] if isinstance(payload, list) else payload
                text = entry["generated_text"]
                truncated = False
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"cannot read completion from {params.endpoint}: {exc}") from exc
        if not isinstance(text, str):
            raise MalformedResponse("completion text is not a string")
        return TransportReply(text=text, truncated=truncated)


class LlmClient:
    """Thread-safe generation client with retries and an in-flight cap."""

    def __init__(
        self,
        params: GenerationParams,
        transport: Transport | None = None,
        *,
        max_attempts: int = 3,
        backoff_base: float = 1.0,
        max_in_flight: int = 4,
        sleep: Callable[[float], None] = time.sleep,
        verbose_log_path: str | Path | None = None,
    ):
        self.params = params
        self.transport = transport or HttpTransport()
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self._semaphore = threading.Semaphore(max_in_flight)
        self._sleep = sleep
        self._log_path = Path(verbose_log_path) if verbose_log_path else None
        self._log_lock = threading.Lock()

    def generate(self, prompt: RenderedPrompt | str) -> GenerationResult:
        text_prompt = prompt.text if isinstance(prompt, RenderedPrompt) else prompt
        start = time.perf_counter()
        last_error: Exception | None = None
        with self._semaphore:
            for attempt in range(1, self.max_attempts + 1):
                try:
                    reply = self.transport.complete(text_prompt, self.params)
                except AuthenticationError:
                    raise
                except TransientError as exc:
                    last_error = exc
                    if attempt < self.max_attempts:
                        delay = self.backoff_base * 2 ** (attempt - 1)
                        logger.warning("attempt %d failed (%s); retrying in %.1fs", attempt, exc, delay)
                        self._sleep(delay)
                    continue
                result = GenerationResult(
                    text=reply.text,
                    latency=time.perf_counter() - start,
                    attempt_count=attempt,
                    truncated=reply.truncated,
                )
                self._log_exchange(text_prompt, reply.text, attempt)
                return result
        raise RetryExhausted(last_error or GatewayError("unknown"), attempts=self.max_attempts)

    def summarize(self, article_text: str, claim: str | None = None) -> str:
        """One generation call asking for a (claim-focused) article summary."""
        if not article_text.strip():
            raise ValueError("article_text must be nonempty")
        return self.generate(render_summary_request(article_text, claim)).text

    def _log_exchange(self, prompt: str, response: str, attempts: int) -> None:
        if self._log_path is None:
            return
        entry = {"ts": time.time(), "attempts": attempts, "prompt": prompt, "response": response}
        with self._log_lock:
            with self._log_path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(entry, ensure_ascii=False) + "\n")
