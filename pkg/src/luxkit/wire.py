"""Client side of the NDJSON scorer protocol.

Framing: UTF-8, one JSON object per line, LF-terminated, no pretty-printing.
Every request carries a unique ``id``; the server answers every request with
exactly one response echoing that id, in order.  See PROTOCOL.md at the
repository root for the full message schemas and the stub semantics.

The client is single-flight: one request is in flight at a time per process,
guarded by a lock, so a client instance may be shared across threads.
"""

from __future__ import annotations

import json
import subprocess
import threading
from typing import Optional, Sequence

from .errors import ProtocolError


class NdjsonClient:
    """Talks to a scorer subprocess over stdin/stdout."""

    def __init__(self, command: Sequence[str]):
        self._command = list(command)
        self._proc: Optional[subprocess.Popen] = None
        self._lock = threading.Lock()
        self._next_id = 0

    def _ensure_started(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            try:
                self._proc = subprocess.Popen(
                    self._command,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    text=True,
                    encoding="utf-8",
                    bufsize=1,
                )
            except OSError as exc:
                raise ProtocolError(f"cannot start scorer {self._command!r}: {exc}") from exc
        return self._proc

    def request(self, op: str, **payload) -> dict:
        """Send one request and return the (ok) response payload.

        Raises ProtocolError, carrying the request id, on transport failure,
        id mismatch, or an ok=false response.
        """
        with self._lock:
            proc = self._ensure_started()
            self._next_id += 1
            req_id = str(self._next_id)
            message = {"id": req_id, "op": op, **payload}
            try:
                proc.stdin.write(json.dumps(message, ensure_ascii=False) + "\n")
                proc.stdin.flush()
                line = proc.stdout.readline()
            except (OSError, BrokenPipeError) as exc:
                raise ProtocolError(f"request {req_id}: transport failure: {exc}") from exc
            if not line:
                raise ProtocolError(f"request {req_id}: scorer closed the stream")
            try:
                response = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ProtocolError(f"request {req_id}: unparseable response: {exc}") from exc
            if response.get("id") != req_id:
                raise ProtocolError(
                    f"request {req_id}: response id mismatch ({response.get('id')!r})"
                )
            if not response.get("ok"):
                raise ProtocolError(
                    f"request {req_id}: scorer error: {response.get('error', 'unknown')}"
                )
            return response

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            try:
                self._proc.stdin.close()
                self._proc.wait(timeout=5)
            except (OSError, subprocess.TimeoutExpired):
                self._proc.kill()
        self._proc = None

    def __enter__(self) -> "NdjsonClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
