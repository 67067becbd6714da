"""
Wall-clock spans for estimator runs and experiment cells.

An estimator's `runtime_s` is the elapsed time of the span wrapped around its
estimation work. When the CLI runs with `--trace-file`, a session collects every
finished span under a `cli_invocation` root and the run is written as folded
stacks (`parent;child duration_us`).
"""

import threading
import time
from contextlib import contextmanager
from functools import wraps
from typing import Optional, TextIO

ROOT_NAME = "cli_invocation"

_LOCK = threading.Lock()
_session: Optional[list["Span"]] = None
_root_span: Optional["Span"] = None
_tls = threading.local()


def _span_stack() -> list["Span"]:
    if not hasattr(_tls, "stack"):
        _tls.stack = []
    return _tls.stack


class Span:
    """Times a block with a monotonic clock and keeps its parent and tags."""

    def __init__(self, name: str, attributes: Optional[dict[str, object]] = None):
        self.name = name
        self.attributes = dict(attributes or {})
        self.parent: Optional[Span] = None
        self.start_ns: Optional[int] = None
        self.end_ns: Optional[int] = None
        self.status_code = 0

    def __enter__(self) -> "Span":
        stack = _span_stack()
        if stack:
            self.parent = stack[-1]
        elif _root_span is not None and _root_span is not self:
            # worker threads start with an empty stack; hang their spans off the session root
            self.parent = _root_span
        stack.append(self)
        self.start_ns = time.perf_counter_ns()
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        self.end_ns = time.perf_counter_ns()
        if exc is not None:
            self.status_code = 1
            self.attributes["exception"] = str(exc)
        stack = _span_stack()
        if stack and stack[-1] is self:
            stack.pop()
        with _LOCK:
            if _session is not None:
                _session.append(self)
        return False

    @property
    def elapsed_ns(self) -> int:
        if self.start_ns is None:
            return 0
        return (self.end_ns or time.perf_counter_ns()) - self.start_ns

    @property
    def elapsed_s(self) -> float:
        return self.elapsed_ns / 1e9


def profile(func):
    """Decorator: run the function inside a span named after it."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        with Span(func.__name__):
            return func(*args, **kwargs)

    return wrapper


@contextmanager
def profile_block(name: str, tags: Optional[dict[str, object]] = None):
    with Span(name, attributes=tags) as span:
        yield span


def add_tags(tags: dict[str, object]) -> None:
    """Set tags on the innermost open span of this thread, if any."""
    stack = _span_stack()
    if stack:
        stack[-1].attributes.update(tags)


def start_session(command_name: str) -> None:
    """Collect finished spans under a root span until end_session()."""
    global _session, _root_span
    with _LOCK:
        _session = []
    _root_span = Span(ROOT_NAME, attributes={"cli.command": command_name})
    _root_span.__enter__()


def end_session() -> list[Span]:
    global _session, _root_span
    if _root_span is not None:
        root, _root_span = _root_span, None
        root.__exit__(None, None, None)
    with _LOCK:
        spans, _session = (_session or []), None
    return spans


def build_path(span: Span) -> list[str]:
    path = []
    while span is not None:
        path.append(span.name)
        span = span.parent
    return path[::-1]


def export_folded(spans: list[Span], out: TextIO, min_us: int = 1) -> None:
    """Write one `a;b;c duration_us` line per span lasting at least min_us."""
    for span in spans:
        duration = span.elapsed_ns // 1_000
        if duration >= min_us:
            out.write(f"{';'.join(build_path(span))} {duration}\n")
