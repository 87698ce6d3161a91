"""Raw engine trace: certificate steps and saturation rounds, one line each."""
from __future__ import annotations

import contextlib
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

import config


class TraceChannel(str, Enum):
    STEPS = "steps"      # every certificate step as it is recorded
    ROUNDS = "rounds"    # one summary line per saturation round


# Channels written while config.APPEND_TRACE is set.
ENABLED: set[TraceChannel] = set()


def enabled(channel: TraceChannel) -> bool:
    return channel in ENABLED and config.APPEND_TRACE is not None


def trace(channel: TraceChannel, message: str) -> None:
    """Append one line to the raw trace if the channel is on."""
    if not enabled(channel):
        return
    path = Path(config.APPEND_TRACE)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with path.open("a", encoding="utf-8") as f:
            f.write(message.rstrip("\n") + "\n")
    except OSError:
        # a broken trace file never aborts a computation
        pass


@contextlib.contextmanager
def tracing(path: Path, channels: Iterable[TraceChannel] = tuple(TraceChannel)) -> Iterator[Path]:
    """Route the given channels to `path`; the previous trace target is restored on exit."""
    previous_path, previous_channels = config.APPEND_TRACE, set(ENABLED)
    config.APPEND_TRACE = path
    ENABLED.clear()
    ENABLED.update(channels)
    try:
        yield path
    finally:
        config.APPEND_TRACE = previous_path
        ENABLED.clear()
        ENABLED.update(previous_channels)
