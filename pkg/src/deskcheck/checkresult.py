import json
from dataclasses import dataclass, field, fields, is_dataclass
from enum import Enum
from typing import Any

from deskcheck.check import DeskCheck
from util.console import Color, _apply_color, box


@dataclass()
class CheckResult:
    check: DeskCheck
    hostname: str | None = None

    ok: bool = False
    details: dict[str, Any] = field(default_factory=dict)

    # set when the check raised instead of returning an outcome
    error: str | None = None

    # total time
    time_s: float = 0

    def toJSON(self) -> str:
        """
        JSON text of the result; nested dataclasses and objects with a
        toObject() method are expanded.
        """

        def serialize(obj):
            if hasattr(obj, "toObject") and callable(obj.toObject):
                return serialize(obj.toObject())

            if isinstance(obj, Enum):
                return obj.value

            if is_dataclass(obj):
                return {f.name: serialize(getattr(obj, f.name)) for f in fields(obj)}

            if isinstance(obj, dict):
                return {str(k): serialize(v) for k, v in obj.items()}

            if isinstance(obj, (list, tuple)):
                return [serialize(x) for x in obj]

            if isinstance(obj, (str, int, float, bool)) or obj is None:
                return obj

            return str(obj)

        return json.dumps(serialize(self), indent=4, ensure_ascii=False)

    def toString(self, color: bool = True) -> str:
        def paint(text: str, c: Color) -> str:
            return _apply_color(text, c) if color else text

        def format_time(seconds: float) -> str:
            if seconds >= 60:
                mins = int(seconds // 60)
                secs = seconds % 60
                return f"{mins}m {secs:.0f}s"
            return f"{seconds:.2f}s"

        verdict = paint("PASS", Color.GREEN) if self.ok else paint("FAIL", Color.RED)
        lines = [
            f"{paint('Check:', Color.BLUE)} {self.check.name}",
            f"{paint('About:', Color.BLUE)} {self.check.description}",
            f"{paint('Host:', Color.BLUE)} {self.hostname or 'unknown'}",
        ]
        body = [f"{key}: {value}" for key, value in self.details.items()]
        if self.error:
            body.append(paint(f"error: {self.error}", Color.RED))
        body.append(f"{verdict}  time: {format_time(self.time_s)}")

        return box(lines + ["-" * 40] + body, Color.CYAN if color else None)
