from dataclasses import dataclass, field
from typing import Any, Callable


@dataclass()
class CheckOutcome:
    ok: bool
    # free-form measurements shown in the summary box and written to JSON
    details: dict[str, Any] = field(default_factory=dict)


@dataclass()
class DeskCheck:
    name: str
    description: str
    run: Callable[[], CheckOutcome]

    def toObject(self):
        return {
            "name": self.name,
            "description": self.description,
        }
