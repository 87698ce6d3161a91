# config.py
from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum


class PoolPreset(str, Enum):
    AFFINE = "affine"                # shifts + invertible scalings (+ swaps)
    TRIANGULAR = "triangular"        # += z_i -> z_i + z_j, z_i -> z_i + z_j^2
    WEYL_STANDARD = "weyl-standard"  # scaling, permutation, swap, alpha, beta, shifts
    STANDARD = "standard"            # per-factor default, lifted to the tensor product


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


@dataclass(frozen=True)
class EngineConfiguration:
    # >1 fans pool applications out over a thread pool; insertion stays ordered
    workers: int = 1
    max_rounds: int = 64

    # pencil scalars are c = vandermonde_start, vandermonde_start + 1, ...
    vandermonde_start: int = 0

    provenance_spot_checks: int = 20


@dataclass(frozen=True)
class Configuration:
    engine: EngineConfiguration = field(default_factory=EngineConfiguration)
    output: OutputFormat = OutputFormat.TEXT
    name: str = "default"


DEFAULT_CONFIGURATION = Configuration()

# The active runtime configuration. The CLI swaps in its own configuration for
# the duration of a command; library callers get the defaults.
ACTIVE_CONFIG: Configuration = DEFAULT_CONFIGURATION

# Version tag written into every closure certificate.
SCHEMA_VERSION = 1

# Path of the raw engine trace (see debug.trace), None disables it.
APPEND_TRACE = None
