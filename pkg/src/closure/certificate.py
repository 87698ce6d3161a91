from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import config
import debug
from debug import TraceChannel
from algebra.element import Element, combine
from algebra.exception import AlgebraError
from algebra.scalar import ScalarField
from algebra.signature import AlgebraSignature, Monomial
from closure.exception import CertificateFormatError, ClosureError, CoverageIncomplete
from expression.parser import parse_element
from expression.printer import format_monomial
from morphism.endomap import EndoMap, apply_endomorphism
from morphism.families import AutFamilyParams, builtin_family

logger = logging.getLogger(__name__)


class StepKind(str, Enum):
    SEED = "seed"
    APPLY = "apply"
    COMBINE = "combine"


@dataclass(frozen=True)
class CertStep:
    id: int
    kind: StepKind
    result: Element
    input: int | None = None
    params: AutFamilyParams | None = None
    inputs: tuple[int, ...] = ()
    coefficients: tuple[Any, ...] = ()

    def to_json(self) -> dict[str, Any]:
        data: dict[str, Any] = {"id": self.id, "kind": self.kind.value}
        if self.kind == StepKind.APPLY:
            data["input"] = self.input
            data["map"] = self.params.to_json()
        elif self.kind == StepKind.COMBINE:
            field_ = self.result.field
            data["inputs"] = list(self.inputs)
            data["coefficients"] = [field_.text(c) for c in self.coefficients]
        data["result"] = str(self.result)
        return data

    @staticmethod
    def from_json(sig: AlgebraSignature, data: dict[str, Any]) -> "CertStep":
        kind = StepKind(data["kind"])
        result = parse_element(data["result"], sig)
        if kind == StepKind.SEED:
            return CertStep(int(data["id"]), kind, result)
        if kind == StepKind.APPLY:
            return CertStep(
                int(data["id"]), kind, result,
                input=int(data["input"]),
                params=AutFamilyParams.from_json(data["map"]),
            )
        return CertStep(
            int(data["id"]), kind, result,
            inputs=tuple(int(i) for i in data["inputs"]),
            coefficients=tuple(sig.field.parse(c) for c in data["coefficients"]),
        )


def _monomial_key(sig: AlgebraSignature, mono: Monomial) -> str:
    return format_monomial(sig, mono) or "1"


@dataclass
class ClosureCertificate:
    """Replayable derivation of every monomial of degree <= cap from a seed."""

    signature: AlgebraSignature
    seed: Element
    cap: int
    steps: list[CertStep] = field(default_factory=list)
    coverage: dict[Monomial, int] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        sig = self.signature
        ordered = sorted(self.coverage, key=AlgebraSignature.order_key)
        return {
            "schema_version": config.SCHEMA_VERSION,
            "signature": sig.text(),
            "field": sig.field.label,
            "seed": str(self.seed),
            "cap": self.cap,
            "steps": [step.to_json() for step in self.steps],
            "coverage": {_monomial_key(sig, m): self.coverage[m] for m in ordered},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def from_json(data: dict[str, Any]) -> "ClosureCertificate":
        try:
            if data["schema_version"] != config.SCHEMA_VERSION:
                raise CertificateFormatError(
                    f"Unsupported schema version {data['schema_version']}.",
                    context={"expected": config.SCHEMA_VERSION},
                )
            field_ = ScalarField.from_label(data["field"])
            sig = AlgebraSignature.from_text(data["signature"], field_.characteristic)
            steps = [CertStep.from_json(sig, s) for s in data["steps"]]
            coverage = {}
            for text, step_id in data["coverage"].items():
                mono = parse_element(text, sig).as_monomial()
                if mono is None:
                    raise CertificateFormatError(f"Coverage key '{text}' is not a monomial.")
                coverage[mono] = int(step_id)
            return ClosureCertificate(sig, parse_element(data["seed"], sig), int(data["cap"]), steps, coverage)
        except CertificateFormatError:
            raise
        except (KeyError, TypeError, ValueError, AlgebraError) as e:
            raise CertificateFormatError(
                f"Malformed certificate: {e}",
                hint="Certificates are written by the closure command.",
            ) from e

    @staticmethod
    def loads(text: str) -> "ClosureCertificate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise CertificateFormatError(f"Certificate is not valid JSON: {e}") from e
        return ClosureCertificate.from_json(data)


class CertificateBuilder:
    """Appends steps while keeping their results, so later steps can refer back."""

    def __init__(self, signature: AlgebraSignature, seed: Element, cap: int) -> None:
        self.signature = signature
        self.seed_element = seed
        self.cap = cap
        self.steps: list[CertStep] = []
        self.coverage: dict[Monomial, int] = {}
        self._maps: dict[AutFamilyParams, EndoMap] = {}

    def __len__(self) -> int:
        return len(self.steps)

    def _append(self, step: CertStep) -> int:
        self.steps.append(step)
        if debug.enabled(TraceChannel.STEPS):
            debug.trace(TraceChannel.STEPS, f"step {step.id} {step.kind.value}: {step.result}")
        return step.id

    def result(self, step_id: int) -> Element:
        return self.steps[step_id].result

    def family(self, params: AutFamilyParams) -> EndoMap:
        if params not in self._maps:
            self._maps[params] = builtin_family(self.signature, params)
        return self._maps[params]

    def seed(self) -> int:
        return self._append(CertStep(len(self.steps), StepKind.SEED, self.seed_element))

    def apply(self, params: AutFamilyParams, input_id: int) -> int:
        image = apply_endomorphism(self.family(params), self.result(input_id))
        return self._append(CertStep(len(self.steps), StepKind.APPLY, image, input=input_id, params=params))

    def combine(self, inputs: Sequence[int], coefficients: Sequence[Any]) -> int:
        field_ = self.signature.field
        pairs = [(i, field_.coerce(c)) for i, c in zip(inputs, coefficients)]
        pairs = [(i, c) for i, c in pairs if c]
        if len(pairs) == 1 and pairs[0][1] == field_.one:
            return pairs[0][0]
        if not pairs:
            raise ClosureError("A combination needs at least one nonzero coefficient.")
        ids = tuple(i for i, _ in pairs)
        coeffs = tuple(c for _, c in pairs)
        result = combine(coeffs, [self.result(i) for i in ids])
        return self._append(
            CertStep(len(self.steps), StepKind.COMBINE, result, inputs=ids, coefficients=coeffs)
        )

    def difference(self, params: AutFamilyParams, input_id: int) -> int:
        """Steps for m(f) - f."""
        return self.combine([self.apply(params, input_id), input_id], [1, -1])

    def cover(self, mono: Monomial, step_id: int) -> None:
        if self.result(step_id).as_monomial() != mono:
            raise ClosureError(
                f"Step {step_id} does not produce the monomial it is meant to cover.",
                context={"step": step_id, "result": str(self.result(step_id))},
            )
        self.coverage.setdefault(mono, step_id)

    def covered(self, mono: Monomial) -> bool:
        return mono in self.coverage

    def build(self) -> ClosureCertificate:
        missing = [m for m in self.signature.monomials(self.cap) if m not in self.coverage]
        if missing:
            raise CoverageIncomplete(
                f"{len(missing)} monomial(s) of degree <= {self.cap} are not covered.",
                context={"missing": [_monomial_key(self.signature, m) for m in missing[:10]]},
            )
        coverage = {m: self.coverage[m] for m in self.signature.monomials(self.cap)}
        return ClosureCertificate(self.signature, self.seed_element, self.cap, list(self.steps), coverage)


class VerificationFailure(str, Enum):
    BAD_REFERENCE = "bad-reference"
    SEED_MISMATCH = "seed-mismatch"
    INVALID_MAP = "invalid-map"
    STEP_MISMATCH = "step-mismatch"
    COVERAGE_INCOMPLETE = "coverage-incomplete"
    COVERAGE_MISMATCH = "coverage-mismatch"


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    failing_step: int | None = None
    failure: VerificationFailure | None = None
    reason: str | None = None

    def raise_for_failure(self) -> None:
        if self.ok:
            return
        error = CoverageIncomplete if self.failure == VerificationFailure.COVERAGE_INCOMPLETE else ClosureError
        raise error(self.reason, context={"step": self.failing_step})

    def toJSON(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "failing_step": self.failing_step,
            "failure": None if self.failure is None else self.failure.value,
            "reason": self.reason,
        }


def _fail(step: int | None, failure: VerificationFailure, reason: str) -> VerificationResult:
    return VerificationResult(False, step, failure, reason)


def _check_step(cert: ClosureCertificate, step: CertStep, position: int) -> VerificationResult | None:
    sig = cert.signature
    if step.id != position:
        return _fail(step.id, VerificationFailure.BAD_REFERENCE, f"step {position} carries id {step.id}")
    if step.result.signature != sig:
        return _fail(step.id, VerificationFailure.STEP_MISMATCH, "result lives in another signature")

    if step.kind == StepKind.SEED:
        if step.result != cert.seed:
            return _fail(step.id, VerificationFailure.SEED_MISMATCH, "seed step differs from the seed")
        return None

    refs = (step.input,) if step.kind == StepKind.APPLY else step.inputs
    if not refs or any(r is None or not 0 <= r < step.id for r in refs):
        return _fail(step.id, VerificationFailure.BAD_REFERENCE, "inputs must refer to earlier steps")

    if step.kind == StepKind.APPLY:
        try:
            m = builtin_family(sig, step.params)
            expected = apply_endomorphism(m, cert.steps[step.input].result)
        except AlgebraError as e:
            return _fail(step.id, VerificationFailure.INVALID_MAP, e.message)
    else:
        if len(step.inputs) != len(step.coefficients):
            return _fail(step.id, VerificationFailure.STEP_MISMATCH, "inputs and coefficients differ in length")
        expected = combine(step.coefficients, [cert.steps[i].result for i in step.inputs])

    if expected != step.result:
        return _fail(step.id, VerificationFailure.STEP_MISMATCH, f"replay gives {expected}, recorded {step.result}")
    return None


def verify_certificate(cert: ClosureCertificate, workers: int | None = None) -> VerificationResult:
    """
    Replay every step exactly, re-validating each automorphism, then check
    that the coverage map is total and points at the right monomials.

    Each step is checked against the recorded results of its inputs, so steps
    can be replayed independently; the first failure in step order wins.
    """
    workers = workers or config.ACTIVE_CONFIG.engine.workers
    positions = range(len(cert.steps))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda p: _check_step(cert, cert.steps[p], p), positions))
    else:
        outcomes = [_check_step(cert, cert.steps[p], p) for p in positions]
    for outcome in outcomes:
        if outcome is not None:
            logger.info("Certificate fails at step %s: %s", outcome.failing_step, outcome.reason)
            return outcome

    sig = cert.signature
    expected = sig.monomials(cert.cap)
    missing = [m for m in expected if m not in cert.coverage]
    if missing:
        return _fail(
            None,
            VerificationFailure.COVERAGE_INCOMPLETE,
            f"coverage misses {_monomial_key(sig, missing[0])}" + (f" and {len(missing) - 1} more" if len(missing) > 1 else ""),
        )
    extra = set(cert.coverage) - set(expected)
    if extra:
        mono = min(extra, key=AlgebraSignature.order_key)
        return _fail(None, VerificationFailure.COVERAGE_MISMATCH, f"coverage lists {_monomial_key(sig, mono)} above the cap")
    for mono in expected:
        step_id = cert.coverage[mono]
        if not 0 <= step_id < len(cert.steps):
            return _fail(step_id, VerificationFailure.BAD_REFERENCE, f"coverage of {_monomial_key(sig, mono)} names a missing step")
        if cert.steps[step_id].result.as_monomial() != mono:
            return _fail(step_id, VerificationFailure.COVERAGE_MISMATCH, f"step does not produce {_monomial_key(sig, mono)}")
    return VerificationResult(True)
