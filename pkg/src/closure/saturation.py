from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Sequence

import config
import debug
from debug import TraceChannel
from algebra.element import Element, commutator, combine, is_central, total_degree
from algebra.exception import SignatureMismatch
from algebra.signature import AlgebraSignature, Monomial
from closure.certificate import CertificateBuilder, ClosureCertificate
from closure.exception import ClosureError, CoverageIncomplete
from closure.span import SpanBasis
from morphism.endomap import EndoMap, apply_endomorphism

logger = logging.getLogger(__name__)


class SaturationStatus(str, Enum):
    FIXPOINT = "fixpoint"
    CAP_BLOCKED_FIXPOINT = "cap-blocked-fixpoint"
    ROUND_LIMIT = "round-limit"


@dataclass
class SaturationResult:
    basis: SpanBasis
    status: SaturationStatus
    rounds: int
    blocked: int
    seeds: tuple[Element, ...]
    builder: CertificateBuilder | None = None

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    def toJSON(self) -> dict:
        return {
            "algebra": self.basis.signature.text(),
            "field": self.basis.signature.field.label,
            "cap": self.basis.cap,
            "seeds": [str(s) for s in self.seeds],
            "status": self.status.value,
            "dimension": self.dimension,
            "rounds": self.rounds,
            "blocked": self.blocked,
            "basis": [str(row) for row in self.basis.rows()],
        }


@dataclass
class _FrontierRow:
    element: Element
    provenance: dict[int, object] = field(default_factory=dict)
    step: int | None = None


def _row_step(builder: CertificateBuilder, row: _FrontierRow) -> int:
    if row.step is None:
        steps = sorted(row.provenance)
        row.step = builder.combine(steps, [row.provenance[s] for s in steps])
    return row.step


def saturate(
    seeds: Sequence[Element],
    pool: Sequence[EndoMap],
    cap: int,
    max_rounds: int | None = None,
    *,
    record: bool = False,
    workers: int | None = None,
) -> SaturationResult:
    """
    Close span(seeds) under the pool, keeping only elements of degree <= cap.

    Every round maps the rows that first appeared in the previous round.
    Images above the cap are counted as blocked and never truncated. With
    `record`, every inserted row carries a replayable derivation.
    """
    if not seeds:
        raise ClosureError("Saturation needs at least one seed.")
    sig = seeds[0].signature
    for other in [s.signature for s in seeds[1:]] + [m.signature for m in pool]:
        if other != sig:
            raise SignatureMismatch("Seeds and pool maps must share one signature.")
    engine = config.ACTIVE_CONFIG.engine
    max_rounds = engine.max_rounds if max_rounds is None else max_rounds
    workers = workers or engine.workers

    builder = None
    if record:
        if len(seeds) != 1:
            raise ClosureError("Recorded saturation takes a single seed.")
        if any(m.params is None for m in pool):
            raise ClosureError("Recorded saturation needs family maps with parameters.")
        builder = CertificateBuilder(sig, seeds[0], cap)

    basis = SpanBasis(sig, cap, track_provenance=record)
    frontier: list[_FrontierRow] = []
    blocked = 0
    for seed in seeds:
        if total_degree(seed) > cap:
            blocked += 1
            continue
        provenance = {builder.seed(): 1} if record else None
        row = basis.insert(seed, provenance)
        if row is not None:
            frontier.append(_FrontierRow(row, basis.provenance(row.leading_monomial())))

    rounds = 0
    while frontier and rounds < max_rounds:
        rounds += 1
        jobs = list(product(range(len(pool)), range(len(frontier))))

        def image(job: tuple[int, int]) -> Element:
            mi, ri = job
            return apply_endomorphism(pool[mi], frontier[ri].element)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                images = list(executor.map(image, jobs))
        else:
            images = [image(job) for job in jobs]

        fresh: list[_FrontierRow] = []
        for (mi, ri), img in zip(jobs, images):
            if total_degree(img) > cap:
                blocked += 1
                continue
            if basis.contains(img):
                continue
            provenance = None
            if record:
                step = builder.apply(pool[mi].params, _row_step(builder, frontier[ri]))
                provenance = {step: 1}
            row = basis.insert(img, provenance)
            fresh.append(_FrontierRow(row, basis.provenance(row.leading_monomial())))
        if debug.enabled(TraceChannel.ROUNDS):
            debug.trace(
                TraceChannel.ROUNDS,
                f"round {rounds}: {len(jobs)} images, {len(fresh)} new rows, dim {basis.dimension}, blocked {blocked}"
            )
        logger.debug("round %d: dim %d, %d new, %d blocked", rounds, basis.dimension, len(fresh), blocked)
        frontier = fresh

    if frontier:
        status = SaturationStatus.ROUND_LIMIT
    elif blocked:
        status = SaturationStatus.CAP_BLOCKED_FIXPOINT
    else:
        status = SaturationStatus.FIXPOINT
    logger.info("Saturation: %s, dim %d after %d rounds", status.value, basis.dimension, rounds)
    return SaturationResult(basis, status, rounds, blocked, tuple(seeds), builder)


def check_provenance(result: SaturationResult, samples: int | None = None, seed: int = 0) -> list[Monomial]:
    """
    Replay the recorded derivation of up to `samples` random rows; returns
    the pivots whose derivation does not reproduce the row.
    """
    if result.builder is None:
        raise ClosureError("The saturation was not recorded.")
    samples = config.ACTIVE_CONFIG.engine.provenance_spot_checks if samples is None else samples
    basis = result.basis
    pivots = basis.pivots
    chosen = random.Random(seed).sample(pivots, min(samples, len(pivots)))
    failures = []
    for pivot in chosen:
        prov = basis.provenance(pivot)
        steps = sorted(prov)
        replayed = combine([prov[s] for s in steps], [result.builder.result(s) for s in steps]) if steps else None
        if replayed is None or replayed != basis.row(pivot):
            failures.append(pivot)
    return failures


def certificate_from_saturation(result: SaturationResult) -> ClosureCertificate:
    """Certificate of full coverage from a recorded saturation."""
    builder = result.builder
    if builder is None:
        raise ClosureError("The saturation was not recorded.")
    basis = result.basis
    sig = basis.signature
    for mono in sig.monomials(basis.cap):
        target = Element.monomial(sig, mono)
        if not basis.contains(target):
            raise CoverageIncomplete(
                f"Saturation ({result.status.value}, dim {basis.dimension}) does not reach every monomial.",
                context={"dimension": basis.dimension, "status": result.status.value},
            )
        prov = basis.express(target)
        steps = sorted(prov)
        builder.cover(mono, builder.combine(steps, [prov[s] for s in steps]))
    return builder.build()


@dataclass
class CenterReport:
    checked: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def center_stability(sig: AlgebraSignature, pool: Sequence[EndoMap], elements: Sequence[Element]) -> CenterReport:
    """Images of central elements under the pool stay central."""
    report = CenterReport()
    for f in elements:
        if f.signature != sig:
            raise SignatureMismatch("Elements must live in the given signature.")
        if not is_central(f):
            continue
        for m in pool:
            report.checked += 1
            image = apply_endomorphism(m, f)
            if not is_central(image):
                report.failures.append((m.name, str(f)))
    return report


def commutator_span(sig: AlgebraSignature, degree: int) -> SpanBasis:
    """Span of the commutators of all monomials of degree <= `degree`."""
    monomials = [Element.monomial(sig, m) for m in sig.monomials(degree)]
    basis = SpanBasis(sig, None)
    for i, f in enumerate(monomials):
        for g in monomials[i + 1:]:
            c = commutator(f, g)
            if not c.is_zero():
                basis.insert(c)
    return basis
