from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

import config
import debug
from algebra.element import Element
from algebra.exception import AlgebraError
from algebra.scalar import ScalarField
from algebra.signature import AlgebraSignature
from closure.certificate import ClosureCertificate, verify_certificate
from closure.exception import CertificateFormatError, CoverageIncomplete
from closure.saturation import saturate
from closure.scripted import scripted_closure
from config import Configuration, EngineConfiguration, OutputFormat, PoolPreset
from deskcheck.dispatcher import Dispatcher
from deskcheck.registry import DeskChecks, resolve
from expression.parser import parse_element
from filtration.exception import InvalidFiltration
from filtration.graded import dimension_text, gr_dimension_check, graded_report
from filtration.growth import growth_sequence
from filtration.weights import WeightFiltration, leading_form, validate_filtration, weight_degree
from morphism.pools import pool_preset
from util.console import Color, banner, box, bullet, pretty, table, title

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Errors that describe a negative verdict rather than a malformed request.
VERDICT_ERRORS = (InvalidFiltration, CoverageIncomplete, CertificateFormatError)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="poly:2", help='Signature, e.g. poly:2, weyl:1 or "poly:1 x weyl:1".')
    common.add_argument("--field", default="q", help="q for the rationals or f<p> for F_p (default: q).")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    common.add_argument("--workers", type=int, default=1, help="Threads for map applications and verification.")
    common.add_argument("--max-rounds", type=int, default=64, help="Saturation round limit.")
    common.add_argument("--trace", default=None, help="Append the raw engine trace to this file.")
    common.add_argument("--verbose", action="store_true", help="Log phase summaries.")
    common.add_argument("--debug", action="store_true", help="Log every step.")

    ap = argparse.ArgumentParser(
        prog="aut-stable",
        description="Exact computations in polynomial, Laurent and Weyl algebras with replayable closure certificates.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="Normalize an expression.")
    p.add_argument("--expr", required=True)

    p = sub.add_parser("closure", parents=[common], help="Write a scripted closure certificate.")
    p.add_argument("--seed", required=True)
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--out", default=None, help="Certificate path; standard output when omitted.")

    p = sub.add_parser("verify", parents=[common], help="Replay a closure certificate.")
    p.add_argument("--cert", required=True)

    p = sub.add_parser("saturate", parents=[common], help="Close the span of seeds under an automorphism pool.")
    p.add_argument("--seed", action="append", required=True, help="Seed element; repeat for several.")
    p.add_argument("--pool", choices=[preset.value for preset in PoolPreset], default=PoolPreset.STANDARD.value)
    p.add_argument("--cap", type=int, required=True)

    p = sub.add_parser("gr", parents=[common], help="Validate a weight filtration and inspect gr.")
    p.add_argument("--weights", default="bernstein", help='Comma list of integers, "bernstein" or "trivial".')
    p.add_argument("--expr", default=None, help="Report the weight degree and leading form of this element.")
    p.add_argument("--cap", type=int, default=None, help="Tabulate dim gr_i for i <= cap.")

    p = sub.add_parser("tensor-gr-check", parents=[common], help="Compare gr of a tensor product with the convolution.")
    p.add_argument("--weights", default="bernstein")
    p.add_argument("--split", type=int, default=1, help="The first SPLIT atoms form A, the rest B.")
    p.add_argument("--cap", type=int, default=8)

    p = sub.add_parser("growth", parents=[common], help="dim V^k and the GK degree estimate.")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--gens", nargs="*", default=None, help="Spanning set of V; defaults to 1 and the generators.")

    p = sub.add_parser("deskcheck", parents=[common], help="Run the named desk checks (all by default).")
    p.add_argument("names", nargs="*")
    p.add_argument("--list", action="store_true", help="List the available checks.")

    return ap


# -- helpers -----------------------------------------------------------------


def _signature(args: argparse.Namespace) -> AlgebraSignature:
    return AlgebraSignature.from_text(args.algebra, ScalarField.from_label(args.field).characteristic)


def _configuration(args: argparse.Namespace) -> Configuration:
    engine = EngineConfiguration(workers=max(1, args.workers), max_rounds=args.max_rounds)
    return Configuration(engine=engine, output=OutputFormat(args.format), name=args.command)


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _json(args: argparse.Namespace) -> bool:
    return args.format == OutputFormat.JSON.value


def _emit_json(payload: Any) -> None:
    print(json.dumps(payload, indent=2, ensure_ascii=False))


def _report_error(e: Exception) -> None:
    if isinstance(e, AlgebraError):
        print(f"error: {e.console_message}", file=sys.stderr)
        if e.hint:
            print(f"hint: {e.hint}", file=sys.stderr)
    else:
        print(f"error: {e}", file=sys.stderr)


def _color() -> bool:
    return sys.stdout.isatty()


# -- commands ----------------------------------------------------------------


def cmd_parse(args: argparse.Namespace) -> int:
    sig = _signature(args)
    f = parse_element(args.expr, sig)
    if _json(args):
        _emit_json({"algebra": sig.text(), "field": sig.field.label, "element": str(f)})
    else:
        print(f)
    return EXIT_OK


def cmd_closure(args: argparse.Namespace) -> int:
    sig = _signature(args)
    seed = parse_element(args.seed, sig)
    cert = scripted_closure(seed, args.cap)
    text = cert.dumps()
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK

    Path(args.out).write_text(text, encoding="utf-8")
    if _json(args):
        _emit_json({"out": args.out, "steps": len(cert.steps), "covered": len(cert.coverage)})
    else:
        pretty(box([
            f"Seed: {seed}",
            f"Algebra: {sig.text()} over {sig.field.label}",
            f"Cap: {cert.cap}",
            f"Steps: {len(cert.steps)}",
            f"Covered monomials: {len(cert.coverage)}",
            f"Written to {args.out}",
        ]))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cert = ClosureCertificate.loads(Path(args.cert).read_text(encoding="utf-8"))
    verdict = verify_certificate(cert, workers=args.workers)
    if _json(args):
        _emit_json(verdict.toJSON())
    elif verdict.ok:
        print(f"certificate ok: {len(cert.steps)} steps, {len(cert.coverage)} monomials of degree <= {cert.cap}")
    else:
        print(f"certificate rejected at step {verdict.failing_step} ({verdict.failure.value}): {verdict.reason}")
    return EXIT_OK if verdict.ok else EXIT_FAILED


def cmd_saturate(args: argparse.Namespace) -> int:
    sig = _signature(args)
    seeds = [parse_element(text, sig) for text in args.seed]
    pool = pool_preset(sig, args.pool)
    result = saturate(seeds, pool, args.cap)
    if _json(args):
        _emit_json(result.toJSON())
        return EXIT_OK

    pretty(
        title(f"Saturation of {', '.join(str(s) for s in seeds)} under '{args.pool}' (cap {args.cap})"),
        bullet(f"{result.status.value}, dim {result.dimension}"),
        bullet(f"{result.rounds} rounds, {result.blocked} images above the cap"),
        table(["pivot", "basis element"], [[i + 1, row] for i, row in enumerate(result.basis.rows())]),
    )
    return EXIT_OK


def cmd_gr(args: argparse.Namespace) -> int:
    sig = _signature(args)
    w = validate_filtration(WeightFiltration.parse(sig, args.weights))
    payload: dict[str, Any] = {
        "algebra": sig.text(),
        "weights": list(w.weights),
        "graded_algebra": w.graded_signature.text(),
        "valid": True,
    }
    ok = True
    if args.expr is not None:
        f = parse_element(args.expr, sig)
        payload["element"] = str(f)
        payload["weight_degree"] = weight_degree(w, f)
        payload["leading_form"] = str(leading_form(w, f))
    if args.cap is not None:
        report = graded_report(w, args.cap)
        payload["graded"] = report.toJSON()
        ok = report.ok

    if _json(args):
        _emit_json(payload)
        return EXIT_OK if ok else EXIT_FAILED

    parts = [
        title(f"Filtration ({w.text()}) on {sig.text()}"),
        bullet(f"valid; gr is {w.graded_signature.text()}"),
    ]
    if args.expr is not None:
        parts.append(bullet(f"deg {payload['element']} = {payload['weight_degree']}, leading form {payload['leading_form']}"))
    if args.cap is not None:
        graded = payload["graded"]
        parts.append(table(["i", "dim gr_i"], list(enumerate(graded["dims"]))))
        verdict = "domain" if ok else f"zero products in degrees {graded['zero_products']}"
        parts.append(bullet(f"{graded['domain_samples']} sampled products: {verdict}"))
    pretty(*parts)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_tensor_gr_check(args: argparse.Namespace) -> int:
    sig = _signature(args)
    if not 0 < args.split < len(sig.atoms):
        raise AlgebraError(
            f"--split {args.split} does not cut {sig.text()} into two factors.",
            hint=f"Use a value between 1 and {len(sig.atoms) - 1}.",
        )
    w = WeightFiltration.parse(sig, args.weights)
    sig_a = sig.with_atoms(sig.atoms[:args.split])
    sig_b = sig.with_atoms(sig.atoms[args.split:])
    wa = validate_filtration(WeightFiltration(sig_a, w.weights[:sig_a.size]))
    wb = validate_filtration(WeightFiltration(sig_b, w.weights[sig_a.size:]))
    report = gr_dimension_check(wa, wb, args.cap)

    if _json(args):
        _emit_json(report.toJSON())
    else:
        rows = [
            [r.degree, dimension_text(r.tensor), dimension_text(r.convolution), "ok" if r.ok else "MISMATCH"]
            for r in report.rows
        ]
        pretty(
            title(f"gr({report.left} x {report.right}) against gr({report.left}) * gr({report.right})"),
            table(["i", "tensor", "convolution", ""], rows),
            bullet("pass" if report.ok else "FAIL", color=(Color.GREEN if report.ok else Color.RED) if _color() else None),
        )
    return EXIT_OK if report.ok else EXIT_FAILED


def _default_generators(sig: AlgebraSignature) -> list[Element]:
    gens = [Element.one(sig)]
    for g in sig.generators:
        gens.append(Element.generator(sig, g.index))
        if g.invertible:
            gens.append(Element.generator(sig, g.index).inverse())
    return gens


def cmd_growth(args: argparse.Namespace) -> int:
    sig = _signature(args)
    if args.gens:
        gens = [parse_element(text, sig) for text in args.gens]
    else:
        gens = _default_generators(sig)
    report = growth_sequence(sig, gens, args.n)
    if _json(args):
        _emit_json(report.toJSON())
        return EXIT_OK

    degree = "undetermined" if report.degree is None else report.degree
    parts = [
        title(f"Growth of {sig.text()} from V = span({', '.join(str(g) for g in gens)})"),
        table(["k", "dim V^k"], list(enumerate(report.dims))),
        bullet(f"GK degree: {degree}"),
    ]
    if report.polynomial is not None:
        parts.append(bullet(f"dim V^n = {report.polynomial} for large n"))
    pretty(*parts)
    return EXIT_OK


def cmd_deskcheck(args: argparse.Namespace) -> int:
    if args.list:
        rows = [[c.value.name, c.value.description] for c in DeskChecks]
        if _json(args):
            _emit_json([c.value.toObject() for c in DeskChecks])
        else:
            pretty(table(["check", "about"], rows))
        return EXIT_OK

    try:
        checks = resolve(args.names)
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return EXIT_USAGE

    dispatcher = Dispatcher()
    for check in checks:
        dispatcher.queue_check(check)
    results = dispatcher.run_all()
    if _json(args):
        _emit_json([json.loads(r.toJSON()) for r in results])
    else:
        for r in results:
            print(r.toString(color=_color()))
        passed = sum(r.ok for r in results)
        pretty(banner(f"{passed}/{len(results)} desk checks passed", color=(Color.GREEN if passed == len(results) else Color.RED) if _color() else None))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAILED


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "parse": cmd_parse,
    "closure": cmd_closure,
    "verify": cmd_verify,
    "saturate": cmd_saturate,
    "gr": cmd_gr,
    "tensor-gr-check": cmd_tensor_gr_check,
    "growth": cmd_growth,
    "deskcheck": cmd_deskcheck,
}


def run_command(argv: Sequence[str]) -> int:
    """Run one command line; returns the exit code (0 ok, 1 failed verdict, 2 usage error)."""
    try:
        args = build_parser().parse_args(list(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args)
    previous = config.ACTIVE_CONFIG
    config.ACTIVE_CONFIG = _configuration(args)
    trace = debug.tracing(Path(args.trace)) if args.trace else contextlib.nullcontext()
    try:
        with trace:
            return COMMANDS[args.command](args)
    except VERDICT_ERRORS as e:
        _report_error(e)
        return EXIT_FAILED
    except AlgebraError as e:
        logger.debug("usage error", exc_info=True)
        _report_error(e)
        return EXIT_USAGE
    except OSError as e:
        _report_error(e)
        return EXIT_USAGE
    finally:
        config.ACTIVE_CONFIG = previous
