"""``zxflow`` command line.

Exit codes: 0 ok, 1 failed check, 2 no flow found, 3 over the oracle wire
cap, 4 unreadable input.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
from pathlib import Path
from typing import Callable, Optional

from .circuit import QasmError, dense, emit_qasm, parse_qasm
from .diagram import Diagram, validate
from .extract import ExtractionError, extract
from .flow import ZXFlow, find_zx_flow, focus, verify_zx_flow
from .oracle import DEFAULT_TOL, DEFAULT_WIRE_CAP, OracleSizeError, equal_up_to_scalar, evaluate
from .rewrite import write_trace
from .simplify import make_graph_like, skeletonize
from .webs import WebMode, classify, format_web, web_basis

OK, FAILED, NOT_FOUND, TOO_BIG, BAD_INPUT = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc


def _load_diagram(path: str) -> Diagram:
    try:
        d = Diagram.from_json(_read(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a diagram ({exc})") from exc
    bad = validate(d)
    if bad:
        raise InputError(f"{path}: invalid diagram: {bad[0]}")
    return d


def _load_flow(path: str) -> ZXFlow:
    try:
        return ZXFlow.from_json(_read(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a flow ({exc})") from exc


def _cmd_validate(a, out) -> int:
    try:
        d = Diagram.from_json(_read(a.file))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{a.file}: not a diagram ({exc})") from exc
    bad = validate(d)
    for line in bad:
        print(line, file=out)
    if not bad:
        print(f"ok: {len(d.nodes)} nodes, {len(d.wires)} wires", file=out)
    return FAILED if bad else OK


def _cmd_webs(a, out) -> int:
    d = _load_diagram(a.file)
    mode = WebMode.SEMIWEBS if a.semiwebs else WebMode.WEBS
    for i, w in enumerate(web_basis(d, mode)):
        line = f"{i}: {format_web(d, w)}"
        if a.classify and mode is WebMode.WEBS:
            line += f" class={classify(d, w).value}"
        print(line, file=out)
    return OK


def _cmd_flow_find(a, out) -> int:
    d = _load_diagram(a.file)
    f = find_zx_flow(d, strong=a.strong)
    if f is None:
        print("no flow found", file=sys.stderr)
        return NOT_FOUND
    _write(a.output, f.to_json() + "\n")
    print("order: " + " ".join(map(str, f.order)), file=out)
    return OK


def _check(d: Diagram, f: ZXFlow, out) -> int:
    ok, why = verify_zx_flow(d, f)
    for line in why:
        print(line, file=out)
    if ok:
        print("ok", file=out)
    return OK if ok else FAILED


def _cmd_flow_check(a, out) -> int:
    d, f = _load_diagram(a.file), _load_flow(a.flow)
    if a.strong and not f.strong:
        print("flow is not marked strong", file=out)
        return FAILED
    return _check(d, f, out)


def _cmd_focus(a, out) -> int:
    d, f = _load_diagram(a.file), _load_flow(a.flow)
    if _check(d, f, io.StringIO()) != OK:
        print("input flow does not verify", file=out)
        return FAILED
    g, rep = focus(d, f)
    _write(a.output, g.to_json() + "\n")
    print(f"flows modified: {rep.flows_modified}, logicals modified: {rep.logicals_modified}", file=out)
    return OK


def _cmd_simplify(a, out) -> int:
    d, f = _load_diagram(a.file), _load_flow(a.flow)
    if _check(d, f, io.StringIO()) != OK:
        print("input flow does not verify", file=out)
        return FAILED
    if a.skeleton:
        rw, g = skeletonize(d, f)
    else:
        rw = make_graph_like(d, f)
        g = rw.f
    _write(a.output, rw.d.to_json() + "\n")
    _write(a.flow_out, g.to_json() + "\n")
    if a.log:
        _write(a.log, write_trace(rw.steps))
    print(f"{len(rw.steps)} steps, {len(rw.d.spiders())} spiders", file=out)
    return OK


def _cmd_extract(a, out) -> int:
    d, f = _load_diagram(a.file), _load_flow(a.flow)
    try:
        c = extract(d, f)
    except ExtractionError as exc:
        print(f"extraction failed: {exc}", file=out)
        return FAILED
    gates = c.gates()
    _write(a.output, emit_qasm(gates, f"{len(c.exps)} pauli exponentials"))
    print(f"{len(gates.gates)} gates, {gates.count('rz')} rz", file=out)
    return OK


def _cmd_verify(a, out) -> int:
    d = _load_diagram(a.file)
    try:
        c = parse_qasm(_read(a.circuit))
    except QasmError as exc:
        raise InputError(f"{a.circuit}: {exc}") from exc
    if c.n_qubits != len(d.outputs) or len(c.inputs) != len(d.inputs):
        print("circuit and diagram have different boundaries", file=out)
        return FAILED
    try:
        m = evaluate(d, a.cap)
    except OracleSizeError as exc:
        print(str(exc), file=sys.stderr)
        return TOO_BIG
    lam = equal_up_to_scalar(m, dense(c), a.tol)
    if lam is None:
        print("not proportional", file=out)
        return FAILED
    print(f"proportional: {lam.real:.9f}{lam.imag:+.9f}j", file=out)
    return OK


def _cmd_gen_corpus(a, out) -> int:
    from .corpus import standard_corpus

    seed = a.seed if a.seed is not None else int(os.environ.get("ZXFLOW_SEED", "0"))
    root = Path(a.outdir)
    try:
        root.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create {root}: {exc.strerror}") from exc
    items = standard_corpus(seed, a.size, a.max_wires)
    for it in items:
        _write(str(root / f"{it.name}.json"), it.diagram.to_json() + "\n")
        if it.flow is not None:
            _write(str(root / f"{it.name}.flow.json"), it.flow.to_json() + "\n")
    print(f"{len(items)} diagrams, seed {seed}", file=out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zxflow", description="Pauli webs, ZX-flow, rewriting and extraction.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check diagram well-formedness")
    s.add_argument("file")
    s.set_defaults(run=_cmd_validate)

    s = sub.add_parser("webs", help="print a basis of webs or semiwebs")
    s.add_argument("file")
    s.add_argument("--semiwebs", action="store_true")
    s.add_argument("--classify", action="store_true")
    s.set_defaults(run=_cmd_webs)

    s = sub.add_parser("flow-find", help="search for a ZX-flow")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--strong", action="store_true")
    s.set_defaults(run=_cmd_flow_find)

    s = sub.add_parser("flow-check", help="verify a ZX-flow")
    s.add_argument("file")
    s.add_argument("flow")
    s.add_argument("--strong", action="store_true")
    s.set_defaults(run=_cmd_flow_check)

    s = sub.add_parser("focus", help="focus a ZX-flow")
    s.add_argument("file")
    s.add_argument("flow")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(run=_cmd_focus)

    s = sub.add_parser("simplify", help="flow-preserving simplification")
    s.add_argument("file")
    s.add_argument("flow")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("-f", "--flow-out", required=True)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--skeleton", action="store_true")
    mode.add_argument("--graph-like", action="store_true")
    s.add_argument("--log")
    s.set_defaults(run=_cmd_simplify)

    s = sub.add_parser("extract", help="extract a circuit")
    s.add_argument("file")
    s.add_argument("flow")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(run=_cmd_extract)

    s = sub.add_parser("verify", help="compare a diagram with a circuit")
    s.add_argument("file")
    s.add_argument("circuit")
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)
    s.add_argument("--cap", type=int, default=DEFAULT_WIRE_CAP)
    s.set_defaults(run=_cmd_verify)

    s = sub.add_parser("gen-corpus", help="write a seeded test corpus (seed from ZXFLOW_SEED)")
    s.add_argument("outdir")
    s.add_argument("--size", type=int, default=40)
    s.add_argument("--max-wires", type=int, default=12)
    s.add_argument("--seed", type=int)
    s.set_defaults(run=_cmd_gen_corpus)
    return p


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    p = build_parser()
    try:
        a = p.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    run: Callable = a.run
    try:
        return run(a, out)
    except InputError as exc:
        print(str(exc), file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
