"""Command-line driver: parse, check, export and verify theories."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from .core.rewrite import RewriteError, normalize
from .core.signature import AxiomDecl, CstDecl, CstDefn, ThmDefn, TyOpDecl
from .core.terms import as_poly_term
from .coq_export import ARITH_NOTATIONS, render_theory
from .dkimport import DkSyntaxError, EntryDecodeError, load_sdk
from .kernel.errors import KernelError
from .kernel.proofs import Conv
from .ot_check import ArticleError, aconv, alpha_key, run_article
from .ot_export import ExportError, InternalDerivationError, translate_theory, write_article

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("sttx")


class UsageError(Exception):
    pass


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from exc


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` to a temporary file beside ``path``, then rename it over ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _entry_kind(e) -> str:
    match e:
        case TyOpDecl():
            return "type operator"
        case CstDecl():
            return "constant"
        case CstDefn():
            return "definition"
        case AxiomDecl():
            return "axiom"
        case ThmDefn():
            return "theorem"
    return "entry"


def _load(path: Path):
    """Decoded theory, or an error message positioned at file:line."""
    text = _read(path)
    try:
        return load_sdk(text), None
    except DkSyntaxError as exc:
        return None, f"{path}:{exc.line}:{exc.column}: syntax error: {exc.args[0].split(': ', 1)[-1]}"
    except EntryDecodeError as exc:
        kind = type(exc.cause).__name__
        pos = getattr(exc.cause, "position", None)
        where = f" at {list(pos)}" if pos and f"at {list(pos)}" not in str(exc.cause) else ""
        return None, f"{path}:{exc.line}: {exc.name}: {kind}{where}: {exc.cause}"


def _out_path(src: Path, out: str | None, suffix: str, many: bool) -> Path:
    if out is None:
        return src.with_suffix(suffix)
    o = Path(out)
    if many or o.is_dir() or out.endswith(os.sep):
        return o / (src.stem + suffix)
    return o


def _conv_nodes(p):
    """Conv nodes of a proof, outermost first."""
    stack = [p]
    while stack:
        q = stack.pop()
        if isinstance(q, Conv):
            yield q
        for child in vars(q).values():
            if type(child).__module__ == Conv.__module__:
                stack.append(child)


def _dump_traces(theory, out) -> None:
    for name, thm in theory.theorems.items():
        for node in _conv_nodes(thm.proof):
            target = as_poly_term(node.target)
            nf, trace = normalize(target, theory.sig)
            steps = " ".join(str(s) for s in trace) or "(already normal)"
            print(f"  {name}: {target}\n    ↪ {nf}\n    steps: {steps}", file=out)


# -- subcommands -------------------------------------------------------------------------


def cmd_check(args, dump_ast: bool = False) -> int:
    status = EXIT_OK
    for p in map(Path, args.paths):
        theory, err = _load(p)
        if err:
            print(err, file=sys.stderr)
            status = EXIT_FAIL
            continue
        print(f"{p}: {len(theory.sig)} entries OK")
        for e in theory.sig:
            print(f"  OK {e.name} ({_entry_kind(e)})")
            if dump_ast:
                _dump_entry(e)
        if args.dump_trace:
            _dump_traces(theory, sys.stdout)
    return status


def _dump_entry(e) -> None:
    match e:
        case TyOpDecl(op):
            print(f"    type operator of arity {op.arity}")
        case CstDecl(_, ty):
            print(f"    : {ty}")
        case CstDefn(_, ty, body):
            print(f"    : {ty}\n    := {body}")
        case AxiomDecl(_, prop):
            print(f"    ⊢ {prop}")
        case ThmDefn(_, prop, proof):
            print(f"    ⊢ {prop}\n    proof {proof}")


def cmd_import_dk(args) -> int:
    return cmd_check(args, dump_ast=True)


def cmd_export_ot(args) -> int:
    many = len(args.paths) > 1
    status = EXIT_OK
    for p in map(Path, args.paths):
        theory, err = _load(p)
        if err:
            print(err, file=sys.stderr)
            status = EXIT_FAIL
            continue
        name = p.stem
        try:
            plan = translate_theory(theory.sig, name, "define" if args.define else "axiomatize")
            text = write_article(plan)
        except (ExportError, InternalDerivationError, RewriteError) as exc:
            phase = getattr(exc, "phase", "translate")
            print(f"{p}: export failed in phase {phase}: {exc}", file=sys.stderr)
            status = EXIT_FAIL
            continue
        if not args.no_selfcheck:
            problem = _selfcheck(text, plan)
            if problem:
                print(f"{p}: article does not verify, not written: {problem}", file=sys.stderr)
                status = EXIT_FAIL
                continue
        out = _out_path(p, args.out, ".art", many)
        write_atomic(out, text)
        n = len(plan.exports)
        print(f"{p}: wrote {out} ({n} theorem{'' if n == 1 else 's'})")
        if args.dump_trace:
            _dump_traces(theory, sys.stdout)
    return status


def _selfcheck(text: str, plan) -> str | None:
    try:
        result = run_article(text)
    except ArticleError as exc:
        return str(exc)
    exported = dict(result.exports)
    for e in plan.exports:
        got = exported.get(e.name)
        if got is None:
            return f"{e.name} was not exported"
        same_hyps = {alpha_key(h) for h in got.hyps} == {alpha_key(h) for h in e.sequent.hyps}
        if not same_hyps or not aconv(got.concl, e.sequent.concl):
            return f"{e.name}: the checker found {got}, the exporter claimed {e.sequent}"
    return None


def cmd_export_coq(args) -> int:
    many = len(args.paths) > 1
    status = EXIT_OK
    notations = ARITH_NOTATIONS if args.arith_notations else None
    for p in map(Path, args.paths):
        theory, err = _load(p)
        if err:
            print(err, file=sys.stderr)
            status = EXIT_FAIL
            continue
        text = render_theory(theory.sig, theory.theorems, p.stem, notations)
        out = _out_path(p, args.out, ".v", many)
        write_atomic(out, text)
        print(f"{p}: wrote {out}")
    return status


def cmd_verify_ot(args) -> int:
    status = EXIT_OK
    reports = []
    for p in map(Path, args.paths):
        text = _read(p)
        try:
            result = run_article(text)
        except ArticleError as exc:
            reports.append({"file": str(p), "status": "error", "error": type(exc).__name__,
                            "line": exc.line, "message": str(exc)})
            status = EXIT_FAIL
            continue
        for kind, items in (("theorem", result.exports), ("axiom", result.assumptions)):
            for name, seq in items:
                reports.append({"file": str(p), "kind": kind, "name": name,
                                "sequent": str(seq), "status": "ok"})
    if args.json:
        json.dump(reports, sys.stdout, ensure_ascii=False, indent=1)
        print()
    else:
        for r in reports:
            if r["status"] == "ok":
                print(f"{r['file']}\t{r['kind']}\t{r['name']}\t{r['sequent']}\tok")
            else:
                print(f"{r['file']}:{r['line']}: {r['error']}: {r['message']}", file=sys.stderr)
    return status


# -- entry point ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sttx", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true", help="log debugging output")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("paths", nargs="+", metavar="FILE")
        sp.add_argument("--dump-trace", action="store_true",
                        help="print normalization traces of conversion steps")
        sp.set_defaults(func=fn)
        return sp

    add("check", cmd_check, "parse, decode and kernel-check .sdk files")
    add("import-dk", cmd_import_dk, "like check, and print the decoded entries")
    sp = add("export-ot", cmd_export_ot, "export checked theories as OpenTheory articles")
    sp.add_argument("--out", help="output file, or directory when several inputs are given")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--axiomatize", action="store_true", default=True,
                      help="state connectives and definitions as axioms (default)")
    mode.add_argument("--define", action="store_true",
                      help="introduce connectives and definitions with defineConst")
    sp.add_argument("--no-selfcheck", action="store_true",
                    help="skip re-verifying the article before writing it")
    sp = add("export-coq", cmd_export_coq, "render checked theories as Coq source")
    sp.add_argument("--out", help="output file, or directory when several inputs are given")
    sp.add_argument("--arith-notations", action="store_true",
                    help="write eq as infix = and zero as 0")
    vp = sub.add_parser("verify-ot", help="check OpenTheory articles")
    vp.add_argument("paths", nargs="+", metavar="FILE")
    vp.add_argument("--json", action="store_true", help="machine-readable report")
    vp.set_defaults(func=cmd_verify_ot, dump_trace=False)
    return ap


def main(argv=None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sttx: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KernelError as exc:
        print(f"sttx: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
