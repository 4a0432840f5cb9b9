"""Command line front end.

Exit codes: 0 when the question was decided positively or output was
produced, 1 for a well-formed negative answer, 2 for usage or input errors.
Indices in all output are 1-based.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .cyclic_forms import NotSignPotentError, parse_tags, to_cyclic_normal_form
from .formats import (
    FormatError,
    format_pattern,
    load_pattern,
    pattern_document,
    realization_document,
    realization_from_document,
)
from .idem_builder import generate_idempotent
from .kpotent_builder import generate_kpotent
from .oracle import CapExceeded, EnumSpec, canonical_form, census, enumerate_patterns
from .realization import build_realization, is_ppo, verify_realization
from .reduction import expand, red
from .search import ALL, Lcg64, Sample
from .sign_algebra import default_kmax, potence_index
from .structure import frobenius_normal_form, strip_extraneous

LCG_HELP = (
    "Sampling draws one branch per cell with the 64-bit LCG "
    f"state = ({Lcg64.MULTIPLIER} * state + {Lcg64.INCREMENT}) mod 2^64, "
    "choosing option (state >> 33) mod (number of options); the state starts at --seed."
)

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class Output:
    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, doc: dict, text: str) -> None:
        if self.as_json:
            self.stream.write(json.dumps(doc, indent=2) + "\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _pattern(args, path=None):
    return load_pattern(_read(path or args.file), generalized=args.generalized)


def _one_based(seq):
    return [x + 1 for x in seq]


def _pair(p) -> str:
    return f"({p[0] + 1},{p[1] + 1})"


def _mode(args):
    if args.sample is not None:
        if args.sample < 1:
            raise UsageError("--sample needs a positive count")
        return Sample(args.sample, args.seed)
    return ALL


def cmd_check(args, out: Output) -> int:
    A = _pattern(args)
    doc = {"command": "check", "n": A.n}
    if not A.is_proper():
        doc.update(potent=False, k=None, reason="ambiguous entries")
        out.emit(doc, "pattern has ambiguous entries; not sign k-potent")
        return EXIT_NEGATIVE
    kmax = args.kmax or default_kmax(A.n)
    rep = potence_index(A, kmax)
    doc.update(potent=rep.potent, k=rep.k, powers_examined=rep.powers_examined, kmax=kmax)
    if not rep.potent:
        why = "powers became periodic without returning" if rep.period_entered else f"no k <= {kmax}"
        doc["reason"] = why
        out.emit(doc, f"not sign k-potent ({why})")
        return EXIT_NEGATIVE
    label = f"sign {rep.k}-potent" + (" (idempotent)" if rep.k == 1 else "")
    out.emit(doc, label)
    return EXIT_OK


def cmd_fnf(args, out: Output) -> int:
    A = _pattern(args)
    form = frobenius_normal_form(A)
    F = form.apply(A)
    doc = {
        "command": "fnf",
        "perm": _one_based(form.perm),
        "block_sizes": list(form.block_sizes),
        "kinds": [k.value for k in form.kinds],
        "matrix": pattern_document(F),
    }
    text = (
        f"permutation: {' '.join(map(str, doc['perm']))}\n"
        f"blocks: {' '.join(f'{s}:{k}' for s, k in zip(doc['block_sizes'], doc['kinds']))}\n"
        f"{format_pattern(F)}"
    )
    out.emit(doc, text)
    return EXIT_OK


def cmd_reduce(args, out: Output) -> int:
    A = _pattern(args)
    R = red(A)
    doc = {"command": "reduce", "class_sizes": list(R.class_sizes), "matrix": pattern_document(R.entries)}
    out.emit(doc, f"class sizes: {' '.join(map(str, R.class_sizes))}\n{format_pattern(R.entries)}")
    return EXIT_OK


def cmd_cnf(args, out: Output) -> int:
    A = _pattern(args)
    try:
        form, T = to_cyclic_normal_form(A)
    except NotSignPotentError as exc:
        block = None if exc.block is None else exc.block + 1
        msg = str(exc)
        if block is not None:
            msg = f"diagonal block {block} is not cyclic; the pattern is not sign k-potent"
        out.emit({"command": "cnf", "potent": False, "block": block, "reason": msg}, msg)
        return EXIT_NEGATIVE
    tags = [str(t) for t in form.block_types]
    doc = {
        "command": "cnf",
        "potent": True,
        "perm": _one_based(form.perm),
        "signature": [s.symbol for s in form.signature],
        "blocks": tags,
        "class_sizes": [list(c) for c in form.class_sizes],
        "k": form.k,
        "matrix": pattern_document(T),
    }
    text = (
        f"permutation: {' '.join(map(str, doc['perm']))}\n"
        f"signature: {''.join(doc['signature'])}\n"
        f"blocks: {','.join(tags)}  (k = {form.k})\n"
        f"class sizes: {' '.join('/'.join(map(str, c)) for c in form.class_sizes)}\n"
        f"{format_pattern(T)}"
    )
    out.emit(doc, text)
    return EXIT_OK


def _sizes(text):
    try:
        sizes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --expand list {text!r}") from exc
    return sizes


def cmd_gen_idem(args, out: Output) -> int:
    sizes = _sizes(args.expand) if args.expand else None
    if sizes is not None and len(sizes) != len(args.diag.strip()):
        raise UsageError("--expand needs one class size per diagonal entry")
    run = generate_idempotent(args.diag, _mode(args))
    pats = []
    for A in run:
        pats.append(expand(A, sizes) if sizes else A)
    doc = {
        "command": "gen-idem",
        "diag": args.diag,
        "count": len(pats),
        "patterns": [pattern_document(A) for A in pats],
    }
    out.emit(doc, "\n\n".join(format_pattern(A) for A in pats) or "(no patterns)")
    return EXIT_OK


def cmd_gen_kpotent(args, out: Output) -> int:
    try:
        tags = parse_tags(args.blocks)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    run = generate_kpotent(tags, args.strategy, _mode(args))
    items = list(run)
    doc = {
        "command": "gen-kpotent",
        "blocks": [str(t) for t in tags],
        "strategy": run.strategy,
        "k": run.k,
        "count": len(items),
        "patterns": [dict(pattern_document(p.matrix), index=p.index) for p in items],
    }
    out.emit(doc, "\n\n".join(format_pattern(p.matrix) for p in items) or "(no patterns)")
    return EXIT_OK


def _potent_k(A, kmax=None):
    if not A.is_proper():
        return None
    return potence_index(A, kmax).k


def cmd_allows(args, out: Output) -> int:
    A = _pattern(args)
    k = _potent_k(A, args.kmax)
    if k is None:
        out.emit({"command": "allows", "potent": False, "allows": False, "k": None},
                 "not sign k-potent; the question does not apply")
        return EXIT_NEGATIVE
    S, _ = strip_extraneous(A)
    report = is_ppo(S) if S.n else None
    violations = []
    if report is not None and not report:
        # map back to blocks of the stripped pattern, reported 1-based
        violations = [list(_one_based(p)) for p in report.violations]
    doc = {"command": "allows", "potent": True, "k": k, "allows": not violations, "violations": violations}
    if violations:
        pairs = ", ".join(_pair((a - 1, b - 1)) for a, b in violations)
        out.emit(doc, f"k-potent but does NOT allow: PPO violation {pairs}\nk = {k}")
        return EXIT_NEGATIVE
    if args.realize:
        B = build_realization(A)
        Path(args.realize).write_text(json.dumps(realization_document(B, k, verify_realization(B, A, k))) + "\n")
        doc["realization"] = args.realize
    out.emit(doc, f"k-potent and allows k-potence\nk = {k}")
    return EXIT_OK


def cmd_realize(args, out: Output) -> int:
    A = _pattern(args)
    k = _potent_k(A, args.kmax)
    if k is None:
        sys.stderr.write("not sign k-potent; no realization\n")
        return EXIT_NEGATIVE
    report = is_ppo(A)
    if not report:
        pairs = ", ".join(_pair(p) for p in report.violations)
        sys.stderr.write(f"does not allow {k}-potence: PPO violation {pairs}\n")
        return EXIT_NEGATIVE
    B = build_realization(A)
    doc = realization_document(B, k, verify_realization(B, A, k))
    text = json.dumps(doc, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    sys.stdout.write(text + "\n")
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    A = _pattern(args)
    try:
        doc = json.loads(_read(args.realization))
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid realization JSON: {exc}") from exc
    B, k = realization_from_document(doc)
    if args.k is not None:
        k = args.k
    ok = verify_realization(B, A, k)
    out.emit({"command": "verify", "k": k, "verified": ok},
             f"verified: B^{k + 1} = B and sign(B) = A" if ok else "NOT verified")
    return EXIT_OK if ok else EXIT_NEGATIVE


_PRED = {"idem": "idempotent", "idempotent": "idempotent", "kpotent": "kpotent",
         "potent": "potent_any", "potent_any": "potent_any"}


def cmd_enumerate(args, out: Output) -> int:
    diag = tuple(args.diag) if args.diag else None
    shape = "upper" if (args.shape == "upper" or diag) else "full"
    spec = EnumSpec(args.n, shape, _PRED[args.predicate], k=args.k, diag=diag, kmax=args.kmax)
    if args.census:
        c = census(spec, jobs=args.jobs)
        out.emit({"command": "enumerate", "total": c.total, "classes": c.classes},
                 f"total: {c.total}\nclasses: {c.classes}")
        return EXIT_OK
    pats = list(enumerate_patterns(spec, jobs=args.jobs))
    doc = {"command": "enumerate", "count": len(pats), "patterns": [pattern_document(A) for A in pats]}
    out.emit(doc, "\n\n".join(format_pattern(A) for A in pats) or "(no patterns)")
    return EXIT_OK


def cmd_equiv(args, out: Output) -> int:
    A, B = _pattern(args, args.first), _pattern(args, args.second)
    if A.n != B.n:
        same, ca, cb = False, None, None
    else:
        ca, cb = canonical_form(A), canonical_form(B)
        same = ca == cb
    doc = {
        "command": "equiv",
        "equivalent": same,
        "canonical": [pattern_document(ca) if ca else None, pattern_document(cb) if cb else None],
    }
    out.emit(doc, "equivalent" if same else "not equivalent")
    return EXIT_OK if same else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for --sample (see the LCG note)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    common.add_argument("--kmax", type=int, default=None, help="largest k tried by potence searches")
    common.add_argument("--generalized", action="store_true", help="admit '#' entries in input")

    p = argparse.ArgumentParser(
        prog="signpotent",
        description="Sign k-potent sign patterns: recognition, construction, realization.",
        epilog=LCG_HELP,
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, file_arg=True):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text, epilog=LCG_HELP)
        if file_arg:
            sp.add_argument("file", help="pattern file (text rows or JSON), '-' for stdin")
        sp.set_defaults(func=fn)
        return sp

    add("check", cmd_check, "potence index of a pattern")
    add("fnf", cmd_fnf, "Frobenius normal form")
    add("reduce", cmd_reduce, "coarsest block partition and reduced matrix")
    add("cnf", cmd_cnf, "cyclic normal form")

    sp = add("gen-idem", cmd_gen_idem, "generate reduced sign idempotent patterns", file_arg=False)
    sp.add_argument("--diag", required=True, help="diagonal as a string over 0 and +, e.g. +0+++")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true", help="every pattern (default)")
    g.add_argument("--sample", type=int, help="draw this many patterns")
    sp.add_argument("--expand", help="class sizes n1,n2,... to blow each pattern up")

    sp = add("gen-kpotent", cmd_gen_kpotent, "generate sign k-potent patterns in cyclic normal form",
             file_arg=False)
    sp.add_argument("--blocks", required=True, help="diagonal block types, e.g. P2,0,P2,Q1")
    sp.add_argument("--strategy", choices=("single", "single_pass", "filtered"), default="filtered")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true", help="every pattern (default)")
    g.add_argument("--sample", type=int, help="draw this many patterns")

    sp = add("allows", cmd_allows, "decide whether a sign k-potent pattern allows k-potence")
    sp.add_argument("--realize", metavar="OUT.json", help="also write a realization")

    sp = add("realize", cmd_realize, "exact rational realization B with B^(k+1) = B")
    sp.add_argument("--out", metavar="OUT.json", help="also write the realization here")

    sp = add("verify", cmd_verify, "re-check a realization file against a pattern")
    sp.add_argument("realization", help="realization JSON")
    sp.add_argument("--k", type=int, help="override k from the realization file")

    sp = add("enumerate", cmd_enumerate, "brute-force enumeration of small patterns", file_arg=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--shape", choices=("full", "upper"), default="full")
    sp.add_argument("--predicate", choices=sorted(_PRED), default="idem")
    sp.add_argument("--k", type=int, help="exact potence index for --predicate kpotent")
    sp.add_argument("--diag", help="fixed diagonal for the upper shape, e.g. +0+")
    sp.add_argument("--census", action="store_true", help="only count patterns and equivalence classes")

    sp = add("equiv", cmd_equiv, "equivalence under permutation, signature, negation, transposition",
             file_arg=False)
    sp.add_argument("first")
    sp.add_argument("second")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.json)
    try:
        return args.func(args, out)
    except (UsageError, FormatError, CapExceeded, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
