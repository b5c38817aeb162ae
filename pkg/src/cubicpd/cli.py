"""Command-line entry point.

Exit status: 0 when every assertion or bound holds, 1 when one fails,
2 for usage, parse or input errors.  The default characteristic for
ad-hoc ideals can be set with the ``CUBICPD_CHAR`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from collections import Counter
from importlib import resources
from pathlib import Path

from . import claims as _claims
from . import stress as _stress
from .ideals import Ideal, colon, intersect, unmixed_part
from .invariants import betti, dim, free_resolution, height, multiplicity, pd
from .linkage import LinkPreconditionError, link, verify_link_properties
from .polyring import FieldSpec, ParseError, PolyRing

__all__ = ["main", "build_parser", "ideal_file_parse", "corpus_files"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHAR_ENV = "CUBICPD_CHAR"

ideal_file_parse = _claims.ideal_file_parse


class UsageError(Exception):
    pass


def corpus_files() -> list[Path]:
    """The claim files shipped with the package."""
    root = resources.files("cubicpd") / "corpus"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".clm"))


# -- input handling ----------------------------------------------------------
def _char(args) -> int | None:
    if args.char is not None:
        return args.char
    env = os.environ.get(CHAR_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{CHAR_ENV} must be an integer, got {env!r}") from None
    return None


def _infer_vars(texts) -> list[str]:
    names: list[str] = []
    for t in texts:
        for m in re.finditer(r"[A-Za-z_][A-Za-z_0-9]*", t):
            if m.group(0) not in names:
                names.append(m.group(0))
    return names


def _split_generators(text: str) -> list[str]:
    """Split ``"f, g, h"`` at top-level commas."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def _operands(args, need: int | None = None) -> tuple[PolyRing, list[Ideal], list[str]]:
    """Ideals from ``--ideal`` strings or from an ideal file."""
    char = _char(args)
    if args.file and args.ideal:
        raise UsageError("give either an ideal file or --ideal, not both")
    if args.file:
        try:
            text = Path(args.file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
        R, env = ideal_file_parse(text, char=char)
        if args.use:
            missing = [n for n in args.use if n not in env]
            if missing:
                raise UsageError(f"no binding named {', '.join(missing)} in {args.file}")
            names = list(args.use)
        else:
            names = list(env)
            if need is not None:
                names = names[-need:]
        ideals = [env[n] for n in names]
    elif args.ideal:
        gens = [_split_generators(t) for t in args.ideal]
        variables = args.vars.replace(",", " ").split() if args.vars else _infer_vars(sum(gens, []))
        if not variables:
            raise UsageError("cannot infer ring variables; pass --vars")
        R = PolyRing(variables, FieldSpec.from_char(32003 if char is None else char))
        ideals = [Ideal(R, g) for g in gens]
        names = [f"I{i + 1}" for i in range(len(ideals))]
    else:
        raise UsageError("no ideal given: use --ideal or an ideal file")
    if need is not None and len(ideals) < need:
        raise UsageError(f"this command needs {need} ideals, got {len(ideals)}")
    return R, ideals, names


# -- output ------------------------------------------------------------------
class _Out:
    def __init__(self, mode: str, command: str, stream=None):
        self.mode = mode
        self.command = command
        self.stream = stream or sys.stdout

    def text(self, s: str = ""):
        if self.mode == "text":
            print(s, file=self.stream)

    def record(self, status: str, **payload):
        if self.mode == "json-lines":
            rec = {"command": self.command, "status": status}
            rec.update(payload)
            print(json.dumps(rec, sort_keys=False), file=self.stream)


def _gens_text(I: Ideal) -> list[str]:
    """Minimal generators by degree, then by decreasing leading monomial."""
    if I.is_zero():
        return []
    gens = sorted(I.minimal_generators(), key=lambda g: (g.total_degree(), -g.lead_key))
    return [g.format() for g in gens]


def _ideal_text(I: Ideal) -> str:
    return "ideal(" + ", ".join(_gens_text(I)) + ")"


# -- commands ------------------------------------------------------------------
def cmd_gb(args, out: _Out) -> int:
    R, (I,), _ = _operands(args, 1)
    G = I.gb
    for g in G:
        out.text(g.format())
    out.record("ok", ring=repr(R), basis=[g.format() for g in G])
    return EXIT_OK


def cmd_nf(args, out: _Out) -> int:
    if not args.poly:
        raise UsageError("nf needs at least one --poly")
    R, (I,), _ = _operands(args, 1)
    for ptext in args.poly:
        f = R.parse(ptext)
        r = I.reduce(f)
        out.text(r.format())
        out.record("ok", poly=f.format(), normal_form=r.format(), member=r.is_zero())
    return EXIT_OK


def _invariants_of(I: Ideal) -> dict:
    if I.is_unit():
        return {"unit": True, "dim": -1, "ht": I.ring.nvars}
    B = betti(I)
    H = I.hilbert
    p = B.pd
    return {"dim": dim(I), "ht": height(I), "e": multiplicity(I), "pd": p,
            "depth": I.ring.nvars - p, "cm": p == height(I), "hilbert": H.format(),
            "totals": B.totals(), "betti": [list(t) for t in B.triples()], "_table": B.format()}


def cmd_invariants(args, out: _Out) -> int:
    R, ideals, names = _operands(args)
    for name, I in zip(names, ideals):
        inv = _invariants_of(I)
        table = inv.pop("_table", None)
        if inv.get("unit"):
            out.text(f"{name}: unit ideal")
        else:
            out.text(f"{name} = {_ideal_text(I)}")
            out.text(f"  dim {inv['dim']}  ht {inv['ht']}  e {inv['e']}  pd {inv['pd']}  depth {inv['depth']}"
                     f"  {'Cohen-Macaulay' if inv['cm'] else 'not Cohen-Macaulay'}")
            out.text(f"  Hilbert series {inv['hilbert']}")
            out.text(f"  Betti {','.join(map(str, inv['totals']))}")
            out.text("\n".join("  " + ln for ln in table.splitlines()))
        out.record("ok", name=name, ideal=_gens_text(I), **inv)
    return EXIT_OK


def cmd_res(args, out: _Out) -> int:
    R, ideals, names = _operands(args)
    for name, I in zip(names, ideals):
        if I.is_unit():
            raise UsageError(f"{name} is the unit ideal; R/I is zero")
        F, B = free_resolution(I)
        out.text(f"{name}: minimal free resolution, ranks {' <- '.join(str(F.rank(i)) for i in range(F.length + 1))}")
        out.text(B.format())
        if args.maps:
            for i in range(1, F.length + 1):
                out.text(f"d{i}:")
                for row in F.matrix(i):
                    out.text("  [" + ", ".join(e.format() for e in row) + "]")
        out.record("ok", name=name, pd=B.pd, betti=[list(t) for t in B.triples()])
    return EXIT_OK


def _emit_ideal(out: _Out, label: str, I: Ideal, **extra):
    out.text(_ideal_text(I))
    out.record("ok", result=label, ideal=_gens_text(I), unit=I.is_unit(), **extra)


def cmd_colon(args, out: _Out) -> int:
    R, (I, J), (a, b) = _operands(args, 2)
    _emit_ideal(out, f"{a}:{b}", colon(I, J))
    return EXIT_OK


def cmd_intersect(args, out: _Out) -> int:
    R, ideals, names = _operands(args)
    if len(ideals) < 2:
        raise UsageError("intersect needs at least two ideals")
    K = ideals[0]
    for J in ideals[1:]:
        K = intersect(K, J)
    _emit_ideal(out, " & ".join(names), K)
    return EXIT_OK


def cmd_link(args, out: _Out) -> int:
    R, (C, J), (a, b) = _operands(args, 2)
    try:
        rec = link(C, J)
    except LinkPreconditionError as exc:
        raise UsageError(f"cannot link {b} by {a}: {exc}") from None
    out.text(f"L = {a}:{b} = {_ideal_text(rec.link)}")
    if rec.degenerate:
        out.text("degenerate link: L is the unit ideal")
    for k, v in rec.invariants.items():
        out.text(f"  {k} = {v}")
    status = EXIT_OK
    payload = {"link": _gens_text(rec.link), "degenerate": rec.degenerate, "invariants": rec.invariants}
    if args.check:
        rep = verify_link_properties(rec, seed=args.seed)
        out.text(rep.format())
        payload["checks"] = [{"name": n, "passed": ok, "detail": d} for n, ok, d in rep.checks]
        if not rep.passed:
            status = EXIT_FAIL
    out.record("ok" if status == EXIT_OK else "fail", **payload)
    return status


def cmd_unmixed(args, out: _Out) -> int:
    R, ideals, names = _operands(args)
    if len(ideals) not in (1, 2):
        raise UsageError("unmixed takes an ideal and optionally a complete intersection inside it")
    C = ideals[1] if len(ideals) == 2 else None
    _emit_ideal(out, f"unmixed({names[0]})", unmixed_part(ideals[0], C, seed=args.seed))
    return EXIT_OK


def cmd_verify(args, out: _Out) -> int:
    files = [Path(f) for f in args.files] or corpus_files()
    char = _char(args)
    status = EXIT_OK
    total_ok = total_bad = 0
    for path in files:
        try:
            text = path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        cf = _claims.parse_claims(text, char=char)
        rep = _claims.run_all(cf, args.filter, jobs=args.jobs, source=text, char=char)
        if args.filter and not rep.results:
            continue
        out.text(f"== {path}")
        out.text(rep.format())
        for rec in rep.records():
            out.record(rec.pop("status"), file=str(path), **rec)
        ok, bad = rep.counts()
        total_ok += ok
        total_bad += bad
        if not rep.passed:
            status = EXIT_FAIL
    if len(files) > 1:
        out.text(f"total: {total_ok} passed, {total_bad} failed")
    return status


def cmd_stress(args, out: _Out) -> int:
    cfg = _stress.TrialConfig(nvars=args.vars, char=_char(args) or 32003, trials=args.trials, seed=args.seed,
                              density=args.density, budget=args.budget or None, family=args.family)

    def progress(r):
        out.record(r.verdict, **r.as_dict())

    records, violations = _stress.run_trials(cfg, jobs=args.jobs, progress=progress)
    if args.out:
        _stress.write_csv(records, args.out)
    if args.generators:
        _stress.write_generators(records, args.generators, only_violations=not args.all_generators)
    counts: dict = {}
    for r in records:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    out.text(f"{len(records)} trials: " + ", ".join(f"{counts.get(v, 0)} {v}" for v in _stress.VERDICTS))
    pds = Counter((r.ht, r.pd) for r in records if r.pd is not None)
    if pds:
        out.text("frequencies (ht, pd): " + ", ".join(f"({h}, {p}) x{n}" for (h, p), n in sorted(pds.items())))
    for r in violations:
        out.text(f"trial {r.trial} (seed {r.seed}): " + "; ".join(r.violations))
        out.text("  generators: " + ", ".join(r.generators))
    return EXIT_FAIL if violations else EXIT_OK


# -- parser ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", type=int, default=None,
                        help=f"coefficient characteristic, 0 for QQ (default ${CHAR_ENV} or the ring's)")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--output", choices=("text", "json-lines"), default="text", help="output mode")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="parallel workers")

    ideals = argparse.ArgumentParser(add_help=False)
    ideals.add_argument("file", nargs="?", help="ideal file: a ring line and let bindings")
    ideals.add_argument("--ideal", action="append", help="comma-separated generators (repeatable)")
    ideals.add_argument("--vars", help="ring variables for --ideal (default: in order of appearance)")
    ideals.add_argument("--use", action="append", help="binding name from the ideal file (repeatable)")

    p = argparse.ArgumentParser(prog="cubicpd", description="Graded ideal computations and claim verification.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def kernel(name, helptext):
        return sub.add_parser(name, parents=[common, ideals], help=helptext)

    kernel("gb", "reduced Groebner basis")
    nf = kernel("nf", "normal form of polynomials")
    nf.add_argument("--poly", action="append", help="polynomial to reduce (repeatable)")
    kernel("invariants", "dim, ht, e, pd, depth, Hilbert series and Betti table")
    res = kernel("res", "minimal free resolution")
    res.add_argument("--maps", action="store_true", help="print the differentials")
    kernel("colon", "ideal quotient I:J")
    kernel("intersect", "intersection of ideals")
    lk = kernel("link", "link J by a complete intersection C (C first)")
    lk.add_argument("--check", action="store_true", help="also verify the linkage properties")
    kernel("unmixed", "unmixed part of I (optionally through a given complete intersection)")

    v = sub.add_parser("verify", parents=[common], help="run claim files (default: the shipped corpus)")
    v.add_argument("files", nargs="*")
    v.add_argument("--filter", help="only claims whose id contains this text")

    s = sub.add_parser("stress", parents=[common], help="random triples of cubics")
    s.add_argument("--vars", type=int, default=6)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--family", default="uniform", choices=sorted(_stress.FAMILIES) + ["structured"])
    s.add_argument("--density", type=float, default=0.25)
    s.add_argument("--budget", type=float, default=10.0, help="seconds per trial, 0 for none")
    s.add_argument("--out", help="CSV path")
    s.add_argument("--generators", help="sidecar file with trial generators")
    s.add_argument("--all-generators", action="store_true", help="dump every trial, not only violations")
    return p


COMMANDS = {
    "gb": cmd_gb, "nf": cmd_nf, "invariants": cmd_invariants, "res": cmd_res, "colon": cmd_colon,
    "intersect": cmd_intersect, "link": cmd_link, "unmixed": cmd_unmixed, "verify": cmd_verify,
    "stress": cmd_stress,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    out = _Out(args.output, args.command)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ParseError, _claims.ClaimParseError, _claims.EvalError, ValueError, OSError) as exc:
        print(f"cubicpd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
