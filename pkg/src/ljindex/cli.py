"""Command-line front end.

Every command reads one ``.ilj`` file (except ``ccc-laws``), runs a
checker, translation or oracle, and prints a report of ``key: value``
lines.  The first two keys are always ``command`` and ``status``
(``ok``, ``invalid`` or ``error``); the remaining keys are listed per
command in the README.  Exit status is 0 when the status is ``ok``, 1
for an invalid object and 2 for parse or usage errors.
"""
from __future__ import annotations

import argparse
import random
import sys
from typing import Any, Callable, Sequence

from . import sexpr
from .church import ChurchViolation, check_church, erase, to_church
from .formulas import FormulaError, dom, fam, relocate, represent, restrict, similar
from .indices import Allocator, IndexDataError, IndexMap, IndexSet
from .itsys import TypingViolation, check_typed, check_untyped, search
from .ljker import (
    KernelError,
    ProofViolation,
    check_proof,
    extract_term,
    relocate_proof,
    restrict_proof,
    sim_conversion,
    subst_single,
)
from .relmodel import category_laws, finset, random_morphism
from .sexpr import ChurchJudgment, Env, ParseError, Points, Workspace
from .terms import eta_equivalent, free_vars, qproj_member, qprojo_member, subst, var
from .xlate import CompletenessError, FamilyTyping, SoundnessError, complete_family, soundness

_TERM = sexpr._TERM
_FORMULA = sexpr._FORMULA
_PROOF = sexpr._PROOF
_DERIV = sexpr._DERIV


class UsageError(Exception):
    pass


class Invalid(Exception):
    def __init__(self, message: str, path: str | None = None, obj: str | None = None) -> None:
        super().__init__(message)
        self.message, self.path, self.obj = message, path, obj


Report = list[tuple[str, str]]


def _pick(ws: Workspace, name: str | None, kinds: tuple, what: str, skip: str | None = None) -> tuple[str, Any]:
    if name is not None:
        if name not in ws.objects:
            raise UsageError(f"no object named {name}")
        obj = ws.objects[name]
        if not isinstance(obj, kinds):
            raise UsageError(f"{name} is not {what}")
        return name, obj
    for n, o in ws.of_kind(*kinds):
        if n != skip:
            return n, o
    raise UsageError(f"the file contains no {what}")


def _names(args, n: int) -> list[str]:
    if args.vars:
        names = [v.strip() for v in args.vars.split(",") if v.strip()]
        if len(names) != n:
            raise UsageError(f"--vars gives {len(names)} names for {n} hypotheses")
        return names
    return [f"x{k}" for k in range(1, n + 1)]


def _emit(args, name: str, obj: Any) -> list[tuple[str, str]]:
    """Write ``obj`` to ``--out`` (as a definition) or inline it in the report."""
    if args.out:
        ws = Workspace(objects={name: obj})
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(sexpr.dump_workspace(ws))
        return [("out", args.out)]
    return [(name, sexpr.dumps(obj))]


def _proof_check(pi, name: str) -> None:
    try:
        check_proof(pi)
    except ProofViolation as e:
        raise Invalid(e.message, "/".join(e.path) or "root", name) from e


def _deriv_check(d, name: str, carriers: dict) -> None:
    try:
        if d.judgment.ty is not None:
            check_typed(d, carriers or None)
        else:
            check_untyped(d)
    except TypingViolation as e:
        raise Invalid(e.message, "/".join(e.path) or "root", name) from e


# -- commands --------------------------------------------------------------------


def cmd_check_typing(ws: Workspace, args) -> Report:
    kinds = _DERIV + (FamilyTyping,)
    items = [_pick(ws, args.name, kinds, "a derivation")] if args.name else ws.of_kind(*kinds)
    if not items:
        raise UsageError("the file contains no derivation")
    count = 0
    for n, o in items:
        if isinstance(o, FamilyTyping):
            for j, d in sorted(o.derivs.graph):
                _deriv_check(d, f"{n}[{j}]", ws.carriers)
                count += 1
        elif isinstance(o, _DERIV):
            _deriv_check(o, n, ws.carriers)
            count += 1
        else:
            raise UsageError(f"{n} is not a derivation")
    return [("derivations", str(count))]


def cmd_check_proof(ws: Workspace, args) -> Report:
    items = [_pick(ws, args.name, _PROOF, "a proof")] if args.name else ws.of_kind(*_PROOF)
    if not items:
        raise UsageError("the file contains no proof")
    for n, pi in items:
        if args.mode and pi.seq.concl.flavor != args.mode:
            raise Invalid(f"proof is {pi.seq.concl.flavor}, expected {args.mode}", "root", n)
        _proof_check(pi, n)
    return [("proofs", str(len(items)))]


def cmd_extract(ws: Workspace, args) -> Report:
    n, pi = _pick(ws, args.name, _PROOF, "a proof")
    _proof_check(pi, n)
    names = _names(args, len(pi.seq.hyps))
    return [("object", n), ("term", sexpr.dumps(extract_term(pi, names)))]


def cmd_soundness(ws: Workspace, args) -> Report:
    n, pi = _pick(ws, args.name, _PROOF, "a proof")
    _proof_check(pi, n)
    names = _names(args, len(pi.seq.hyps))
    try:
        F = soundness(pi, names)
    except SoundnessError as e:
        raise Invalid(str(e), "root", n) from e
    for j, d in sorted(F.derivs.graph):
        _deriv_check(d, f"family[{j}]", ws.carriers)
    return [("object", n), ("indices", str(len(F.J)))] + _emit(args, "family", F)


def cmd_completeness(ws: Workspace, args) -> Report:
    n, F = _pick(ws, args.name, (FamilyTyping,), "a family typing")
    for j, d in sorted(F.derivs.graph):
        _deriv_check(d, f"{n}[{j}]", ws.carriers)
    try:
        _seq, pi = complete_family(F, Allocator(seed=args.seed))
    except CompletenessError as e:
        raise Invalid(str(e), "root", n) from e
    _proof_check(pi, "proof")
    t = extract_term(pi, list(F.names))
    if F.typed:
        relation, holds = "eta", eta_equivalent(t, F.subject)
    else:
        relation, holds = "approximant", qprojo_member(t, F.subject)
    if not holds:
        raise Invalid(f"extracted term fails the {relation} relation", "root", n)
    return [("object", n), ("term", sexpr.dumps(t)), ("relation", relation)] + _emit(args, "proof", pi)


def cmd_represent(ws: Workspace, args) -> Report:
    n, P = _pick(ws, args.name, (Points,), "a point family")
    carriers = ws.carriers or None
    try:
        A = represent(P.ty, IndexSet(P.fam), P.fam, Allocator(seed=args.seed), carriers)
    except FormulaError as e:
        raise Invalid(str(e), "root", n) from e
    if dom(A) != IndexSet(P.fam) or fam(A) != P.fam:
        raise Invalid("represented formula has the wrong domain or family", "root", n)
    return [("object", n), ("formula", sexpr.dumps(A))]


def cmd_restrict(ws: Workspace, args) -> Report:
    n, obj = _pick(ws, args.name, _FORMULA + _PROOF, "a formula or proof")
    _, J = _pick(ws, args.arg, (IndexSet,), "an index set")
    if isinstance(obj, _PROOF):
        _proof_check(obj, n)
        try:
            out = restrict_proof(obj, J)
        except KernelError as e:
            raise Invalid(str(e), "root", n) from e
        _proof_check(out, "result")
        if extract_term(out, _names(args, len(out.seq.hyps))) != extract_term(obj, _names(args, len(obj.seq.hyps))):
            raise Invalid("restriction changed the extracted term", "root", n)
    else:
        out = restrict(obj, J)
    return [("object", n)] + _emit(args, "result", out)


def cmd_relocate(ws: Workspace, args) -> Report:
    n, obj = _pick(ws, args.name, _FORMULA + _PROOF, "a formula or proof")
    _, u = _pick(ws, args.arg, (IndexMap,), "an index map")
    try:
        if isinstance(obj, _PROOF):
            _proof_check(obj, n)
            out = relocate_proof(obj, u)
            _proof_check(out, "result")
        else:
            out = relocate(u, obj)
    except (IndexDataError, KernelError) as e:
        raise Invalid(str(e), "root", n) from e
    return [("object", n)] + _emit(args, "result", out)


def cmd_substitute(ws: Workspace, args) -> Report:
    n, mu = _pick(ws, args.name, _PROOF, "a proof")
    m, rho = _pick(ws, args.arg, _PROOF, "a second proof", skip=n)
    if args.index is None:
        raise UsageError("substitute needs --index")
    _proof_check(mu, n)
    _proof_check(rho, m)
    try:
        out = subst_single(mu, rho, args.index)
    except KernelError as e:
        raise Invalid(str(e), "root", n) from e
    _proof_check(out, "result")
    names = _names(args, len(mu.seq.hyps))
    x = names[args.index - 1]
    expected = subst(extract_term(mu, names), x, extract_term(rho, [x]))
    if extract_term(out, names) != expected:
        raise Invalid("extracted term differs from the substitution", "root", n)
    return [("object", n), ("term", sexpr.dumps(expected))] + _emit(args, "result", out)


def cmd_sim_convert(ws: Workspace, args) -> Report:
    n, A = _pick(ws, args.name, _FORMULA, "a formula")
    m, B = _pick(ws, args.arg, _FORMULA, "a second formula", skip=n)
    if not similar(A, B):
        raise Invalid("formulas are not similar", "root", n)
    pi = sim_conversion(A, B)
    _proof_check(pi, "result")
    t = extract_term(pi, ["x"])
    if A.flavor == "typed":
        relation, holds = "eta", eta_equivalent(t, var("x"))
    else:
        relation, holds = "approximant", qproj_member(t, "x")
    if not holds:
        raise Invalid(f"extracted term fails the {relation} relation", "root", n)
    return [("object", n), ("term", sexpr.dumps(t)), ("relation", relation)] + _emit(args, "result", pi)


def cmd_church_check(ws: Workspace, args) -> Report:
    items = [_pick(ws, args.name, (ChurchJudgment,) + _PROOF, "a Church judgment or proof")] if args.name else ws.of_kind(ChurchJudgment, *_PROOF)
    if not items:
        raise UsageError("the file contains no Church judgment or proof")
    for n, o in items:
        if isinstance(o, _PROOF):
            _proof_check(o, n)
            names = _names(args, len(o.seq.hyps))
            s = to_church(o, names)
            if erase(s) != extract_term(o, names):
                raise Invalid("erasure differs from the extracted term", "root", n)
            o = ChurchJudgment(tuple(zip(names, o.seq.hyps)), s, o.seq.concl)
        try:
            check_church(o.ctx, o.term, o.concl)
        except ChurchViolation as e:
            raise Invalid(str(e), "root", n) from e
    return [("judgments", str(len(items)))]


def cmd_oracle_search(ws: Workspace, args) -> Report:
    n, M = _pick(ws, args.name, _TERM, "a term")
    bound = 2 if args.bound is None else args.bound
    env = None
    if args.mode == "typed":
        _, e = _pick(ws, args.arg, (Env,), "a type environment")
        env = e.as_dict()
        variables = [x for x, _ in e.types]
    else:
        variables = _names(args, len(free_vars(M))) if args.vars else sorted(free_vars(M))
    res = search(M, bound, bound, variables, env=env, carriers=ws.carriers or None, with_derivations=False)
    rows = [("object", n), ("bound", str(bound)), ("judgments", str(len(res)))]
    for jd in res:
        rows.append(("judgment", sexpr.dumps(jd)))
    return rows


def cmd_ccc_laws(ws: Workspace | None, args) -> Report:
    rng = random.Random(args.seed)
    count = 1000 if args.count is None else args.count
    failures = {"associativity": 0, "left-identity": 0, "right-identity": 0}
    for _ in range(count):
        objs = [finset(range(rng.randint(1, 3)), f"X{k}") for k in range(4)]
        r, s, t = (random_morphism(rng, objs[k], objs[k + 1]) for k in range(3))
        for law, ok in category_laws(r, s, t).items():
            failures[law] += not ok
    rows = [("seed", str(args.seed)), ("triples", str(count))]
    rows += [(law, "holds" if f == 0 else f"fails {f}") for law, f in failures.items()]
    bad = [law for law, f in failures.items() if f]
    if bad:
        raise Invalid("law failure: " + ", ".join(bad), "root", None)
    return rows


COMMANDS: dict[str, Callable] = {
    "check-typing": cmd_check_typing,
    "check-proof": cmd_check_proof,
    "extract": cmd_extract,
    "soundness": cmd_soundness,
    "completeness": cmd_completeness,
    "represent": cmd_represent,
    "restrict": cmd_restrict,
    "relocate": cmd_relocate,
    "substitute": cmd_substitute,
    "sim-convert": cmd_sim_convert,
    "church-check": cmd_church_check,
    "oracle-search": cmd_oracle_search,
    "ccc-laws": cmd_ccc_laws,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ljindex", description="Intersection typings and LJ(I) proofs.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file", nargs="?", help="input .ilj file")
    p.add_argument("--name", help="main object (default: the first one of the right kind)")
    p.add_argument("--arg", help="secondary object (index set, map, proof, formula or environment)")
    p.add_argument("--index", type=int, help="hypothesis position for substitute (1-based)")
    p.add_argument("--vars", help="comma-separated variable names for the hypotheses")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, help="oracle size bound")
    p.add_argument("--count", type=int, help="number of random cases for ccc-laws")
    p.add_argument("--mode", choices=["typed", "untyped"])
    p.add_argument("--out", help="write the produced object to this file")
    return p


def _print(rows: Report, out) -> None:
    for k, v in rows:
        print(f"{k}: {v}", file=out)


def run(argv: Sequence[str], out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    head = [("command", args.command)]
    try:
        ws = None
        if args.command != "ccc-laws":
            if not args.file:
                raise UsageError("missing input file")
            with open(args.file, encoding="utf-8") as fh:
                ws = sexpr.load_workspace(fh.read())
        rows = COMMANDS[args.command](ws, args)
    except Invalid as e:
        rows = [("status", "invalid")]
        if e.obj:
            rows.append(("object", e.obj))
        rows += [("path", e.path or "root"), ("violation", e.message)]
        _print(head + rows, out)
        return 1
    except (ParseError, UsageError, OSError) as e:
        _print(head + [("status", "error"), ("error", str(e))], out)
        return 2
    _print(head + [("status", "ok")] + rows, out)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
