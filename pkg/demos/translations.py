"""From intersection typings to LJ(I) proofs and back.

A family of D∞ typings of ``x y`` is turned into a proof by completeness,
the proof is checked, its term extracted, and soundness reads the family
back.  Run with ``python3 demos/translations.py``.
"""
from ljindex import sexpr
from ljindex.indices import Allocator
from ljindex.itsys import search
from ljindex.ljker import check_proof, extract_term
from ljindex.terms import app, qprojo_member, show, var
from ljindex.xlate import FamilyTyping, complete_family, soundness

M = app(var("x"), var("y"))
derivs = list(search(M, 2, 2, ["x", "y"]).values())
print(f"{len(derivs)} typings of {show(M)} within bounds 2; using two of them:")
chosen = {1: derivs[3], 2: derivs[-1]}
for j, d in chosen.items():
    print(f"  j={j}:", sexpr.dumps(d.judgment))

F = FamilyTyping(("x", "y"), M, chosen)
seq, pi = complete_family(F, Allocator(seed=1))
check_proof(pi)
print("\nscaffold sequent:", sexpr.dumps(seq))
# The head x is used at an arrow point, so the proof η-expands it; the term
# is an approximant of x y in the inductive sense, not a β-normal form.
t = extract_term(pi, ["x", "y"])
print("extracted term:", show(t), "| approximant of x y:", qprojo_member(t, M))

back = soundness(pi, ["x", "y"])
same = all(back.point(j) == F.point(j) and back.context(j) == F.context(j) for j in F.J)
print("soundness gives back the same points and contexts:", same)
