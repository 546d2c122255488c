"""Similar formulas are interconvertible; proofs read as Church-style terms.

Run with ``python3 demos/similarity_and_church.py``.
"""
from ljindex import sexpr
from ljindex.church import church_ok, to_church
from ljindex.formulas import FArrow, FStar, expand_spine, similar
from ljindex.indices import IndexMap, iset
from ljindex.ljker import check_proof, extract_term, sim_conversion
from ljindex.terms import qproj_member, show

# two representations of the same family, differing in their inner indices
A = FArrow(FStar(iset(3)), IndexMap({3: 1}), FStar(iset(1)))
B = expand_spine(FArrow(FStar(iset(8)), IndexMap({8: 1}), FStar(iset(1))), 2)
print("A =", sexpr.dumps(A))
print("B =", sexpr.dumps(B))
print("similar:", similar(A, B))

pi = sim_conversion(A, B)
check_proof(pi)
t = extract_term(pi, ["x"])
print("conversion term:", show(t), "| in Q(x):", qproj_member(t, "x"))

s = to_church(pi, ["x"])
ctx = [("x", pi.seq.hyps[0])]
print("\nChurch term:", sexpr.dumps(s))
print("checks:", church_ok(ctx, s, pi.seq.concl))
print("checks against A instead of B:", church_ok(ctx, s, A))
