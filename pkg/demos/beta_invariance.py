"""A redex and its reduct have the same typings.

Typing the redex needs points larger than the bound on the final judgment;
the search oracle finds them by propagating demands from the argument.
Run with ``python3 demos/beta_invariance.py``.
"""
from ljindex import sexpr
from ljindex.itsys import judgment_set, search
from ljindex.terms import app, lam, show, var

x = var("x")
redex = app(lam("a", app(var("a"), x)), lam("b", var("b")))
reduct = app(lam("b", var("b")), x)

for M in (redex, reduct, x):
    res = search(M, 2, 2, ["x"])
    print(f"{show(M):<20} {len(res)} judgments")
print("same sets:", judgment_set(search(redex, 2, 2, ["x"])) == judgment_set(search(x, 2, 2, ["x"])))

d = max(search(redex, 2, 2, ["x"]).values(), key=lambda d: len(sexpr.dumps(d)))
print("\nlargest derivation of the redex:")
print(sexpr.dumps(d))
