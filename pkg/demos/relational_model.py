"""The relational model: composition, currying and the category laws.

Run with ``python3 demos/relational_model.py``.
"""
import random

from ljindex.relmodel import category_laws, compose, curry, finset, identity, morphism, random_morphism, uncurry, with_obj

X, Y, Z = finset(["a"]), finset(["b"]), finset(["c"])

# t uses its input twice, so composing with s duplicates s's multiset
s = morphism(X, Y, [(["a"], "b")])
t = morphism(Y, Z, [(["b", "b"], "c")])
print("s     =", sorted(s.pairs))
print("t     =", sorted(t.pairs))
print("t ∘ s =", sorted(compose(t, s).pairs))
print("t ∘ id == t:", compose(t, identity(Y)) == t)

# a morphism out of a product, curried and uncurried again
pair = morphism(with_obj(Z, X), Y, [([(1, "c"), (2, "a")], "b")])
cur = curry(pair, Z, X)
print("curried:", sorted(cur.pairs))
print("uncurry(curry(s)) == s:", uncurry(cur, X, Y) == pair)

rng = random.Random(0)
bad = 0
for _ in range(300):
    objs = [finset(range(rng.randint(1, 3))) for _ in range(4)]
    r, s2, t2 = (random_morphism(rng, objs[k], objs[k + 1]) for k in range(3))
    bad += not all(category_laws(r, s2, t2).values())
print(f"category laws on 300 random triples: {bad} failures")
