import pytest
from hypothesis import given, strategies as st

from ljindex.terms import (
    BOT,
    FuelExhausted,
    TArrow,
    TAtom,
    TermError,
    app,
    beta_normalize,
    beta_step,
    eta_equivalent,
    eta_normal_form,
    free_vars,
    has_bot,
    infer_type,
    lam,
    omega_normalize,
    qproj_member,
    qprojo_member,
    rename,
    show,
    size,
    subst,
    var,
)

x, y, z, a, b = (var(n) for n in "xyzab")


def test_beta():
    assert beta_step(app(lam("x", x), y)) == y
    assert beta_normalize(app(lam("x", lam("y", x)), a, b)) == a
    delta = lam("x", app(x, x))
    with pytest.raises(FuelExhausted):
        beta_normalize(app(delta, delta), fuel=50)


def test_substitution_avoids_capture():
    t = lam("y", app(x, y))
    s = subst(t, "x", y)
    assert free_vars(s) == {"y"}
    assert beta_normalize(app(s, z)) == app(y, z)


def test_alpha_equivalence_is_identity():
    assert lam("x", x) == lam("y", y)
    assert rename(app(x, y), {"x": "z"}) == app(z, y)


def test_omega():
    assert omega_normalize(lam("x", BOT)) == BOT
    assert omega_normalize(app(BOT, y)) == BOT
    assert omega_normalize(lam("x", app(BOT, x))) == BOT
    assert omega_normalize(app(x, BOT)) == app(x, BOT)


def test_eta():
    assert eta_equivalent(lam("y", app(x, y)), x)
    assert eta_equivalent(x, x)
    assert not eta_equivalent(lam("y", app(x, y, y)), x)
    with pytest.raises(TermError):
        eta_equivalent(BOT, x)


def test_q():
    assert qproj_member(x, "x")
    assert qproj_member(lam("y", app(x, BOT)), "x")
    assert not qproj_member(lam("x", x), "y")
    # arguments must approximate the abstracted variables, in order
    assert qproj_member(lam("y", app(x, y)), "x")
    assert not qproj_member(lam("y", app(x, x)), "x")
    assert not qproj_member(app(x, BOT, y), "x")


def test_qo():
    assert qprojo_member(BOT, app(x, y))
    assert qprojo_member(lam("y", y), lam("y", y))
    assert not qprojo_member(app(x, y), app(y, x))
    assert qprojo_member(app(x, lam("z", app(y, z))), app(x, y))
    # a ⊥ of M is matched by Ω-collapsing subterms only
    assert qprojo_member(app(x, lam("z", BOT)), app(x, BOT))
    assert not qprojo_member(app(x, y), app(x, BOT))


def _terms(depth):
    leaf = st.sampled_from([x, y, z])
    if depth == 0:
        return leaf
    sub = _terms(depth - 1)
    return st.one_of(
        leaf,
        st.builds(lambda n, t: lam(n, t), st.sampled_from("xyzw"), sub),
        st.builds(app, sub, sub),
    )


terms = _terms(3)


@given(terms)
def test_q_members_are_normal(t):
    if qproj_member(t, "x"):
        assert beta_step(t) is None
        assert omega_normalize(t) == t


def test_q_members_need_not_be_eta_normal():
    t = lam("y", app(x, y))
    assert qproj_member(t, "x")
    assert eta_normal_form(t) == x


@given(terms)
def test_qo_reflexive(t):
    assert qprojo_member(t, t)


@given(terms)
def test_omega_idempotent(t):
    assert omega_normalize(omega_normalize(t)) == omega_normalize(t)


@given(terms, terms, terms)
def test_eta_equivalence_relation(s, t, u):
    assert eta_equivalent(s, s)
    assert eta_equivalent(s, t) == eta_equivalent(t, s)
    if eta_equivalent(s, t) and eta_equivalent(t, u):
        assert eta_equivalent(s, u)


def test_infer_type():
    al = TAtom("a")
    f = TArrow(al, al)
    assert infer_type(lam("z", app(x, var("z")), al), {"x": f}) == f
    with pytest.raises(TermError):
        infer_type(BOT, {})
    with pytest.raises(TermError):
        infer_type(app(y, y), {"y": al})


def test_show_and_size():
    t = lam("y", app(x, y, BOT))
    assert show(t) == "λy.x y ⊥"
    assert size(t) == 6
    assert has_bot(t)


def test_qo_members_need_not_be_beta_normal():
    # the head may be η-expanded inside Q(x) and then applied
    expanded = lam("u", lam("v", app(x, var("u"), var("v"))))
    assert qproj_member(expanded, "x")
    assert qprojo_member(app(expanded, y), app(x, y))
    assert beta_step(app(expanded, y)) is not None
