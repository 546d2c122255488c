"""Non-idempotent intersection types and the indexed logic LJ(I).

Submodules:

* :mod:`.indices` finite multisets, index sets and index maps
* :mod:`.terms` λ-terms with ⊥, reduction, η and approximants
* :mod:`.relmodel` the relational model and its points
* :mod:`.itsys` intersection typing derivations and a bounded search oracle
* :mod:`.formulas` indexed formulas, restriction, relocation, representation
* :mod:`.ljker` the LJ(I) proof kernel and its proof transformations
* :mod:`.xlate` soundness and completeness translations
* :mod:`.church` the Church-style indexed calculus
* :mod:`.sexpr` and :mod:`.cli` the textual format and command line
"""
from .church import CAbs, CApp, CBot, CVar, check_church, erase, is_term, to_church, var_domain
from .formulas import (
    FArrow,
    FAtom,
    FStar,
    Hypothesis,
    dom,
    fam,
    relocate,
    represent,
    restrict,
    similar,
)
from .indices import Allocator, IndexMap, IndexSet, Multiset, iset, mset
from .itsys import TAbs, TApp, TVar, TypingJudgment, check_typed, check_untyped, search
from .ljker import (
    Ax,
    Elim,
    Intro,
    Sequent,
    StarAx,
    check_proof,
    empty_proof,
    extract_term,
    relocate_proof,
    restrict_proof,
    sim_conversion,
    subst_single,
    substitute_proof,
    weaken,
)
from .relmodel import STAR, Atom, pt
from .terms import BOT, TArrow, TAtom, app, lam, var
from .xlate import FamilyTyping, complete_family, completeness, soundness

__all__ = [name for name in dir() if not name.startswith("_")]
