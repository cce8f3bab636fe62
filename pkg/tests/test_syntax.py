import pytest
from hypothesis import given

from conftest import CD2, P, T, terms
from topcalc.syntax import (
    STAR, TOP, Abs, App, Arrow, Forall, InvalidPosition, Pair, Product, Proj1,
    TyAbs, TyApp, TypeMismatch, TypeVar, Var, alpha_eq, alpha_key, children,
    free_type_vars, free_var_names, free_vars, positions, replace_at, size,
    subst_term, subst_type_in_term, subst_type_in_type, subterm_at,
    type_free_vars, type_size, var_occurrences, with_children,
)
from topcalc.typecheck import type_of

A = TypeVar("A")


def naive_subst(t, x, u):
    """Textbook substitution without renaming; only valid when names are disjoint."""
    match t:
        case Var(n, _):
            return u if n == x else t
        case Abs(y, ty, body):
            return t if y == x else Abs(y, ty, naive_subst(body, x, u))
    kids = children(t)
    return with_children(t, tuple(naive_subst(c, x, u) for c in kids)) if kids else t


def alpha_oracle(a, b, env=(), tenv=()):
    """Alpha-equivalence by walking both terms with paired binder stacks."""
    def ty_eq(s, t, tenv):
        match s, t:
            case TypeVar(m), TypeVar(n):
                for l, r in reversed(tenv):
                    if l == m or r == n:
                        return l == m and r == n
                return m == n
            case Forall(x, s1), Forall(y, t1):
                return ty_eq(s1, t1, tenv + ((x, y),))
            case (Product(s1, s2), Product(t1, t2)) | (Arrow(s1, s2), Arrow(t1, t2)):
                return type(s) is type(t) and ty_eq(s1, t1, tenv) and ty_eq(s2, t2, tenv)
        return type(s) is type(t) and s == t

    if type(a) is not type(b):
        return False
    match a, b:
        case Var(m, s), Var(n, t):
            if not ty_eq(s, t, tenv):
                return False
            for l, r in reversed(env):
                if l == m or r == n:
                    return l == m and r == n
            return m == n
        case Abs(x, s, body1), Abs(y, t, body2):
            return ty_eq(s, t, tenv) and alpha_oracle(body1, body2, env + ((x, y),), tenv)
        case TyAbs(x, body1), TyAbs(y, body2):
            return alpha_oracle(body1, body2, env, tenv + ((x, y),))
        case TyApp(f, s), TyApp(g, t):
            return ty_eq(s, t, tenv) and alpha_oracle(f, g, env, tenv)
    ka, kb = children(a), children(b)
    return len(ka) == len(kb) and all(alpha_oracle(c, d, env, tenv) for c, d in zip(ka, kb))


def rename_all_bound(t, suffix="q"):
    match t:
        case Abs(x, ty, body):
            new = x + suffix
            return Abs(new, ty, rename_all_bound(subst_term(body, x, Var(new, ty)), suffix))
        case TyAbs(x, body):
            new = x + suffix.upper()
            return TyAbs(new, rename_all_bound(subst_type_in_term(body, x, TypeVar(new)), suffix))
    kids = children(t)
    return with_children(t, tuple(rename_all_bound(c, suffix) for c in kids)) if kids else t


class TestFreeVariables:
    def test_bound_variable(self):
        assert free_vars(P(r"\x:Top. x")) == frozenset()

    def test_free_function(self):
        assert free_vars(P(r"\x:A. y x", "y:A -> Top")) == {("y", Arrow(A, TOP))}

    def test_star(self):
        assert free_vars(STAR) == frozenset()

    def test_type_vars_bound(self):
        assert free_type_vars(P(r"/\X. \x:X. x")) == frozenset()

    def test_type_vars_free(self):
        assert free_type_vars(P(r"\x:X. \y:(X -> Y). y x")) == {"X", "Y"}
        assert free_type_vars(STAR) == frozenset()

    def test_type_free_vars(self):
        assert type_free_vars(T("forall X. X -> Y")) == {"Y"}


class TestSubstitution:
    def test_variable(self):
        assert subst_term(Var("x", TOP), "x", STAR) == STAR

    def test_capture_avoided(self):
        t = P(r"\y:A. x y", "x:A -> A")
        out = subst_term(t, "x", Var("y", Arrow(A, A)))
        assert isinstance(out, Abs) and out.binder != "y"
        assert alpha_eq(out, P(r"\w:A. y w", "y:A -> A"))
        assert free_var_names(out) == {"y"}

    def test_pair_into_application(self):
        t = P("y x", "y:Top * Top -> A, x:Top * Top")
        u = P("<*, *>")
        assert subst_term(t, "x", u) == naive_subst(t, "x", u)
        assert alpha_eq(subst_term(t, "x", u), P("y <*, *>", "y:Top * Top -> A"))

    def test_type_mismatch(self):
        with pytest.raises(TypeMismatch):
            subst_term(Var("x", A), "x", STAR, TOP)

    def test_type_in_type(self):
        assert subst_type_in_type(T("X -> X"), "X", TOP) == T("Top -> Top")
        assert subst_type_in_type(T("forall X. X -> X"), "X", TOP) == T("forall X. X -> X")

    def test_type_in_type_capture(self):
        out = subst_type_in_type(T("forall Y. X -> Y"), "X", TypeVar("Y"))
        assert alpha_eq(out, T("forall Z. Y -> Z"))

    def test_type_in_term(self):
        t = P(r"\x:X. \y:(X -> Y). y x")
        assert alpha_eq(subst_type_in_term(t, "X", TOP), P(r"\x:Top. \y:(Top -> Y). y x"))

    def test_type_in_term_capture(self):
        t = P(r"/\Y. \x:X. \y:Y. x", system=CD2)
        out = subst_type_in_term(t, "X", TypeVar("Y"))
        assert free_type_vars(out) == {"Y"}
        assert alpha_eq(out, P(r"/\Z. \x:Y. \y:Z. x", system=CD2))

    @given(terms())
    def test_identity_substitution(self, t):
        for name, ty in free_vars(t):
            assert alpha_eq(subst_term(t, name, Var(name, ty)), t)

    @given(terms())
    def test_matches_naive_substitution_on_disjoint_names(self, t):
        # pool variables never clash with generator binder names
        for name, ty in sorted(free_vars(t), key=str):
            u = Var(name + "_new", ty)
            assert alpha_eq(subst_term(t, name, u), naive_subst(t, name, u))

    @given(terms(), terms())
    def test_respects_alpha(self, t, u):
        renamed = rename_all_bound(t)
        assert alpha_eq(renamed, t)
        ut = type_of(u)
        for name, ty in free_vars(t):
            if ty == ut:
                assert alpha_eq(subst_term(t, name, u), subst_term(renamed, name, u))

    @given(terms())
    def test_no_capture(self, t):
        # substitute a term whose free variables are the generator's binder names
        for name, ty in free_vars(t):
            u = Var("x", ty)
            out = subst_term(t, name, u)
            expected = (free_vars(t) - {(name, ty)}) | {("x", ty)}
            assert free_vars(out) == expected


class TestAlpha:
    def test_examples(self):
        assert alpha_eq(P(r"\x:Top. x"), P(r"\y:Top. y"))
        assert not alpha_eq(P(r"\x:Top. x"), P(r"\x:Top. *"))
        assert alpha_eq(P(r"/\X. \x:X. x"), P(r"/\Y. \z:Y. z"))

    def test_free_names_matter(self):
        assert not alpha_eq(Var("x", A), Var("y", A))
        assert not alpha_eq(Var("x", A), Var("x", TOP))

    def test_types(self):
        assert alpha_eq(T("forall X. X -> X"), T("forall Y. Y -> Y"))
        assert not alpha_eq(T("forall X. X -> Y"), T("forall Y. Y -> Y"))

    def test_key_is_injective_on_shapes(self):
        assert alpha_key(P("<*, *>")) != alpha_key(P(r"\x:Top. *"))

    @given(terms(size=8), terms(size=8))
    def test_agrees_with_oracle(self, a, b):
        assert alpha_eq(a, b) == alpha_oracle(a, b)
        assert alpha_oracle(a, rename_all_bound(a))

    @given(terms(CD2, 8))
    def test_agrees_with_oracle_polymorphic(self, a):
        r = rename_all_bound(a)
        assert alpha_eq(a, r) and alpha_oracle(a, r)


class TestSize:
    def test_examples(self):
        assert (size(STAR), var_occurrences(STAR)) == (1, 0)
        t = P(r"\x:Top. x")
        assert (size(t), var_occurrences(t)) == (2, 1)
        assert var_occurrences(P("<p1 x, p2 x>", "x:A * Top")) == 2

    def test_type_size_decreases_on_subtypes(self):
        ty = T("forall X. (A * X) -> Top")
        assert type_size(ty) > type_size(ty.body) > type_size(ty.body.domain) > type_size(A)

    @given(terms())
    def test_invariant_under_renaming(self, t):
        r = rename_all_bound(t)
        assert (size(r), var_occurrences(r)) == (size(t), var_occurrences(t))


class TestPositions:
    def test_subterm_and_replace(self):
        t = P(r"\x:A. y x", "y:A -> Top")
        assert subterm_at(t, (0, 1)) == Var("x", A)
        assert replace_at(t, (0,), STAR) == Abs("x", A, STAR)

    def test_invalid(self):
        with pytest.raises(InvalidPosition):
            subterm_at(STAR, (0,))

    @given(terms())
    def test_positions_are_valid(self, t):
        for pos, sub in positions(t):
            assert subterm_at(t, pos) == sub
            assert replace_at(t, pos, sub) == t
        assert sum(1 for _ in positions(t)) == size(t)

    def test_children_order(self):
        t = App(Pair(STAR, STAR), Proj1(STAR))
        assert children(t) == (Pair(STAR, STAR), Proj1(STAR))
