import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CD, CD2, NAIVE, PARAM, P, terms
from topcalc.normalize import (
    LI, LO, EqTypeMismatch, FuelExhausted, NormalFormSets, Random, RefusedSystem,
    eq_decide, normalize,
)
from topcalc.rewrite import redexes
from topcalc.syntax import STAR, Abs, App, Pair, Proj1, Proj2, Var, alpha_eq, alpha_key, replace_at
from topcalc.typecheck import type_of

STRATEGIES = [LO, LI, Random(0), Random(7)]


class TestNormalize:
    def test_eta_expanded_function(self):
        trace = normalize(P(r"\x:A. y x", "y:A -> Top"), CD, LO, 100)
        assert alpha_eq(trace.result, P(r"\x:A. *"))

    def test_naive_depends_on_strategy(self):
        t = P("<p1 x, p2 x>", "x:Top * Top")
        assert normalize(t, NAIVE, LO, 100).result == P("x", "x:Top * Top")
        assert normalize(t, NAIVE, LI, 100).result == P("<*, *>")

    @pytest.mark.parametrize("strategy", STRATEGIES)
    def test_polymorphic_instance(self, strategy):
        t = P(r"(/\X. \x:X. \y:(X -> Y). y x) [Top]")
        trace = normalize(t, CD2, strategy, 100)
        assert alpha_eq(trace.result, P(r"\x:Top. \y:(Top -> Y). y *"))

    def test_star_in_zero_steps(self):
        trace = normalize(STAR, CD, LO, 1)
        assert trace.result == STAR and trace.fuel_used == 0

    def test_fuel_exhausted(self):
        t = P("<p1 x, p2 x>", "x:Top * Top")
        with pytest.raises(FuelExhausted) as info:
            normalize(t, CD, LO, 1)
        assert info.value.steps == 1
        assert info.value.last == P("x", "x:Top * Top")

    def test_bad_fuel(self):
        with pytest.raises(ValueError):
            normalize(STAR, CD, LO, 0)

    def test_random_is_reproducible(self):
        t = P(r"<(\x:Top. x) u, p1 <u, u>>", "u:Top")
        a = normalize(t, NAIVE, Random(3))
        b = normalize(t, NAIVE, Random(3))
        assert [(alpha_key(s), r) for s, r in a.steps] == [(alpha_key(s), r) for s, r in b.steps]

    def test_innermost_prefers_deeper(self):
        t = P(r"(\x:A. x) ((\y:A. y) a)", "a:A")
        first = normalize(t, NAIVE, LI).steps[0][1]
        assert first.position == (1,)
        assert normalize(t, NAIVE, LO).steps[0][1].position == ()

    @given(terms(CD))
    def test_replay(self, t):
        trace = normalize(t, CD, Random(1))
        assert trace.replay() == trace.result
        assert redexes(trace.result, CD) == []

    @pytest.mark.parametrize("system,gen", [(CD, terms(CD)), (CD2, terms(CD2, 10))])
    @given(data=st.data())
    def test_strategy_independence(self, system, gen, data):
        t = data.draw(gen)
        keys = {alpha_key(normalize(t, system, s).result) for s in STRATEGIES}
        assert len(keys) == 1


class TestEqDecide:
    def test_eta_top(self):
        assert eq_decide(P(r"\x:Top. y x", "y:Top -> B"), P("y", "y:Top -> B"), CD)

    def test_sp_top(self):
        assert eq_decide(P("x", "x:A * Top"), P("<p1 x, *>", "x:A * Top"), CD)

    def test_distinct_variables(self):
        assert not eq_decide(P("y", "y:A -> B"), P("z", "z:A -> B"), CD)

    def test_type_mismatch(self):
        with pytest.raises(EqTypeMismatch):
            eq_decide(STAR, P("<*, *>"), CD)

    @pytest.mark.parametrize("system", [NAIVE, PARAM])
    def test_refuses_unconfluent(self, system):
        with pytest.raises(RefusedSystem):
            eq_decide(STAR, STAR, system)

    def test_force_reports_normal_forms(self):
        sets = eq_decide(P(r"\x:A. y x", "y:A -> Top"), P("y", "y:A -> Top"), NAIVE, force=True)
        assert isinstance(sets, NormalFormSets)
        assert {alpha_key(t) for t in sets.left} == {alpha_key(P("y", "y:A -> Top")),
                                                      alpha_key(P(r"\x:A. *"))}
        assert sets.common and not sets.decided_equal

    @given(terms(CD), terms(CD))
    def test_reflexive_symmetric(self, t, u):
        assert eq_decide(t, t, CD)
        if type_of(t) == type_of(u):
            assert eq_decide(t, u, CD) == eq_decide(u, t, CD)

    @given(terms(CD))
    def test_steps_are_equalities(self, t):
        for before, r in normalize(t, CD, Random(2)).steps:
            after = replace_at(before, r.position, r.contractum)
            assert eq_decide(before, after, CD)

    @given(terms(CD, 6), terms(CD, 6))
    def test_axioms(self, u, v):
        # beta, pi1, pi2, eta, SP and the unit axiom instantiated on generated terms
        ut = type_of(u)
        pair = Pair(u, v)
        assert eq_decide(Proj1(pair), u, CD)
        assert eq_decide(Proj2(pair), v, CD)
        assert eq_decide(Pair(Proj1(pair), Proj2(pair)), pair, CD)
        assert eq_decide(App(Abs("fresh", ut, Pair(Var("fresh", ut), v)), u), pair, CD)
        f = Abs("fresh", ut, v)
        assert eq_decide(Abs("z", ut, App(f, Var("z", ut))), f, CD)
        assert eq_decide(App(Abs("fresh", ut, STAR), u), STAR, CD)
