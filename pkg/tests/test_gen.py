import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CD, CD2, PARAM
from topcalc.canon import is_star_free
from topcalc.gen import GenConfig, GenerationFailure, corpus, gen_term, gen_type, rule_coverage
from topcalc.rewrite import RULES
from topcalc.syntax import STAR, TOP, Arrow, Forall, TypeVar, alpha_eq, alpha_key, size, type_size
from topcalc.typecheck import type_of

A = TypeVar("A")


def has_forall(ty):
    match ty:
        case Forall():
            return True
        case Arrow(a, b):
            return has_forall(a) or has_forall(b)
    return hasattr(ty, "left") and (has_forall(ty.left) or has_forall(ty.right))


class TestTypes:
    def test_depth_one_is_atomic(self):
        for seed in range(30):
            ty = gen_type(GenConfig(seed=seed, type_depth=1))
            assert ty in (TOP, A, TypeVar("B"))

    def test_depth_two_reaches_compounds(self):
        tys = {gen_type(GenConfig(seed=s, type_depth=2)) for s in range(200)}
        assert any(type_size(ty) == 3 for ty in tys)

    @given(st.integers(0, 2**32), st.integers(1, 4))
    def test_cd_never_quantifies(self, seed, depth):
        assert not has_forall(gen_type(GenConfig(seed=seed, type_depth=depth)))

    def test_cd2_can_quantify(self):
        assert any(has_forall(gen_type(GenConfig(seed=s, system=CD2, type_depth=3)))
                   for s in range(200))


class TestTerms:
    @pytest.mark.parametrize("system", [CD, CD2, PARAM])
    @given(seed=st.integers(0, 2**32))
    def test_well_typed_and_small(self, system, seed):
        cfg = GenConfig(seed=seed, system=system, max_term_size=10)
        t = gen_term(cfg)
        type_of(t, system)
        assert size(t) <= 10

    @given(st.integers(0, 2**32))
    def test_target_type(self, seed):
        ty = Arrow(A, TOP)
        assert alpha_eq(type_of(gen_term(GenConfig(seed=seed, target_type=ty))), ty)

    def test_top_may_be_star(self):
        outs = [gen_term(GenConfig(seed=s, target_type=TOP)) for s in range(40)]
        assert STAR in outs

    def test_star_free_top(self):
        pool = (("x", TOP),)
        for s in range(40):
            t = gen_term(GenConfig(seed=s, target_type=TOP, star_free=True, free_var_pool=pool))
            assert is_star_free(t) and type_of(t) == TOP

    def test_identity_among_outputs(self):
        from topcalc.frontend import parse_term
        ident = alpha_key(parse_term(r"\x:A. x"))
        outs = {alpha_key(gen_term(GenConfig(seed=s, target_type=Arrow(A, A), free_var_pool=())))
                for s in range(40)}
        assert ident in outs

    def test_uninhabited(self):
        cfg = GenConfig(seed=0, target_type=A, free_var_pool=(), star_free=True, retries=20)
        with pytest.raises(GenerationFailure):
            gen_term(cfg)

    @pytest.mark.parametrize("system", [CD, CD2, PARAM])
    @given(seed=st.integers(0, 2**32))
    def test_star_free_mode(self, system, seed):
        t = gen_term(GenConfig(seed=seed, system=system, star_free=True))
        assert is_star_free(t, system)

    def test_shared_rng_stream(self):
        rng = random.Random(5)
        a = [gen_term(GenConfig(), rng) for _ in range(5)]
        rng = random.Random(5)
        b = [gen_term(GenConfig(), rng) for _ in range(5)]
        assert a == b


class TestCorpus:
    def test_empty(self):
        assert corpus(GenConfig(seed=1), 0) == []

    def test_deterministic(self):
        cfg = GenConfig(seed=11, system=CD2)
        assert corpus(cfg, 50) == corpus(cfg, 50)

    def test_distinct_and_typed(self, cd_corpus):
        assert len(cd_corpus) == 1000
        assert len({alpha_key(t) for t in cd_corpus}) == 1000
        for t in cd_corpus:
            type_of(t, CD)
            assert size(t) <= 12

    def test_rule_coverage(self, cd_corpus):
        fired = set(rule_coverage(cd_corpus, CD))
        assert fired == set(RULES[CD])
