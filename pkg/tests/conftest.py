import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from topcalc.frontend import parse_term, parse_type
from topcalc.gen import GenConfig, gen_term
from topcalc.syntax import TOP, Arrow, Forall, Product, TypeVar
from topcalc.typecheck import SystemId

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CD, CD2, NAIVE, PARAM = SystemId.CD, SystemId.CD2, SystemId.NAIVE, SystemId.CD2PARAM


def P(text, ctx="", system=SystemId.CD2PARAM):
    return parse_term(text, ctx, system)


T = parse_type


def terms(system=SystemId.CD, size=10, star_free=False):
    """Well-typed terms drawn through the seeded generator."""
    return st.integers(0, 2**32).map(
        lambda s: gen_term(GenConfig(seed=s, system=system, max_term_size=size, star_free=star_free)))


def simple_types(depth=3):
    atoms = st.sampled_from([TOP, TypeVar("A"), TypeVar("B")])
    return st.recursive(atoms, lambda inner: st.one_of(
        st.builds(Product, inner, inner), st.builds(Arrow, inner, inner)), max_leaves=2 ** depth)


def poly_types(depth=3):
    atoms = st.sampled_from([TOP, TypeVar("A"), TypeVar("X"), TypeVar("Y")])
    return st.recursive(atoms, lambda inner: st.one_of(
        st.builds(Product, inner, inner), st.builds(Arrow, inner, inner),
        st.builds(Forall, st.sampled_from(["X", "Y"]), inner)), max_leaves=2 ** depth)


def iso_types(depth=4, poly=False):
    """Types built only by the Iso(Top) closure clauses."""
    if depth <= 1:
        return st.just(TOP)
    inner = iso_types(depth - 1, poly)
    dom = simple_types(2) if not poly else poly_types(2)
    options = [st.just(TOP), st.builds(Arrow, dom, inner), st.builds(Product, inner, inner)]
    if poly:
        options.append(st.builds(Forall, st.sampled_from(["X", "Y"]), inner))
    return st.one_of(*options)


@pytest.fixture(scope="session")
def cd_corpus():
    from topcalc.gen import corpus
    return corpus(GenConfig(seed=2024, max_term_size=12), 1000)
