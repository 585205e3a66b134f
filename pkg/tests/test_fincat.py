import itertools

import pytest
from hypothesis import given, settings, strategies as st

from strsem.fincat import (
    CategoryError,
    FinFunctor,
    NatTransformation,
    SetFunctor,
    bo_ff_factorize,
    category_from_table,
    chain_category,
    comma_category,
    compose_functors,
    discrete_category,
    empty_category,
    enumerate_functors,
    enumerate_nat_transformations,
    finset_category,
    fs_table,
    identity_functor,
    is_bijective_on_objects,
    is_faithful,
    is_full_and_faithful,
    limit_of_finset_diagram,
    monoid_category,
    poset_category,
    terminal_category,
    validate_category,
    validate_functor,
    validate_nat_transformation,
    verify_limit,
    walking_arrow,
)


def test_walking_arrow_is_valid():
    c = walking_arrow()
    assert validate_category(c) == []
    assert c.n_morphisms() == 3
    assert c.objects == ("0", "1")


@pytest.mark.parametrize("n, expected", [(0, 1), (1, 3), (2, 11), (3, 60)])
def test_finset_morphism_counts(n, expected):
    # sum over a, b <= n of b^a
    c = finset_category(n)
    assert c.n_morphisms() == expected
    assert sum(b ** a for a in range(n + 1) for b in range(n + 1)) == expected


def test_finset_composition_is_function_composition():
    c = finset_category(2)
    for f in c.morphisms():
        for g in c.out_of(c.cod(f)):
            tf, tg = fs_table(c, f), fs_table(c, g)
            assert fs_table(c, c.comp(g, f)) == tuple(tg[x] for x in tf)


def test_chain_and_discrete_shapes():
    assert chain_category(3).n_morphisms() == 6
    assert discrete_category(["a", "b"]).n_morphisms() == 2
    assert terminal_category().n_morphisms() == 1
    assert empty_category().objects == ()
    for c in (chain_category(3), discrete_category(["a", "b"]), empty_category()):
        assert validate_category(c) == []


def test_poset_requires_nothing_beyond_the_order():
    c = poset_category(["a", "b", "c"], lambda x, y: x == y or y == "c")
    assert validate_category(c) == []
    assert len(c.hom("a", "c")) == 1
    assert c.hom("a", "b") == ()


def test_broken_associativity_is_reported():
    # g f = g on {s, a} except a a = s, so (a a) a = s but a (a a) = a
    homs = {("x", "x"): ("i", "s", "a")}
    table = {}
    for g, f in itertools.product(("i", "s", "a"), repeat=2):
        if g == "i":
            table[(g, f)] = f
        elif f == "i":
            table[(g, f)] = g
    table.update({("s", "s"): "s", ("s", "a"): "s", ("a", "s"): "a", ("a", "a"): "s"})
    c = category_from_table(["x"], homs, {"x": "i"}, table)
    errs = validate_category(c)
    assert errs and any("associativity" in e for e in errs)


def test_duplicate_morphism_names_rejected():
    with pytest.raises(CategoryError):
        category_from_table(["a", "b"], {("a", "a"): ("f",), ("b", "b"): ("f",)}, {"a": "f", "b": "f"}, {})


def test_op_reverses_homs():
    c = walking_arrow()
    o = c.op()
    assert validate_category(o) == []
    assert len(o.hom("1", "0")) == 1 and o.hom("0", "1") == ()


def test_monoid_category_z2():
    c = monoid_category(["0", "1"], "0", lambda x, y: str((int(x) + int(y)) % 2))
    assert validate_category(c) == []
    (obj,) = c.objects
    assert len(c.hom(obj, obj)) == 2


# --- functors ---


def test_functors_between_chains():
    # monotone maps {0<1} -> {0<1}
    c = chain_category(2)
    fs = enumerate_functors(c, c)
    assert len(fs) == 3
    assert all(validate_functor(f) == [] for f in fs)


def test_functors_into_finset_from_walking_arrow():
    # pairs (a, b) with a function a -> b: sum of b^a over a, b <= 2
    fs = enumerate_functors(walking_arrow(), finset_category(2))
    assert len(fs) == 11


def test_identity_and_composition():
    c = finset_category(2)
    i = identity_functor(c)
    assert compose_functors(i, i) == i
    f = enumerate_functors(walking_arrow(), c)[4]
    assert compose_functors(i, f) == f


def test_bad_functor_is_reported():
    a = walking_arrow()
    f = FinFunctor(a, a, {"0": "1", "1": "0"}, {m: m for m in a.morphisms()})
    assert validate_functor(f)


def test_nat_transformations_between_chain_inclusions():
    c = chain_category(2)
    fs = sorted(enumerate_functors(terminal_category(), c), key=lambda f: f.fo("*"))
    lo, hi = fs
    assert len(enumerate_nat_transformations(lo, hi)) == 1
    assert enumerate_nat_transformations(hi, lo) == []
    (t,) = enumerate_nat_transformations(lo, hi)
    assert validate_nat_transformation(t) == []


def test_nat_transformation_naturality_failure():
    c = finset_category(2)
    i = identity_functor(c)
    # the constant-zero component on 2 is not natural for the swap
    comps = {x: c.identity(x) for x in c.objects}
    comps["2"] = next(m for m in c.hom("2", "2") if fs_table(c, m) == (0, 0))
    assert validate_nat_transformation(NatTransformation(i, i, comps))


# --- factorization, comma, limits ---


@pytest.mark.parametrize("k", range(11))
def test_bo_ff_factorization(k):
    f = enumerate_functors(walking_arrow(), finset_category(2))[k]
    e, n = bo_ff_factorize(f)
    assert is_bijective_on_objects(e)
    assert is_full_and_faithful(n)
    assert compose_functors(n, e) == f
    assert validate_category(e.dst) == []


def test_forgetful_style_faithfulness():
    c = chain_category(2)
    assert is_faithful(identity_functor(c))
    one = terminal_category()
    collapse = FinFunctor(c, one, {o: "*" for o in c.objects}, {m: one.identity("*") for m in c.morphisms()})
    assert validate_functor(collapse) == []
    assert is_faithful(collapse)  # chains are thin
    assert not is_full_and_faithful(collapse)


def test_comma_category_size():
    # (1 ↓ id) in FinSet<=2 has one object per element of each set: 0 + 1 + 2
    c = finset_category(2)
    comma, proj = comma_category(identity_functor(c), "1")
    assert len(comma.objects) == 3
    assert validate_category(comma) == []


def test_limit_of_product_diagram():
    d = SetFunctor(discrete_category(["a", "b"]), {"a": (0, 1), "b": ("x", "y", "z")}, lambda m, e: e)
    lim = limit_of_finset_diagram(d)
    assert len(lim.apex) == 6
    assert verify_limit(d, lim)


def test_limit_of_parallel_pair_is_equalizer():
    homs = {("a", "a"): ("ia",), ("b", "b"): ("ib",), ("a", "b"): ("f", "g")}
    c = category_from_table(["a", "b"], homs, {"a": "ia", "b": "ib"}, {})
    maps = {"ia": {0: 0, 1: 1, 2: 2}, "ib": {0: 0, 1: 1},
            "f": {0: 0, 1: 1, 2: 0}, "g": {0: 0, 1: 0, 2: 0}}
    d = SetFunctor(c, {"a": (0, 1, 2), "b": (0, 1)}, maps)
    lim = limit_of_finset_diagram(d)
    assert sorted(lim.legs["a"][x] for x in lim.apex) == [0, 2]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10), st.integers(0, 10))
def test_functor_composition_is_associative_up_to_table(i, j):
    c = finset_category(2)
    fs = enumerate_functors(walking_arrow(), c)
    f = fs[i]
    g = identity_functor(c)
    assert compose_functors(g, compose_functors(g, f)) == compose_functors(compose_functors(g, g), f)
    assert validate_functor(fs[j]) == []
