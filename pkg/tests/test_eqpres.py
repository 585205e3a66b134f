import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from strsem.eqpres import (
    OmegaModel,
    OperatorDomain,
    Presentation,
    PresentationError,
    app,
    congruence_closure,
    enumerate_omega_models,
    equation,
    format_presentation,
    generate_terms,
    group_presentation,
    interpret_term,
    parse_presentation,
    parse_term,
    satisfies,
    soundness_check,
    str0,
    var,
)
from strsem.fincat import SetFunctor, monoid_category, terminal_category
from strsem.suite import presentations


MAGMA = OperatorDomain([("m", 2)])


def test_parse_and_print_roundtrip():
    d = OperatorDomain([("e", 0), ("i", 1), ("m", 2)])
    for text in ("x1", "e", "i(x2)", "m(x1,m(i(x2),e))"):
        assert str(parse_term(text, d)) == text


@pytest.mark.parametrize("bad", ["m(x1)", "q(x1)", "m(x1,", "m(", "x0", ",", "m(x1,x2) x1"])
def test_parse_errors(bad):
    with pytest.raises(PresentationError):
        parse_term(bad, MAGMA)


def test_substitution_and_depth():
    t = app("m", var(1), app("m", var(2), var(1)))
    assert t.depth == 2
    assert t.variables() == {1, 2}
    s = t.subst([var(2), var(1)])
    assert str(s) == "m(x2,m(x1,x2))"


def test_term_counts():
    # magma terms in one variable: depth 0: 1, depth 1: 1, depth 2: 3
    assert len(generate_terms(MAGMA, 1, 2)) == 5
    assert len(generate_terms(MAGMA, 2, 1)) == 6


@pytest.mark.parametrize("size, count", [(0, 0), (1, 1), (2, 2), (3, 3)])
def test_group_models(size, count):
    # labelled groups: n! / |Aut|, so 1, 2 / 1, 6 / 2
    assert len(enumerate_omega_models(group_presentation(), size)) == count


def test_group_models_on_four_elements():
    # Z/4: 24 / 2, Z/2 x Z/2: 24 / 6
    assert len(enumerate_omega_models(group_presentation(), 4)) == 16


def test_group_file_matches_builtin():
    path = Path(__file__).resolve().parents[1] / "examples" / "groups.pres"
    p = parse_presentation(path.read_text(), name="groups")
    assert len(p.equations) == 4
    assert len(enumerate_omega_models(p, 2)) == 2


def test_format_roundtrip():
    p = group_presentation()
    q = parse_presentation(format_presentation(p))
    assert q.domain.symbols == p.domain.symbols
    assert [(n, str(s), str(t)) for n, s, t in q.equations] == [(n, str(s), str(t)) for n, s, t in p.equations]


def test_equation_variables_beyond_arity_rejected():
    with pytest.raises(PresentationError):
        Presentation(MAGMA, [equation("m(x1,x2)", "x1", 1, MAGMA)])


def test_involution_closure():
    p = parse_presentation("op u 1\neq u(u(x1)) = x1\n")
    part = congruence_closure(p, 1, 4)
    assert len(part.terms) == 5
    assert len(part.classes()) == 2


def test_commutative_magma_closure():
    p = Presentation(MAGMA, [equation("m(x1,x2)", "m(x2,x1)", 2, MAGMA)])
    part = congruence_closure(p, 2, 1)
    assert len(part.classes()) == 5
    assert part.same(parse_term("m(x1,x2)", MAGMA), parse_term("m(x2,x1)", MAGMA))


def test_closure_is_monotone_in_depth():
    p = group_presentation()
    small = congruence_closure(p, 1, 2)
    big = congruence_closure(p, 1, 3)
    for s, t in itertools.combinations(small.terms, 2):
        if small.same(s, t):
            assert big.same(s, t)


@pytest.mark.parametrize("name, p, n", presentations(), ids=[x[0] for x in presentations()])
def test_soundness_at_depth_two(name, p, n):
    rep = soundness_check(p, n, 2, 2)
    assert rep.ok(), rep.violations[:3]


def test_presentation_corpus_size():
    assert len(presentations()) >= 10


def test_str0_of_a_constant_set():
    # Nat(U^n, U) for U = const 2 on one object: all maps 2^n -> 2
    u = SetFunctor(terminal_category(), {"*": (0, 1)}, lambda h, e: e)
    s = str0(u, 2)
    assert s.counts() == {0: 2, 1: 4, 2: 16}
    assert s.check_unit()


def test_str0_of_the_regular_z2_set():
    # equivariant maps (Z/2)^n -> Z/2: no fixed points, 2 at n = 1, 4 at n = 2
    z2 = monoid_category(["0", "1"], "0", lambda g, f: str((int(g) + int(f)) % 2))
    u = SetFunctor(z2, {o: (0, 1) for o in z2.objects}, lambda h, e: (e + int(h)) % 2)
    s = str0(u, 2)
    assert s.counts() == {0: 0, 1: 2, 2: 4}
    assert s.check_unit()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=4, max_size=4))
def test_commutativity_is_decided_by_the_table(table):
    a = OmegaModel(MAGMA, 2, {"m": tuple(table)})
    comm = equation("m(x1,x2)", "m(x2,x1)", 2, MAGMA)
    assert satisfies(a, comm) == (table[1] == table[2])
    lhs = interpret_term(comm[1], a, 2)
    assert lhs == tuple(table)
