import json
from pathlib import Path

import pytest

from strsem.fincat import FinFunctor, finset_category, validate_category, walking_arrow
from strsem.groupsem import find_isomorphism, klein_four
from strsem.textio import (
    InputError,
    Workspace,
    category_from_dict,
    category_to_dict,
    dumps,
    evaluate,
    format_category,
    format_functor,
    load_file,
    parse_text,
)
from strsem.topth import TopProtoTheory

EXAMPLES = Path(__file__).resolve().parents[1] / "examples"


def test_walking_arrow_file():
    ws = load_file(str(EXAMPLES / "walking_arrow.cat"))
    c = ws.get("walking_arrow", "CATEGORY")
    w = walking_arrow()
    assert c.objects == w.objects
    assert [len(c.hom(a, b)) for a in c.objects for b in c.objects] == [1, 1, 0, 1]
    assert validate_category(c) == []


def test_broken_file_parses_but_fails_validation():
    ws = load_file(str(EXAMPLES / "broken_assoc.cat"))
    (name,) = ws.names("CATEGORY")
    errs = validate_category(ws.get(name, "CATEGORY"))
    assert any("associativity" in e for e in errs)


def test_monoid_file():
    ws = load_file(str(EXAMPLES / "klein.monoid"))
    m = ws.get("v4", "MONOID")
    assert m.validate() == []
    assert find_isomorphism(m, klein_four()) is not None


def test_topology_file():
    ws = load_file(str(EXAMPLES / "chain2_idem.top"))
    l = ws.get("t_ind", "TOPOLOGY")
    assert isinstance(l, TopProtoTheory)
    assert not l.is_discrete()
    assert l.validate() == []


def test_same_one_line_definition_in_two_files():
    ws = load_file(str(EXAMPLES / "z2.theory"))
    load_file(str(EXAMPLES / "z2sets.fun"), ws)
    assert ws.get("e_z2", "THEORY") is not None
    assert ws.get("u_z2", "FUNCTOR") is not None


@pytest.mark.parametrize("text, where", [
    ("CATEGORY c\nOBJECTS a\nHOMS\n  a a : i\nIDENTITIES\n  a : j\nEND\n", ":6"),
    ("CATEGORY c\nOBJECTS a\nHOMS\n  a a i\nEND\n", ":4"),
    ("CATEGORY c\nOBJECTS a\n", ":1"),
    ("CATEGORY c\nOBJECTS a\nHOMS\n  a a : i\nIDENTITIES\n  a : i\nCOMPOSE\n  i k : i\nEND\n", ":8"),
    ("WIDGET w\nEND\n", ":1"),
    ("MONOID m = Z(two)\n", ":1"),
])
def test_parse_errors_carry_positions(text, where):
    with pytest.raises(InputError) as exc:
        parse_text(text, path="bad.cat")
    assert str(exc.value).startswith("bad.cat" + where)


def test_duplicate_names():
    text = "CATEGORY a = chain(2)\nCATEGORY a = chain(3)\n"
    with pytest.raises(InputError, match="defined twice"):
        parse_text(text)


def test_unresolved_reference():
    with pytest.raises(InputError):
        Workspace().get("nowhere", "CATEGORY")
    with pytest.raises(InputError):
        evaluate("finset(2)", "MONOID")


def test_kind_mismatch():
    ws = parse_text("CATEGORY c = chain(2)\n")
    with pytest.raises(InputError, match="not a monoid"):
        ws.get("c", "MONOID")


@pytest.mark.parametrize("expr, kind, check", [
    ("finset(2)", "CATEGORY", lambda c: c.n_morphisms() == 11),
    ("op(walking_arrow)", "CATEGORY", lambda c: validate_category(c) == []),
    ("lattice(4, 1)", "CATEGORY", lambda c: len(c.objects) == 4),
    ("Z(3)", "MONOID", lambda m: len(m) == 3),
    ("catalog(3, 0)", "MONOID", lambda m: len(m) == 3),
    ("action(Z(2))", "MONAD", lambda t: len(t.T(1)) == 2),
    ("kleisli(maybe, 2)", "THEORY", lambda th: len(th.theory_cat.objects) == 3),
    ("E(Z(2), 2)", "THEORY", lambda th: th.base.n_morphisms() == 11),
    ("gset(Z(2), 2)", "FUNCTOR", lambda u: isinstance(u, FinFunctor)),
    ("forget(kleisli(maybe, 2))", "FUNCTOR", lambda u: len(u.src.objects) == 3),
])
def test_builtin_expressions(expr, kind, check):
    assert check(evaluate(expr, kind))


def test_category_text_roundtrip():
    c = finset_category(1)
    ws = parse_text(format_category(c, "fs1"))
    back = ws.get("fs1", "CATEGORY")
    assert back == c
    assert validate_category(back) == []


def test_functor_text_roundtrip():
    c = walking_arrow()
    i0 = c.identity("0")
    f = FinFunctor(c, c, {"0": "0", "1": "0"}, {m: i0 for m in c.morphisms()}, name="collapse")
    text = format_category(c, "A") + format_functor(f, "collapse", "A", "A")
    g = parse_text(text).get("collapse", "FUNCTOR")
    assert g == f


def test_structured_export_is_canonical():
    c = finset_category(2)
    d = category_to_dict(c)
    assert category_from_dict(json.loads(dumps(d))) == c
    assert dumps(d) == dumps(category_to_dict(finset_category(2)))


def test_catalog_index_out_of_range():
    with pytest.raises(InputError):
        evaluate("catalog(2, 9)", "MONOID")
