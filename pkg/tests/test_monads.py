import pytest

from strsem.fincat import SetFunctor, finset_category, terminal_category, validate_category
from strsem.groupsem import cyclic_group
from strsem.monads import (
    action_monad,
    codensity_monad,
    codensity_structure_iso,
    codensity_vs_adjunction,
    compare_kleisli_models,
    eilenberg_moore,
    free_forgetful,
    identity_monad,
    kleisli,
    kleisli_recognition_iso,
    maybe_monad,
    recognize_monadic,
    structure_of_right_adjoint,
    validate_set_monad,
)
from strsem.proth import canonical_aritation, structure
from strsem.suite import idempotent_base


MONADS = {
    "id": identity_monad,
    "maybe": maybe_monad,
    "Z2": lambda: action_monad(cyclic_group(2)),
    "Z3": lambda: action_monad(cyclic_group(3)),
}


@pytest.mark.parametrize("name", sorted(MONADS))
def test_monad_laws(name):
    assert validate_set_monad(MONADS[name](), 3) == []


@pytest.mark.parametrize("name, sizes", [
    ("id", [0, 1, 2, 3]),
    ("maybe", [1, 2, 3, 4]),
    ("Z2", [0, 2, 4, 6]),
    ("Z3", [0, 3, 6, 9]),
])
def test_free_algebra_sizes(name, sizes):
    t = MONADS[name]()
    assert [len(t.T(n)) for n in range(4)] == sizes


def test_kleisli_hom_counts_maybe():
    # Kl(a, b) = (b + 1)^a, stored as theory homs L b -> L a... compare as sets of counts
    kt = kleisli(maybe_monad(), 2)
    assert validate_category(kt.theory_cat) == []
    counts = sorted(len(kt.theory_cat.hom(*k)) for k in kt.theory_cat.hom_sets())
    assert counts == sorted((b + 1) ** a for a in range(3) for b in range(3))


@pytest.mark.parametrize("name", sorted(MONADS))
def test_models_of_kleisli_theory_are_algebras(name):
    cmp = compare_kleisli_models(MONADS[name](), 3)
    assert cmp.checks() == {k: True for k in cmp.checks()}


@pytest.mark.parametrize("name, count", [
    ("id", 4),             # one algebra per carrier
    ("maybe", 6),          # pointed sets: 0 + 1 + 2 + 3
    ("Z2", 1 + 1 + 2 + 4),  # involutions
    ("Z3", 1 + 1 + 1 + 3),  # elements of order dividing 3 in S_n
])
def test_em_algebra_counts(name, count):
    em = eilenberg_moore(MONADS[name](), 3)
    assert len(em.algebras) == count


@pytest.mark.parametrize("name", sorted(MONADS))
def test_structure_of_free_forgetful(name):
    t = MONADS[name]()
    u, free_obj, eta, kt = free_forgetful(t, 2)
    rep, phi = structure_of_right_adjoint(u, free_obj, eta, t, 2)
    assert rep.ok(), rep.failures[:3]
    assert rep.hom_bijective and all(rep.hom_bijective.values())


def test_recognize_kleisli_maybe():
    kt = kleisli(maybe_monad(), 2)
    rec = recognize_monadic(kt, kt.base, mode="finset")
    assert rec != "not monadic"
    assert kleisli_recognition_iso(maybe_monad(), rec, 2)


def test_codensity_of_constant_functor():
    # T(n) = k^(k^n) for U = const_k on the terminal category
    k = 2
    u = SetFunctor(terminal_category(), {"*": tuple(range(k))}, lambda m, e: e, name="const2")
    t = codensity_monad(u, 2)
    assert [len(t.T(n)) for n in range(3)] == [k ** (k ** n) for n in range(3)]
    assert validate_set_monad(t, 2) == []


def test_codensity_of_free_forgetful_recovers_the_monad():
    t = maybe_monad()
    u, free_obj, eta, kt = free_forgetful(t, 2)
    cod = codensity_monad(u, 2)
    assert [len(cod.T(n)) for n in range(3)] == [1, 2, 3]
    assert codensity_vs_adjunction(cod, t, free_obj, eta, 2)


def test_codensity_structure_iso_identity_on_finset():
    b = finset_category(2)
    from strsem.fincat import identity_functor, set_functor_from_finfunctor
    u = set_functor_from_finfunctor(identity_functor(b))
    t = codensity_monad(u, 2)
    s_u = structure(u, canonical_aritation(b))
    assert all(codensity_structure_iso(u, t, s_u, 2).values())


def test_idempotent_base_is_valid():
    assert validate_category(idempotent_base()) == []
