import pytest

from strsem.fincat import (
    chain_category,
    compose_functors,
    finset_category,
    identity_functor,
    is_faithful,
    validate_category,
    validate_functor,
)
from strsem.monads import kleisli, maybe_monad
from strsem.proth import (
    ProjectionAritation,
    algebra_law_violations,
    canonical_aritation,
    counit,
    enumerate_lifts,
    enumerate_models,
    enumerate_theory_morphisms,
    identity_theory,
    model_category,
    monoid_point_prototheory,
    psi,
    structure,
    theta,
    validate_model,
)
from strsem.suite import adjunction_checks, adjunction_triples


def _id_theory(b):
    arit = canonical_aritation(b)
    return identity_theory(arit.arities), arit


@pytest.mark.parametrize("b", [chain_category(2), chain_category(3), finset_category(2)], ids=lambda b: b.name)
def test_identity_theory_models_are_objects(b):
    th, arit = _id_theory(b)
    mod = model_category(th, arit)
    assert len(mod.models) == len(b.objects)
    assert mod.cat.n_morphisms() == b.n_morphisms()
    assert is_faithful(mod.forget)


def test_pointed_sets_as_models_of_kleisli_maybe():
    kt = kleisli(maybe_monad(), 2)
    mod = model_category(kt, canonical_aritation(kt.base))
    carriers = sorted(x.carrier for x in mod.models.values())
    assert carriers == ["1", "2", "2"]
    # pointed maps: 1 + 2 + 2 + 4 * 2
    assert mod.cat.n_morphisms() == 13
    assert validate_category(mod.cat) == []
    for x in mod.models.values():
        assert validate_model(x) == []
        assert algebra_law_violations(x) == []


def test_model_names_follow_carrier():
    kt = kleisli(maybe_monad(), 2)
    mod = model_category(kt, canonical_aritation(kt.base))
    assert sorted(mod.models) == ["1#0", "2#0", "2#1"]
    assert validate_functor(mod.forget) == []


def test_structure_of_identity_is_yoneda():
    b = finset_category(2)
    arit = canonical_aritation(b)
    s = structure(identity_functor(b), arit)
    # Nat(B(a, -), B(a2, -)) = B(a2, a)
    for a in b.objects:
        for a2 in b.objects:
            assert len(s.theory_cat.hom(a, a2)) == len(b.hom(a2, a))
    assert validate_category(s.theory_cat) == []


def test_power_decomposition_agrees_with_direct_search():
    kt = kleisli(maybe_monad(), 2)
    arit = canonical_aritation(kt.base)
    u = model_category(kt, arit).forget
    fast = structure(u, arit)
    slow = structure(u, arit, power=False)
    for key in fast.theory_cat.hom_sets():
        assert len(fast.theory_cat.hom(*key)) == len(slow.theory_cat.hom(*key))


def test_counit_is_iso_for_kleisli_maybe_on_arities_that_fit():
    kt = kleisli(maybe_monad(), 2)
    e, s, mod = counit(kt, canonical_aritation(kt.base))
    assert e.validate() == []
    # T1 = 2 fits in FinSet<=2, so the operations out of arity 1 are all recovered
    for b in kt.base.objects:
        assert len(s.theory_cat.hom("1", b)) == len(kt.theory_cat.hom(kt.Lo("1"), kt.Lo(b)))


def test_identity_theory_is_initial():
    kt = kleisli(maybe_monad(), 2)
    arit = canonical_aritation(kt.base)
    th = identity_theory(arit.arities)
    ps = enumerate_theory_morphisms(th, kt)
    assert len(ps) == 1
    assert ps[0].validate() == []


def test_psi_theta_roundtrip_small():
    kt = kleisli(maybe_monad(), 2)
    arit = canonical_aritation(kt.base)
    mod = model_category(kt, arit)
    u = mod.forget
    s_u = structure(u, arit)
    lifts = enumerate_lifts(u, mod)
    assert lifts
    for r in lifts:
        assert theta(psi(r, kt, mod, s_u), mod, s_u) == r
    for p in enumerate_theory_morphisms(kt, s_u):
        assert psi(theta(p, mod, s_u), kt, mod, s_u) == p


def test_generated_triples_satisfy_the_adjunction():
    triples = adjunction_triples()
    assert len(triples) >= 50
    cache = {}
    for arit, th, u in triples[::9]:
        res = adjunction_checks(arit, th, u, cache)
        for key in ("roundtrip", "natural_L", "natural_U"):
            assert res[key] == [], (th.name, key, res[key][:2])


def test_point_theory_models_are_actions():
    # Z/2 acting on sets of size <= 2: 1 + 1 + 2 actions
    th = monoid_point_prototheory([0, 1], 0, lambda x, y: (int(x) + int(y)) % 2, name="Z2")
    arit = ProjectionAritation(finset_category(2))
    models = enumerate_models(th, arit)
    assert len(models) == 4
    mod = model_category(th, arit)
    assert validate_category(mod.cat) == []
    assert compose_functors(mod.forget, identity_functor(mod.cat)) == mod.forget
