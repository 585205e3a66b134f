import pytest

from strsem.fincat import validate_category
from strsem.groupsem import (
    GSetCategory,
    MonoidError,
    count_actions,
    cyclic_group,
    e_of_monoid,
    find_isomorphism,
    idempotent_monoid,
    is_normal,
    klein_four,
    left_cosets,
    models_equal_msets,
    monoid_catalog,
    monoid_from_table,
    monoid_homs,
    nat_endomorphism_monoid,
    phi_map,
    product_monoid,
    profinite_completion,
    quotient_family,
    recognize_monoid_theory,
    subgroups,
    trivial_monoid,
)
from strsem.monads import kleisli, maybe_monad


def test_builtin_monoids_are_valid():
    for m in (cyclic_group(3), klein_four(), idempotent_monoid(), trivial_monoid(),
              product_monoid(cyclic_group(2), cyclic_group(3))):
        assert m.validate() == []


def test_table_monoids_and_inverses():
    m = monoid_from_table([[0, 1], [1, 1]])
    assert m.validate() == []
    assert not m.is_group
    with pytest.raises(MonoidError):
        m.inverse(m.elements[1])
    assert monoid_from_table([[0, 1], [1, 0]]).is_group


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 7), (4, 35)])
def test_catalog_counts_monoids_up_to_isomorphism(n, count):
    assert sum(1 for m in monoid_catalog(4) if len(m) == n) == count


def test_z6_is_z2_times_z3():
    assert find_isomorphism(cyclic_group(6), product_monoid(cyclic_group(2), cyclic_group(3))) is not None
    assert find_isomorphism(cyclic_group(4), klein_four()) is None


def test_homs_from_z2():
    # group homs Z/2 -> Z/4: the unit and the element of order 2
    assert len(monoid_homs(cyclic_group(2), cyclic_group(4))) == 2


@pytest.mark.parametrize("g, n_sub, n_normal", [
    (cyclic_group(4), 3, 3),
    (klein_four(), 5, 5),
    (cyclic_group(6), 4, 4),
])
def test_subgroups(g, n_sub, n_normal):
    subs = subgroups(g)
    assert len(subs) == n_sub
    assert sum(is_normal(g, h) for h in subs) == n_normal
    for h in subs:
        assert len(left_cosets(g, h)) * len(h) == len(g)


@pytest.mark.parametrize("m, sizes", [
    (cyclic_group(2), [1, 1, 2, 4]),   # involutions
    (cyclic_group(3), [1, 1, 1, 3]),
    (idempotent_monoid(), [1, 1, 3, 10]),  # idempotent self-maps
])
def test_count_actions(m, sizes):
    assert [count_actions(m, d) for d in range(4)] == sizes


def test_gset_category_and_orbit_skeleton():
    full = GSetCategory(cyclic_group(2), 3)
    assert len(full.cat.objects) == 1 + 1 + 2 + 4
    assert validate_category(full.cat) == []
    orb = GSetCategory(cyclic_group(2), 3, skeleton="orbits")
    assert len(orb.cat.objects) == 2  # Z2/Z2 and Z2/1


@pytest.mark.parametrize("m", [cyclic_group(2), idempotent_monoid(), trivial_monoid()], ids=lambda m: m.name)
def test_models_of_e_are_msets(m):
    iso = models_equal_msets(m, 3)
    assert iso.checks() == {k: True for k in iso.checks()}


@pytest.mark.parametrize("m", [cyclic_group(2), cyclic_group(3), klein_four(), idempotent_monoid()],
                         ids=lambda m: m.name)
def test_recognition_inverts_e(m):
    th = e_of_monoid(m, 2)
    res = recognize_monoid_theory(th, th.base)
    assert res != "not monoidal"
    rec, p = res
    assert find_isomorphism(rec, m) is not None


def test_kleisli_maybe_is_not_monoidal():
    kt = kleisli(maybe_monad(), 2)
    assert recognize_monoid_theory(kt, kt.base) == "not monoidal"


def test_e_hom_counts_match_kleisli_of_action():
    # E(M)(a, b) = (|M| * b)^a for Z/2
    th = e_of_monoid(cyclic_group(2), 2)
    counts = sorted(len(th.theory_cat.hom(*k)) for k in th.theory_cat.hom_sets())
    assert counts == sorted((2 * b) ** a for a in range(3) for b in range(3))


def test_profinite_completion_of_z4():
    g = cyclic_group(4)
    assert len(quotient_family(g)) == 3
    comp = profinite_completion(g)
    assert len(comp.elements) == 4
    assert len(set(comp.eta.values())) == 4


def test_profinite_completion_with_a_coarse_family():
    g = cyclic_group(4)
    coarse = [h for h in subgroups(g) if len(h) == 2]
    comp = profinite_completion(g, coarse)
    assert len(comp.elements) == 2


def test_profinite_rejects_non_groups():
    with pytest.raises(MonoidError):
        profinite_completion(idempotent_monoid())


@pytest.mark.parametrize("g", [cyclic_group(2), cyclic_group(3), cyclic_group(4), klein_four()],
                         ids=lambda g: g.name)
def test_phi_is_an_isomorphism(g):
    rep, comp, nat = phi_map(g, max(len(g), 6))
    assert rep.ok()
    assert len(nat) == len(g)


def test_nat_endomorphisms_of_z3_sets():
    nat = nat_endomorphism_monoid(cyclic_group(3), 3)
    assert len(nat) == 3
    assert nat.validate() == []
