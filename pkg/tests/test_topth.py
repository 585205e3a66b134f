import pytest

from strsem.fincat import chain_category, discrete_category, finset_category, validate_category
from strsem.monads import identity_monad, kleisli, maybe_monad
from strsem.suite import topological_instances, v_poset
from strsem.topth import (
    FinTopology,
    TopProtoTheory,
    TopologyError,
    adjoin_endomorphisms,
    check_complete,
    check_enough_subobjects,
    completion,
    coproducts,
    disc,
    finite_lattices,
    free_model_fits,
    kernel_topology,
    lattice_category,
    sieves,
)


# --- finite spaces ---


def test_minimal_opens_from_open_sets():
    t = FinTopology("abc", opens=[(), "a", "ab", "abc"])
    assert t.minimal == {"a": {"a"}, "b": {"a", "b"}, "c": {"a", "b", "c"}}
    assert not t.is_discrete() and not t.is_indiscrete()
    assert ("c", "a") in t.specialization()


@pytest.mark.parametrize("opens", [["a"], [(), "a", "b", "abc"], [(), "abc", "z"]])
def test_bad_open_families(opens):
    with pytest.raises(TopologyError):
        FinTopology("abc", opens=opens)


def test_opens_roundtrip():
    t = FinTopology.partition("abcd", ["ab", "cd"])
    assert len(t.opens()) == 4
    assert FinTopology("abcd", opens=t.opens()) == t


def test_continuity_and_density():
    sier = FinTopology("01", opens=[(), "1", "01"])
    ind = FinTopology.indiscrete("01")
    ident = {"0": "0", "1": "1"}
    assert sier.is_continuous(ident, ind)
    assert not ind.is_continuous(ident, sier)
    assert sier.is_dense({"1"}) and not sier.is_dense({"0"})
    assert ind.is_dense({"0"})


def test_product_topology():
    s = FinTopology("01", opens=[(), "1", "01"])
    p = s.product(s)
    assert len(p.opens()) == 6  # up-sets of the product order on 2 x 2


# --- topological theories ---


def test_discrete_kleisli_identity_is_complete():
    kt = kleisli(identity_monad(), 3)
    rep = check_complete(disc(kt, base=kt.base))
    assert rep.complete and rep.dense
    assert rep.sem_split_epi and rep.dense_iso_holds


def test_kleisli_maybe_fails_only_where_the_free_algebra_is_too_big():
    t = maybe_monad()
    kt = kleisli(t, 2)
    rep = check_complete(disc(kt, base=kt.base))
    assert not free_model_fits(t, 2, 2)
    assert rep.failing_homs()
    assert all(a == "2" for a, _ in rep.failing_homs())


def _idem_theory():
    return adjoin_endomorphisms(chain_category(2), "0", ["1", "e"], "1", lambda x, y: "e" if "e" in (x, y) else "1")


def test_indiscrete_endomorphisms_collapse_in_the_completion():
    th = _idem_theory()
    T = th.theory_cat
    assert validate_category(T) == []
    l = TopProtoTheory(th, {("0", "0"): FinTopology.indiscrete(T.hom("0", "0"))}, base=th.base)
    assert l.validate() == []
    rep = check_complete(l)
    assert not rep.complete
    assert rep.homs[("0", "0")] == (2, 1, 1)
    cp, e = completion(l)
    assert check_complete(cp).complete
    assert len(cp.theory_cat.hom("0", "0")) == 1


def test_kernel_topology_is_valid():
    th = _idem_theory()
    l = TopProtoTheory(th, base=th.base)
    rep = check_complete(l)
    kl = kernel_topology(l, rep.counit)
    assert kl.validate() == []


def test_sierpinski_on_an_idempotent_is_continuous():
    th = _idem_theory()
    T = th.theory_cat
    hom = T.hom("0", "0")
    e = [f for f in hom if not T.is_identity(f)]
    sier = FinTopology(hom, opens=[frozenset(), frozenset(e), frozenset(hom)])
    assert TopProtoTheory(th, {("0", "0"): sier}, base=th.base).validate() == []


def test_discontinuous_composition_is_reported():
    # Z/2 with only {s} open: id = s s is not reachable inside U_s
    th = adjoin_endomorphisms(chain_category(2), "0", ["1", "s"], "1", lambda x, y: "1" if x == y else "s")
    T = th.theory_cat
    hom = T.hom("0", "0")
    s = [f for f in hom if not T.is_identity(f)]
    sier = FinTopology(hom, opens=[frozenset(), frozenset(s), frozenset(hom)])
    assert TopProtoTheory(th, {("0", "0"): sier}, base=th.base).validate()


def test_generated_instances():
    insts = topological_instances()
    assert len(insts) >= 20
    assert sum(not l.is_discrete() for l in insts) >= 10
    for l in insts[:8]:
        assert l.validate() == []
        cp, _ = completion(l)
        assert check_complete(cp).complete


# --- enough subobjects ---


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 5), (6, 15)])
def test_lattice_counts(n, count):
    assert len(finite_lattices(n)) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_lattices_have_enough_subobjects(n):
    for rel in finite_lattices(n):
        b = lattice_category(n, rel)
        assert validate_category(b) == []
        assert check_enough_subobjects(b).ok


def test_v_poset_lacks_an_initial_object():
    rep = check_enough_subobjects(v_poset())
    assert not rep.ok
    assert rep.witness == ("a", ())


def test_discrete_two_has_a_witness():
    rep = check_enough_subobjects(discrete_category(["a", "b"]))
    assert not rep.ok and rep.witness is not None


def test_finset_coproducts():
    cps = coproducts(finset_category(2))
    assert cps[()][0] == "0"
    assert cps[("1", "1")][0] == "2"
    assert ("1", "2") not in cps  # 3 is outside the truncation


def test_sieves_on_a_chain():
    # sub-presheaves of the representable at the top of 0 < 1 < 2: the down-closed sets
    c = chain_category(3)
    assert len(sieves(c, "2")) == 4
