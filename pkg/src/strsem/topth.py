"""Finite topologies on hom-sets, topological models, density, completion, enough subobjects."""

from __future__ import annotations

from itertools import combinations, permutations, product

from .fincat import FinCategory, FinFunctor, is_finset_category, poset_category
from .proth import (
    Aritation,
    ModelCategory,
    ProtoTheory,
    StructureTheory,
    TheoryMorphism,
    canonical_aritation,
    counit,
    enumerate_models,
    sem_on_morphism,
    structure,
)


class TopologyError(ValueError):
    pass


class FinTopology:
    """A topology on a finite carrier, kept as the minimal open neighbourhood of each point."""

    def __init__(self, carrier, opens=None, minimal=None):
        self.carrier = tuple(carrier)
        pts = set(self.carrier)
        if len(pts) != len(self.carrier):
            raise TopologyError("carrier has repeated points")
        if minimal is not None:
            self.minimal = {x: frozenset(minimal[x]) for x in self.carrier}
            for x, ux in self.minimal.items():
                if x not in ux or not ux <= pts:
                    raise TopologyError(f"bad minimal open at {x!r}")
                if any(not self.minimal[y] <= ux for y in ux):
                    raise TopologyError("minimal opens are not transitive")
        else:
            fam = {frozenset(o) for o in (opens if opens is not None else [(), self.carrier])}
            if frozenset() not in fam or frozenset(pts) not in fam:
                raise TopologyError("opens must contain the empty set and the carrier")
            for a in fam:
                if not a <= pts:
                    raise TopologyError("open set outside the carrier")
                for b in fam:
                    if a | b not in fam or a & b not in fam:
                        raise TopologyError("opens not closed under union and intersection")
            self.minimal = {}
            for x in self.carrier:
                u = frozenset(pts)
                for o in fam:
                    if x in o:
                        u &= o
                self.minimal[x] = u

    @classmethod
    def discrete(cls, carrier):
        return cls(carrier, minimal={x: {x} for x in carrier})

    @classmethod
    def indiscrete(cls, carrier):
        return cls(carrier, minimal={x: set(carrier) for x in carrier})

    @classmethod
    def partition(cls, carrier, blocks):
        where = {}
        for blk in blocks:
            for x in blk:
                where[x] = frozenset(blk)
        if set(where) != set(carrier):
            raise TopologyError("blocks do not cover the carrier")
        return cls(carrier, minimal=where)

    def is_open(self, s) -> bool:
        s = set(s)
        return all(self.minimal[x] <= s for x in s)

    def opens(self, limit=4096) -> list:
        """All open sets, as sorted tuples in carrier order."""
        pos = {x: i for i, x in enumerate(self.carrier)}
        seen = {frozenset()}
        frontier = [frozenset()]
        mins = sorted(set(self.minimal.values()), key=lambda u: sorted(pos[x] for x in u))
        while frontier:
            nxt = []
            for o in frontier:
                for u in mins:
                    v = o | u
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
                        if len(seen) > limit:
                            raise TopologyError("too many open sets to list")
            frontier = nxt
        return sorted((tuple(sorted(o, key=pos.get)) for o in seen), key=lambda t: (len(t), [pos[x] for x in t]))

    def basis(self) -> list:
        """The distinct minimal opens, in carrier order."""
        pos = {x: i for i, x in enumerate(self.carrier)}
        out = []
        for x in self.carrier:
            u = tuple(sorted(self.minimal[x], key=pos.get))
            if u not in out:
                out.append(u)
        return out

    def is_discrete(self) -> bool:
        return all(len(u) == 1 for u in self.minimal.values())

    def is_indiscrete(self) -> bool:
        n = len(self.carrier)
        return all(len(u) == n for u in self.minimal.values())

    def is_continuous(self, f, other: "FinTopology") -> bool:
        """f (dict or callable) continuous from self to other."""
        ap = f.get if isinstance(f, dict) else f
        return all({ap(y) for y in self.minimal[x]} <= other.minimal[ap(x)] for x in self.carrier)

    def is_dense(self, image) -> bool:
        image = set(image)
        return all(self.minimal[x] & image for x in self.carrier)

    def product(self, other: "FinTopology") -> "FinTopology":
        pts = [(x, y) for x in self.carrier for y in other.carrier]
        return FinTopology(pts, minimal={(x, y): {(a, b) for a in self.minimal[x] for b in other.minimal[y]}
                                         for x, y in pts})

    def specialization(self) -> set:
        """Pairs (x, y) with x in the closure of y, i.e. y ∈ U_x."""
        return {(x, y) for x in self.carrier for y in self.minimal[x]}

    def __eq__(self, other):
        return isinstance(other, FinTopology) and set(self.carrier) == set(other.carrier) \
            and self.minimal == other.minimal

    def __hash__(self):
        return hash(frozenset(self.minimal.items()))

    def __repr__(self):
        kind = "discrete" if self.is_discrete() else "indiscrete" if self.is_indiscrete() else "finite"
        return f"FinTopology({kind}, {len(self.carrier)} points)"


def set_t_topology(x, y) -> FinTopology:
    """The topology of Set_t(x, y): initial for every ev_e into discrete y."""
    x, y = tuple(x), tuple(y)
    funcs = list(product(y, repeat=len(x)))
    disc = FinTopology.discrete(y)
    maps = [({f: f[i] for f in funcs}, disc) for i in range(len(x))]
    top = initial_topology(funcs, maps)
    assert top.is_discrete()
    return top


def initial_topology(domain, maps) -> FinTopology:
    """Coarsest topology on domain making each (f, codomain topology) continuous."""
    domain = tuple(domain)
    pts = frozenset(domain)
    if all(top.is_discrete() for _, top in maps):
        groups: dict = {}
        for p in domain:
            groups.setdefault(tuple(f[p] for f, _ in maps), set()).add(p)
        return FinTopology(domain, minimal={p: groups[tuple(f[p] for f, _ in maps)] for p in domain})
    minimal = {}
    for p in domain:
        u = set(pts)
        for f, top in maps:
            nb = top.minimal[f[p]]
            u &= {q for q in u if f[q] in nb}
        minimal[p] = u
    return FinTopology(domain, minimal=minimal)


# --- topological proto-theories ---------------------------------------------------------------------


def base_of(th: ProtoTheory) -> FinCategory:
    b = getattr(th, "base", None)
    if b is None and isinstance(getattr(th, "arit", None), Aritation):
        b = th.arit.base
    if b is None:
        b = th.arities.op(name=f"{th.arities.name}^op")
    return b


class TopProtoTheory:
    """A proto-theory with arities B^op and a finite topology on every hom-set."""

    def __init__(self, underlying: ProtoTheory, topologies=None, base: FinCategory | None = None, name=""):
        self.underlying = underlying
        self.base = base or base_of(underlying)
        self.arit = canonical_aritation(self.base)
        self.name = name or underlying.name
        T = underlying.theory_cat
        topologies = topologies or {}
        self.topologies = {}
        for X in T.objects:
            for Y in T.objects:
                hom = T.hom(X, Y)
                top = topologies.get((X, Y))
                if top is None:
                    top = FinTopology.discrete(hom)
                elif set(top.carrier) != set(hom):
                    raise TopologyError(f"topology on ({X},{Y}) has the wrong carrier")
                self.topologies[(X, Y)] = top

    @property
    def theory_cat(self):
        return self.underlying.theory_cat

    def topology(self, X, Y) -> FinTopology:
        return self.topologies[(X, Y)]

    def is_discrete(self) -> bool:
        return all(t.is_discrete() for t in self.topologies.values())

    def validate(self) -> list[str]:
        """Composition is continuous on every pair of hom-spaces."""
        T = self.theory_cat
        report = []
        for X in T.objects:
            for Y in T.objects:
                tf = self.topologies[(X, Y)]
                for Z in T.objects:
                    tg = self.topologies[(Y, Z)]
                    tgf = self.topologies[(X, Z)]
                    bad = False
                    for g in T.hom(Y, Z):
                        for f in T.hom(X, Y):
                            ok = tgf.minimal[T.comp(g, f)]
                            if any(T.comp(g2, f2) not in ok for g2 in tg.minimal[g] for f2 in tf.minimal[f]):
                                report.append(f"composition ({Y},{Z})×({X},{Y}) not continuous at ({g},{f})")
                                bad = True
                                break
                        if bad:
                            break
        return report

    def __repr__(self):
        return f"TopProtoTheory({self.name}, {'discrete' if self.is_discrete() else 'non-discrete'})"


def disc(th: ProtoTheory, base=None) -> TopProtoTheory:
    return TopProtoTheory(th, base=base)


def kernel_topology(l: TopProtoTheory | ProtoTheory, p: TheoryMorphism) -> TopProtoTheory:
    """Hom-topologies given by the fibres of a theory morphism out of l; always compatible with composition."""
    th = l.underlying if isinstance(l, TopProtoTheory) else l
    T = th.theory_cat
    tops = {}
    for X in T.objects:
        for Y in T.objects:
            hom = T.hom(X, Y)
            groups: dict = {}
            for f in hom:
                groups.setdefault(p(f), []).append(f)
            tops[(X, Y)] = FinTopology.partition(hom, groups.values())
    base = l.base if isinstance(l, TopProtoTheory) else None
    return TopProtoTheory(th, tops, base=base, name=f"{th.name}/ker")


def is_continuous_model(x, l: TopProtoTheory) -> bool:
    """Each α_b constant on minimal opens (codomain discrete)."""
    th = l.underlying
    Ld = th.Lo(x.carrier)
    for b in l.base.objects:
        top = l.topology(Ld, th.Lo(b))
        ab = x.alpha[b]
        for f, u in top.minimal.items():
            v = ab[f]
            if any(ab[g] != v for g in u):
                return False
    return True


def sem_t(l: TopProtoTheory, models=None) -> ModelCategory:
    """mod_t(L): the full subcategory of continuous models."""
    models = enumerate_models(l.underlying, l.arit) if models is None else models
    return ModelCategory(l.underlying, l.arit, models=[x for x in models if is_continuous_model(x, l)])


def structure_topological(u, arit: Aritation | None = None, s_u: StructureTheory | None = None) -> TopProtoTheory:
    """str_t(U): str(U) with each hom carrying the initial topology of all evaluations γ ↦ γ_m(e)."""
    if s_u is None:
        if arit is None:
            raise TopologyError("an aritation or a structure theory is needed")
        s_u = structure(u, arit)
    T = s_u.theory_cat
    tops = {}
    for a in T.objects:
        for a2 in T.objects:
            hom = T.hom(a, a2)
            maps = []
            for mi, m in enumerate(s_u.m_objects):
                n_src = len(s_u.presheaves[a].obj(m))
                n_dst = len(s_u.presheaves[a2].obj(m))
                cod = FinTopology.discrete(range(n_dst))
                for e in range(n_src):
                    maps.append(({g: T.data[g][mi][e] for g in hom}, cod))
            tops[(a, a2)] = initial_topology(hom, maps)
    return TopProtoTheory(s_u, tops, base=s_u.arit.base, name=f"str_t({getattr(u, 'name', '') or 'U'})")


def is_topologically_dense(p: TheoryMorphism, src: TopProtoTheory, dst: TopProtoTheory) -> bool:
    """Every hom-map of p has dense image."""
    T = src.theory_cat
    for X in T.objects:
        for Y in T.objects:
            img = {p(f) for f in T.hom(X, Y)}
            if not dst.topology(p.functor.fo(X), p.functor.fo(Y)).is_dense(img):
                return False
    return True


def is_continuous_morphism(p: TheoryMorphism, src: TopProtoTheory, dst: TopProtoTheory) -> bool:
    T = src.theory_cat
    for X in T.objects:
        for Y in T.objects:
            if not src.topology(X, Y).is_continuous(p, dst.topology(p.functor.fo(X), p.functor.fo(Y))):
                return False
    return True


def _is_iso_functor(f: FinFunctor) -> tuple[bool, bool]:
    """(bijective on objects and homs, surjective on objects and homs)."""
    c, d = f.src, f.dst
    objs = [f.fo(x) for x in c.objects]
    bij = len(set(objs)) == len(objs) == len(d.objects)
    surj = set(objs) == set(d.objects)
    images = [f.fm(m) for m in c.morphisms()]
    bij = bij and len(set(images)) == len(images) == d.n_morphisms()
    surj = surj and set(images) == set(d.morphisms())
    return bij, surj


class CompletenessReport:
    """Outcome of comparing L with str_t(sem_t(L)) through the counit E_L.

    ``homs[(X, Y)]`` holds (|L(X,Y)|, |image of E_L|, |thr(X,Y)|). When the
    structure theory is too large to build, ``built`` is False and the
    model-category checks are skipped (their fields stay None).
    """

    def __init__(self):
        self.homs: dict = {}
        self.hom_injective = True
        self.hom_surjective = True
        self.continuous = True
        self.built = False
        self.sem_iso = None
        self.sem_split_epi = None
        self.counit = None
        self.cplt: TopProtoTheory | None = None
        self.mod: ModelCategory | None = None
        self.failures: list[str] = []

    @property
    def complete(self) -> bool:
        return self.hom_injective and self.hom_surjective and self.continuous

    @property
    def dense(self) -> bool:
        # str_t of a finite model category is discrete, so density is surjectivity
        return self.hom_surjective

    @property
    def dense_iso_holds(self):
        """Density implies sem_t(E_L) is an isomorphism (None when not computed)."""
        if self.sem_iso is None:
            return None
        return not self.dense or self.sem_iso

    def failing_homs(self) -> list:
        return [k for k, (n, i, t) in self.homs.items() if not n == i == t]

    def __bool__(self):
        return self.complete


def counit_t(l: TopProtoTheory, mod: ModelCategory | None = None):
    """E_L: L -> str_t(sem_t(L)). Returns (E_L, str_t(sem_t L), mod_t(L))."""
    mod = mod or sem_t(l)
    e, s, mod = counit(l.underlying, l.arit, mod)
    return e, structure_topological(mod.forget, s_u=s), mod


def _nat_counts(l: TopProtoTheory, mod: ModelCategory) -> dict:
    """|Nat(⟨a,U-⟩, ⟨a2,U-⟩)| for U the forgetful functor of mod, per pair of arities."""
    from .fincat import enumerate_nat_transformations, set_functor_from_finfunctor
    arit, A = l.arit, l.arit.arities
    out = {}
    if is_finset_category(l.base):
        su = set_functor_from_finfunctor(mod.forget)
        for a in A.objects:
            n = len(enumerate_nat_transformations(arit.presheaf(a, su), su))
            for a2 in A.objects:
                out[(a, a2)] = n ** int(a2)
    else:
        pres = {a: arit.presheaf(a, mod.forget) for a in A.objects}
        for a in A.objects:
            for a2 in A.objects:
                out[(a, a2)] = len(enumerate_nat_transformations(pres[a], pres[a2]))
    return out


def _counit_keys(l: TopProtoTheory, mod: ModelCategory, X, Y) -> list:
    """E_L(f) for f in L(X, Y), as tuples of index tuples over the models."""
    th, B = l.underlying, l.base
    inv = {th.Lo(a): a for a in th.arities.objects}
    a, a2 = inv[X], inv[Y]
    models = list(mod.models.values())
    out = []
    for f in l.theory_cat.hom(X, Y):
        key = []
        for x in models:
            g = x.gamma_of(f)
            tgt = {h: i for i, h in enumerate(B.hom(a2, x.carrier))}
            key.append(tuple(tgt[g[h]] for h in B.hom(a, x.carrier)))
        out.append(tuple(key))
    return out


def check_complete(l: TopProtoTheory, check_sem=True, build_limit=20000) -> CompletenessReport:
    """Is E_L an isomorphism of topological proto-theories?

    E_L is compared hom-set by hom-set against Nat counts, so the verdict
    is available even when str_t(sem_t(L)) is too large to build.
    """
    rep = CompletenessReport()
    mod = sem_t(l)
    rep.mod = mod
    th = l.underlying
    T = l.theory_cat
    counts = _nat_counts(l, mod)
    for a in th.arities.objects:
        for a2 in th.arities.objects:
            X, Y = th.Lo(a), th.Lo(a2)
            keys = _counit_keys(l, mod, X, Y)
            top = l.topology(X, Y)
            hom = T.hom(X, Y)
            kof = dict(zip(hom, keys))
            if any(kof[g] != kof[f] for f in hom for g in top.minimal[f]):
                rep.continuous = False
                rep.failures.append(f"E_L not continuous on ({a},{a2})")
            n_img = len(set(keys))
            rep.homs[(a, a2)] = (len(hom), n_img, counts[(a, a2)])
            if n_img != len(hom):
                rep.hom_injective = False
                rep.failures.append(f"E_L not injective on ({a},{a2})")
            if n_img != counts[(a, a2)]:
                rep.hom_surjective = False
                rep.failures.append(f"E_L not surjective on ({a},{a2}): {n_img} of {counts[(a, a2)]}")
    if sum(counts.values()) > build_limit:
        return rep
    e, st, _ = counit_t(l, mod)
    rep.counit, rep.cplt, rep.built = e, st, True
    if not is_continuous_morphism(e, l, st):
        rep.continuous = False
    if check_sem:
        mod_s = sem_t(st)
        se = sem_on_morphism(e, mod, mod_s)
        rep.sem_iso, rep.sem_split_epi = _is_iso_functor(se)
        if not rep.sem_split_epi:
            rep.failures.append("sem_t(E_L) is not surjective")
        if rep.dense and not rep.sem_iso:
            rep.failures.append("E_L dense but sem_t(E_L) not an isomorphism")
    return rep


def free_model_fits(t, b: int, bound: int) -> bool:
    """Whether the free algebra T(b) fits among carriers of size <= bound."""
    return len(t.T(b)) <= bound


def completion(l: TopProtoTheory):
    """cplt(L) = str_t(sem_t(L)), with the counit E_L: L -> cplt(L)."""
    e, st, _ = counit_t(l)
    return st, e


# --- enough subobjects -----------------------------------------------------------------------------


def coproducts(b: FinCategory) -> dict:
    """Initial objects (key ()) and binary coproducts (key (x, y)) as (s, injections)."""
    out: dict = {}
    inits = [s for s in b.objects if all(len(b.hom(s, z)) == 1 for z in b.objects)]
    if inits:
        out[()] = (inits[0], ())
    for x, y in product(b.objects, repeat=2):
        for s in b.objects:
            found = None
            for i in b.hom(x, s):
                for j in b.hom(y, s):
                    if all(len({(b.comp(h, i), b.comp(h, j)) for h in b.hom(s, z)})
                           == len(b.hom(s, z)) == len(b.hom(x, z)) * len(b.hom(y, z)) for z in b.objects):
                        found = (s, (i, j))
                        break
                if found:
                    break
            if found:
                out[(x, y)] = found
                break
    return out


def sieves(b: FinCategory, q) -> list[frozenset]:
    """All sub-presheaves of B(-, q), as sets of morphisms into q closed under precomposition."""
    into = [f for x in b.objects for f in b.hom(x, q)]
    principal = {}
    for f in into:
        x = b.dom(f)
        principal[f] = frozenset(b.comp(f, h) for y in b.objects for h in b.hom(y, x))
    seen = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for s in frontier:
            for f in into:
                if f not in s:
                    t = s | principal[f]
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    order = {f: i for i, f in enumerate(into)}
    return sorted(seen, key=lambda s: (len(s), sorted(order[f] for f in s)))


class SubobjectReport:
    def __init__(self):
        self.ok = True
        self.witness = None  # (q, sieve) preserving products but not representable
        self.sieves_checked = 0
        self.product_preserving = 0
        self.coproducts: dict = {}

    def __bool__(self):
        return self.ok


def _preserves_products(b: FinCategory, s: frozenset, cps: dict) -> bool:
    def part(x):
        return [f for f in s if b.dom(f) == x]
    for key, (c, inj) in cps.items():
        pc = part(c)
        if key == ():
            if len(pc) != 1:
                return False
            continue
        x, y = key
        i, j = inj
        pairs = {(b.comp(f, i), b.comp(f, j)) for f in pc}
        if len(pairs) != len(pc) or len(pc) != len(part(x)) * len(part(y)):
            return False
    return True


def _representable(b: FinCategory, s: frozenset) -> bool:
    for p in s:
        r = b.dom(p)
        if all({b.comp(p, g) for g in b.hom(c, r)} == {f for f in s if b.dom(f) == c}
               and len({b.comp(p, g) for g in b.hom(c, r)}) == len(b.hom(c, r)) for c in b.objects):
            return True
    return False


def check_enough_subobjects(b: FinCategory) -> SubobjectReport:
    """Every product-preserving sub-presheaf of a representable is representable.

    Products in B^op are read as the initial object and binary coproducts of B.
    """
    rep = SubobjectReport()
    cps = coproducts(b)
    rep.coproducts = cps
    for q in b.objects:
        for s in sieves(b, q):
            rep.sieves_checked += 1
            if not _preserves_products(b, s, cps):
                continue
            rep.product_preserving += 1
            if not _representable(b, s):
                rep.ok = False
                rep.witness = (q, tuple(sorted(s)))
                return rep
    return rep


def finite_lattices(n: int) -> list[tuple]:
    """Partial orders on range(n) with all joins (bottom included), up to the labelling fixed by 0 = bottom.

    Each result is a frozenset of (x, y) pairs meaning x <= y. Duplicates
    under relabelling are removed.
    """
    elems = list(range(n))
    strict = [(x, y) for x in elems for y in elems if x < y]
    seen = set()
    out = []
    for bits in range(1 << len(strict)):
        rel = {(x, x) for x in elems}
        rel |= {strict[i] for i in range(len(strict)) if bits >> i & 1}
        if any((x, z) not in rel for (x, y) in rel for (y2, z) in rel if y == y2):
            continue
        if not _has_all_joins(elems, rel):
            continue
        canon = _canonical_order(elems, rel)
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return sorted(out, key=sorted)


def _has_all_joins(elems, rel) -> bool:
    for k in range(len(elems) + 1):
        for sub in combinations(elems, k):
            ubs = [u for u in elems if all((s, u) in rel for s in sub)]
            least = [u for u in ubs if all((u, v) in rel for v in ubs)]
            if not least:
                return False
    return True


def _canonical_order(elems, rel) -> frozenset:
    best = None
    for perm in permutations(elems):
        r = tuple(sorted((perm[x], perm[y]) for x, y in rel))
        if best is None or r < best:
            best = r
    return frozenset(best)


def lattice_category(n: int, rel) -> FinCategory:
    return poset_category([str(i) for i in range(n)], lambda x, y: (int(x), int(y)) in rel, name=f"lattice{n}")


# --- generated instances -------------------------------------------------------------------------


def adjoin_endomorphisms(base: FinCategory, a, elements, unit, mult, name="") -> ProtoTheory:
    """B^op with End(La) replaced by a finite monoid acting trivially on every other hom.

    Gives proto-theories with non-singleton hom-sets over thin bases.
    """
    from .fincat import FinCategory as _Cat
    A = canonical_aritation(base).arities
    elements = [str(x) for x in elements]
    extra = {x: f"{a}@{x}" for x in elements if x != str(unit)}
    homs = {}
    for X in A.objects:
        for Y in A.objects:
            hs = list(A.hom(X, Y))
            if X == Y == a:
                hs = hs + [extra[x] for x in elements if x in extra]
            homs[(X, Y)] = hs
    back = {v: k for k, v in extra.items()}
    ident = {X: A.identity(X) for X in A.objects}

    def compose(g, f):
        if g in back and f in back:
            r = str(mult(back[g], back[f]))
            return ident[a] if r == str(unit) else extra[r]
        if g in back:
            return f if not A.is_identity(f) else g
        if f in back:
            return g if not A.is_identity(g) else f
        return A.comp(g, f)

    T = _Cat(A.objects, homs, ident, compose, name=name or f"{base.name}+End({a})")
    L = FinFunctor(A, T, {x: x for x in A.objects}, {f: f for f in A.morphisms()}, name="L")
    th = ProtoTheory(A, T, L, name=name or f"{base.name}+End({a})")
    th.base = base
    return th
