"""Monoid proto-theories E(M), finite M-sets, truncated profinite completion and Φ."""

from __future__ import annotations

from itertools import permutations, product

from .fincat import FinCategory, FinFunctor, SetFunctor, enumerate_nat_transformations, finset_category, fs_name
from .monads import action_monad, compare_kleisli_models, kleisli, _enc
from .proth import ProtoTheory, canonical_aritation


class MonoidError(ValueError):
    pass


class FinMonoid:
    """A finite monoid given by its multiplication table; mul(x, y) = x·y."""

    def __init__(self, elements, unit, table, name=""):
        self.elements = tuple(elements)
        self.unit = unit
        self.table = dict(table)
        self.name = name or f"M{len(self.elements)}"

    def mul(self, x, y):
        return self.table[(x, y)]

    def __len__(self):
        return len(self.elements)

    def validate(self) -> list[str]:
        rep = []
        els = self.elements
        if self.unit not in els:
            rep.append("unit is not an element")
            return rep
        for x in els:
            for y in els:
                if self.table.get((x, y)) not in els:
                    rep.append(f"{x}·{y} undefined")
        if rep:
            return rep
        for x in els:
            if self.mul(self.unit, x) != x or self.mul(x, self.unit) != x:
                rep.append(f"unit law fails at {x}")
        for x, y, z in product(els, repeat=3):
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                rep.append(f"associativity fails at ({x},{y},{z})")
                break
        return rep

    @property
    def is_group(self) -> bool:
        return all(any(self.mul(x, y) == self.unit for y in self.elements) for x in self.elements)

    def inverse(self, x):
        for y in self.elements:
            if self.mul(x, y) == self.unit and self.mul(y, x) == self.unit:
                return y
        raise MonoidError(f"{x} has no inverse")

    def __repr__(self):
        return f"FinMonoid({self.name}, order {len(self.elements)})"


def cyclic_group(n: int) -> FinMonoid:
    els = tuple(range(n))
    return FinMonoid(els, 0, {(x, y): (x + y) % n for x in els for y in els}, name=f"Z/{n}")


def trivial_monoid() -> FinMonoid:
    return cyclic_group(1)


def product_monoid(a: FinMonoid, b: FinMonoid) -> FinMonoid:
    els = tuple(product(a.elements, b.elements))
    table = {(x, y): (a.mul(x[0], y[0]), b.mul(x[1], y[1])) for x in els for y in els}
    return FinMonoid(els, (a.unit, b.unit), table, name=f"{a.name}×{b.name}")


def klein_four() -> FinMonoid:
    g = product_monoid(cyclic_group(2), cyclic_group(2))
    g.name = "Z/2×Z/2"
    return g


def idempotent_monoid() -> FinMonoid:
    """{1, e} with e·e = e."""
    return FinMonoid((0, 1), 0, {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1}, name="{1,e}")


def monoid_from_table(rows, name="") -> FinMonoid:
    """Monoid on 0..n-1 from a row-major multiplication table; the unit is found."""
    n = len(rows)
    els = tuple(range(n))
    table = {(x, y): rows[x][y] for x in els for y in els}
    for u in els:
        if all(table[(u, x)] == x and table[(x, u)] == x for x in els):
            m = FinMonoid(els, u, table, name=name)
            if m.validate():
                raise MonoidError("; ".join(m.validate()))
            return m
    raise MonoidError("table has no unit")


def find_isomorphism(a: FinMonoid, b: FinMonoid):
    """A monoid isomorphism a -> b as a dict, or None."""
    if len(a) != len(b):
        return None
    for perm in permutations(b.elements):
        f = dict(zip(a.elements, perm))
        if f[a.unit] != b.unit:
            continue
        if all(f[a.mul(x, y)] == b.mul(f[x], f[y]) for x in a.elements for y in a.elements):
            return f
    return None


def monoid_homs(a: FinMonoid, b: FinMonoid) -> list[dict]:
    out = []
    for vals in product(b.elements, repeat=len(a)):
        f = dict(zip(a.elements, vals))
        if f[a.unit] == b.unit and all(f[a.mul(x, y)] == b.mul(f[x], f[y])
                                       for x in a.elements for y in a.elements):
            out.append(f)
    return out


def _canonical_table(n, table):
    """Lexicographically least relabelled table fixing the unit 0."""
    best = None
    for perm in permutations(range(1, n)):
        p = (0,) + perm
        inv = {p[i]: i for i in range(n)}
        t = tuple(inv[table[p[x] * n + p[y]]] for x in range(n) for y in range(n))
        if best is None or t < best:
            best = t
    return best


def monoid_catalog(max_order: int) -> list[FinMonoid]:
    """All monoids of order <= max_order up to isomorphism, unit labelled 0."""
    out = []
    for n in range(1, max_order + 1):
        seen = set()
        free = [(x, y) for x in range(1, n) for y in range(1, n)]
        table = [None] * (n * n)
        for x in range(n):
            table[x] = x
            table[x * n] = x

        def assoc_ok():
            for x in range(n):
                for y in range(n):
                    xy = table[x * n + y]
                    if xy is None:
                        continue
                    for z in range(n):
                        yz = table[y * n + z]
                        if yz is None:
                            continue
                        l, r = table[xy * n + z], table[x * n + yz]
                        if l is not None and r is not None and l != r:
                            return False
            return True

        def rec(i):
            if i == len(free):
                canon = _canonical_table(n, table)
                if canon not in seen:
                    seen.add(canon)
                return
            x, y = free[i]
            for v in range(n):
                table[x * n + y] = v
                if assoc_ok():
                    rec(i + 1)
            table[x * n + y] = None

        rec(0)
        for j, canon in enumerate(sorted(seen)):
            rows = [list(canon[x * n:(x + 1) * n]) for x in range(n)]
            out.append(monoid_from_table(rows, name=f"M{n}.{j}"))
    return out


# --- E(M) -------------------------------------------------------------------------------------------------


def e_of_monoid(m: FinMonoid, bound: int) -> ProtoTheory:
    """E(M) over FinSet_{<=bound}: a morphism LS2 -> LS is a function S -> M × S2.

    Built directly from the monoid; names agree with kleisli(action_monad(m)).
    """
    B = finset_category(bound)
    A = B.op(name=f"{B.name}^op")
    els = m.elements
    pos = {g: i for i, g in enumerate(els)}
    homs, data, lookup = {}, {}, {}
    for s2 in range(bound + 1):
        pairs = [(g, x) for g in els for x in range(s2)]
        for s in range(bound + 1):
            ms = []
            for tab in product(range(len(pairs)), repeat=s):
                nm = f"{s2}~{s}:{_enc(tab)}"
                fn = tuple(pairs[j] for j in tab)
                ms.append(nm)
                data[nm] = (s2, s, fn)
                lookup[(s2, s, fn)] = nm
            homs[(str(s2), str(s))] = ms
    ident = {str(s): lookup[(s, s, tuple((m.unit, x) for x in range(s)))] for s in range(bound + 1)}

    def compose(k, l):
        # l: LS3 -> LS2 is S2 -> M×S3; k: LS2 -> LS is S -> M×S2
        s3, _, fl = data[l]
        _, s, fk = data[k]
        out = []
        for g, x in fk:
            h, y = fl[x]
            out.append((m.mul(g, h), y))
        return lookup[(s3, s, tuple(out))]

    theory = FinCategory(B.objects, homs, ident, compose, name=f"E({m.name})", data=data)
    Lmor = {}
    for f in B.morphisms():
        a, b, tab = B.data[f]
        Lmor[f] = lookup[(b, a, tuple((m.unit, v) for v in tab))]
    L = FinFunctor(A, theory, {o: o for o in B.objects}, Lmor, name="E")
    th = ProtoTheory(A, theory, L, name=f"E({m.name})")
    th.monoid = m
    th.base = B
    th.lookup = lookup
    return th


def recognize_monoid_theory(th: ProtoTheory, base: FinCategory):
    """Return (M, P) with M = 𝓛(L1, L1) and P: th ≅ E(M), or "not monoidal".

    Checks that L sends the point coprojections ι_s: 1 -> S to product
    projections of the theory category and that every l: LS -> L1
    factors uniquely as m∘L(s) with s: 1 -> S.
    """
    N = base.finset_bound
    if N is None or N < 1:
        raise MonoidError("recognition needs a FinSet truncation containing 1")
    T = th.theory_cat
    L1 = th.Lo("1")
    points = {S: [fs_name(1, S, (j,)) for j in range(S)] for S in range(N + 1)}
    # (i) finite coproducts of points go to products
    for S in range(N + 1):
        LS = th.Lo(str(S))
        proj = [th.Lm(p) for p in points[S]]
        for X in T.objects:
            seen = set()
            for l in T.hom(X, LS):
                seen.add(tuple(T.comp(p, l) for p in proj))
            if len(seen) != len(T.hom(X, LS)) or len(seen) != len(T.hom(X, L1)) ** S:
                return "not monoidal"
    # (ii) unique factorisation through L1
    ends = T.hom(L1, L1)
    fact = {}
    for S in range(N + 1):
        LS = th.Lo(str(S))
        count: dict = {}
        for mm in ends:
            for j, p in enumerate(points[S]):
                l = T.comp(mm, th.Lm(p))
                count.setdefault(l, []).append((mm, j))
        for l in T.hom(LS, L1):
            if len(count.get(l, ())) != 1:
                return "not monoidal"
            fact[l] = count[l][0]
    els = tuple(ends)
    table = {(x, y): T.comp(x, y) for x in els for y in els}
    mon = FinMonoid(els, T.identity(L1), table, name=f"End({L1})")
    e = e_of_monoid(mon, N)
    mor = {}
    for l in T.morphisms():
        s2, s = T.dom(l), T.cod(l)
        row = []
        for p in points[int(s)]:
            mm, j = fact[T.comp(th.Lm(p), l)]
            row.append((mm, j))
        mor[l] = e.lookup[(int(s2), int(s), tuple(row))]
    P = FinFunctor(T, e.theory_cat, {o: o for o in T.objects}, mor, name="P")
    return mon, P


# --- finite M-sets -------------------------------------------------------------------------------------------


def _actions_on(m: FinMonoid, d: int) -> list[tuple]:
    """All left actions on range(d) as tuples a[g-index * d + x]."""
    els = m.elements
    k = len(els)
    ui = els.index(m.unit)
    others = [i for i in range(k) if i != ui]
    out = []
    for choice in product(list(product(range(d), repeat=d)), repeat=len(others)):
        rows = [None] * k
        rows[ui] = tuple(range(d))
        for i, r in zip(others, choice):
            rows[i] = r
        ok = True
        for gi in range(k):
            for hi in range(k):
                gh = els.index(m.mul(els[gi], els[hi]))
                rg, rh, rgh = rows[gi], rows[hi], rows[gh]
                if any(rg[rh[x]] != rgh[x] for x in range(d)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(v for r in rows for v in r))
    return out


def subgroups(g: FinMonoid) -> list[frozenset]:
    els = g.elements
    out = []
    for mask in range(1, 1 << len(els)):
        h = frozenset(e for i, e in enumerate(els) if mask >> i & 1)
        if g.unit in h and all(g.mul(x, y) in h for x in h for y in h):
            out.append(h)
    return out


def is_normal(g: FinMonoid, h: frozenset) -> bool:
    return all(g.mul(g.mul(x, n), g.inverse(x)) in h for x in g.elements for n in h)


def _conj(g, h, x):
    return frozenset(g.mul(g.mul(x, n), g.inverse(x)) for n in h)


def left_cosets(g: FinMonoid, h: frozenset) -> list[frozenset]:
    out = []
    for x in g.elements:
        c = frozenset(g.mul(x, n) for n in h)
        if c not in out:
            out.append(c)
    return sorted(out, key=lambda c: sorted(g.elements.index(e) for e in c))


class GSetCategory:
    """Finite M-sets on carriers range(d), d <= bound, with equivariant maps.

    ``skeleton="full"`` takes every action; ``skeleton="orbits"`` (groups
    only) takes one transitive G-set G/H per conjugacy class of subgroups.
    Natural endomorphisms of the forgetful functor are the same for both.
    """

    def __init__(self, m: FinMonoid, bound: int, skeleton="full"):
        self.monoid = m
        self.bound = bound
        self.skeleton = skeleton
        els = m.elements
        objs = {}
        self.stabilizers = {}
        if skeleton == "full":
            for d in range(bound + 1):
                for i, a in enumerate(_actions_on(m, d)):
                    objs[f"{d}#{i}"] = (d, a)
        elif skeleton == "orbits":
            if not m.is_group:
                raise MonoidError("the orbit skeleton needs a group")
            reps: list = []
            for h in sorted(subgroups(m), key=lambda s: (-len(s), sorted(els.index(e) for e in s))):
                if any(_conj(m, h, x) in reps for x in els):
                    continue
                reps.append(h)
            counters: dict = {}
            for h in reps:
                cos = left_cosets(m, h)
                d = len(cos)
                if d > bound:
                    continue
                a = tuple(cos.index(frozenset(m.mul(g, c0) for c0 in c)) for g in els for c in cos)
                i = counters.get(d, 0)
                counters[d] = i + 1
                nm = f"{d}#{i}"
                objs[nm] = (d, a)
                self.stabilizers[nm] = h
        else:
            raise MonoidError(f"unknown skeleton {skeleton!r}")
        self.actions = objs
        self.by_key = {v: k for k, v in objs.items()}
        names = list(objs)
        homs, data = {}, {}
        B = finset_category(min(bound, 9)) if bound <= 9 else None
        for p in names:
            for q in names:
                ms = []
                for tab in self._equivariant(objs[p], objs[q]):
                    h = fs_name(objs[p][0], objs[q][0], tab)
                    nm = f"{p}>{q}:{h}"
                    ms.append(nm)
                    data[nm] = (p, q, tab)
                homs[(p, q)] = ms
        ident = {p: f"{p}>{p}:{fs_name(objs[p][0], objs[p][0], range(objs[p][0]))}" for p in names}

        def compose(g, f):
            p, _, tf = data[f]
            _, r, tg = data[g]
            tab = tuple(tg[x] for x in tf)
            return f"{p}>{r}:{fs_name(objs[p][0], objs[r][0], tab)}"

        self.cat = FinCategory(names, homs, ident, compose, name=f"{m.name}-Set<={bound}", data=data)
        self.base = B
        if B is not None:
            self.forget = FinFunctor(self.cat, B, {p: str(objs[p][0]) for p in names},
                                     {h: fs_name(objs[data[h][0]][0], objs[data[h][1]][0], data[h][2])
                                      for h in data}, name="U")
        self.u = SetFunctor(self.cat, {p: tuple(range(objs[p][0])) for p in names},
                            lambda h, x: data[h][2][x], name="U")

    def act(self, name, g, x):
        d, a = self.actions[name]
        return a[self.monoid.elements.index(g) * d + x]

    def _equivariant(self, src, dst):
        d, a = src
        d2, b = dst
        k = len(self.monoid.elements)
        out = []
        for tab in product(range(d2), repeat=d):
            if all(tab[a[gi * d + x]] == b[gi * d2 + tab[x]] for gi in range(k) for x in range(d)):
                out.append(tab)
        return out


def count_actions(m: FinMonoid, d: int) -> int:
    return len(_actions_on(m, d))


class MSetIso:
    def __init__(self, mod, gsets, to_gset, to_mod, dictionary):
        self.mod = mod
        self.gsets = gsets
        self.to_gset = to_gset
        self.to_mod = to_mod
        self.dictionary = dictionary  # model name -> action tuple

    def checks(self) -> dict:
        from .fincat import compose_functors, identity_functor
        mod_u = self.mod.forget
        gs_u = self.gsets.forget
        return {
            "objects": len(self.mod.cat.objects) == len(self.gsets.cat.objects),
            "homs": all(len(self.mod.cat.hom(p, q)) == len(self.gsets.cat.hom(self.to_gset.fo(p), self.to_gset.fo(q)))
                        for p in self.mod.cat.objects for q in self.mod.cat.objects),
            "roundtrip_mod": compose_functors(self.to_mod, self.to_gset) == identity_functor(self.mod.cat),
            "roundtrip_gset": compose_functors(self.to_gset, self.to_mod) == identity_functor(self.gsets.cat),
            "forget": compose_functors(gs_u, self.to_gset) == mod_u,
        }

    def ok(self) -> bool:
        return all(self.checks().values())


def models_equal_msets(m: FinMonoid, bound: int) -> MSetIso:
    """mod(E(M)) ≅ M-FinSet_{<=bound}, via a(g, x) = α_1(pick (g, x))."""
    t = action_monad(m)
    th = e_of_monoid(m, bound)
    comp = compare_kleisli_models(t, bound, kt=_as_kleisli(th, t, bound))
    gs = GSetCategory(m, bound)
    obj, dictionary = {}, {}
    for name in comp.mod.models:
        alg = comp.em.algebras[comp.to_em.fo(name)]
        key = (int(alg.carrier), alg.action)
        obj[name] = gs.by_key[key]
        dictionary[name] = alg.action
    mor = {h: f"{obj[p]}>{obj[q]}:{hh}" for h, (p, q, hh) in comp.mod.cat.data.items()}
    to_gset = FinFunctor(comp.mod.cat, gs.cat, obj, mor, name="act")
    inv = {v: k for k, v in obj.items()}
    imor = {}
    for h, (p, q, tab) in gs.cat.data.items():
        hh = fs_name(gs.actions[p][0], gs.actions[q][0], tab)
        imor[h] = f"{inv[p]}>{inv[q]}:{hh}"
    to_mod = FinFunctor(gs.cat, comp.mod.cat, inv, imor, name="act^-1")
    return MSetIso(comp.mod, gs, to_gset, to_mod, dictionary)


def _as_kleisli(th, t, bound):
    """View E(M) as a Kleisli theory of M×- (same names), for the comparison."""
    from .monads import KleisliTheory
    kt = KleisliTheory(t, th.arities, th.theory_cat, th.L, th.base, {}, name=th.name)
    data, lookup = {}, {}
    for nm, (s2, s, fn) in th.theory_cat.data.items():
        tab = tuple(t.index(s2, p) for p in fn)
        data[nm] = (s2, s, tab)
        lookup[(s2, s, tab)] = nm
    kt.kl_data = data
    kt.lookup = lookup
    return kt


# --- natural endomorphisms, profinite completion, Φ --------------------------------------------------------------


class NatMonoid(FinMonoid):
    def __init__(self, elements, unit, table, nats, gsets, name="", warning=None):
        super().__init__(elements, unit, table, name=name)
        self.nats = nats  # element name -> {object: component tuple}
        self.gsets = gsets
        self.warning = warning


def nat_endomorphism_monoid(g: FinMonoid, bound: int, skeleton=None) -> NatMonoid:
    """Nat(U, U) for U the forgetful functor of the truncated M-set category."""
    skeleton = skeleton or ("orbits" if g.is_group else "full")
    gs = GSetCategory(g, bound, skeleton=skeleton)
    u = gs.u
    nats = enumerate_nat_transformations(u, u)
    objs = gs.cat.objects
    comps = []
    for t in nats:
        comps.append({x: tuple(t[x][e] for e in u.obj(x)) for x in objs})
    comps.sort(key=lambda c: tuple(c[x] for x in objs))
    names = [f"t{i}" for i in range(len(comps))]
    key = {tuple(c[x] for x in objs): n for n, c in zip(names, comps)}
    table = {}
    for a, ca in zip(names, comps):
        for b, cb in zip(names, comps):
            table[(a, b)] = key[tuple(tuple(ca[x][v] for v in cb[x]) for x in objs)]
    ident = key[tuple(tuple(range(len(u.obj(x)))) for x in objs)]
    warning = None if bound >= len(g) else f"bound {bound} is below |M| = {len(g)}"
    return NatMonoid(names, ident, table, dict(zip(names, comps)), gs, name=f"Nat(U,U)[{g.name}]", warning=warning)


class ProfiniteCompletion:
    """Ĝ truncated to a family of normal subgroups N, indexed by quotients G -> G/N."""

    def __init__(self, g: FinMonoid, family, group, elements, unit_map):
        self.g = g
        self.family = family  # list of normal subgroups
        self.group = group  # FinMonoid on compatible families
        self.elements = elements
        self.eta = unit_map  # g -> family


def quotient_family(g: FinMonoid, which="full") -> list[frozenset]:
    """Kernels indexing the completion; "full" takes every normal subgroup."""
    normals = [h for h in subgroups(g) if is_normal(g, h)]
    return sorted(normals, key=lambda h: (len(h), sorted(g.elements.index(e) for e in h)))


def _coset(g, n, x):
    return frozenset(g.mul(x, k) for k in n)


def profinite_completion(g: FinMonoid, family=None) -> ProfiniteCompletion:
    """Compatible families (ξ_N ∈ G/N) over the family, ξ_{N2} = image of ξ_N when N ⊆ N2."""
    if not g.is_group:
        raise MonoidError("profinite completion is only defined for groups")
    family = list(family) if family is not None else quotient_family(g)
    for n in family:
        if g.unit not in n or not is_normal(g, n):
            raise MonoidError("family members must be normal subgroups")
    quotients = [sorted({_coset(g, n, x) for x in g.elements},
                        key=lambda c: sorted(g.elements.index(e) for e in c)) for n in family]
    links = [(i, j) for i, n in enumerate(family) for j, n2 in enumerate(family) if i != j and n <= n2]
    elems = []
    cur = [None] * len(family)

    def rec(i):
        if i == len(family):
            elems.append(tuple(cur))
            return
        for c in quotients[i]:
            cur[i] = c
            ok = True
            for a, b in links:
                if max(a, b) == i and not cur[a] <= cur[b]:
                    ok = False
                    break
            if ok:
                rec(i + 1)
        cur[i] = None

    rec(0)
    index = {e: i for i, e in enumerate(elems)}

    def mul_cos(n, c1, c2):
        return _coset(g, n, g.mul(next(iter(c1)), next(iter(c2))))

    table = {}
    for a in elems:
        for b in elems:
            prod = tuple(mul_cos(n, c1, c2) for n, c1, c2 in zip(family, a, b))
            table[(index[a], index[b])] = index[prod]
    unit = index[tuple(_coset(g, n, g.unit) for n in family)]
    grp = FinMonoid(tuple(range(len(elems))), unit, table, name=f"{g.name}^")
    eta = {x: index[tuple(_coset(g, n, x) for n in family)] for x in g.elements}
    return ProfiniteCompletion(g, family, grp, elems, eta)


def _core(g, h):
    out = frozenset(g.elements)
    for x in g.elements:
        out &= _conj(g, h, x)
    return out


class PhiReport:
    def __init__(self):
        self.natural = True
        self.homomorphism = True
        self.bijective = False
        self.eta_iso = False
        self.cayley = True
        self.family_extended = False
        self.phi: dict = {}

    def ok(self) -> bool:
        return self.natural and self.homomorphism and self.bijective and self.eta_iso and self.cayley


def phi_map(g: FinMonoid, bound: int, family=None, extend=True, nat: NatMonoid | None = None):
    """Φ: Ĝ -> Nat(U, U), Φ(ξ)_X = ξ at the kernel of ρ_X acting on X.

    Returns (PhiReport, completion, nat monoid). When some ρ_X does not
    factor through the family its kernel is added (or MonoidError raised
    when extend is False).
    """
    nat = nat or nat_endomorphism_monoid(g, bound)
    gs = nat.gsets
    rep = PhiReport()
    family = list(family) if family is not None else quotient_family(g)
    kernels = {}
    for x, (d, a) in gs.actions.items():
        k = frozenset(e for e in g.elements if all(gs.act(x, e, v) == v for v in range(d)))
        kernels[x] = k
        if k not in family:
            if not extend:
                raise MonoidError(f"the action on {x} does not factor through the family")
            family.append(k)
            rep.family_extended = True
    comp = profinite_completion(g, family)
    objs = gs.cat.objects
    key = {tuple(c[x] for x in objs): n for n, c in nat.nats.items()}
    for i, xi in enumerate(comp.elements):
        comps = []
        for x in objs:
            c = xi[comp.family.index(kernels[x])]
            rep_el = next(iter(c))
            comps.append(tuple(gs.act(x, rep_el, v) for v in range(gs.actions[x][0])))
        k = tuple(comps)
        if k not in key:
            rep.natural = False
            rep.phi[i] = None
        else:
            rep.phi[i] = key[k]
    if rep.natural:
        grp = comp.group
        for a in grp.elements:
            for b in grp.elements:
                if rep.phi[grp.mul(a, b)] != nat.mul(rep.phi[a], rep.phi[b]):
                    rep.homomorphism = False
        if rep.phi[grp.unit] != nat.unit:
            rep.homomorphism = False
        rep.bijective = len(set(rep.phi.values())) == len(nat.elements) == len(grp.elements)
        # Φ∘η_G is the Cayley comparison g ↦ (x ↦ g·x)
        for e in g.elements:
            want = tuple(tuple(gs.act(x, e, v) for v in range(gs.actions[x][0])) for x in objs)
            if rep.phi[comp.eta[e]] != key.get(want):
                rep.cayley = False
    rep.eta_iso = len(set(comp.eta.values())) == len(g.elements) == len(comp.elements)
    return rep, comp, nat
