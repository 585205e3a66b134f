"""Finite categories, functors, natural transformations and set-valued functors.

Objects and morphisms are strings. Every morphism id is global, so the
domain and codomain of a morphism can always be recovered from the id.
Composition is either an explicit table or a callable, cached on use.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Iterable, Mapping


class CategoryError(ValueError):
    pass


class FinCategory:
    """A finite category.

    ``homs`` maps (a, b) to the morphism ids a -> b. ``compose`` is either
    a dict keyed by (g, f) giving g∘f or a callable ``compose(g, f)``.
    """

    def __init__(self, objects, homs, identities, compose, name="", data=None):
        self.name = name
        self.objects = tuple(sorted(objects))
        self._homs: dict[tuple[str, str], tuple[str, ...]] = {}
        self._dom: dict[str, str] = {}
        self._cod: dict[str, str] = {}
        for a in self.objects:
            for b in self.objects:
                ms = tuple(sorted(homs.get((a, b), ())))
                self._homs[(a, b)] = ms
                for m in ms:
                    if m in self._dom:
                        raise CategoryError(f"morphism {m!r} appears in two hom-sets")
                    self._dom[m] = a
                    self._cod[m] = b
        for key in homs:
            if key not in self._homs and homs[key]:
                raise CategoryError(f"hom-set {key} mentions unknown objects")
        self.identities = dict(identities)
        self.data = data if data is not None else {}
        if isinstance(compose, Mapping):
            self._table = dict(compose)
            self._fn = None
        else:
            self._table = {}
            self._fn = compose
        self._ident_set = set(self.identities.values())

    # basic lookups

    def hom(self, a, b) -> tuple[str, ...]:
        return self._homs[(a, b)]

    def dom(self, f) -> str:
        return self._dom[f]

    def cod(self, f) -> str:
        return self._cod[f]

    def identity(self, a) -> str:
        return self.identities[a]

    def is_identity(self, f) -> bool:
        return f in self._ident_set

    def morphisms(self) -> list[str]:
        return [m for a in self.objects for b in self.objects for m in self._homs[(a, b)]]

    def hom_sets(self):
        return self._homs

    def has_morphism(self, f) -> bool:
        return f in self._dom

    def n_morphisms(self) -> int:
        return len(self._dom)

    def comp(self, g, f) -> str:
        """g∘f."""
        if f in self._ident_set:
            return g
        if g in self._ident_set:
            return f
        key = (g, f)
        r = self._table.get(key)
        if r is None:
            if self._fn is None:
                raise CategoryError(f"no composite for {g} ∘ {f}")
            r = self._fn(g, f)
            self._table[key] = r
        return r

    def composite(self, *ms) -> str:
        """Compose right to left: composite(h, g, f) = h∘g∘f."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.comp(m, out)
        return out

    def out_of(self, a):
        for b in self.objects:
            yield from self._homs[(a, b)]

    def into(self, b):
        for a in self.objects:
            yield from self._homs[(a, b)]

    def generators(self) -> list[str]:
        """A set of non-identity morphisms generating the category under composition.

        Greedy: walk morphisms in canonical order and keep those not yet in
        the closure. Cached.
        """
        gens = getattr(self, "_gens", None)
        if gens is not None:
            return gens
        closure = set(self._ident_set)
        gens = []
        for h in self.morphisms():
            if h in closure:
                continue
            gens.append(h)
            closure.add(h)
            queue = [h]
            while queue:
                x = queue.pop()
                dx, cx = self._dom[x], self._cod[x]
                for s in gens:
                    if self._dom[s] == cx:
                        y = self.comp(s, x)
                        if y not in closure:
                            closure.add(y)
                            queue.append(y)
                    if self._cod[s] == dx:
                        y = self.comp(x, s)
                        if y not in closure:
                            closure.add(y)
                            queue.append(y)
        self._gens = gens
        return gens

    def op(self, name=None) -> "FinCategory":
        homs = {(b, a): ms for (a, b), ms in self._homs.items()}
        outer = self
        return FinCategory(self.objects, homs, self.identities,
                           lambda g, f: outer.comp(f, g),
                           name=name or f"{self.name}^op", data=self.data)

    def composition_table(self) -> dict:
        table = {}
        for f in self.morphisms():
            for g in self.out_of(self.cod(f)):
                table[(g, f)] = self.comp(g, f)
        return table

    def materialize(self) -> "FinCategory":
        return FinCategory(self.objects, dict(self._homs), self.identities,
                           self.composition_table(), name=self.name, data=self.data)

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        if self.objects != other.objects or self._homs != other._homs:
            return False
        if self.identities != other.identities:
            return False
        return self.composition_table() == other.composition_table()

    def __hash__(self):
        return hash((self.objects, tuple(sorted(self._dom))))

    def __repr__(self):
        return f"FinCategory({self.name or '?'}: {len(self.objects)} objects, {len(self._dom)} morphisms)"


def validate_category(c: FinCategory) -> list[str]:
    """Return a list of violated category laws; empty means c is a category."""
    report = []
    for a in c.objects:
        i = c.identities.get(a)
        if i is None:
            report.append(f"missing identity for {a}")
        elif i not in c.hom(a, a):
            report.append(f"identity {i} of {a} not an endomorphism of {a}")
    if report:
        return report
    table = {}
    for f in c.morphisms():
        a, b = c.dom(f), c.cod(f)
        for g in c.out_of(b):
            try:
                h = c._table.get((g, f))
                if h is None:
                    h = c._fn(g, f) if c._fn is not None else None
            except Exception as exc:  # a broken compose callable
                report.append(f"compose {g}∘{f} raised {exc!r}")
                continue
            if h is None and (c.is_identity(f) or c.is_identity(g)):
                # identity composites may be left implicit in a table
                h = g if c.is_identity(f) else f
            if h is None:
                report.append(f"missing composite {g}∘{f}")
                continue
            if not c.has_morphism(h) or c.dom(h) != a or c.cod(h) != c.cod(g):
                report.append(f"composite {g}∘{f} = {h} lands in the wrong hom-set")
                continue
            table[(g, f)] = h
    for f in c.morphisms():
        a, b = c.dom(f), c.cod(f)
        if table.get((c.identity(b), f), f) != f:
            report.append(f"left identity fails at {f}")
        if table.get((f, c.identity(a)), f) != f:
            report.append(f"right identity fails at {f}")
    for f in c.morphisms():
        for g in c.out_of(c.cod(f)):
            gf = table.get((g, f))
            if gf is None:
                continue
            for h in c.out_of(c.cod(g)):
                hg = table.get((h, g))
                lhs = table.get((h, gf))
                rhs = table.get((hg, f)) if hg is not None else None
                if lhs != rhs:
                    report.append(f"associativity fails at ({h}, {g}, {f})")
    return report


def category_from_table(objects, homs, identities, compose, name="") -> FinCategory:
    return FinCategory(objects, homs, identities, compose, name=name)


# --- a few standard categories -------------------------------------------------


def terminal_category() -> FinCategory:
    return FinCategory(["*"], {("*", "*"): ["id_*"]}, {"*": "id_*"}, {}, name="1")


def empty_category() -> FinCategory:
    return FinCategory([], {}, {}, {}, name="0")


def discrete_category(objects) -> FinCategory:
    objects = list(objects)
    return FinCategory(objects, {(o, o): [f"id_{o}"] for o in objects},
                       {o: f"id_{o}" for o in objects}, {}, name=f"disc{len(objects)}")


def poset_category(elements, leq, name="") -> FinCategory:
    """Thin category of a preorder; the morphism a -> b is named 'a<=b'."""
    elements = list(elements)
    homs = {}
    for a in elements:
        for b in elements:
            homs[(a, b)] = [f"{a}<={b}"] if leq(a, b) else []
    ident = {a: f"{a}<={a}" for a in elements}

    def compose(g, f):
        a = f.split("<=")[0]
        c = g.split("<=")[1]
        return f"{a}<={c}"

    return FinCategory(elements, homs, ident, compose, name=name or "poset")


def chain_category(n) -> FinCategory:
    return poset_category([str(i) for i in range(n)], lambda a, b: int(a) <= int(b), name=f"chain{n}")


def walking_arrow() -> FinCategory:
    return chain_category(2)


def monoid_category(elements, unit, mult, name="") -> FinCategory:
    """One-object category '*' of a monoid; mult(x, y) is the product x·y, used as x∘y."""
    elements = list(elements)
    return FinCategory(["*"], {("*", "*"): elements}, {"*": unit},
                       lambda g, f: mult(g, f), name=name or "monoid")


# --- finite sets ---------------------------------------------------------------


class FinSetObject:
    """A finite set with a fixed element order."""

    def __init__(self, elements: Iterable):
        self.elements = tuple(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._index

    def index(self, x) -> int:
        return self._index[x]

    def functions_to(self, other: "FinSetObject"):
        """All functions self -> other as dicts, in lexicographic order of value tuples."""
        for vals in product(other.elements, repeat=len(self.elements)):
            yield dict(zip(self.elements, vals))

    def __eq__(self, other):
        return isinstance(other, FinSetObject) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"FinSetObject({list(self.elements)})"


def all_functions(n: int, m: int):
    """All functions range(n) -> range(m) as tuples, lexicographic."""
    return list(product(range(m), repeat=n))


def fs_name(a: int, b: int, table) -> str:
    return f"{a}>{b}:" + "".join(str(v) for v in table)


def finset_category(n: int, name="") -> FinCategory:
    """FinSet_{<=n}: objects '0'..'n', morphisms all functions as value tables."""
    if n > 9:
        raise CategoryError("finset_category supports carriers of size at most 9")
    objects = [str(i) for i in range(n + 1)]
    homs, data = {}, {}
    for a in range(n + 1):
        for b in range(n + 1):
            ms = []
            for t in all_functions(a, b):
                nm = fs_name(a, b, t)
                ms.append(nm)
                data[nm] = (a, b, t)
            homs[(str(a), str(b))] = ms
    ident = {str(a): fs_name(a, a, range(a)) for a in range(n + 1)}

    def compose(g, f):
        a, _, tf = data[f]
        _, c, tg = data[g]
        return fs_name(a, c, tuple(tg[x] for x in tf))

    cat = FinCategory(objects, homs, ident, compose, name=name or f"FinSet<={n}", data=data)
    cat.finset_bound = n
    return cat


def is_finset_category(c: FinCategory) -> bool:
    return getattr(c, "finset_bound", None) is not None


def fs_table(c: FinCategory, f: str):
    """Value table of a morphism of a finset_category."""
    return c.data[f][2]


# --- functors and transformations ---------------------------------------------


class FinFunctor:
    def __init__(self, src: FinCategory, dst: FinCategory, on_objects, on_morphisms, name=""):
        self.src = src
        self.dst = dst
        self.on_objects = dict(on_objects)
        self.on_morphisms = dict(on_morphisms)
        self.name = name

    def fo(self, a):
        return self.on_objects[a]

    def fm(self, f):
        return self.on_morphisms[f]

    def __call__(self, x):
        if x in self.on_objects:
            return self.on_objects[x]
        return self.on_morphisms[x]

    def key(self):
        return (tuple(self.on_objects[a] for a in self.src.objects),
                tuple(self.on_morphisms[f] for f in self.src.morphisms()))

    def __eq__(self, other):
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return self.on_objects == other.on_objects and self.on_morphisms == other.on_morphisms

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FinFunctor({self.name or '?'}: {self.src.name} -> {self.dst.name})"

    def then(self, g: "FinFunctor") -> "FinFunctor":
        """g∘self."""
        return compose_functors(g, self)


def identity_functor(c: FinCategory) -> FinFunctor:
    return FinFunctor(c, c, {a: a for a in c.objects}, {f: f for f in c.morphisms()}, name=f"id_{c.name}")


def compose_functors(g: FinFunctor, f: FinFunctor) -> FinFunctor:
    """g∘f."""
    return FinFunctor(f.src, g.dst,
                      {a: g.on_objects[f.on_objects[a]] for a in f.src.objects},
                      {m: g.on_morphisms[f.on_morphisms[m]] for m in f.src.morphisms()})


def validate_functor(f: FinFunctor) -> list[str]:
    report = []
    s, d = f.src, f.dst
    for a in s.objects:
        if a not in f.on_objects:
            report.append(f"object {a} unmapped")
        elif f.on_objects[a] not in d.objects:
            report.append(f"object {a} mapped outside the codomain")
    if report:
        return report
    for m in s.morphisms():
        fm = f.on_morphisms.get(m)
        if fm is None:
            report.append(f"morphism {m} unmapped")
            continue
        if not d.has_morphism(fm) or d.dom(fm) != f.on_objects[s.dom(m)] or d.cod(fm) != f.on_objects[s.cod(m)]:
            report.append(f"morphism {m} mapped to {fm} in the wrong hom-set")
    if report:
        return report
    for a in s.objects:
        if f.on_morphisms[s.identity(a)] != d.identity(f.on_objects[a]):
            report.append(f"identity of {a} not preserved")
    for m in s.morphisms():
        for n in s.out_of(s.cod(m)):
            if f.on_morphisms[s.comp(n, m)] != d.comp(f.on_morphisms[n], f.on_morphisms[m]):
                report.append(f"composite {n}∘{m} not preserved")
    return report


class NatTransformation:
    def __init__(self, src: FinFunctor, dst: FinFunctor, components):
        self.src = src
        self.dst = dst
        self.components = dict(components)

    def __getitem__(self, a):
        return self.components[a]

    def key(self):
        return tuple(self.components[a] for a in self.src.src.objects)

    def __eq__(self, other):
        return isinstance(other, NatTransformation) and self.components == other.components

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"NatTransformation({self.components})"


def validate_nat_transformation(t: NatTransformation) -> list[str]:
    f, g = t.src, t.dst
    c, d = f.src, f.dst
    report = []
    for a in c.objects:
        x = t.components.get(a)
        if x is None or x not in d.hom(f.fo(a), g.fo(a)):
            report.append(f"component at {a} missing or ill-typed")
    if report:
        return report
    for m in c.morphisms():
        a, b = c.dom(m), c.cod(m)
        if d.comp(g.fm(m), t[a]) != d.comp(t[b], f.fm(m)):
            report.append(f"naturality fails at {m}")
    return report


# --- enumeration ---------------------------------------------------------------


def _functor_search(a: FinCategory, b: FinCategory, obj_map=None, fixed=None, limit=None):
    """Backtracking search for functors a -> b.

    Objects are assigned first (in order), then morphisms (in order); values
    are tried in canonical order, so solutions come out lexicographically.
    ``fixed`` pins some morphism images.
    """
    objs = a.objects
    mors = [m for m in a.morphisms() if not a.is_identity(m)]
    results = []

    def morph_search(om):
        assign = {a.identity(x): b.identity(om[x]) for x in objs}
        for m, v in (fixed or {}).items():
            if m in assign and assign[m] != v:
                return
            assign[m] = v
        # check fixed data for consistency before searching
        for m, v in list(assign.items()):
            if v not in b.hom(om[a.dom(m)], om[a.cod(m)]):
                return

        def consistent(m, assign, trail):
            # propagate composites involving m; return False on conflict
            queue = [m]
            while queue:
                x = queue.pop()
                vx = assign[x]
                for y in a.out_of(a.cod(x)):
                    vy = assign.get(y)
                    if vy is None:
                        continue
                    yx = a.comp(y, x)
                    v = b.comp(vy, vx)
                    cur = assign.get(yx)
                    if cur is None:
                        assign[yx] = v
                        trail.append(yx)
                        queue.append(yx)
                    elif cur != v:
                        return False
                for y in a.into(a.dom(x)):
                    vy = assign.get(y)
                    if vy is None:
                        continue
                    xy = a.comp(x, y)
                    v = b.comp(vx, vy)
                    cur = assign.get(xy)
                    if cur is None:
                        assign[xy] = v
                        trail.append(xy)
                        queue.append(xy)
                    elif cur != v:
                        return False
            return True

        for m in list(assign):
            if not consistent(m, assign, []):
                return

        def rec(i):
            if limit is not None and len(results) >= limit:
                return
            while i < len(mors) and mors[i] in assign:
                i += 1
            if i == len(mors):
                results.append(FinFunctor(a, b, om, dict(assign)))
                return
            m = mors[i]
            for v in b.hom(om[a.dom(m)], om[a.cod(m)]):
                assign[m] = v
                trail = [m]
                if consistent(m, assign, trail):
                    rec(i + 1)
                for t in trail:
                    del assign[t]

        rec(0)

    if obj_map is not None:
        morph_search(dict(obj_map))
    else:
        for vals in product(b.objects, repeat=len(objs)):
            if limit is not None and len(results) >= limit:
                break
            morph_search(dict(zip(objs, vals)))
    return results


def enumerate_functors(a: FinCategory, b: FinCategory, obj_map=None, fixed=None) -> list[FinFunctor]:
    """All functors a -> b in canonical order (optionally with pinned data)."""
    return _functor_search(a, b, obj_map, fixed)


def enumerate_nat_transformations(f, g) -> list:
    """All natural transformations f => g.

    Works for parallel FinFunctors and for parallel SetFunctors.
    """
    if isinstance(f, SetFunctor):
        return _set_nat_search(f, g)
    c, d = f.src, f.dst
    objs = c.objects
    results = []
    comps: dict = {}

    def ok(x):
        for m in c.out_of(x):
            y = c.cod(m)
            if y in comps and d.comp(g.fm(m), comps[x]) != d.comp(comps[y], f.fm(m)):
                return False
        for m in c.into(x):
            y = c.dom(m)
            if y in comps and d.comp(g.fm(m), comps[y]) != d.comp(comps[x], f.fm(m)):
                return False
        return True

    def rec(i):
        if i == len(objs):
            results.append(NatTransformation(f, g, dict(comps)))
            return
        x = objs[i]
        for v in d.hom(f.fo(x), g.fo(x)):
            comps[x] = v
            if ok(x):
                rec(i + 1)
            del comps[x]

    rec(0)
    return results


# --- set-valued functors ----------------------------------------------------------


class SetFunctor:
    """A functor from a finite category into finite sets.

    ``sets[x]`` is a tuple of hashable elements; ``action(m, e)`` applies
    the image of morphism m to an element. Images are cached as dicts.
    """

    def __init__(self, cat: FinCategory, sets, action: Callable | Mapping, name=""):
        self.cat = cat
        self.sets = {x: tuple(sets[x]) for x in cat.objects}
        self.name = name
        self._index = {x: {e: i for i, e in enumerate(s)} for x, s in self.sets.items()}
        if isinstance(action, Mapping):
            self._maps = {m: dict(v) for m, v in action.items()}
            self._action = None
        else:
            self._maps = {}
            self._action = action

    def obj(self, x):
        return self.sets[x]

    def index(self, x, e) -> int:
        return self._index[x][e]

    def fmap(self, m) -> dict:
        r = self._maps.get(m)
        if r is None:
            src = self.sets[self.cat.dom(m)]
            r = {e: self._action(m, e) for e in src}
            self._maps[m] = r
        return r

    def __call__(self, m, e):
        return self.fmap(m)[e]

    def __repr__(self):
        return f"SetFunctor({self.name or '?'} on {self.cat.name})"


def validate_set_functor(f: SetFunctor) -> list[str]:
    c = f.cat
    report = []
    for m in c.morphisms():
        tgt = set(f.obj(c.cod(m)))
        mp = f.fmap(m)
        if set(mp) != set(f.obj(c.dom(m))) or not set(mp.values()) <= tgt:
            report.append(f"image of {m} is not a function of the right type")
    if report:
        return report
    for a in c.objects:
        mp = f.fmap(c.identity(a))
        if any(mp[e] != e for e in f.obj(a)):
            report.append(f"identity of {a} not preserved")
    for m in c.morphisms():
        for n in c.out_of(c.cod(m)):
            nm = f.fmap(c.comp(n, m))
            fm, fn = f.fmap(m), f.fmap(n)
            if any(nm[e] != fn[fm[e]] for e in f.obj(c.dom(m))):
                report.append(f"composite {n}∘{m} not preserved")
    return report


def set_functor_from_finfunctor(u: FinFunctor) -> SetFunctor:
    """Turn U: M -> FinSet_{<=n} into a SetFunctor with carriers range(k)."""
    d = u.dst
    if not is_finset_category(d):
        raise CategoryError("codomain is not a finset_category")
    sets = {m: tuple(range(int(u.fo(m)))) for m in u.src.objects}
    return SetFunctor(u.src, sets, lambda h, e: fs_table(d, u.fm(h))[e], name=u.name)


class SetNat:
    """A natural transformation between SetFunctors; components are dicts."""

    def __init__(self, src: SetFunctor, dst: SetFunctor, components):
        self.src = src
        self.dst = dst
        self.components = components

    def __getitem__(self, x):
        return self.components[x]

    def key(self):
        c = self.src.cat
        return tuple(tuple(self.components[x][e] for e in self.src.obj(x)) for x in c.objects)

    def __eq__(self, other):
        return isinstance(other, SetNat) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def validate_set_nat(t: SetNat) -> list[str]:
    f, g = t.src, t.dst
    c = f.cat
    report = []
    for m in c.morphisms():
        a, b = c.dom(m), c.cod(m)
        fm, gm = f.fmap(m), g.fmap(m)
        for e in f.obj(a):
            if t[b][fm[e]] != gm[t[a][e]]:
                report.append(f"naturality fails at {m} on {e!r}")
                break
    return report


def _set_nat_search(f: SetFunctor, g: SetFunctor, limit=None) -> list[SetNat]:
    """Propagating backtracking search over variables (x, e in f(x))."""
    c = f.cat
    variables = [(x, e) for x in c.objects for e in f.obj(x)]
    # naturality on a generating set implies naturality everywhere
    gens = c.generators() if c.n_morphisms() > 64 else [m for m in c.morphisms() if not c.is_identity(m)]
    out_edges = {x: [] for x in c.objects}
    into_by = {x: [] for x in c.objects}
    for m in gens:
        out_edges[c.dom(m)].append((m, c.cod(m), f.fmap(m), g.fmap(m)))
        into_by[c.cod(m)].append(m)
    into_edges = {}
    for x in c.objects:
        lst = []
        for m in into_by[x]:
            y = c.dom(m)
            fm = f.fmap(m)
            pre: dict = {}
            for e, v in fm.items():
                pre.setdefault(v, []).append(e)
            lst.append((y, pre, g.fmap(m)))
        into_edges[x] = lst
    for x in c.objects:
        if f.obj(x) and not g.obj(x):
            return []
    if len(variables) <= 20000:
        # elements generating large subfunctors first: their values fix the most
        reach = {}
        for var in variables:
            seen = {var}
            stack = [var]
            while stack:
                x, e = stack.pop()
                for _, y, fm, _ in out_edges[x]:
                    w = (y, fm[e])
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            reach[var] = len(seen)
        order = {v: i for i, v in enumerate(variables)}
        variables.sort(key=lambda v: (-reach[v], order[v]))
    assign: dict = {}
    results = []

    def propagate(start, trail):
        stack = [start]
        while stack:
            x, e = stack.pop()
            v = assign[(x, e)]
            for m, y, fm, gm in out_edges[x]:
                key = (y, fm[e])
                want = gm[v]
                cur = assign.get(key)
                if cur is None:
                    assign[key] = want
                    trail.append(key)
                    stack.append(key)
                elif cur != want:
                    return False
            for y, pre, gm in into_edges[x]:
                for e0 in pre.get(e, ()):
                    cur = assign.get((y, e0))
                    if cur is not None and gm[cur] != v:
                        return False
        return True

    def rec(i):
        if limit is not None and len(results) >= limit:
            return
        while i < len(variables) and variables[i] in assign:
            i += 1
        if i == len(variables):
            comps = {x: {e: assign[(x, e)] for e in f.obj(x)} for x in c.objects}
            results.append(SetNat(f, g, comps))
            return
        var = variables[i]
        for v in g.obj(var[0]):
            assign[var] = v
            trail = [var]
            if propagate(var, trail):
                rec(i + 1)
            for t in trail:
                del assign[t]

    rec(0)
    if len(results) > 1:
        idx = {x: {e: i for i, e in enumerate(g.obj(x))} for x in c.objects}
        results.sort(key=lambda t: tuple(idx[x][t[x][e]] for x in c.objects for e in f.obj(x)))
    return results


def compose_set_nats(s: SetNat, t: SetNat) -> SetNat:
    """s∘t (first t, then s)."""
    comps = {x: {e: s[x][t[x][e]] for e in t.src.obj(x)} for x in t.src.cat.objects}
    return SetNat(t.src, s.dst, comps)


def identity_set_nat(f: SetFunctor) -> SetNat:
    return SetNat(f, f, {x: {e: e for e in f.obj(x)} for x in f.cat.objects})


def whisker_set_nat(t: SetNat, q: FinFunctor, f_new: SetFunctor, g_new: SetFunctor) -> SetNat:
    """tQ: components (tQ)_y = t_{Q y}. f_new and g_new are F∘Q and G∘Q."""
    return SetNat(f_new, g_new, {y: dict(t[q.fo(y)]) for y in q.src.objects})


def precompose_set_functor(f: SetFunctor, q: FinFunctor) -> SetFunctor:
    """F∘Q."""
    return SetFunctor(q.src, {y: f.obj(q.fo(y)) for y in q.src.objects},
                      lambda m, e: f(q.fm(m), e), name=f"{f.name}∘{q.name}")


# --- limits -------------------------------------------------------------------------


class Cone:
    def __init__(self, apex, legs):
        self.apex = tuple(apex)
        self.legs = legs  # object -> dict apex element -> element

    def __repr__(self):
        return f"Cone(apex size {len(self.apex)})"


def limit_of_finset_diagram(d: SetFunctor) -> Cone:
    """Limit of a finite diagram of finite sets as compatible families.

    Apex elements are tuples indexed by the diagram's objects in order.
    """
    c = d.cat
    objs = c.objects
    edges = [(c.dom(m), c.cod(m), d.fmap(m)) for m in c.morphisms() if not c.is_identity(m)]
    pos = {x: i for i, x in enumerate(objs)}
    apex = []
    cur: list = [None] * len(objs)

    def rec(i):
        if i == len(objs):
            apex.append(tuple(cur))
            return
        x = objs[i]
        for e in d.obj(x):
            cur[i] = e
            good = True
            for a, b, mp in edges:
                ia, ib = pos[a], pos[b]
                if max(ia, ib) == i and cur[ib] != mp[cur[ia]]:
                    good = False
                    break
            if good:
                rec(i + 1)
        cur[i] = None

    rec(0)
    legs = {x: {t: t[pos[x]] for t in apex} for x in objs}
    return Cone(apex, legs)


def is_cone(d: SetFunctor, cone: Cone) -> bool:
    c = d.cat
    for m in c.morphisms():
        a, b = c.dom(m), c.cod(m)
        mp = d.fmap(m)
        for t in cone.apex:
            if cone.legs[b][t] != mp[cone.legs[a][t]]:
                return False
    return True


def enumerate_cones(d: SetFunctor, apex) -> list[Cone]:
    """All cones over d with the given finite apex."""
    apex = tuple(apex)
    lim = limit_of_finset_diagram(d)
    out = []
    for choice in product(lim.apex, repeat=len(apex)):
        legs = {x: {p: t[i] for p, t in zip(apex, choice)} for i, x in enumerate(d.cat.objects)}
        out.append(Cone(apex, legs))
    return out


def mediating_maps(d: SetFunctor, lim: Cone, cone: Cone) -> list[dict]:
    """All maps cone.apex -> lim.apex commuting with the legs (should be exactly one)."""
    objs = d.cat.objects
    options = []
    for p in cone.apex:
        opts = [t for t in lim.apex if all(lim.legs[x][t] == cone.legs[x][p] for x in objs)]
        options.append(opts)
    return [dict(zip(cone.apex, ch)) for ch in product(*options)]


def verify_limit(d: SetFunctor, lim: Cone, max_apex=2) -> bool:
    """Check the universal property against every cone with apex size <= max_apex."""
    if not is_cone(d, lim):
        return False
    for k in range(max_apex + 1):
        # cones from a k-element apex are k-tuples of compatible families, so
        # brute-force them over the product of the diagram's sets
        apex = tuple(range(k))
        objs = d.cat.objects
        families = list(product(*(d.obj(x) for x in objs)))
        for choice in product(families, repeat=k):
            legs = {x: {p: choice[p][i] for p in apex} for i, x in enumerate(objs)}
            cone = Cone(apex, legs)
            if not is_cone(d, cone):
                continue
            if len(mediating_maps(d, lim, cone)) != 1:
                return False
    return True


# --- comma categories -----------------------------------------------------------------


def comma_category(f: FinFunctor, c) -> tuple[FinCategory, FinFunctor]:
    """(c ↓ f): objects (a, u: c -> f a), morphisms a-maps making the triangle commute."""
    A, C = f.src, f.dst
    objs = []
    for a in A.objects:
        for u in C.hom(c, f.fo(a)):
            objs.append((a, u))
    name = {o: f"({o[0]},{o[1]})" for o in objs}
    homs: dict = {}
    data = {}
    for (a, u) in objs:
        for (b, v) in objs:
            ms = []
            for g in A.hom(a, b):
                if C.comp(f.fm(g), u) == v:
                    nm = f"{g}|{name[(a, u)]}>{name[(b, v)]}"
                    ms.append(nm)
                    data[nm] = (g, (a, u), (b, v))
            homs[(name[(a, u)], name[(b, v)])] = ms
    ident = {name[(a, u)]: f"{A.identity(a)}|{name[(a, u)]}>{name[(a, u)]}" for (a, u) in objs}

    def compose(h, g):
        g0, s, _ = data[g]
        h0, _, t = data[h]
        return f"{A.comp(h0, g0)}|{name[s]}>{name[t]}"

    cat = FinCategory(list(name.values()), homs, ident, compose, name=f"({c}↓{f.name})", data=data)
    cat.comma_objects = {name[o]: o for o in objs}
    proj = FinFunctor(cat, A, {name[o]: o[0] for o in objs}, {m: data[m][0] for m in data})
    return cat, proj


# --- bo/ff factorization ---------------------------------------------------------------


def bo_ff_factorize(f: FinFunctor):
    """Factor f as n∘e with e bijective on objects and n full and faithful.

    The middle category has the objects of f.src; its morphism a -> a' over
    g in f.dst is named 'g[a,a']'.
    """
    A, C = f.src, f.dst
    homs, data = {}, {}
    for a in A.objects:
        for b in A.objects:
            ms = []
            for g in C.hom(f.fo(a), f.fo(b)):
                nm = f"{g}[{a},{b}]"
                ms.append(nm)
                data[nm] = (g, a, b)
            homs[(a, b)] = ms
    ident = {a: f"{C.identity(f.fo(a))}[{a},{a}]" for a in A.objects}

    def compose(h, g):
        g0, a, _ = data[g]
        h0, _, c = data[h]
        return f"{C.comp(h0, g0)}[{a},{c}]"

    mid = FinCategory(A.objects, homs, ident, compose, name=f"im({f.name})", data=data)
    e = FinFunctor(A, mid, {a: a for a in A.objects},
                   {m: f"{f.fm(m)}[{A.dom(m)},{A.cod(m)}]" for m in A.morphisms()}, name="e")
    n = FinFunctor(mid, C, {a: f.fo(a) for a in A.objects}, {m: data[m][0] for m in data}, name="n")
    return e, n


def is_bijective_on_objects(f: FinFunctor) -> bool:
    vals = [f.fo(a) for a in f.src.objects]
    return len(set(vals)) == len(vals) and set(vals) == set(f.dst.objects)


def is_full_and_faithful(f: FinFunctor) -> bool:
    A, C = f.src, f.dst
    for a in A.objects:
        for b in A.objects:
            img = [f.fm(m) for m in A.hom(a, b)]
            if len(set(img)) != len(img) or set(img) != set(C.hom(f.fo(a), f.fo(b))):
                return False
    return True


def is_faithful(f: FinFunctor) -> bool:
    A = f.src
    for a in A.objects:
        for b in A.objects:
            img = [f.fm(m) for m in A.hom(a, b)]
            if len(set(img)) != len(img):
                return False
    return True


class FillInError(CategoryError):
    pass


def fill_in(e: FinFunctor, n: FinFunctor, top: FinFunctor, bottom: FinFunctor) -> FinFunctor:
    """The unique h: C -> B with h∘e = top and n∘h = bottom (e: A->C bo, n: B->D ff)."""
    if not is_bijective_on_objects(e):
        raise FillInError("no fill-in: left map is not bijective on objects")
    if not is_full_and_faithful(n):
        raise FillInError("no fill-in: right map is not full and faithful")
    if compose_functors(n, top) != compose_functors(bottom, e):
        raise FillInError("no fill-in: square does not commute")
    A, C, B = e.src, e.dst, n.src
    inv = {e.fo(a): a for a in A.objects}
    hobj = {c: top.fo(inv[c]) for c in C.objects}
    hmor = {}
    for g in C.morphisms():
        x, y = hobj[C.dom(g)], hobj[C.cod(g)]
        target = bottom.fm(g)
        cands = [m for m in B.hom(x, y) if n.fm(m) == target]
        if len(cands) != 1:
            raise FillInError(f"no fill-in at {g}")
        hmor[g] = cands[0]
    return FinFunctor(C, B, hobj, hmor, name="fill")


# --- transport along isomorphisms ----------------------------------------------------------


def transport_along_iso(g: SetFunctor, l: FinFunctor, phi: SetNat, target: SetFunctor):
    """Lift an iso phi: g∘l => target along a bijective-on-objects l.

    Returns (g2, lifted) with g2∘l equal to target and lifted: g => g2 an
    iso whose whiskering by l is phi.
    """
    if not is_bijective_on_objects(l):
        raise CategoryError("l is not bijective on objects")
    A = l.src
    inv_maps = {}
    for a in A.objects:
        comp = phi[a]
        vals = list(comp.values())
        if len(set(vals)) != len(vals) or set(vals) != set(target.obj(a)):
            raise CategoryError(f"phi is not invertible at {a}")
        inv_maps[a] = {v: k for k, v in comp.items()}
    lc = l.dst
    ainv = {l.fo(a): a for a in A.objects}
    sets = {x: target.obj(ainv[x]) for x in lc.objects}

    def act(m, e):
        a, b = ainv[lc.dom(m)], ainv[lc.cod(m)]
        return phi[b][g(m, inv_maps[a][e])]

    g2 = SetFunctor(lc, sets, act, name=f"{g.name}'")
    lifted = SetNat(g, g2, {x: dict(phi[ainv[x]]) for x in lc.objects})
    return g2, lifted
