"""Proto-theories, aritations, models, the structure functor and the bijections Ψ/Θ.

Conventions. An aritation has an arity category A and a base category B.
A proto-theory is a bijective-on-objects functor L: A -> 𝓛. For the
canonical aritation A = B^op, so a morphism f: b -> d of B is a morphism
d -> b of A and L(f) lies in 𝓛(Ld, Lb).

Models of the canonical aritation are stored in algebra form: a carrier d
and maps α_b: 𝓛(Ld, Lb) -> B(b, d). Models of other aritations are stored
as functors Γ: 𝓛 -> Set extending ⟨L-, d⟩.
"""

from __future__ import annotations

from itertools import product

from .fincat import (
    CategoryError,
    FinCategory,
    FinFunctor,
    SetFunctor,
    SetNat,
    enumerate_functors,
    enumerate_nat_transformations,
    is_bijective_on_objects,
    is_finset_category,
    fs_table,
    terminal_category,
    finset_category,
    set_functor_from_finfunctor,
    monoid_category,
)


class TheoryError(ValueError):
    pass


# --- aritations ----------------------------------------------------------------------


class Aritation:
    """A Set-valued aritation given by explicit pairing tables.

    pairing[(a, x)] is the finite set ⟨a, x⟩; arity_action[(f, x)] and
    base_action[(a, h)] are dicts giving ⟨f, x⟩ and ⟨a, h⟩.
    """

    kind = "table"

    def __init__(self, arities: FinCategory, base: FinCategory, pairing=None,
                 arity_action=None, base_action=None, name=""):
        self.arities = arities
        self.base = base
        self.name = name
        self._pairing = pairing or {}
        self._arity_action = arity_action or {}
        self._base_action = base_action or {}

    def pair(self, a, x) -> tuple:
        return tuple(self._pairing[(a, x)])

    def act_arity(self, f, x) -> dict:
        return self._arity_action[(f, x)]

    def act_base(self, a, h) -> dict:
        return self._base_action[(a, h)]

    def presheaf(self, a, u) -> SetFunctor:
        """⟨a, U-⟩ as a functor on the domain of u."""
        m = u.src
        return SetFunctor(m, {x: self.pair(a, u.fo(x)) for x in m.objects},
                          lambda h, e: self.act_base(a, u.fm(h))[e], name=f"<{a},U->")

    def arity_component(self, f, u, x) -> dict:
        return self.act_arity(f, u.fo(x))

    def validate(self) -> list[str]:
        """Bifunctor laws of the pairing."""
        A, B = self.arities, self.base
        report = []
        for a in A.objects:
            for x in B.objects:
                s = self.pair(a, x)
                i1 = self.act_arity(A.identity(a), x)
                i2 = self.act_base(a, B.identity(x))
                if any(i1[e] != e for e in s) or any(i2[e] != e for e in s):
                    report.append(f"identity not preserved at ({a},{x})")
        for f in A.morphisms():
            for h in B.morphisms():
                a, a2 = A.dom(f), A.cod(f)
                x, y = B.dom(h), B.cod(h)
                p1 = self.act_arity(f, y)
                p2 = self.act_base(a, h)
                q1 = self.act_base(a2, h)
                q2 = self.act_arity(f, x)
                for e in self.pair(a, x):
                    if p1[p2[e]] != q1[q2[e]]:
                        report.append(f"interchange fails at ({f},{h})")
                        break
            for g in A.out_of(A.cod(f)):
                gf = A.comp(g, f)
                for x in B.objects:
                    mg, mf, mgf = self.act_arity(g, x), self.act_arity(f, x), self.act_arity(gf, x)
                    if any(mgf[e] != mg[mf[e]] for e in self.pair(A.dom(f), x)):
                        report.append(f"composite {g}∘{f} not preserved")
        for h in B.morphisms():
            for k in B.out_of(B.cod(h)):
                kh = B.comp(k, h)
                for a in A.objects:
                    mk, mh, mkh = self.act_base(a, k), self.act_base(a, h), self.act_base(a, kh)
                    if any(mkh[e] != mk[mh[e]] for e in self.pair(a, B.dom(h))):
                        report.append(f"composite {k}∘{h} not preserved")
        return report


class CanonicalAritation(Aritation):
    """The hom-functor aritation B(-,-) with arities B^op.

    When B is a finset_category, U may also be a SetFunctor with arbitrary
    finite values; then ⟨a, X⟩ = X^a as tuples.
    """

    kind = "canonical"

    def __init__(self, base: FinCategory):
        super().__init__(base.op(name=f"{base.name}^op"), base, name=f"hom({base.name})")

    def pair(self, a, x):
        return self.base.hom(a, x)

    def act_arity(self, f, x):
        # f ∈ A(a, a2) = B(a2, a): g ↦ g∘f
        B = self.base
        return {g: B.comp(g, f) for g in B.hom(B.cod(f), x)}

    def act_base(self, a, h):
        B = self.base
        return {g: B.comp(h, g) for g in B.hom(a, B.dom(h))}

    def presheaf(self, a, u):
        B = self.base
        if isinstance(u, SetFunctor):
            if not is_finset_category(B):
                raise TheoryError("set-valued U needs a finite-set base")
            k = int(a)
            sets = {x: tuple(product(u.obj(x), repeat=k)) for x in u.cat.objects}
            return SetFunctor(u.cat, sets, lambda h, e: tuple(u(h, v) for v in e), name=f"U^{a}")
        m = u.src
        return SetFunctor(m, {x: B.hom(a, u.fo(x)) for x in m.objects},
                          lambda h, g: B.comp(u.fm(h), g), name=f"B({a},U-)")

    def arity_component(self, f, u, x):
        B = self.base
        if isinstance(u, SetFunctor):
            t = fs_table(B, f)
            return {e: tuple(e[i] for i in t) for e in product(u.obj(x), repeat=int(B.cod(f)))}
        return self.act_arity(f, u.fo(x))


def canonical_aritation(b: FinCategory) -> CanonicalAritation:
    return CanonicalAritation(b)


class ProjectionAritation(Aritation):
    """The aritation 1 × FinSet -> Set, ⟨*, x⟩ = x, used for monoid theories."""

    kind = "projection"

    def __init__(self, base: FinCategory):
        if not is_finset_category(base):
            raise TheoryError("projection aritation needs a finite-set base")
        super().__init__(terminal_category(), base, name="proj")

    def pair(self, a, x):
        return tuple(range(int(x)))

    def act_arity(self, f, x):
        return {e: e for e in range(int(x))}

    def act_base(self, a, h):
        t = fs_table(self.base, h)
        return {e: t[e] for e in range(len(t))}

    def presheaf(self, a, u):
        if isinstance(u, SetFunctor):
            return u
        return super().presheaf(a, u)

    def arity_component(self, f, u, x):
        if isinstance(u, SetFunctor):
            return {e: e for e in u.obj(x)}
        return self.act_arity(f, u.fo(x))


# --- proto-theories ---------------------------------------------------------------------


class ProtoTheory:
    def __init__(self, arities: FinCategory, theory_cat: FinCategory, L: FinFunctor, name=""):
        if not is_bijective_on_objects(L):
            raise TheoryError("L is not bijective on objects")
        self.arities = arities
        self.theory_cat = theory_cat
        self.L = L
        self.name = name

    def Lo(self, a):
        return self.L.on_objects[a]

    def Lm(self, f):
        return self.L.on_morphisms[f]

    def __repr__(self):
        return f"ProtoTheory({self.name or '?'}, {self.theory_cat.n_morphisms()} operations)"


def identity_theory(arities: FinCategory) -> ProtoTheory:
    from .fincat import identity_functor
    return ProtoTheory(arities, arities, identity_functor(arities), name=f"id({arities.name})")


class TheoryMorphism:
    """P: L -> L2, a functor on theory categories with P∘L = L2."""

    def __init__(self, src: ProtoTheory, dst: ProtoTheory, functor: FinFunctor):
        self.src = src
        self.dst = dst
        self.functor = functor

    def __call__(self, l):
        return self.functor.on_morphisms[l]

    def validate(self) -> list[str]:
        from .fincat import validate_functor
        rep = validate_functor(self.functor)
        L, L2 = self.src.L, self.dst.L
        for a in self.src.arities.objects:
            if self.functor.fo(L.fo(a)) != L2.fo(a):
                rep.append(f"P∘L differs from L2 on object {a}")
        for f in self.src.arities.morphisms():
            if self.functor.fm(L.fm(f)) != L2.fm(f):
                rep.append(f"P∘L differs from L2 at {f}")
        return rep

    def __eq__(self, other):
        return isinstance(other, TheoryMorphism) and self.functor == other.functor

    def __hash__(self):
        return hash(self.functor)


def compose_theory_morphisms(q: TheoryMorphism, p: TheoryMorphism) -> TheoryMorphism:
    from .fincat import compose_functors
    return TheoryMorphism(p.src, q.dst, compose_functors(q.functor, p.functor))


# --- models ------------------------------------------------------------------------------


class Model:
    """A model: carrier d plus α (canonical) or Γ (other aritations)."""

    def __init__(self, theory: ProtoTheory, arit: Aritation, carrier, alpha=None, gamma=None):
        self.theory = theory
        self.arit = arit
        self.carrier = carrier
        self.alpha = alpha
        self.gamma = gamma
        self._gcache: dict = {}

    def key(self):
        T = self.theory.theory_cat
        if self.alpha is not None:
            d = self.theory.Lo(self.carrier)
            return (self.carrier,) + tuple(
                self.alpha[b][l] for b in self.arit.base.objects for l in T.hom(d, self.theory.Lo(b)))
        inv = _inverse_objects(self.theory)
        return (self.carrier,) + tuple(
            tuple(self.gamma[l][e] for e in self.arit.pair(inv[T.dom(l)], self.carrier)) for l in T.morphisms())

    def gamma_of(self, l) -> dict:
        """Γ(l): ⟨a, d⟩ -> ⟨a2, d⟩ for l: La -> La2."""
        if self.gamma is not None:
            return self.gamma[l]
        r = self._gcache.get(l)
        if r is None:
            th, B = self.theory, self.arit.base
            T = th.theory_cat
            inv = _inverse_objects(th)
            a, a2 = inv[T.dom(l)], inv[T.cod(l)]
            r = {f: self.alpha[a2][T.comp(l, th.Lm(f))] for f in B.hom(a, self.carrier)}
            self._gcache[l] = r
        return r

    def __eq__(self, other):
        return isinstance(other, Model) and self.theory is other.theory and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Model(carrier={self.carrier})"


def _inverse_objects(th: ProtoTheory) -> dict:
    inv = getattr(th, "_inv_objects", None)
    if inv is None:
        inv = {th.Lo(a): a for a in th.arities.objects}
        th._inv_objects = inv
    return inv


class ModelHom:
    def __init__(self, src: Model, dst: Model, h):
        self.src = src
        self.dst = dst
        self.h = h

    def __repr__(self):
        return f"ModelHom({self.h})"


def validate_model(x: Model) -> list[str]:
    """Check the model laws exhaustively."""
    th, arit = x.theory, x.arit
    T = th.theory_cat
    A = th.arities
    report = []
    if x.alpha is not None:
        B = arit.base
        d = x.carrier
        Ld = th.Lo(d)
        al = x.alpha
        for b in B.objects:
            for f in B.hom(b, d):
                if al[b].get(th.Lm(f)) != f:
                    report.append(f"α_{b}(L{f}) != {f}")
        if al[d].get(T.identity(Ld)) != B.identity(d):
            report.append("α_d(id) != id")
        for b in B.objects:
            for l in T.hom(Ld, th.Lo(b)):
                v = al[b][l]
                if v not in B.hom(b, d):
                    report.append(f"α_{b}({l}) ill-typed")
                    continue
                for b2 in B.objects:
                    for k in T.hom(th.Lo(b), th.Lo(b2)):
                        if al[b2][T.comp(k, l)] != al[b2][T.comp(k, th.Lm(v))]:
                            report.append(f"substitution law fails at ({k},{l})")
                    for g in B.hom(b2, b):
                        if al[b2][T.comp(th.Lm(g), l)] != B.comp(v, g):
                            report.append(f"naturality fails at ({g},{l})")
        return report
    inv = _inverse_objects(th)
    for l in T.morphisms():
        a, a2 = inv[T.dom(l)], inv[T.cod(l)]
        g = x.gamma[l]
        src, tgt = arit.pair(a, x.carrier), set(arit.pair(a2, x.carrier))
        if set(g) != set(src) or not set(g.values()) <= tgt:
            report.append(f"Γ({l}) ill-typed")
    if report:
        return report
    for f in A.morphisms():
        want = arit.act_arity(f, x.carrier)
        got = x.gamma[th.Lm(f)]
        if any(got[e] != want[e] for e in want):
            report.append(f"Γ(L{f}) != ⟨{f}, d⟩")
    for l in T.morphisms():
        for k in T.out_of(T.cod(l)):
            kl, gk, gl = x.gamma[T.comp(k, l)], x.gamma[k], x.gamma[l]
            if any(kl[e] != gk[gl[e]] for e in gl):
                report.append(f"Γ not functorial at ({k},{l})")
    return report


def algebra_law_violations(x: Model) -> list[str]:
    """α_b(Lf) = f for all f: b -> d (canonical models only)."""
    th, B = x.theory, x.arit.base
    out = []
    for b in B.objects:
        for f in B.hom(b, x.carrier):
            if x.alpha[b][th.Lm(f)] != f:
                out.append(f"α_{b}(L{f}) != {f}")
    return out


def _separating_objects(B: FinCategory) -> list[str]:
    """A single object whose morphisms jointly separate all parallel pairs, if any."""
    sep = getattr(B, "_separator", None)
    if sep is not None:
        return sep
    for c in B.objects:
        good = True
        for b in B.objects:
            probes = B.hom(c, b)
            for d in B.objects:
                seen = set()
                for f in B.hom(b, d):
                    sig = tuple(B.comp(f, g) for g in probes)
                    if sig in seen:
                        good = False
                        break
                    seen.add(sig)
                if not good:
                    break
            if not good:
                break
        if good:
            B._separator = [c]
            return B._separator
    B._separator = list(B.objects)
    return B._separator


def _canonical_models_at(th: ProtoTheory, B: FinCategory, d, arit, limit=None) -> list[Model]:
    """All α-form models with carrier d, by propagating backtracking search."""
    T = th.theory_cat
    Lm = th.L.on_morphisms
    Ld = th.Lo(d)
    objs = B.objects
    gens = _separating_objects(B)
    variables = [(b, l) for b in objs for l in T.hom(Ld, th.Lo(b))]
    assign: dict = {}
    fwd_cache: dict = {}

    def forward(var):
        r = fwd_cache.get(var)
        if r is None:
            b, l = var
            r = []
            for b2 in objs:
                for g in B.hom(b2, b):
                    if B.is_identity(g):
                        continue
                    r.append(((b2, T.comp(Lm[g], l)), g))
            fwd_cache[var] = r
        return r

    subst_cache: dict = {}

    def subst_ops(b):
        r = subst_cache.get(b)
        if r is None:
            r = [(b2, k) for b2 in gens for k in T.hom(th.Lo(b), th.Lo(b2))]
            subst_cache[b] = r
        return r

    watches: dict = {}

    def set_var(var, v, trail, stack):
        cur = assign.get(var)
        if cur is None:
            assign[var] = v
            trail.append(("a", var))
            stack.append(var)
            return True
        return cur == v

    def propagate(stack, trail):
        while stack:
            var = stack.pop()
            b, l = var
            v = assign[var]
            for tgt, g in forward(var):
                if not set_var(tgt, B.comp(v, g), trail, stack):
                    return False
            Lv = Lm[v]
            for b2, k in subst_ops(b):
                x = (b2, T.comp(k, l))
                y = (b2, T.comp(k, Lv))
                if x == y:
                    continue
                vx, vy = assign.get(x), assign.get(y)
                if vx is not None and vy is not None:
                    if vx != vy:
                        return False
                elif vx is not None:
                    if not set_var(y, vx, trail, stack):
                        return False
                elif vy is not None:
                    if not set_var(x, vy, trail, stack):
                        return False
                else:
                    watches.setdefault(x, []).append(y)
                    watches.setdefault(y, []).append(x)
                    trail.append(("w", x, y))
            for other in watches.get(var, ()):
                if not set_var(other, v, trail, stack):
                    return False
        return True

    def undo(trail):
        for t in reversed(trail):
            if t[0] == "a":
                del assign[t[1]]
            else:
                watches[t[1]].pop()
                watches[t[2]].pop()

    # L(f) must go to f
    trail0: list = []
    stack: list = []
    for b in objs:
        for f in B.hom(b, d):
            if not set_var((b, Lm[f]), f, trail0, stack):
                return []
    if not propagate(stack, trail0):
        return []
    results = []

    def next_free(i):
        while i < len(variables) and variables[i] in assign:
            i += 1
        return i

    def emit():
        alpha = {b: {} for b in objs}
        for (b, l), v in assign.items():
            alpha[b][l] = v
        results.append(Model(th, arit, d, alpha=alpha))

    def candidates(i):
        b, _ = var = variables[i]
        fw = [(tgt, g) for tgt, g in forward(var) if tgt in assign]
        return iter([v for v in B.hom(b, d) if all(B.comp(v, g) == assign[tgt] for tgt, g in fw)])

    # explicit stack: deep searches would overflow the interpreter stack
    i0 = next_free(0)
    if i0 == len(variables):
        emit()
        return results
    frames = [[i0, candidates(i0), None]]
    while frames:
        fr = frames[-1]
        if fr[2] is not None:
            undo(fr[2])
            fr[2] = None
        if limit is not None and len(results) >= limit:
            break
        var = variables[fr[0]]
        for v in fr[1]:
            trail: list = []
            if set_var(var, v, trail, [var]) and propagate([var], trail):
                fr[2] = trail
                j = next_free(fr[0] + 1)
                if j == len(variables):
                    emit()
                else:
                    frames.append([j, candidates(j), None])
                break
            undo(trail)
        else:
            frames.pop()
    for fr in reversed(frames):
        if fr[2] is not None:
            undo(fr[2])
    return results


def _extend_set_functor(cat: FinCategory, sets: dict, fixed: dict, limit=None) -> list[dict]:
    """All functors Γ: cat -> Set with the given object values and fixed morphism images.

    Returns Γ as dicts morphism -> dict. Propagating backtracking search.
    """
    morphs = cat.morphisms()
    variables = [(m, e) for m in morphs for e in sets[cat.dom(m)]]
    assign: dict = {}
    rev: dict = {}  # (object, e) -> list of (j, e0) with Γ(j)(e0) = e

    def set_var(var, v, trail, stack):
        cur = assign.get(var)
        if cur is None:
            if v not in sets_index[cat.cod(var[0])]:
                return False
            assign[var] = v
            rev.setdefault((cat.cod(var[0]), v), []).append(var)
            trail.append(var)
            stack.append(var)
            return True
        return cur == v

    sets_index = {x: set(s) for x, s in sets.items()}

    def propagate(stack, trail):
        while stack:
            var = stack.pop()
            m, e = var
            v = assign[var]
            for k in cat.out_of(cat.cod(m)):
                km = cat.comp(k, m)
                kv = assign.get((k, v))
                if kv is not None:
                    if not set_var((km, e), kv, trail, stack):
                        return False
                else:
                    w = assign.get((km, e))
                    if w is not None and not set_var((k, v), w, trail, stack):
                        return False
            for j, e0 in list(rev.get((cat.dom(m), e), ())):
                if not set_var((cat.comp(m, j), e0), v, trail, stack):
                    return False
        return True

    def undo(trail):
        for var in reversed(trail):
            v = assign.pop(var)
            rev[(cat.cod(var[0]), v)].pop()

    trail0: list = []
    stack: list = []
    for x in cat.objects:
        for e in sets[x]:
            if not set_var((cat.identity(x), e), e, trail0, stack):
                return []
    for m, mp in fixed.items():
        for e, v in mp.items():
            if not set_var((m, e), v, trail0, stack):
                return []
    if not propagate(stack, trail0):
        return []
    results = []

    def rec(i):
        if limit is not None and len(results) >= limit:
            return
        while i < len(variables) and variables[i] in assign:
            i += 1
        if i == len(variables):
            results.append({m: {e: assign[(m, e)] for e in sets[cat.dom(m)]} for m in morphs})
            return
        var = variables[i]
        for v in sets[cat.cod(var[0])]:
            trail: list = []
            if set_var(var, v, trail, []) and propagate([var], trail):
                rec(i + 1)
            undo(trail)

    rec(0)
    return results


def _gamma_models_at(th: ProtoTheory, arit: Aritation, d, limit=None) -> list[Model]:
    T = th.theory_cat
    inv = _inverse_objects(th)
    sets = {x: arit.pair(inv[x], d) for x in T.objects}
    fixed: dict = {}
    for f in th.arities.morphisms():
        lf = th.Lm(f)
        mp = arit.act_arity(f, d)
        if lf in fixed and fixed[lf] != mp:
            return []
        fixed[lf] = mp
    return [Model(th, arit, d, gamma=g) for g in _extend_set_functor(T, sets, fixed, limit)]


def enumerate_models(th: ProtoTheory, arit: Aritation, carriers=None) -> list[Model]:
    """All models of th for the aritation, carriers in base order."""
    B = arit.base
    carriers = B.objects if carriers is None else carriers
    out = []
    for d in carriers:
        if arit.kind == "canonical":
            out.extend(_canonical_models_at(th, B, d, arit))
        else:
            out.extend(_gamma_models_at(th, arit, d))
    return out


def is_model_hom(x: Model, y: Model, h) -> bool:
    th, arit = x.theory, x.arit
    T = th.theory_cat
    B = arit.base
    if x.alpha is not None:
        Lh = th.Lm(h)
        Lx = th.Lo(x.carrier)
        for b in _separating_objects(B):
            ax, ay = x.alpha[b], y.alpha[b]
            for l in T.hom(Lx, th.Lo(b)):
                if B.comp(h, ax[l]) != ay[T.comp(l, Lh)]:
                    return False
        return True
    inv = _inverse_objects(th)
    for l in T.morphisms():
        a, a2 = inv[T.dom(l)], inv[T.cod(l)]
        ha, ha2 = arit.act_base(a, h), arit.act_base(a2, h)
        gx, gy = x.gamma[l], y.gamma[l]
        for e in arit.pair(a, x.carrier):
            if ha2[gx[e]] != gy[ha[e]]:
                return False
    return True


def enumerate_model_homs(x: Model, y: Model) -> list[ModelHom]:
    if x.theory is not y.theory:
        raise TheoryError("models of different theories")
    B = x.arit.base
    return [ModelHom(x, y, h) for h in B.hom(x.carrier, y.carrier) if is_model_hom(x, y, h)]


class ModelCategory:
    """mod(L): the category of models with its forgetful functor."""

    def __init__(self, th: ProtoTheory, arit: Aritation, models=None):
        self.theory = th
        self.arit = arit
        B = arit.base
        models = enumerate_models(th, arit) if models is None else models
        counters: dict = {}
        self.models: dict[str, Model] = {}
        self.by_key: dict = {}
        for x in models:
            i = counters.get(x.carrier, 0)
            counters[x.carrier] = i + 1
            name = f"{x.carrier}#{i}"
            self.models[name] = x
            self.by_key[x.key()] = name
        homs, data = {}, {}
        names = list(self.models)
        for p in names:
            for q in names:
                ms = []
                for mh in enumerate_model_homs(self.models[p], self.models[q]):
                    nm = f"{p}>{q}:{mh.h}"
                    ms.append(nm)
                    data[nm] = (p, q, mh.h)
                homs[(p, q)] = ms
        ident = {p: f"{p}>{p}:{B.identity(self.models[p].carrier)}" for p in names}

        def compose(g, f):
            p, _, hf = data[f]
            _, r, hg = data[g]
            return f"{p}>{r}:{B.comp(hg, hf)}"

        self.cat = FinCategory(names, homs, ident, compose, name=f"mod({th.name})", data=data)
        self.forget = FinFunctor(self.cat, B, {p: self.models[p].carrier for p in names},
                                 {m: data[m][2] for m in data}, name="U")

    def name_of(self, x: Model) -> str:
        return self.by_key[x.key()]

    def hom_name(self, p, q, h) -> str:
        nm = f"{p}>{q}:{h}"
        if not self.cat.has_morphism(nm):
            raise TheoryError(f"{h} is not a model homomorphism {p} -> {q}")
        return nm


def model_category(th: ProtoTheory, arit: Aritation) -> ModelCategory:
    return ModelCategory(th, arit)


def sem_on_morphism(p: TheoryMorphism, mod_src: ModelCategory, mod_dst: ModelCategory) -> FinFunctor:
    """sem(P): mod(L2) -> mod(L) for P: L -> L2, sending Γ to Γ∘P."""
    th, th2 = p.src, p.dst
    arit = mod_src.arit
    T = th.theory_cat
    obj, mor = {}, {}
    for name2, x2 in mod_dst.models.items():
        if x2.alpha is not None:
            Ld = th.Lo(x2.carrier)
            alpha = {b: {l: x2.alpha[b][p(l)] for l in T.hom(Ld, th.Lo(b))} for b in arit.base.objects}
            x = Model(th, arit, x2.carrier, alpha=alpha)
        else:
            x = Model(th, arit, x2.carrier, gamma={l: x2.gamma[p(l)] for l in T.morphisms()})
        obj[name2] = mod_src.name_of(x)
    for m in mod_dst.cat.morphisms():
        a, b, h = mod_dst.cat.data[m]
        mor[m] = mod_src.hom_name(obj[a], obj[b], h)
    return FinFunctor(mod_dst.cat, mod_src.cat, obj, mor, name="sem(P)")


# --- structure -------------------------------------------------------------------------------


class StructureTheory(ProtoTheory):
    """str(U): theory category thr(U) with homs Nat(⟨a,U-⟩, ⟨a2,U-⟩).

    A transformation is stored as a tuple over the objects of M of index
    tuples (positions in the target presheaf).
    """

    def __init__(self, u, arit: Aritation, presheaves, nats, name=""):
        self.u = u
        self.arit = arit
        self.presheaves = presheaves
        A = arit.arities
        self.m_objects = _src_cat(u).objects
        homs, data, lookup = {}, {}, {}
        for (a, a2), lst in nats.items():
            ms = []
            for i, t in enumerate(lst):
                nm = f"{a}>{a2}:{i}"
                ms.append(nm)
                data[nm] = t
                lookup[(a, a2, t)] = nm
            homs[(a, a2)] = ms
        self.lookup = lookup
        ident = {}
        for a in A.objects:
            h = presheaves[a]
            t = tuple(tuple(range(len(h.obj(x)))) for x in self.m_objects)
            ident[a] = lookup[(a, a, t)]
        dom = {}
        for (a, a2), ms in homs.items():
            for nm in ms:
                dom[nm] = (a, a2)

        def compose(g, f):
            a, _ = dom[f]
            _, a3 = dom[g]
            tf, tg = data[f], data[g]
            t = tuple(tuple(cg[i] for i in cf) for cf, cg in zip(tf, tg))
            return lookup[(a, a3, t)]

        thr = FinCategory(A.objects, homs, ident, compose, name=f"thr({getattr(u, 'name', '') or 'U'})", data=data)
        Lmor = {}
        for f in A.morphisms():
            a, a2 = A.dom(f), A.cod(f)
            t = self._as_indices(a, a2, {x: arit.arity_component(f, u, x) for x in self.m_objects})
            Lmor[f] = lookup[(a, a2, t)]
        L = FinFunctor(A, thr, {a: a for a in A.objects}, Lmor, name="str(U)")
        super().__init__(A, thr, L, name=name or f"str({getattr(u, 'name', '') or 'U'})")

    def _as_indices(self, a, a2, comps) -> tuple:
        h, h2 = self.presheaves[a], self.presheaves[a2]
        return tuple(tuple(h2.index(x, comps[x][e]) for e in h.obj(x)) for x in self.m_objects)

    def nat_name(self, a, a2, comps) -> str:
        """Name of the transformation ⟨a,U-⟩ -> ⟨a2,U-⟩ with components as element dicts."""
        return self.lookup[(a, a2, self._as_indices(a, a2, comps))]

    def component(self, name, x) -> dict:
        """Component at x of a thr(U) morphism, as an element dict."""
        T = self.theory_cat
        a, a2 = T.dom(name), T.cod(name)
        h, h2 = self.presheaves[a], self.presheaves[a2]
        i = self.m_objects.index(x)
        idx = T.data[name][i]
        tgt = h2.obj(x)
        return {e: tgt[j] for e, j in zip(h.obj(x), idx)}


def _src_cat(u):
    return u.cat if isinstance(u, SetFunctor) else u.src


def _nat_index_tuples(h: SetFunctor, h2: SetFunctor) -> list[tuple]:
    objs = h.cat.objects
    out = []
    for t in enumerate_nat_transformations(h, h2):
        out.append(tuple(tuple(h2.index(x, t[x][e]) for e in h.obj(x)) for x in objs))
    out.sort()
    return out


def _power_nats(u: SetFunctor, h: SetFunctor, k: int, base_list) -> list[tuple]:
    """Nat(H, U^k) as k-fold tuples of transformations H -> U, in canonical order."""
    objs = u.cat.objects
    sizes = [len(u.obj(x)) for x in objs]
    out = []
    for combo in product(base_list, repeat=k):
        comps = []
        for xi, x in enumerate(objs):
            n = sizes[xi]
            cols = [c[xi] for c in combo]
            row = []
            for j in range(len(h.obj(x))):
                idx = 0
                for col in cols:
                    idx = idx * n + col[j]
                row.append(idx)
            comps.append(tuple(row))
        out.append(tuple(comps))
    out.sort()
    return out


def structure(u, arit: Aritation, name="", power=None) -> StructureTheory:
    """str(U) for U: M -> B (a FinFunctor, or a SetFunctor over a finite-set base).

    ``power=False`` forces a direct search of every Nat(⟨a,U-⟩, ⟨a2,U-⟩).
    """
    A = arit.arities
    pres = {a: arit.presheaf(a, u) for a in A.objects}
    nats: dict = {}
    can_split = arit.kind == "canonical" and (isinstance(u, SetFunctor) or is_finset_category(arit.base))
    power = can_split if power is None else (power and can_split)
    if power:
        # ⟨a2, X⟩ = X^a2, so Nat(H, U^a2) = Nat(H, U)^a2; B(a, k) is listed in
        # product order, so a FinFunctor U gives the same index tuples
        su = u if isinstance(u, SetFunctor) else set_functor_from_finfunctor(u)
        spres = pres if su is u else {a: arit.presheaf(a, su) for a in A.objects}
        into_u = {a: _nat_index_tuples(spres[a], su) for a in A.objects}
        for a in A.objects:
            for a2 in A.objects:
                nats[(a, a2)] = _power_nats(su, spres[a], int(a2), into_u[a])
    else:
        for a in A.objects:
            for a2 in A.objects:
                nats[(a, a2)] = _nat_index_tuples(pres[a], pres[a2])
    return StructureTheory(u, arit, pres, nats, name=name)


def str_on_morphism(q: FinFunctor, s_u: StructureTheory, s_u2: StructureTheory) -> TheoryMorphism:
    """str(Q): str(U) -> str(U2) for Q: M2 -> M with U∘Q = U2, by whiskering γ ↦ γQ."""
    T, T2 = s_u.theory_cat, s_u2.theory_cat
    mor = {}
    for g in T.morphisms():
        a, a2 = T.dom(g), T.cod(g)
        comps = {y: s_u.component(g, q.fo(y)) for y in s_u2.m_objects}
        mor[g] = s_u2.nat_name(a, a2, comps)
    f = FinFunctor(T, T2, {a: a for a in T.objects}, mor, name="str(Q)")
    return TheoryMorphism(s_u, s_u2, f)


# --- the adjunction bijections -------------------------------------------------------------------


def psi(r: FinFunctor, th: ProtoTheory, mod: ModelCategory, s_u: StructureTheory) -> TheoryMorphism:
    """Ψ(R): L -> str(U), l ↦ (Γ^{R m}(l))_m."""
    u = s_u.u
    if not isinstance(u, SetFunctor):
        for m in u.src.objects:
            if mod.forget.fo(r.fo(m)) != u.fo(m):
                raise TheoryError("R does not commute with the forgetful functors")
    T = th.theory_cat
    inv = _inverse_objects(th)
    mor = {}
    for l in T.morphisms():
        a, a2 = inv[T.dom(l)], inv[T.cod(l)]
        comps = {m: mod.models[r.fo(m)].gamma_of(l) for m in s_u.m_objects}
        mor[l] = s_u.nat_name(a, a2, comps)
    f = FinFunctor(T, s_u.theory_cat, {th.Lo(a): a for a in th.arities.objects}, mor, name="Ψ(R)")
    return TheoryMorphism(th, s_u, f)


def theta(s: TheoryMorphism, mod: ModelCategory, s_u: StructureTheory) -> FinFunctor:
    """Θ(S): M -> mod(L), m ↦ (U m, Γ(l) = S(l)_m)."""
    th = s.src
    u = s_u.u
    arit = mod.arit
    B = arit.base
    T = th.theory_cat
    M = u.src
    obj = {}
    for m in M.objects:
        d = u.fo(m)
        if arit.kind == "canonical":
            Ld = th.Lo(d)
            alpha = {}
            ident = B.identity(d)
            for b in B.objects:
                alpha[b] = {l: s_u.component(s(l), m)[ident] for l in T.hom(Ld, th.Lo(b))}
            x = Model(th, arit, d, alpha=alpha)
        else:
            x = Model(th, arit, d, gamma={l: s_u.component(s(l), m) for l in T.morphisms()})
        key = x.key()
        if key not in mod.by_key:
            raise TheoryError(f"Θ(S)({m}) is not a model")
        obj[m] = mod.by_key[key]
    mor = {h: mod.hom_name(obj[M.dom(h)], obj[M.cod(h)], u.fm(h)) for h in M.morphisms()}
    return FinFunctor(M, mod.cat, obj, mor, name="Θ(S)")


def enumerate_lifts(u: FinFunctor, mod: ModelCategory) -> list[FinFunctor]:
    """All R: M -> mod(L) with forget∘R = U."""
    M = u.src
    choices = []
    for m in M.objects:
        choices.append([p for p, x in mod.models.items() if x.carrier == u.fo(m)])
    out = []
    for combo in product(*choices):
        obj = dict(zip(M.objects, combo))
        mor = {}
        ok = True
        for h in M.morphisms():
            nm = f"{obj[M.dom(h)]}>{obj[M.cod(h)]}:{u.fm(h)}"
            if not mod.cat.has_morphism(nm):
                ok = False
                break
            mor[h] = nm
        if ok:
            out.append(FinFunctor(M, mod.cat, obj, mor, name="R"))
    return out


def enumerate_theory_morphisms(th: ProtoTheory, th2: ProtoTheory) -> list[TheoryMorphism]:
    """All P: 𝓛 -> 𝓛2 with P∘L = L2."""
    fixed = {}
    for f in th.arities.morphisms():
        lf, l2f = th.Lm(f), th2.Lm(f)
        if fixed.get(lf, l2f) != l2f:
            return []
        fixed[lf] = l2f
    obj = {th.Lo(a): th2.Lo(a) for a in th.arities.objects}
    return [TheoryMorphism(th, th2, f) for f in enumerate_functors(th.theory_cat, th2.theory_cat, obj, fixed)]


def counit(th: ProtoTheory, arit: Aritation, mod: ModelCategory | None = None):
    """E_L = Ψ(id): L -> str(sem L). Returns (E_L, str(sem L), mod(L))."""
    from .fincat import identity_functor
    mod = mod or ModelCategory(th, arit)
    s = structure(mod.forget, arit)
    e = psi(identity_functor(mod.cat), th, mod, s)
    return e, s, mod


# --- monoids as one-object theories ---------------------------------------------------------------


def monoid_point_prototheory(elements, unit, mult, name="") -> ProtoTheory:
    """The one-object theory with endomorphisms a monoid, over terminal arities.

    mult(x, y) is x·y and becomes x∘y, so models are left actions.
    """
    one = terminal_category()
    elements = [str(e) for e in elements]
    T = monoid_category(elements, str(unit), lambda g, f: str(mult(g, f)), name=name or "M")
    # rename the single object of T to match the arity category
    L = FinFunctor(one, T, {"*": "*"}, {"id_*": str(unit)}, name="L")
    return ProtoTheory(one, T, L, name=name or "M")


def product_of_models(x: Model, y: Model):
    """Binary product of two canonical models, if the base has the carrier product.

    Returns (model, π1, π2) or raises TheoryError.
    """
    th, arit = x.theory, x.arit
    if arit.kind != "canonical":
        raise TheoryError("products are implemented for the canonical aritation")
    B = arit.base
    prod = _find_product(B, x.carrier, y.carrier)
    if prod is None:
        raise TheoryError(f"base has no product of {x.carrier} and {y.carrier}")
    p, p1, p2 = prod
    T = th.theory_cat
    Lp = th.Lo(p)
    alpha = {}
    for b in B.objects:
        row = {}
        for l in T.hom(Lp, th.Lo(b)):
            u = x.alpha[b][T.comp(l, th.Lm(p1))]
            v = y.alpha[b][T.comp(l, th.Lm(p2))]
            med = [w for w in B.hom(b, p) if B.comp(p1, w) == u and B.comp(p2, w) == v]
            row[l] = med[0]
        alpha[b] = row
    return Model(th, arit, p, alpha=alpha), p1, p2


def _find_product(B: FinCategory, x, y):
    for p in B.objects:
        for p1 in B.hom(p, x):
            for p2 in B.hom(p, y):
                good = True
                for c in B.objects:
                    pairs = {}
                    for w in B.hom(c, p):
                        key = (B.comp(p1, w), B.comp(p2, w))
                        if key in pairs:
                            good = False
                            break
                        pairs[key] = w
                    if not good or len(pairs) != len(B.hom(c, x)) * len(B.hom(c, y)):
                        good = False
                        break
                if good:
                    return p, p1, p2
    return None


def is_product_in_models(mod: ModelCategory, pname: str, p1: str, p2: str, xname: str, yname: str) -> bool:
    """Universal property of (P, π1, π2) among all models and homs."""
    C = mod.cat
    B = mod.arit.base
    n1 = mod.hom_name(pname, xname, p1)
    n2 = mod.hom_name(pname, yname, p2)
    for z in C.objects:
        for f in C.hom(z, xname):
            for g in C.hom(z, yname):
                med = [w for w in C.hom(z, pname) if C.comp(n1, w) == f and C.comp(n2, w) == g]
                if len(med) != 1:
                    return False
    return True
