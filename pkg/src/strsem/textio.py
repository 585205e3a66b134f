"""Line-oriented text format for categories, functors, theories, monoids and topologies.

A file is a sequence of blocks. Each block opens with a header line and
ends with END, except one-line definitions ``KIND name = expression``
that name a built-in construction::

    CATEGORY walking_arrow
    OBJECTS 0 1
    HOMS
      0 0 : id0
      0 1 : f
      1 1 : id1
    IDENTITIES
      0 : id0
      1 : id1
    COMPOSE
      id0 id0 : id0     # g f : g∘f
      f id0 : f
      id1 f : f
      id1 id1 : id1
    END

    MONOID z2 = Z(2)
    THEORY e2 = E(z2, 2)

Composition tables list every composable pair; pairs with an identity may be omitted.
``#`` starts a comment. Errors carry line and column.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field

from .fincat import (
    FinCategory,
    FinFunctor,
    NatTransformation,
    SetFunctor,
    chain_category,
    discrete_category,
    empty_category,
    finset_category,
    identity_functor,
    terminal_category,
    walking_arrow,
)
from .groupsem import (
    FinMonoid,
    GSetCategory,
    cyclic_group,
    e_of_monoid,
    idempotent_monoid,
    klein_four,
    monoid_catalog,
    trivial_monoid,
)
from .monads import SetMonad, action_monad, free_forgetful, identity_monad, kleisli, maybe_monad
from .proth import ProjectionAritation, ProtoTheory, canonical_aritation, identity_theory, model_category
from .proth import monoid_point_prototheory
from .topth import FinTopology, TopProtoTheory, finite_lattices, lattice_category


class InputError(ValueError):
    """Malformed input or an unresolved reference; the CLI exits with status 2."""

    def __init__(self, msg, path=None, line=None, col=None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:" + (f"{col}:" if col is not None else "")
        super().__init__(f"{where} {msg}" if where else msg)


KINDS = ("CATEGORY", "FUNCTOR", "NAT", "THEORY", "MONOID", "MONAD", "TOPOLOGY", "PRESENTATION")


@dataclass
class Workspace:
    """Named objects loaded from files, plus the built-in expressions."""

    items: dict = field(default_factory=dict)  # name -> (kind, value)
    sources: dict = field(default_factory=dict)  # path -> list of names in order
    exprs: dict = field(default_factory=dict)  # name -> (kind, expression) for one-line definitions

    def add(self, kind, name, value, path=None, line=None):
        if name in self.items:
            raise InputError(f"{name!r} is defined twice", path, line)
        self.items[name] = (kind, value)
        if path is not None:
            self.sources.setdefault(path, []).append(name)

    def get(self, ref: str, kind: str):
        """Resolve a name, a file path (first block of that kind) or a built-in expression."""
        ref = ref.strip()
        if ref in self.items:
            k, v = self.items[ref]
            if k != kind:
                raise InputError(f"{ref!r} is a {k.lower()}, not a {kind.lower()}")
            return v
        if os.path.isfile(ref):
            if ref not in self.sources:
                load_file(ref, self)
            for name in self.sources.get(ref, []):
                k, v = self.items[name]
                if k == kind:
                    return v
            raise InputError(f"{ref} defines no {kind.lower()}")
        return evaluate(ref, kind, self)

    def names(self, kind=None):
        return [n for n, (k, _) in self.items.items() if kind is None or k == kind]


# --- expressions ---------------------------------------------------------------------------------------


_CALL = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def _int(s, what="bound"):
    try:
        return int(s)
    except ValueError:
        raise InputError(f"expected an integer {what}, got {s!r}") from None


def evaluate(expr: str, kind: str, ws: Workspace | None = None):
    """Evaluate a built-in expression such as finset(2), Z(3), kleisli(maybe, 2) or gset(Z(2), 3)."""
    ws = ws or Workspace()
    m = _CALL.match(expr)
    if not m:
        raise InputError(f"cannot parse expression {expr!r}")
    head, argtext = m.group(1), m.group(2)
    args = _split_args(argtext) if argtext else []
    table = _BUILTINS.get(kind, {})
    if head not in table:
        known = ", ".join(sorted(table))
        raise InputError(f"unknown {kind.lower()} {expr!r} (built-ins: {known})")
    return table[head](ws, *args)


def _theory_with(th, base, arit=None):
    th.base = base
    th.arit = arit or canonical_aritation(base)
    return th


def _lattice(ws, n, i="0"):
    n, i = _int(n, "size"), _int(i, "index")
    ls = finite_lattices(n)
    if not 0 <= i < len(ls):
        raise InputError(f"there are {len(ls)} lattices of size {n}")
    return lattice_category(n, ls[i])


def _catalog(ws, n, i):
    n, i = _int(n, "order"), _int(i, "index")
    ms = [m for m in monoid_catalog(n) if len(m) == n]
    if not 0 <= i < len(ms):
        raise InputError(f"there are {len(ms)} monoids of order {n}")
    return ms[i]


def _gset_forget(ws, mon, n):
    gs = GSetCategory(ws.get(mon, "MONOID"), _int(n))
    return gs.forget


def _model_forget(ws, th):
    t = ws.get(th, "THEORY")
    return model_category(t, aritation_of(t)).forget


def _const(ws, k):
    from .fincat import terminal_category as one
    return SetFunctor(one(), {"*": tuple(range(_int(k, "size")))}, lambda m, e: e, name=f"const{k}")


_BUILTINS = {
    "CATEGORY": {
        "terminal": lambda ws: terminal_category(),
        "empty": lambda ws: empty_category(),
        "walking_arrow": lambda ws: walking_arrow(),
        "chain": lambda ws, n: chain_category(_int(n, "length")),
        "finset": lambda ws, n: finset_category(_int(n)),
        "discrete": lambda ws, *objs: discrete_category(list(objs)),
        "lattice": _lattice,
        "op": lambda ws, c: ws.get(c, "CATEGORY").op(),
    },
    "MONOID": {
        "Z": lambda ws, n: cyclic_group(_int(n, "order")),
        "klein": lambda ws: klein_four(),
        "idem": lambda ws: idempotent_monoid(),
        "trivial": lambda ws: trivial_monoid(),
        "catalog": _catalog,
    },
    "MONAD": {
        "id": lambda ws: identity_monad(),
        "maybe": lambda ws: maybe_monad(),
        "action": lambda ws, mon: action_monad(ws.get(mon, "MONOID")),
    },
    "THEORY": {
        "identity": lambda ws, c: _theory_with(identity_theory(canonical_aritation(ws.get(c, "CATEGORY")).arities),
                                               ws.get(c, "CATEGORY")),
        "kleisli": lambda ws, t, n: (lambda kt: _theory_with(kt, kt.base))(kleisli(ws.get(t, "MONAD"), _int(n))),
        "E": lambda ws, mon, n: (lambda th: _theory_with(th, th.base))(e_of_monoid(ws.get(mon, "MONOID"), _int(n))),
        "point": lambda ws, mon, n: _point(ws.get(mon, "MONOID"), _int(n)),
    },
    "FUNCTOR": {
        "identity": lambda ws, c: identity_functor(ws.get(c, "CATEGORY")),
        "gset": _gset_forget,
        "forget": _model_forget,
        "free": lambda ws, t, n: free_forgetful(ws.get(t, "MONAD"), _int(n))[0],
        "const": _const,
    },
}


def _point(m: FinMonoid, n: int):
    els = [str(e) for e in m.elements]
    idx = {str(e): e for e in m.elements}
    th = monoid_point_prototheory(els, str(m.unit), lambda g, f: str(m.mul(idx[g], idx[f])), name=m.name)
    base = finset_category(n)
    return _theory_with(th, base, ProjectionAritation(base))


def aritation_of(th):
    """The aritation a theory is read against: its own, else the canonical one of its base."""
    from .topth import base_of
    arit = getattr(th, "arit", None)
    if arit is not None:
        return arit
    return canonical_aritation(base_of(th))


# --- parsing -----------------------------------------------------------------------------------------------


def _lines(text):
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield i, line


def load_file(path: str, ws: Workspace | None = None) -> Workspace:
    ws = ws if ws is not None else Workspace()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    ws.sources.setdefault(path, [])
    if path.endswith(".pres"):
        from .eqpres import PresentationError, parse_presentation
        name = os.path.splitext(os.path.basename(path))[0]
        try:
            ws.add("PRESENTATION", name, parse_presentation(text, name=name), path)
        except PresentationError as e:
            raise InputError(str(e), path) from None
        return ws
    parse_text(text, ws, path)
    return ws


def parse_text(text: str, ws: Workspace | None = None, path="<text>") -> Workspace:
    ws = ws if ws is not None else Workspace()
    lines = list(_lines(text))
    i = 0
    while i < len(lines):
        ln, line = lines[i]
        parts = line.split(None, 1)
        kind = parts[0]
        if kind not in KINDS:
            raise InputError(f"expected one of {', '.join(KINDS)}, got {kind!r}", path, ln, 1)
        rest = parts[1] if len(parts) > 1 else ""
        if "=" in rest and not rest.strip().startswith("=") and kind != "PRESENTATION":
            name, expr = (s.strip() for s in rest.split("=", 1))
            if ws.exprs.get(name) == (kind, expr):
                # the same one-line definition repeated in another file
                ws.sources.setdefault(path, []).append(name)
                i += 1
                continue
            try:
                value = ws.get(expr, kind)
            except InputError as e:
                raise InputError(str(e), path, ln, line.index("=") + 2) from None
            ws.add(kind, name, value, path, ln)
            ws.exprs[name] = (kind, expr)
            i += 1
            continue
        j = i + 1
        while j < len(lines) and lines[j][1].strip() != "END":
            j += 1
        if j == len(lines):
            raise InputError(f"{kind} block is not closed by END", path, ln, 1)
        body = lines[i + 1:j]
        parser = _BLOCK_PARSERS[kind]
        name, value = parser(rest, body, ws, path, ln)
        ws.add(kind, name, value, path, ln)
        i = j + 1
    return ws


def _sections(body, allowed, path):
    """Split a block body into {SECTION: [(line, text)]}; a section header may carry inline content."""
    out: dict = {}
    cur = None
    for ln, line in body:
        tok = line.split(None, 1)
        if tok[0] in allowed and line == line.lstrip():
            cur = tok[0]
            out.setdefault(cur, [])
            if len(tok) > 1:
                out[cur].append((ln, tok[1]))
            continue
        if cur is None:
            raise InputError(f"expected a section header ({', '.join(allowed)})", path, ln, 1)
        out[cur].append((ln, line.strip()))
    return out


def _colon(ln, text, path, want_left=None, want_right=None):
    toks = text.split()
    if ":" in toks:
        # a free-standing colon, so names such as 0>1:0 survive
        k = toks.index(":")
        left, right = toks[:k], toks[k + 1:]
    elif ":" in text:
        l, r = text.split(":", 1)
        left, right = l.split(), r.split()
    else:
        raise InputError("expected 'left : right'", path, ln, 1)
    if want_left is not None and len(left) != want_left:
        raise InputError(f"expected {want_left} name(s) before ':'", path, ln, 1)
    if want_right is not None and len(right) != want_right:
        raise InputError(f"expected {want_right} name(s) after ':'", path, ln, text.index(":") + 2)
    return left, right


def _parse_category(header, body, ws, path, ln0):
    name = header.strip()
    if not name:
        raise InputError("CATEGORY needs a name", path, ln0)
    sec = _sections(body, ("OBJECTS", "HOMS", "IDENTITIES", "COMPOSE"), path)
    objects = [o for _, t in sec.get("OBJECTS", []) for o in t.split()]
    homs, ident, comp = {}, {}, {}
    for ln, t in sec.get("HOMS", []):
        (a, b), ms = _colon(ln, t, path, 2)
        for o in (a, b):
            if o not in objects:
                raise InputError(f"unknown object {o!r}", path, ln, 1)
        homs.setdefault((a, b), []).extend(ms)
    declared = {m for ms in homs.values() for m in ms}
    for ln, t in sec.get("IDENTITIES", []):
        (a,), (m,) = _colon(ln, t, path, 1, 1)
        if m not in homs.get((a, a), ()):
            raise InputError(f"identity {m!r} is not a morphism {a} -> {a}", path, ln, 1)
        ident[a] = m
    for ln, t in sec.get("COMPOSE", []):
        (g, f), (h,) = _colon(ln, t, path, 2, 1)
        for x in (g, f, h):
            if x not in declared:
                raise InputError(f"unknown morphism {x!r}", path, ln, 1)
        comp[(g, f)] = h
    missing = [o for o in objects if o not in ident]
    if missing:
        raise InputError(f"no identity given for {missing}", path, ln0)
    from .fincat import CategoryError
    try:
        c = FinCategory(objects, homs, ident, comp, name=name)
    except CategoryError as e:
        raise InputError(str(e), path, ln0) from None
    return name, c


def _parse_functor(header, body, ws, path, ln0):
    m = re.match(r"^\s*(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*$", header)
    if not m:
        raise InputError("expected 'FUNCTOR name : SRC -> DST'", path, ln0)
    name, src, dst = m.groups()
    a, b = ws.get(src, "CATEGORY"), ws.get(dst, "CATEGORY")
    sec = _sections(body, ("OBJECTS", "MORPHISMS"), path)
    obj = {}
    for ln, t in sec.get("OBJECTS", []):
        (x,), (y,) = _colon(ln, t, path, 1, 1)
        obj[x] = y
    mor = {}
    for ln, t in sec.get("MORPHISMS", []):
        (f,), (g,) = _colon(ln, t, path, 1, 1)
        mor[f] = g
    # identities may be left out
    for x in a.objects:
        if x in obj:
            mor.setdefault(a.identity(x), b.identity(obj[x]) if obj[x] in b.objects else None)
    missing = [x for x in a.objects if x not in obj] + [f for f in a.morphisms() if mor.get(f) is None]
    if missing:
        raise InputError(f"functor {name} is not total: {missing[:4]}", path, ln0)
    return name, FinFunctor(a, b, obj, mor, name=name)


def _parse_nat(header, body, ws, path, ln0):
    m = re.match(r"^\s*(\S+)\s*:\s*(\S+)\s*=>\s*(\S+)\s*$", header)
    if not m:
        raise InputError("expected 'NAT name : F => G'", path, ln0)
    name, f, g = m.groups()
    F, G = ws.get(f, "FUNCTOR"), ws.get(g, "FUNCTOR")
    sec = _sections(body, ("COMPONENTS",), path)
    comps = {}
    for ln, t in sec.get("COMPONENTS", []):
        (x,), (h,) = _colon(ln, t, path, 1, 1)
        comps[x] = h
    return name, NatTransformation(F, G, comps)


def _parse_theory(header, body, ws, path, ln0):
    name = header.strip()
    sec = _sections(body, ("ARITIES", "OPERATIONS", "L", "BASE"), path)

    def one(key, kind):
        vals = sec.get(key)
        if not vals:
            raise InputError(f"THEORY {name} needs {key}", path, ln0)
        ln, t = vals[0]
        try:
            return ws.get(t, kind)
        except InputError as e:
            raise InputError(str(e), path, ln) from None

    L = one("L", "FUNCTOR")
    base = one("BASE", "CATEGORY") if "BASE" in sec else L.src.op(name=f"{L.src.name}^op")
    from .proth import TheoryError
    try:
        th = ProtoTheory(L.src, L.dst, L, name=name)
    except TheoryError as e:
        raise InputError(str(e), path, ln0) from None
    arit = canonical_aritation(base)
    if set(arit.arities.objects) != set(L.src.objects):
        raise InputError("the arities of L are not the objects of BASE", path, ln0)
    return name, _theory_with(th, base, arit)


def _parse_monoid(header, body, ws, path, ln0):
    name = header.strip()
    sec = _sections(body, ("ELEMENTS", "UNIT", "TABLE"), path)
    els = [e for _, t in sec.get("ELEMENTS", []) for e in t.split()]
    unit = sec.get("UNIT", [(ln0, "")])[0][1].strip()
    rows = [(ln, t.split()) for ln, t in sec.get("TABLE", [])]
    if len(rows) != len(els):
        raise InputError(f"TABLE needs {len(els)} rows", path, ln0)
    table = {}
    for x, (ln, row) in zip(els, rows):
        if len(row) != len(els):
            raise InputError(f"row for {x} needs {len(els)} entries", path, ln, 1)
        for y, v in zip(els, row):
            if v not in els:
                raise InputError(f"{v!r} is not an element", path, ln, 1)
            table[(x, y)] = v
    m = FinMonoid(tuple(els), unit, table, name=name)
    errs = m.validate()
    if errs:
        raise InputError("; ".join(errs[:3]), path, ln0)
    return name, m


def _parse_topology(header, body, ws, path, ln0):
    m = re.match(r"^\s*(\S+)\s+FOR\s+(\S+)\s*$", header)
    if not m:
        raise InputError("expected 'TOPOLOGY name FOR theory'", path, ln0)
    name, thref = m.groups()
    th = ws.get(thref, "THEORY")
    T = th.theory_cat
    tops = {}
    for ln, t in body:
        (x, y), rest = _colon(ln, t, path, 2)
        if (x, y) not in T.hom_sets() and (x not in T.objects or y not in T.objects):
            raise InputError(f"no hom-set ({x},{y})", path, ln, 1)
        hom = T.hom(x, y)
        opens = [frozenset(o.split()) for o in " ".join(rest).split("|") if o.strip()]
        for o in opens:
            if not o <= set(hom):
                raise InputError(f"open set {sorted(o)} is not inside ({x},{y})", path, ln, 1)
        tops[(x, y)] = FinTopology(hom, opens=_lattice_closure(opens, hom))
    from .topth import base_of
    return name, TopProtoTheory(th, tops, base=getattr(th, "base", None) or base_of(th), name=name)


def _lattice_closure(opens, carrier):
    fam = {frozenset(), frozenset(carrier)} | set(opens)
    changed = True
    while changed:
        changed = False
        for a in list(fam):
            for b in list(fam):
                for c in (a | b, a & b):
                    if c not in fam:
                        fam.add(c)
                        changed = True
    return fam


_BLOCK_PARSERS = {
    "CATEGORY": _parse_category,
    "FUNCTOR": _parse_functor,
    "NAT": _parse_nat,
    "THEORY": _parse_theory,
    "MONOID": _parse_monoid,
    "TOPOLOGY": _parse_topology,
}


def _unsupported(kind):
    def f(header, body, ws, path, ln0):
        raise InputError(f"{kind} blocks are given as one-line definitions", path, ln0)
    return f


_BLOCK_PARSERS["MONAD"] = _unsupported("MONAD")
_BLOCK_PARSERS["PRESENTATION"] = _unsupported("PRESENTATION")


# --- writing -----------------------------------------------------------------------------------------------------


def format_category(c: FinCategory, name=None) -> str:
    lines = [f"CATEGORY {name or c.name or 'C'}", "OBJECTS " + " ".join(c.objects), "HOMS"]
    for a in c.objects:
        for b in c.objects:
            if c.hom(a, b):
                lines.append(f"  {a} {b} : " + " ".join(c.hom(a, b)))
    lines.append("IDENTITIES")
    for a in c.objects:
        lines.append(f"  {a} : {c.identity(a)}")
    lines.append("COMPOSE")
    for (g, f), h in sorted(c.composition_table().items()):
        lines.append(f"  {g} {f} : {h}")
    lines.append("END")
    return "\n".join(lines) + "\n"


def format_functor(f: FinFunctor, name=None, src=None, dst=None) -> str:
    lines = [f"FUNCTOR {name or f.name or 'F'} : {src or f.src.name} -> {dst or f.dst.name}", "OBJECTS"]
    for a in f.src.objects:
        lines.append(f"  {a} : {f.fo(a)}")
    lines.append("MORPHISMS")
    for m in f.src.morphisms():
        lines.append(f"  {m} : {f.fm(m)}")
    lines.append("END")
    return "\n".join(lines) + "\n"


def format_topology(l: TopProtoTheory, theory_ref: str) -> str:
    lines = [f"TOPOLOGY {l.name} FOR {theory_ref}"]
    for (x, y), top in sorted(l.topologies.items()):
        if len(top.carrier) > 1 and not top.is_discrete():
            lines.append(f"  {x} {y} : " + " | ".join(" ".join(u) for u in top.basis()))
    lines.append("END")
    return "\n".join(lines) + "\n"


def category_to_dict(c: FinCategory) -> dict:
    return {
        "kind": "category",
        "name": c.name,
        "objects": list(c.objects),
        "homs": [[a, b, list(c.hom(a, b))] for a in c.objects for b in c.objects if c.hom(a, b)],
        "identities": {a: c.identity(a) for a in c.objects},
        "compose": [[g, f, h] for (g, f), h in sorted(c.composition_table().items())],
    }


def functor_to_dict(f: FinFunctor) -> dict:
    return {
        "kind": "functor",
        "name": f.name,
        "src": f.src.name,
        "dst": f.dst.name,
        "objects": {a: f.fo(a) for a in f.src.objects},
        "morphisms": {m: f.fm(m) for m in f.src.morphisms()},
    }


def category_from_dict(d: dict) -> FinCategory:
    homs = {(a, b): ms for a, b, ms in d["homs"]}
    comp = {(g, f): h for g, f, h in d["compose"]}
    return FinCategory(d["objects"], homs, d["identities"], comp, name=d.get("name", ""))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
