"""Classical algebraic theories: terms, interpretation, models, provability, and str_0."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product

from .fincat import SetFunctor, enumerate_nat_transformations


class PresentationError(ValueError):
    pass


class OperatorDomain:
    """Operation symbols with arities. Symbol order is the given order."""

    def __init__(self, symbols):
        self.symbols: tuple = tuple(s for s, _ in symbols)
        self.arity: dict = dict(symbols)
        if len(self.arity) != len(self.symbols):
            raise PresentationError("duplicate operation symbol")

    def of_arity(self, n) -> tuple:
        return tuple(s for s in self.symbols if self.arity[s] == n)

    def index(self, s) -> int:
        return self.symbols.index(s)

    def __repr__(self):
        return "OperatorDomain(" + ", ".join(f"{s}/{self.arity[s]}" for s in self.symbols) + ")"


@dataclass(frozen=True, eq=True)
class Term:
    """A variable x_var (op is None) or op(args)."""

    op: str | None
    var: int = 0
    args: tuple = ()

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.op, self.var, self.args))
            object.__setattr__(self, "_h", h)
        return h

    def __str__(self):
        if self.op is None:
            return f"x{self.var}"
        if not self.args:
            return self.op
        return f"{self.op}(" + ",".join(str(a) for a in self.args) + ")"

    @property
    def depth(self) -> int:
        if self.op is None:
            return 0
        return 1 + max((a.depth for a in self.args), default=0)

    def variables(self) -> set:
        if self.op is None:
            return {self.var}
        out = set()
        for a in self.args:
            out |= a.variables()
        return out

    def subst(self, terms) -> "Term":
        """t[(s_i/x_i)]; terms[i-1] replaces x_i."""
        if self.op is None:
            return terms[self.var - 1]
        return Term(self.op, 0, tuple(a.subst(terms) for a in self.args))

    def positions(self):
        """(path, subterm) pairs, preorder."""
        yield (), self
        for i, a in enumerate(self.args):
            for p, s in a.positions():
                yield (i,) + p, s

    def replace(self, path, new) -> "Term":
        if not path:
            return new
        i = path[0]
        args = list(self.args)
        args[i] = args[i].replace(path[1:], new)
        return Term(self.op, 0, tuple(args))


def var(i) -> Term:
    return Term(None, i)


def app(op, *args) -> Term:
    return Term(op, 0, tuple(args))


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_']*|\(|\)|,)")


def parse_term(text: str, domain: OperatorDomain | None = None) -> Term:
    """Prefix notation: x1, e, e(), m(x1,i(x2))."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PresentationError(f"cannot parse term at column {pos + 1}: {text!r}")
        toks.append(m.group(1))
        pos = m.end()
    i = 0

    def peek():
        if i >= len(toks):
            raise PresentationError(f"unexpected end of term {text!r}")
        return toks[i]

    def parse():
        nonlocal i
        if i >= len(toks):
            raise PresentationError(f"unexpected end of term {text!r}")
        tok = toks[i]
        i += 1
        if re.fullmatch(r"x[0-9]+", tok) and (domain is None or tok not in domain.arity):
            if int(tok[1:]) < 1:
                raise PresentationError(f"variables start at x1, got {tok} in {text!r}")
            return var(int(tok[1:]))
        if tok in "(),":
            raise PresentationError(f"unexpected {tok!r} in {text!r}")
        args = []
        if i < len(toks) and toks[i] == "(":
            i += 1
            if peek() != ")":
                while True:
                    args.append(parse())
                    if peek() == ",":
                        i += 1
                        continue
                    break
            if peek() != ")":
                raise PresentationError(f"expected ) in {text!r}")
            i += 1
        if domain is not None:
            if tok not in domain.arity:
                raise PresentationError(f"unknown symbol {tok!r}")
            if domain.arity[tok] != len(args):
                raise PresentationError(f"{tok} expects {domain.arity[tok]} arguments")
        return Term(tok, 0, tuple(args))

    t = parse()
    if i != len(toks):
        raise PresentationError(f"trailing input in {text!r}")
    return t


@dataclass
class Presentation:
    domain: OperatorDomain
    equations: list = field(default_factory=list)  # (n, s, t)
    name: str = ""

    def __post_init__(self):
        for n, s, t in self.equations:
            if max(s.variables() | t.variables(), default=0) > n:
                raise PresentationError(f"equation {s} = {t} uses variables beyond arity {n}")


def equation(s, t, n=None, domain=None):
    if isinstance(s, str):
        s = parse_term(s, domain)
    if isinstance(t, str):
        t = parse_term(t, domain)
    if n is None:
        n = max(s.variables() | t.variables(), default=0)
    return (n, s, t)


def group_presentation() -> Presentation:
    """e, i, m with associativity, both unit laws and right inverses."""
    d = OperatorDomain([("e", 0), ("i", 1), ("m", 2)])
    eqs = [
        equation("m(x1,m(x2,x3))", "m(m(x1,x2),x3)", 3, d),
        equation("m(e,x1)", "x1", 1, d),
        equation("m(x1,e)", "x1", 1, d),
        equation("m(x1,i(x1))", "e", 1, d),
    ]
    return Presentation(d, eqs, name="groups")


# --- terms ---------------------------------------------------------------------------------------


def generate_terms(domain: OperatorDomain, n: int, depth_bound: int) -> list[Term]:
    """All terms in x1..xn of depth <= depth_bound, ordered by (depth, symbol index, children)."""
    by_depth = [[var(i) for i in range(1, n + 1)]]
    upto = list(by_depth[0])
    for d in range(1, depth_bound + 1):
        new = []
        for s in domain.symbols:
            k = domain.arity[s]
            if k == 0:
                if d == 1:
                    new.append(Term(s))
                continue
            for args in product(upto, repeat=k):
                if max(a.depth for a in args) == d - 1:
                    new.append(Term(s, 0, args))
        by_depth.append(new)
        upto = upto + new
    return upto


# --- models --------------------------------------------------------------------------------------


class OmegaModel:
    """Carrier range(size) with a table per symbol, indexed like product(range(size), repeat=n)."""

    def __init__(self, domain: OperatorDomain, size: int, tables: dict):
        self.domain = domain
        self.size = size
        self.tables = {s: tuple(v) for s, v in tables.items()}

    def op(self, s, args) -> int:
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self.tables[s][idx]

    def key(self):
        return (self.size,) + tuple(self.tables[s] for s in self.domain.symbols)

    def __eq__(self, other):
        return isinstance(other, OmegaModel) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"OmegaModel(size {self.size})"


def interpret_term(t: Term, a: OmegaModel, n: int, _memo=None) -> tuple:
    """[t]_A: A^n -> A as a table over product(range(|A|), repeat=n)."""
    memo = {} if _memo is None else _memo
    r = memo.get(t)
    if r is not None:
        return r
    k = a.size
    if t.op is None:
        if t.var > n:
            raise PresentationError(f"x{t.var} is not among x1..x{n}")
        r = tuple(p[t.var - 1] for p in product(range(k), repeat=n))
    else:
        if t.op not in a.tables:
            raise PresentationError(f"symbol {t.op} is not interpreted")
        table = a.tables[t.op]
        subs = [interpret_term(s, a, n, memo) for s in t.args]
        if not subs:
            r = tuple(table[0] for _ in range(k ** n))
        elif len(subs) == 1:
            r = tuple(table[x] for x in subs[0])
        elif len(subs) == 2:
            r = tuple(table[x * k + y] for x, y in zip(*subs))
        else:
            r = tuple(a.op(t.op, args) for args in zip(*subs))
    memo[t] = r
    return r


def satisfies(a: OmegaModel, eq) -> bool:
    n, s, t = eq
    memo: dict = {}
    return interpret_term(s, a, n, memo) == interpret_term(t, a, n, memo)


def _partial_eval(t: Term, tables: dict, size: int, env):
    if t.op is None:
        return env[t.var - 1]
    vals = []
    for s in t.args:
        v = _partial_eval(s, tables, size, env)
        if v is None:
            return None
        vals.append(v)
    idx = 0
    for v in vals:
        idx = idx * size + v
    return tables[t.op][idx]


def enumerate_omega_models(p: Presentation, size: int, limit=None) -> list[OmegaModel]:
    """All models of p on range(size): backtracking over table entries with partial equation checks."""
    dom = p.domain
    tables = {s: [None] * (size ** dom.arity[s]) for s in dom.symbols}
    cells = [(s, j) for s in dom.symbols for j in range(size ** dom.arity[s])]
    envs = {n: list(product(range(size), repeat=n)) for n, _, _ in p.equations}
    out = []

    def consistent():
        for n, s, t in p.equations:
            for env in envs[n]:
                a = _partial_eval(s, tables, size, env)
                if a is None:
                    continue
                b = _partial_eval(t, tables, size, env)
                if b is not None and a != b:
                    return False
        return True

    def rec(i):
        if limit is not None and len(out) >= limit:
            return
        if i == len(cells):
            out.append(OmegaModel(dom, size, {s: tables[s] for s in dom.symbols}))
            return
        s, j = cells[i]
        for v in range(size):
            tables[s][j] = v
            if consistent():
                rec(i + 1)
        tables[s][j] = None

    if size == 0:
        # only nullary symbols need values, and there are none
        if dom.of_arity(0):
            return []
        return [OmegaModel(dom, 0, {s: () for s in dom.symbols})]
    rec(0)
    return out


def model_homomorphisms(a: OmegaModel, b: OmegaModel) -> list[tuple]:
    """Functions range(|A|) -> range(|B|) commuting with every operation."""
    out = []
    dom = a.domain
    for h in product(range(b.size), repeat=a.size):
        ok = True
        for s in dom.symbols:
            n = dom.arity[s]
            for args in product(range(a.size), repeat=n):
                if h[a.op(s, args)] != b.op(s, [h[x] for x in args]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(h)
    return out


# --- provability ---------------------------------------------------------------------------------------


def _match(pattern: Term, t: Term, sigma: dict) -> bool:
    if pattern.op is None:
        cur = sigma.get(pattern.var)
        if cur is None:
            sigma[pattern.var] = t
            return True
        return cur == t
    if pattern.op != t.op or len(pattern.args) != len(t.args):
        return False
    return all(_match(pa, ta, sigma) for pa, ta in zip(pattern.args, t.args))


class Partition:
    def __init__(self, terms):
        self.terms = list(terms)
        self.index = {t: i for i, t in enumerate(self.terms)}
        self.parent = list(range(len(self.terms)))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)

    def classes(self) -> list[list[Term]]:
        groups: dict = {}
        for i, t in enumerate(self.terms):
            groups.setdefault(self.find(i), []).append(t)
        return [groups[k] for k in sorted(groups)]

    def same(self, s, t) -> bool:
        return self.find(self.index[s]) == self.find(self.index[t])


def congruence_closure(p: Presentation, n: int, depth_bound: int) -> Partition:
    """The relation ~_n restricted to terms of depth <= depth_bound.

    Two terms are joined when one arises from the other by replacing an
    instance of one side of an axiom, at any position, by the matching
    instance of the other side. Variables occurring on one side only
    range over all n-ary terms that keep the result within the bound.
    """
    terms = generate_terms(p.domain, n, depth_bound)
    part = Partition(terms)
    index = part.index
    upto_depth = [[t for t in terms if t.depth <= d] for d in range(depth_bound + 1)]
    # one orientation per axiom suffices: the reverse step is found from the other term
    rules = []
    for k, s, t in p.equations:
        if len(s.variables() - t.variables()) > len(t.variables() - s.variables()):
            s, t = t, s
        free = sorted(t.variables() - s.variables())
        deep = {v: max(len(path) for path, x in t.positions() if x == var(v)) for v in free}
        rules.append((k, s, t, free, deep))
    for ti, term in enumerate(terms):
        for path, sub in term.positions():
            for k, lhs, rhs, free, deep in rules:
                sigma: dict = {}
                if not _match(lhs, sub, sigma):
                    continue
                pools = []
                for v in free:
                    budget = depth_bound - len(path) - deep[v]
                    pools.append(upto_depth[budget] if budget >= 0 else [])
                for choice in product(*pools):
                    full = dict(sigma)
                    full.update(zip(free, choice))
                    new = term.replace(path, rhs.subst([full.get(i) for i in range(1, k + 1)]))
                    j = index.get(new)
                    if j is not None:
                        part.union(ti, j)
    return part


class SoundnessReport:
    def __init__(self, presentation, n, depth_bound, carrier_bound):
        self.presentation = presentation
        self.n = n
        self.depth_bound = depth_bound
        self.carrier_bound = carrier_bound
        self.model_counts: dict = {}
        self.classes = 0
        self.provable_pairs = 0
        self.violations: list = []  # provable but semantically different
        self.unproved_semantic: list = []  # semantically equal, not provable at this depth

    def ok(self) -> bool:
        return not self.violations


def soundness_check(p: Presentation, n: int, depth_bound: int, carrier_bound: int,
                    max_witnesses: int = 20) -> SoundnessReport:
    rep = SoundnessReport(p, n, depth_bound, carrier_bound)
    part = congruence_closure(p, n, depth_bound)
    classes = part.classes()
    rep.classes = len(classes)
    rep.provable_pairs = sum(len(c) * (len(c) - 1) // 2 for c in classes)
    models = []
    for k in range(carrier_bound + 1):
        ms = enumerate_omega_models(p, k)
        rep.model_counts[k] = len(ms)
        models.extend(ms)
    signature: dict = {}
    for t in part.terms:
        signature[t] = []
    for a in models:
        memo: dict = {}
        for t in part.terms:
            signature[t].append(interpret_term(t, a, n, memo))
    for c in classes:
        rep_sig = signature[c[0]]
        for t in c[1:]:
            if signature[t] != rep_sig:
                rep.violations.append((c[0], t))
    by_sig: dict = {}
    for c in classes:
        by_sig.setdefault(tuple(signature[c[0]]), []).append(c[0])
    for reps in by_sig.values():
        for t in reps[1:]:
            if len(rep.unproved_semantic) < max_witnesses:
                rep.unproved_semantic.append((reps[0], t))
    return rep


# --- str_0 ---------------------------------------------------------------------------------------------


class Str0:
    """str_0(U): Ω_n = Nat(U^n, U) for n <= bound, with the tautological models on each Um."""

    def __init__(self, u: SetFunctor, bound: int):
        self.u = u
        self.bound = bound
        M = u.cat
        self.ops: dict = {}
        symbols = []
        for n in range(bound + 1):
            pw = SetFunctor(M, {x: tuple(product(u.obj(x), repeat=n)) for x in M.objects},
                            lambda h, e: tuple(u(h, v) for v in e), name=f"U^{n}")
            nats = enumerate_nat_transformations(pw, u)
            for i, t in enumerate(nats):
                nm = f"w{n}_{i}"
                symbols.append((nm, n))
                self.ops[nm] = (n, t)
        self.domain = OperatorDomain(symbols)

    def model_at(self, x) -> OmegaModel:
        elems = self.u.obj(x)
        pos = {e: i for i, e in enumerate(elems)}
        k = len(elems)
        tables = {}
        for nm, (n, t) in self.ops.items():
            tables[nm] = tuple(pos[t[x][tuple(elems[j] for j in idx)]] for idx in product(range(k), repeat=n))
        return OmegaModel(self.domain, k, tables)

    def check_unit(self) -> bool:
        """Each U(h) is a homomorphism of the tautological models."""
        M = self.u.cat
        models = {x: self.model_at(x) for x in M.objects}
        for h in M.morphisms():
            a, b = M.dom(h), M.cod(h)
            ea, eb = self.u.obj(a), self.u.obj(b)
            pb = {e: i for i, e in enumerate(eb)}
            tab = tuple(pb[self.u(h, e)] for e in ea)
            xa, xb = models[a], models[b]
            for s in self.domain.symbols:
                n = self.domain.arity[s]
                for args in product(range(len(ea)), repeat=n):
                    if tab[xa.op(s, args)] != xb.op(s, [tab[v] for v in args]):
                        return False
        return True

    def counts(self) -> dict:
        return {n: len(self.domain.of_arity(n)) for n in range(self.bound + 1)}


def str0(u: SetFunctor, bound: int) -> Str0:
    return Str0(u, bound)


# --- text format ---------------------------------------------------------------------------------------


def parse_presentation(text: str, name="") -> Presentation:
    """Lines 'op NAME ARITY' and 'eq [N:] LHS = RHS'; '#' starts a comment."""
    symbols = []
    raw_eqs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        kw, _, rest = line.partition(" ")
        if kw == "op":
            parts = rest.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise PresentationError(f"line {lineno}, column 1: expected 'op NAME ARITY'")
            symbols.append((parts[0], int(parts[1])))
        elif kw == "eq":
            n = None
            m = re.match(r"\s*([0-9]+)\s*:", rest)
            if m:
                n = int(m.group(1))
                rest = rest[m.end():]
            if "=" not in rest:
                raise PresentationError(f"line {lineno}, column {len(kw) + 2}: expected 'LHS = RHS'")
            lhs, rhs = rest.split("=", 1)
            raw_eqs.append((lineno, n, lhs, rhs))
        else:
            raise PresentationError(f"line {lineno}, column 1: unknown keyword {kw!r}")
    dom = OperatorDomain(symbols)
    eqs = []
    for lineno, n, lhs, rhs in raw_eqs:
        try:
            eqs.append(equation(lhs, rhs, n, dom))
        except PresentationError as e:
            raise PresentationError(f"line {lineno}: {e}") from None
    return Presentation(dom, eqs, name=name)


def format_presentation(p: Presentation) -> str:
    lines = [f"op {s} {p.domain.arity[s]}" for s in p.domain.symbols]
    lines += [f"eq {n}: {s} = {t}" for n, s, t in p.equations]
    return "\n".join(lines) + "\n"
