"""Command-line front end.

Each command builds a report of named checks plus informational lines.
Exit status: 0 when every check passes, 1 when one fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import eqpres as eq
from . import suite
from . import textio
from .fincat import (
    FinFunctor,
    SetFunctor,
    bo_ff_factorize,
    compose_functors,
    finset_category,
    is_bijective_on_objects,
    is_faithful,
    is_finset_category,
    is_full_and_faithful,
    validate_category,
    validate_functor,
    validate_nat_transformation,
)
from .textio import InputError, Workspace, aritation_of

MAX_BOUND = 8


class Report:
    """Checks (pass/fail with payload) and info lines, rendered deterministically."""

    def __init__(self, suite_name: str, params: dict):
        self.suite = suite_name
        self.params = params
        self.info: list = []
        self.checks: list = []
        self.artifact = None  # (text form, structured form)

    def add_info(self, key, value):
        self.info.append((key, value))

    def check(self, name, passed, payload=""):
        self.checks.append((name, bool(passed), payload))
        return bool(passed)

    @property
    def failed(self) -> bool:
        return any(not ok for _, ok, _ in self.checks)

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            doc = {
                "suite": self.suite,
                "truncation": self.params,
                "info": [[k, v] for k, v in self.info],
                "checks": [{"name": n, "status": "pass" if ok else "fail", "payload": p}
                           for n, ok, p in self.checks],
                "status": "fail" if self.failed else "pass",
            }
            return textio.dumps(doc)
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        lines = [f"{self.suite}" + (f" [{params}]" if params else "")]
        for k, v in self.info:
            lines.append(f"  {k}: {v}")
        for n, ok, p in self.checks:
            lines.append(f"[{'PASS' if ok else 'FAIL'}] {n}" + (f" -- {p}" if p else ""))
        n_fail = sum(1 for _, ok, _ in self.checks if not ok)
        lines.append(f"{len(self.checks) - n_fail} passed, {n_fail} failed")
        return "\n".join(lines) + "\n"


# --- helpers ------------------------------------------------------------------------------------------------


def _bound(args, default):
    b = default if args.bound is None else args.bound
    if not 0 <= b <= MAX_BOUND:
        raise InputError(f"--bound {b} is outside 0..{MAX_BOUND}")
    return b


def _need(args, attr, flag):
    v = getattr(args, attr, None)
    if not v:
        raise InputError(f"{flag} is required")
    return v


def _arit_for_functor(u, bound):
    from .proth import canonical_aritation
    if isinstance(u, SetFunctor):
        return canonical_aritation(finset_category(bound))
    return canonical_aritation(u.dst)


def _hom_counts(c, limit=40):
    items = [f"{a}->{b}:{len(c.hom(a, b))}" for a in c.objects for b in c.objects]
    text = " ".join(items[:limit])
    return text + (" ..." if len(items) > limit else "")


def _export_category(rep, c, name=None):
    rep.artifact = (textio.format_category(c, name), textio.category_to_dict(c))


def _theory_base(th):
    from .topth import base_of
    return getattr(th, "base", None) or base_of(th)


# --- commands ------------------------------------------------------------------------------------------------


def cmd_validate(args, ws, rep):
    targets = [args.category] if args.category else ws.names()
    if not targets:
        raise InputError("nothing to validate: give a file or --category")
    for name in targets:
        kind = ws.items[name][0] if name in ws.items else "CATEGORY"
        obj = ws.get(name, kind)
        if kind == "CATEGORY":
            errs = validate_category(obj)
        elif kind == "FUNCTOR":
            errs = validate_functor(obj) if isinstance(obj, FinFunctor) else []
        elif kind == "NAT":
            errs = validate_nat_transformation(obj)
        elif kind == "THEORY":
            errs = validate_category(obj.theory_cat) + validate_functor(obj.L)
            if not is_bijective_on_objects(obj.L):
                errs.append("L is not bijective on objects")
        elif kind == "TOPOLOGY":
            errs = obj.validate()
        elif kind == "MONOID":
            errs = obj.validate()
        else:
            continue
        rep.check(f"{kind.lower()} {name}", not errs, "; ".join(errs[:5]))


def cmd_factorize(args, ws, rep):
    f = ws.get(_need(args, "functor", "--functor"), "FUNCTOR")
    if isinstance(f, SetFunctor):
        raise InputError("factorize needs a functor between finite categories, not a set-valued functor")
    e, n = bo_ff_factorize(f)
    mid = e.dst
    rep.add_info("intermediate", f"{len(mid.objects)} objects, {mid.n_morphisms()} morphisms")
    rep.check("e is bijective on objects", is_bijective_on_objects(e))
    rep.check("n is full and faithful", is_full_and_faithful(n))
    rep.check("n e = f", compose_functors(n, e) == f)
    rep.check("intermediate category is valid", not validate_category(mid))
    _export_category(rep, mid)


def cmd_semantics(args, ws, rep):
    from .proth import algebra_law_violations, model_category
    th = ws.get(_need(args, "theory", "--theory"), "THEORY")
    mod = model_category(th, aritation_of(th))
    by_carrier: dict = {}
    for x in mod.models.values():
        by_carrier[x.carrier] = by_carrier.get(x.carrier, 0) + 1
    rep.add_info("models", len(mod.models))
    rep.add_info("models per carrier", " ".join(f"{k}:{v}" for k, v in sorted(by_carrier.items())))
    rep.add_info("model homs", mod.cat.n_morphisms())
    bad = [f"{n}: {algebra_law_violations(x)[0]}" for n, x in mod.models.items() if algebra_law_violations(x)]
    rep.check("every model satisfies alpha_b(Lf) = f", not bad, "; ".join(bad[:3]))
    rep.check("forgetful functor is faithful", is_faithful(mod.forget))
    _export_category(rep, mod.cat)


def cmd_structure(args, ws, rep):
    from .proth import structure
    u = ws.get(_need(args, "functor", "--functor"), "FUNCTOR")
    bound = _bound(args, 2)
    s = structure(u, _arit_for_functor(u, bound))
    T = s.theory_cat
    rep.add_info("thr(U) homs", _hom_counts(T))
    rep.check("thr(U) is a category", not validate_category(T))
    rep.check("str(U) is bijective on objects", is_bijective_on_objects(s.L))
    _export_category(rep, T, "thr")


def cmd_check_adjunction(args, ws, rep):
    th = ws.get(_need(args, "theory", "--theory"), "THEORY")
    u = ws.get(_need(args, "functor", "--functor"), "FUNCTOR")
    arit = aritation_of(th)
    if not isinstance(u, FinFunctor) or set(u.dst.objects) != set(arit.base.objects):
        raise InputError("the functor must land in the base of the theory")
    res = suite.adjunction_checks(arit, th, u)
    rep.add_info("lifts R over U", res["lifts"])
    rep.add_info("theory morphisms L -> str(U)", res["morphisms"])
    rep.check("Psi and Theta are mutually inverse", not res["roundtrip"], "; ".join(res["roundtrip"][:3]))
    rep.check("naturality in L", not res["natural_L"], "; ".join(res["natural_L"][:3]))
    rep.check("naturality in U", not res["natural_U"], "; ".join(res["natural_U"][:3]))


def cmd_kleisli(args, ws, rep):
    from .monads import compare_kleisli_models, kleisli, validate_set_monad
    t = ws.get(_need(args, "monad", "--monad"), "MONAD")
    bound = _bound(args, 2)
    rep.check("monad laws", not validate_set_monad(t, bound))
    kt = kleisli(t, bound)
    T = kt.theory_cat
    rep.add_info("kle homs", _hom_counts(T))
    rep.check("Kleisli category is valid", not validate_category(T))
    rep.check("L is bijective on objects", is_bijective_on_objects(kt.L))
    comp = compare_kleisli_models(t, bound, kt)
    ch = comp.checks()
    rep.check("mod(kle T) isomorphic to EM(T)", all(ch.values()), ", ".join(k for k, v in ch.items() if not v))
    _export_category(rep, T, "kle")


def cmd_recognize_monad(args, ws, rep):
    from .monads import kleisli, recognize_monadic
    th = ws.get(_need(args, "theory", "--theory"), "THEORY")
    base = _theory_base(th)
    mode = "finset" if is_finset_category(base) else "explicit"
    res = recognize_monadic(th, base, mode=mode)
    if isinstance(res, str):
        rep.add_info("verdict", res)
        return
    rep.add_info("verdict", "monadic")
    if mode == "finset":
        n = max(int(o) for o in base.objects)
        rep.add_info("T sizes", " ".join(f"{b}:{len(res.T(b))}" for b in range(n + 1)))
        kt = kleisli(res, n)
        same = all(len(kt.theory_cat.hom(x, y)) == len(th.theory_cat.hom(x, y))
                   for x in th.theory_cat.objects for y in th.theory_cat.objects)
    else:
        rep.add_info("T on objects", " ".join(f"{b}:{res.T(b)}" for b in base.objects))
        kt = kleisli(res)
        same = all(len(kt.theory_cat.hom(x, y)) == len(th.theory_cat.hom(x, y))
                   for x in th.theory_cat.objects for y in th.theory_cat.objects)
    rep.check("kle of the recognised monad matches the theory hom-set by hom-set", same)


def cmd_codensity(args, ws, rep):
    from .monads import codensity_monad, codensity_structure_iso, validate_fin_monad, validate_set_monad
    from .proth import structure
    u = ws.get(_need(args, "functor", "--functor"), "FUNCTOR")
    bound = _bound(args, 2)
    if isinstance(u, SetFunctor):
        t = codensity_monad(u, bound)
        rep.add_info("T sizes", " ".join(f"{n}:{len(t.T(n))}" for n in range(bound + 1)))
        rep.check("monad laws", not validate_set_monad(t, bound))
        res = codensity_structure_iso(u, t, structure(u, _arit_for_functor(u, bound)), bound)
    else:
        t = codensity_monad(u)
        rep.add_info("T on objects", " ".join(f"{b}:{t.T(b)}" for b in u.dst.objects))
        rep.check("monad laws", not validate_fin_monad(t))
        res = codensity_structure_iso(u, t, structure(u, _arit_for_functor(u, bound)))
    for k, v in res.items():
        rep.check(f"str(U) = kle(T): {k}", v)


def _presentation(args, ws):
    path = _need(args, "presentation", "a presentation file")
    return ws.get(path, "PRESENTATION")


def cmd_models(args, ws, rep):
    p = _presentation(args, ws)
    sizes = [args.size] if args.size is not None else range(_bound(args, 2) + 1)
    for k in sizes:
        ms = eq.enumerate_omega_models(p, k)
        rep.add_info(f"models on {k} elements", len(ms))
        for i, m in enumerate(ms[:args.show]):
            rep.add_info(f"  {k}#{i}", " ".join(f"{s}={''.join(map(str, m.tables[s]))}" for s in p.domain.symbols))
    bad = [f"{k}" for k in sizes for m in eq.enumerate_omega_models(p, k)
           if not all(eq.satisfies(m, e) for e in p.equations)]
    rep.check("every model satisfies every equation", not bad)


def cmd_closure(args, ws, rep):
    p = _presentation(args, ws)
    part = eq.congruence_closure(p, args.arity, args.depth)
    classes = part.classes()
    rep.add_info("terms", len(part.terms))
    rep.add_info("classes", len(classes))
    for c in [c for c in classes if len(c) > 1][:args.show]:
        rep.add_info("class", " = ".join(str(t) for t in c[:8]) + (" ..." if len(c) > 8 else ""))
    coarser = eq.congruence_closure(p, args.arity, max(args.depth - 1, 0))
    mono = all(part.same(s, t) for c in coarser.classes() for s in c for t in c)
    rep.check("monotone in the depth bound", mono)


def cmd_soundness(args, ws, rep):
    p = _presentation(args, ws)
    bound = _bound(args, 2)
    r = eq.soundness_check(p, args.arity, args.depth, bound)
    rep.add_info("models per size", " ".join(f"{k}:{v}" for k, v in r.model_counts.items()))
    rep.add_info("classes", r.classes)
    rep.add_info("provable pairs", r.provable_pairs)
    for s, t in r.unproved_semantic[:args.show]:
        rep.add_info("semantically equal, not provable at this depth", f"{s} = {t}")
    rep.check("no provable pair separated by a model", r.ok(),
              "; ".join(f"{s} = {t}" for s, t in r.violations[:3]))


def cmd_monoid_theory(args, ws, rep):
    from .groupsem import e_of_monoid, find_isomorphism, models_equal_msets, recognize_monoid_theory
    from .monads import action_monad, kleisli
    m = ws.get(_need(args, "monoid", "--monoid"), "MONOID")
    bound = _bound(args, 2)
    th = e_of_monoid(m, bound)
    rep.add_info("E(M) homs", _hom_counts(th.theory_cat))
    kt = kleisli(action_monad(m), bound)
    rep.check("E(M) equals kle(M x -) as tables", th.theory_cat == kt.theory_cat and th.L == kt.L)
    r = recognize_monoid_theory(th, th.base)
    rep.check("recognition recovers M", r != "not monoidal" and find_isomorphism(r[0], m) is not None)
    iso = models_equal_msets(m, bound)
    ch = iso.checks()
    rep.check("mod(E(M)) isomorphic to M-sets", all(ch.values()), ", ".join(k for k, v in ch.items() if not v))
    _export_category(rep, th.theory_cat, f"E_{m.name}")


def _family(args, g):
    if not args.family:
        return None
    fam = []
    names = {str(e): e for e in g.elements}
    for part in args.family.split(";"):
        try:
            fam.append(frozenset(names[x.strip()] for x in part.split(",") if x.strip()))
        except KeyError as e:
            raise InputError(f"unknown element {e.args[0]!r} in --family") from None
    return fam


def cmd_profinite(args, ws, rep):
    from .groupsem import MonoidError, profinite_completion
    g = ws.get(_need(args, "monoid", "--monoid"), "MONOID")
    try:
        comp = profinite_completion(g, _family(args, g))
    except MonoidError as e:
        raise InputError(str(e)) from None
    rep.add_info("family", " ".join(f"|N|={len(n)}" for n in comp.family))
    rep.add_info("|G^|", len(comp.elements))
    rep.add_info("eta_G injective", len(set(comp.eta.values())) == len(g.elements))
    rep.add_info("eta_G surjective", len(set(comp.eta.values())) == len(comp.elements))
    rep.check("G^ is a group", not comp.group.validate() and comp.group.is_group)


def cmd_phi_check(args, ws, rep):
    from .groupsem import MonoidError, phi_map
    g = ws.get(_need(args, "monoid", "--monoid"), "MONOID")
    bound = _bound(args, max(len(g.elements), 2))
    try:
        r, comp, nat = phi_map(g, bound, _family(args, g))
    except MonoidError as e:
        raise InputError(str(e)) from None
    if nat.warning:
        rep.add_info("warning", nat.warning)
    rep.add_info("|G^|", len(comp.elements))
    rep.add_info("|Nat(U,U)|", len(nat))
    rep.add_info("family extended", r.family_extended)
    rep.check("each Phi(xi) is natural", r.natural)
    rep.check("Phi is a monoid homomorphism", r.homomorphism)
    rep.check("Phi is bijective", r.bijective)
    rep.check("eta_G is an isomorphism", r.eta_iso)
    rep.check("Phi eta_G is the Cayley comparison", r.cayley)


def _top_theory(args, ws):
    from .topth import disc
    if args.topology:
        return ws.get(args.topology, "TOPOLOGY")
    th = ws.get(_need(args, "theory", "--theory or --topology"), "THEORY")
    return disc(th, base=_theory_base(th))


def cmd_complete(args, ws, rep):
    from .topth import check_complete
    l = _top_theory(args, ws)
    errs = l.validate()
    if not rep.check("composition is continuous", not errs, "; ".join(errs[:3])):
        return
    r = check_complete(l)
    rep.add_info("verdict", "complete" if r.complete else "not complete")
    rep.add_info("dense", r.dense)
    if r.failing_homs():
        rep.add_info("hom-sets where E_L is not bijective (|L|, |image|, |thr|)",
                     " ".join(f"{k}:{r.homs[k]}" for k in r.failing_homs()))
    if not r.built:
        rep.add_info("note", "str_t(sem_t L) too large to build; model-level checks skipped")
        return
    rep.check("sem_t(E_L) is split epi", r.sem_split_epi)
    rep.check("dense E_L gives iso sem_t(E_L)", r.dense_iso_holds)


def cmd_completion(args, ws, rep):
    from .topth import check_complete, completion
    l = _top_theory(args, ws)
    cp, e = completion(l)
    rep.add_info("cplt homs", _hom_counts(cp.theory_cat))
    rep.check("cplt(L) is complete", check_complete(cp).complete)
    _export_category(rep, cp.theory_cat, "cplt")


def cmd_enough_subobjects(args, ws, rep):
    from .topth import check_enough_subobjects
    c = ws.get(_need(args, "category", "--category"), "CATEGORY")
    r = check_enough_subobjects(c)
    rep.add_info("verdict", "enough subobjects" if r.ok else "not enough subobjects")
    rep.add_info("sieves checked", r.sieves_checked)
    rep.add_info("product preserving", r.product_preserving)
    if not r.ok:
        rep.add_info("witness (object, sieve)", r.witness)
    rep.check("a false verdict carries a witness", r.ok or r.witness is not None)


COMMANDS = {
    "validate": cmd_validate,
    "factorize": cmd_factorize,
    "semantics": cmd_semantics,
    "structure": cmd_structure,
    "check-adjunction": cmd_check_adjunction,
    "kleisli": cmd_kleisli,
    "recognize-monad": cmd_recognize_monad,
    "codensity": cmd_codensity,
    "models": cmd_models,
    "closure": cmd_closure,
    "soundness": cmd_soundness,
    "monoid-theory": cmd_monoid_theory,
    "profinite": cmd_profinite,
    "phi-check": cmd_phi_check,
    "complete?": cmd_complete,
    "completion": cmd_completion,
    "enough-subobjects": cmd_enough_subobjects,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strsem", description="Finite structure-semantics engine.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--bound", type=int, default=None, help="carrier / object size bound")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--export", help="write the constructed category (text or structured) here")

    for name in COMMANDS:
        p = sub.add_parser(name)
        common(p)
        p.add_argument("files", nargs="*", help="workspace files to load")
        for flag in ("category", "functor", "theory", "monad", "monoid", "topology"):
            p.add_argument(f"--{flag}")
        if name in ("models", "closure", "soundness"):
            p.add_argument("--presentation")
            p.add_argument("--arity", type=int, default=2)
            p.add_argument("--depth", type=int, default=2)
            p.add_argument("--size", type=int, default=None)
            p.add_argument("--show", type=int, default=5)
        if name in ("profinite", "phi-check"):
            p.add_argument("--family", help="normal subgroups as 'a,b;a,b,c,d'")
    v = sub.add_parser("verify-thesis")
    common(v)
    v.add_argument("--monoid-bound", type=int, default=4)
    v.add_argument("--depth", type=int, default=3)
    v.add_argument("--only", help="comma-separated criterion numbers")
    return ap


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_verify(args) -> int:
    bound = _bound(args, 3)
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise InputError("--only takes criterion numbers such as 1,3,12") from None
        if not only <= set(range(1, 13)):
            raise InputError("criteria are numbered 1 to 12")
    s = suite.Settings(bound=bound, monoid_bound=args.monoid_bound, depth=args.depth, seed=args.seed)
    results = suite.run(s, only=only)
    if args.format == "structured":
        text = suite.render_structured(results, s)
    else:
        text = suite.render_text(results, s)
    _emit(text, args.out)
    return 0 if all(c.passed for c in results) else 1


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify-thesis":
        try:
            return run_verify(args)
        except InputError as e:
            sys.stderr.write(f"strsem: error: {e}\n")
            return 2
    try:
        if args.bound is not None:
            _bound(args, args.bound)
        ws = Workspace()
        for path in args.files:
            if path.endswith(".pres") and getattr(args, "presentation", None) is None:
                args.presentation = path
            if path not in ws.sources:
                textio.load_file(path, ws)
        params = {"bound": args.bound} if args.bound is not None else {}
        rep = Report(args.command, params)
        COMMANDS[args.command](args, ws, rep)
    except ValueError as e:
        # InputError and the library's precondition errors (missing limits, bad tables, ...)
        sys.stderr.write(f"strsem: error: {e}\n")
        return 2
    _emit(rep.render(args.format), args.out)
    if args.export and rep.artifact is not None:
        text, doc = rep.artifact
        _emit(textio.dumps(doc) if args.format == "structured" else text, args.export)
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
