"""Command-line interface.

Poset arguments are either a preset name (``one``, ``sigma``, ``chain3``,
``vee``, ``antichain2``, ...) or the path of a JSON poset file.  Lattice
arguments are a JSON lattice file or a preset name, meaning the upset
algebra of that poset.  ``-`` reads the JSON document from stdin.

Exit codes: 0 success, 1 a check or verification failed, 2 usage or input
error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import catalog, jsonio
from . import quantifiers as Q
from .errors import KtoposError
from .poset import FinPoset, Upset, UpsetAlgebra, all_upset_masks, is_open, is_rooted, tensor

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument helpers ---------------------------------------------------------


def load_poset(arg: str) -> FinPoset:
    if arg in catalog.PRESETS:
        return catalog.preset(arg)
    return jsonio.poset_from_json(jsonio.load(arg))


def load_lattice(arg: str):
    from .duality import to_lattice

    if arg in catalog.PRESETS:
        return to_lattice(UpsetAlgebra(catalog.preset(arg)))
    return jsonio.lattice_from_json(jsonio.load(arg))


def load_members(P: FinPoset, text: str) -> int:
    """Upset given as a JSON list of labels."""
    try:
        members = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"upset must be a JSON list of labels: {e}") from None
    if not isinstance(members, list):
        raise UsageError("upset must be a JSON list of labels")
    mask = P.mask_of(jsonio.label_from_json(m) for m in members)
    if not P.is_upset_mask(mask):
        raise UsageError(f"{text} is not an upset")
    return mask


def load_presentation(args):
    from .nerve import Presentation

    if args.presentation:
        return jsonio.presentation_from_json(jsonio.load(args.presentation))
    gens = [g for g in args.gens.split(",") if g]
    return Presentation(tuple(gens), tuple(args.rel or ()))


def load_cover(args):
    from .kp import CoverFamily

    if args.rooted:
        return CoverFamily.rooted(load_poset(args.rooted))
    if not args.cover:
        raise UsageError("give --cover FILE or --rooted POSET")
    d = jsonio.load(args.cover)
    target = jsonio.poset_from_json(d["target"])
    return CoverFamily(target, tuple(jsonio.map_from_json(m) for m in d["maps"]))


def load_pair(path: str):
    d = jsonio.load(path)
    return jsonio.map_from_json(d["f"]), jsonio.map_from_json(d["g"])


# -- output -------------------------------------------------------------------


class Out:
    def __init__(self, args):
        self.json = args.json

    def emit(self, payload, text: str | None = None):
        if self.json or text is None:
            print(jsonio.dumps(payload))
        else:
            print(text)


def _labels(xs) -> str:
    return "{" + ", ".join(map(str, xs)) + "}"


def _poset_text(P: FinPoset) -> str:
    covers = ", ".join(f"{a}<{b}" for a, b in P.covers()) or "none"
    return f"elements: {_labels(P.elements)}\ncovers: {covers}"


# -- poset ----------------------------------------------------------------------


def cmd_poset_show(args, out):
    P = load_poset(args.poset)
    payload = {"poset": P, "size": len(P), "rooted": is_rooted(P),
               "upsets": len(all_upset_masks(P))}
    out.emit(payload, _poset_text(P) + f"\nrooted: {is_rooted(P)}\nupsets: {payload['upsets']}")


def cmd_poset_upsets(args, out):
    P = load_poset(args.poset)
    ups = [Upset(P, m) for m in all_upset_masks(P)]
    out.emit(ups, "\n".join(_labels(U.sorted_members()) for U in ups))


def cmd_poset_is_open(args, out):
    f = jsonio.map_from_json(jsonio.load(args.map))
    chk = is_open(f)
    out.emit({"open": chk.ok, "witness": chk.witness},
             "open" if chk.ok else f"not open; witness {chk.witness!r}")
    return EXIT_OK if chk.ok else EXIT_FAIL


def cmd_poset_tensor(args, out):
    PQ, _, _ = tensor(load_poset(args.left), load_poset(args.right))
    out.emit(PQ, _poset_text(PQ))


# -- kp -------------------------------------------------------------------------


def cmd_kp_coproduct(args, out):
    from .kp import coproduct

    S, inj = coproduct([load_poset(p) for p in args.posets])
    out.emit({"coproduct": S, "injections": inj}, _poset_text(S))


def cmd_kp_coequalize(args, out):
    from .kp import coequalizer

    f, g = load_pair(args.pair)
    q = coequalizer(f, g, verify_bound=args.verify_bound)
    classes = [list(q.class_labels(k)) for k in range(len(q.classes))]
    out.emit({"quotient": q.poset, "classes": classes, "projection": q.projection},
             _poset_text(q.poset) + "\nclasses: " + "; ".join(map(_labels, classes)))


def cmd_kp_image(args, out):
    from .kp import image_factorize

    s, e = image_factorize(jsonio.map_from_json(jsonio.load(args.map)))
    out.emit({"image": s.codomain, "surjection": s, "embedding": e}, _poset_text(s.codomain))


def cmd_kp_pullback(args, out):
    from .poset import monoidal_pullback

    f, g = load_pair(args.pair)
    C, h, u = monoidal_pullback(f, g)
    out.emit({"pullback": C, "h": h, "u": u}, _poset_text(C))


def cmd_kp_cover_check(args, out):
    from .kp import is_cover

    ok = is_cover(load_cover(args))
    out.emit({"cover": ok}, "jointly surjective" if ok else "not jointly surjective")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kp_effepi_check(args, out):
    from .kp import check_effective_epi

    v = check_effective_epi(load_cover(args), args.bound)
    out.emit(v, f"effective: {v.effective} (cover: {v.is_cover}; targets {v.targets_checked}, "
                f"cocones {v.cocones_checked}, bound {v.bound})")
    return EXIT_OK if v.agrees else EXIT_FAIL


def cmd_kp_notexact(args, out):
    from .kp import notexact_witness

    w = notexact_witness(args.bound)
    payload = {"ok": w.ok, "quotient": w.quotient.poset, "three_chain": w.is_three_chain,
               "projection_open": w.projection_open, "missing": w.missing,
               "swap_equalized": w.swap_equalized, "swap_factors": w.swap_factors,
               "universal": w.universal_ok}
    out.emit(payload, _poset_text(w.quotient.poset) + f"\nthree-chain: {w.is_three_chain}\n"
             f"missed by the pair: {_labels(sorted(w.missing))}\nok: {w.ok}")
    return EXIT_OK if w.ok else EXIT_FAIL


# -- dual -----------------------------------------------------------------------


def cmd_dual_spec(args, out):
    from .duality import spec

    S = spec(load_lattice(args.lattice))
    out.emit(S, _poset_text(S))


def cmd_dual_upsets(args, out):
    from .duality import to_lattice

    L = to_lattice(UpsetAlgebra(load_poset(args.poset)))
    out.emit(L, _poset_text(L.order))


def cmd_dual_roundtrip(args, out):
    from .duality import roundtrip_poset

    r = roundtrip_poset(load_poset(args.poset))
    out.emit({"ok": r.ok, "mapping": r.mapping, "detail": r.detail},
             "P ≅ spec(U P)" if r.ok else f"round trip failed: {r.detail}")
    return EXIT_OK if r.ok else EXIT_FAIL


def cmd_dual_homs(args, out):
    from .duality import enumerate_homs

    homs = enumerate_homs(load_lattice(args.source), load_lattice(args.target), args.heyting)
    out.emit({"count": len(homs), "homs": [h.assignment for h in homs]}, f"{len(homs)} homs")


# -- logic ----------------------------------------------------------------------


def _formula(text):
    from .logic import parse

    return parse(text)


def _decision_payload(f, d):
    from .logic import to_text

    payload = {"formula": to_text(f), "provable": d.provable, "method": d.method}
    if d.countermodel is not None:
        payload["countermodel"] = d.countermodel.model
        payload["point"] = jsonio.label_to_json(d.countermodel.point)
    return payload


def cmd_logic_decide(args, out):
    from .logic import decide

    f = _formula(args.formula)
    d = decide(f)
    text = "provable" if d.provable else f"not provable; refuted at {d.countermodel.point!r}"
    out.emit(_decision_payload(f, d), text)


def cmd_logic_countermodel(args, out):
    from .logic import decide

    f = _formula(args.formula)
    d = decide(f)
    if d.provable:
        out.emit({"provable": True, "countermodel": None}, "provable; no countermodel exists")
        return EXIT_FAIL
    p = _decision_payload(f, d)
    out.emit(p, jsonio.dumps(p))


def cmd_logic_equiv(args, out):
    from .logic import equiv

    ok = equiv(_formula(args.left), _formula(args.right))
    out.emit({"equivalent": ok}, "equivalent" if ok else "not equivalent")


# -- nerve ----------------------------------------------------------------------


def _model_text(M):
    return ", ".join(f"{k}={_labels(M.frame.labels(v))}" for k, v in sorted(M.valuation.items()))


def cmd_nerve_models(args, out):
    from .nerve import models

    stage = models(load_presentation(args), load_poset(args.poset))
    out.emit({"count": len(stage), "models": list(stage.models)},
             f"{len(stage)} models\n" + "\n".join(_model_text(M) for M in stage.models))


def cmd_nerve_restrict(args, out):
    from .nerve import models, restrict

    A = load_presentation(args)
    f = jsonio.map_from_json(jsonio.load(args.map))
    apply = restrict(A, f)
    pairs = [(M, apply(M)) for M in models(A, f.codomain).models]
    out.emit([{"model": a, "restriction": b} for a, b in pairs],
             "\n".join(f"{_model_text(a)}  ↦  {_model_text(b)}" for a, b in pairs))


def cmd_nerve_sheaf_check(args, out):
    from .nerve import sheaf_check

    F = load_cover(args)
    v = sheaf_check(load_presentation(args), F.target, F)
    out.emit(v, f"sheaf condition {'holds' if v.ok else 'fails'}: {v.models} models, "
                f"{v.families} compatible families")
    return EXIT_OK if v.ok else EXIT_FAIL


def cmd_nerve_poset_nerve(args, out):
    from .nerve import poset_nerve

    maps = poset_nerve(load_poset(args.lattice_poset), load_poset(args.poset))
    out.emit({"count": len(maps), "maps": [f.assignment for f in maps]}, f"{len(maps)} monotone maps")


def cmd_nerve_cohesion(args, out):
    from .nerve import cohesion_stage

    if args.kind in ("gamma", "Γ"):
        res = cohesion_stage(args.kind, load_presentation(args))
    else:
        values = [jsonio.label_from_json(v) for v in json.loads(args.set)]
        P = load_poset(args.poset) if args.poset else None
        res = cohesion_stage(args.kind, values, P)
    out.emit({"count": len(res), "elements": res}, f"{len(res)} elements")


def cmd_nerve_pi_connect(args, out):
    from .nerve import check_zigzag, pi_connect

    P, Qp = load_poset(args.left), load_poset(args.right)
    z = pi_connect(P, load_members(P, args.a), Qp, load_members(Qp, args.b), args.stage_bound)
    steps = [{"map": s.map, "upper": Upset(*s.upper), "lower": Upset(*s.lower),
              "forward": s.forward} for s in z.steps]
    lines = [f"{len(z)} steps (rooted frames up to {z.stage_bound} points)"]
    for s in z.steps:
        (T, U), (R, V) = s.upper, s.lower
        lines.append(f"  {_labels(T.labels(U))} in |{len(T)}|  ↔  {_labels(R.labels(V))} in |{len(R)}|")
    out.emit({"steps": steps, "valid": check_zigzag(z)}, "\n".join(lines))


# -- ladder ---------------------------------------------------------------------


def cmd_ladder_show(args, out):
    from .ladder import ladder_trunc

    T = ladder_trunc(args.depth)
    out.emit(T, _poset_text(T))


def cmd_ladder_eval(args, out):
    from .ladder import eval_one_var

    v = eval_one_var(_formula(args.formula))
    out.emit(v, "Top" if v.top else _labels(f"{c}{k}" for c, k in v.sorted_nodes()))


def cmd_ladder_utop_search(args, out):
    from .ladder import utop_search
    from .logic import to_text

    res = utop_search(args.depth)
    passing = [{"value": v, "formula": to_text(f)} for v, f in res.passing]
    out.emit({"classes_tested": res.classes_tested, "passing": passing,
              "failures": {str(k): v for k, v in sorted(res.failures.items())}},
             f"{res.classes_tested} classes tested; passing: "
             + ", ".join(p["formula"] for p in passing))


# -- quant ----------------------------------------------------------------------


def _pu(path):
    return jsonio.product_upset_from_json(jsonio.load(path))


def cmd_quant_unary(args, out):
    S = _pu(args.upset)
    U = (Q.exists_pi if args.quant_cmd == "exists" else Q.forall_pi)(S)
    out.emit(U, _labels(U.sorted_members()))


def cmd_quant_binary(args, out):
    res = Q.prod_ops(_pu(args.left), _pu(args.right))[args.op]
    out.emit(jsonio.product_upset_to_json(res), None)


def _verdict_out(out, v, label):
    payload = {"check": v.check, "ok": v.ok, "cases": v.cases, "depth": v.depth,
               "counterexample": v.counterexample, **v.details}
    out.emit(payload, f"{label}: {'holds' if v.ok else 'FAILS'} on {v.cases} cases"
             + ("" if v.counterexample is None else "\ncounterexample: "
                + json.dumps(jsonio.to_json(v.counterexample), sort_keys=True, ensure_ascii=False)))


def cmd_quant_frobenius(args, out):
    v = Q.frobenius_check(load_poset(args.poset), args.depth)
    _verdict_out(out, v, "dual Frobenius")
    return EXIT_OK if v.ok else EXIT_FAIL


def cmd_quant_joins(args, out):
    if args.control:
        v = Q.control_fiber_check(P=load_poset(args.poset))
        payload = {"check": v.check, "ok": v.ok, "cases": v.cases, "counterexample": v.counterexample}
        found = "found" if v.ok else "not found"
        out.emit(payload, f"join failure along the 2-antichain fiber {found} after {v.cases} cases"
                 + ("" if not v.ok else "\ncounterexample: " + json.dumps(
                     jsonio.to_json(v.counterexample), sort_keys=True, ensure_ascii=False)))
    else:
        v = Q.join_preservation_check(load_poset(args.poset), args.depth)
        _verdict_out(out, v, "join preservation")
    return EXIT_OK if v.ok else EXIT_FAIL


def cmd_quant_local(args, out):
    v = Q.locality_check(load_poset(args.poset), args.depth, allow_unrooted=args.allow_unrooted)
    _verdict_out(out, v, "locality")
    return EXIT_OK if v.ok else EXIT_FAIL


def cmd_quant_glue(args, out):
    if args.shadow:
        g = Q.locality_shadow()
    elif args.hom:
        g = Q.glue(jsonio.hom_from_json(jsonio.load(args.hom)))
    else:
        raise UsageError("give --hom FILE or --shadow")
    ok = g.axioms_ok and g.implication_ok and g.r.is_heyting_hom()
    payload = {"lattice": g.lattice, "size": len(g.lattice), "heyting": g.axioms_ok,
               "implication_formula": g.implication_ok, "r_heyting": g.r.is_heyting_hom(),
               "local": g.is_local}
    out.emit(payload, f"{len(g.lattice)} pairs; Heyting: {g.axioms_ok}; twisted implication: "
                      f"{g.implication_ok}; r Heyting hom: {g.r.is_heyting_hom()}; local: {g.is_local}")
    return EXIT_OK if ok else EXIT_FAIL


# -- verify ---------------------------------------------------------------------


def cmd_verify(args, out):
    from . import verify

    names = [n for n in args.suites if n != "all"] or list(verify.SUITES)
    unknown = [n for n in names if n not in verify.SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; known: {', '.join(verify.SUITES)}")
    grid = getattr(args, "grid", "default")
    if grid not in verify.GRIDS:
        raise UsageError(f"unknown grid {grid!r}; known: {', '.join(verify.GRIDS)}")
    reports = verify.run_all(grid, names)
    ok = all(r.ok for r in reports)
    payload = {"grid": grid, "seed": getattr(args, "seed", 0), "ok": ok,
               "suites": [r.to_json(args.timing) for r in reports]}
    lines = []
    for r in reports:
        t = f" {r.wall_time:.2f}s" if args.timing else ""
        lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.suite}: {r.cases} cases{t}")
        for f in r.failures:
            lines.append("    " + json.dumps(f, sort_keys=True, ensure_ascii=False))
    out.emit(payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ---------------------------------------------------------------------


def _global_flags() -> argparse.ArgumentParser:
    # defaults are SUPPRESS so a flag given before the subcommand is not reset after it
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="machine-readable JSON output")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                   help="seed for sampled operations (default 0)")
    g.add_argument("--grid", default=argparse.SUPPRESS,
                   help="verification grid: default or quick")
    return g


def build_parser() -> argparse.ArgumentParser:
    g = _global_flags()
    p = argparse.ArgumentParser(
        prog="ktopos", parents=[g],
        description="Finite Kripke frames, Heyting duality, the Rieger-Nishimura ladder "
                    "and quantifier checks.",
        epilog="Grids: 'default' checks posets up to 4-5 points, fiber depth 2 and formulas "
               "up to size 8; 'quick' is a reduced smoke slice.")
    sub = p.add_subparsers(dest="command", required=True)

    def group(name, help_):
        sp = sub.add_parser(name, help=help_, parents=[g])
        return sp.add_subparsers(dest=f"{name}_cmd", required=True)

    def cmd(grp, name, func, help_):
        c = grp.add_parser(name, help=help_, parents=[g])
        c.set_defaults(func=func)
        return c

    def presentation_args(c):
        c.add_argument("--presentation", help="presentation JSON file")
        c.add_argument("--gens", default="x", help="comma-separated generators (default x)")
        c.add_argument("--rel", action="append", help="relation formula; repeatable")

    def cover_args(c):
        c.add_argument("--cover", help="cover JSON {\"target\": poset, \"maps\": [map, ...]}")
        c.add_argument("--rooted", metavar="POSET", help="use the up-cone cover of POSET")

    ps = group("poset", "finite posets")
    cmd(ps, "show", cmd_poset_show, "summary of a poset").add_argument("poset")
    cmd(ps, "upsets", cmd_poset_upsets, "list all upsets").add_argument("poset")
    cmd(ps, "is-open", cmd_poset_is_open, "test a map for openness").add_argument("map")
    c = cmd(ps, "tensor", cmd_poset_tensor, "componentwise product")
    c.add_argument("left")
    c.add_argument("right")

    kp = group("kp", "the category of finite posets and open maps")
    cmd(kp, "coproduct", cmd_kp_coproduct, "disjoint union").add_argument("posets", nargs="+")
    c = cmd(kp, "coequalize", cmd_kp_coequalize, "coequalizer of a parallel pair")
    c.add_argument("--pair", required=True, help="JSON {\"f\": map, \"g\": map}")
    c.add_argument("--verify-bound", type=int, default=0)
    cmd(kp, "image", cmd_kp_image, "image factorization").add_argument("--map", required=True)
    cmd(kp, "pullback", cmd_kp_pullback, "monoidal pullback").add_argument("--pair", required=True)
    cover_args(cmd(kp, "cover-check", cmd_kp_cover_check, "joint surjectivity"))
    c = cmd(kp, "effepi-check", cmd_kp_effepi_check, "bounded effective-epi check")
    cover_args(c)
    c.add_argument("--bound", type=int, default=4)
    cmd(kp, "notexact", cmd_kp_notexact, "the non-exact coequalizer example").add_argument(
        "--bound", type=int, default=4)

    du = group("dual", "finite duality")
    cmd(du, "spec", cmd_dual_spec, "poset of homs into 2").add_argument("lattice")
    cmd(du, "upsets", cmd_dual_upsets, "upset lattice of a poset").add_argument("poset")
    cmd(du, "roundtrip", cmd_dual_roundtrip, "check P ≅ spec(U P)").add_argument("poset")
    c = cmd(du, "homs", cmd_dual_homs, "enumerate lattice homs")
    c.add_argument("source")
    c.add_argument("target")
    c.add_argument("--heyting", action="store_true", help="only Heyting homs")

    lg = group("logic", "intuitionistic propositional logic")
    cmd(lg, "decide", cmd_logic_decide, "provable or a countermodel").add_argument("formula")
    cmd(lg, "countermodel", cmd_logic_countermodel, "a refuting Kripke model").add_argument("formula")
    c = cmd(lg, "equiv", cmd_logic_equiv, "provable equivalence")
    c.add_argument("left")
    c.add_argument("right")

    nv = group("nerve", "models of presented algebras")
    c = cmd(nv, "models", cmd_nerve_models, "Kripke models on a frame")
    presentation_args(c)
    c.add_argument("poset")
    c = cmd(nv, "restrict", cmd_nerve_restrict, "restriction along an open map")
    presentation_args(c)
    c.add_argument("--map", required=True)
    c = cmd(nv, "sheaf-check", cmd_nerve_sheaf_check, "gluing along a cover")
    presentation_args(c)
    cover_args(c)
    c = cmd(nv, "poset-nerve", cmd_nerve_poset_nerve, "monotone maps P -> L")
    c.add_argument("lattice_poset", metavar="L")
    c.add_argument("poset")
    c = cmd(nv, "cohesion", cmd_nerve_cohesion, "Γ, Δ or ∇ at a stage")
    c.add_argument("kind", choices=["gamma", "delta", "nabla", "Γ", "Δ", "∇"])
    presentation_args(c)
    c.add_argument("--set", default="[]", help="JSON list of values for Δ and ∇")
    c.add_argument("--poset", help="stage for ∇")
    c = cmd(nv, "pi-connect", cmd_nerve_pi_connect, "zigzag between truth values")
    c.add_argument("left")
    c.add_argument("a", help="upset of LEFT as a JSON list")
    c.add_argument("right")
    c.add_argument("b", help="upset of RIGHT as a JSON list")
    c.add_argument("--stage-bound", type=int, default=4)

    ld = group("ladder", "the Rieger-Nishimura ladder")
    cmd(ld, "show", cmd_ladder_show, "truncated ladder").add_argument("--depth", type=int, default=4)
    cmd(ld, "eval", cmd_ladder_eval, "value of a formula in x").add_argument("formula")
    cmd(ld, "utop-search", cmd_ladder_utop_search, "uniform topological operators").add_argument(
        "--depth", type=int, default=4)

    qt = group("quant", "quantifiers along Ω × P -> P")
    for name in ("exists", "forall"):
        cmd(qt, name, cmd_quant_unary, f"{name} along the projection").add_argument("upset")
    for name in ("impl", "meet", "join"):
        c = cmd(qt, name, cmd_quant_binary, f"{name} of product upsets")
        c.add_argument("left")
        c.add_argument("right")
        c.set_defaults(op={"impl": "implies"}.get(name, name))
    c = cmd(qt, "frobenius", cmd_quant_frobenius, "dual Frobenius check")
    c.add_argument("--poset", required=True)
    c.add_argument("--depth", type=int, default=2)
    c = cmd(qt, "joins", cmd_quant_joins, "join preservation of ∀")
    c.add_argument("--poset", default="one")
    c.add_argument("--depth", type=int, default=2)
    c.add_argument("--control", action="store_true", help="quantify along the 2-antichain instead")
    c = cmd(qt, "local", cmd_quant_local, "locality check")
    c.add_argument("--poset", required=True)
    c.add_argument("--depth", type=int, default=2)
    c.add_argument("--allow-unrooted", action="store_true")
    c = cmd(qt, "glue", cmd_quant_glue, "Artin glueing along f: B -> A")
    c.add_argument("--hom", help="JSON lattice hom file")
    c.add_argument("--shadow", action="store_true", help="glue U(Σ⊗Σ) onto U(Σ) along ∀")

    c = sub.add_parser("verify", help="run verification suites", parents=[g])
    c.add_argument("suites", nargs="*", default=["all"], help="suite names or 'all'")
    c.add_argument("--timing", action="store_true", help="include wall times in the report")
    c.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    for name, default in (("json", False), ("seed", 0), ("grid", "default")):
        if not hasattr(args, name):
            setattr(args, name, default)
    random.seed(args.seed)
    out = Out(args)
    try:
        code = args.func(args, out)
    except (UsageError, KtoposError, OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"ktopos: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # noqa: BLE001
        print(f"ktopos: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK if code is None else code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
