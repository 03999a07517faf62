"""Batch verification suites behind ``ktopos verify``.

Each suite runs one exhaustive check on a fixed grid and returns a
:class:`Report`.  Failures carry JSON-ready counterexample payloads sorted by
case key, so the same grid always yields the same report.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import catalog, jsonio
from .duality import enumerate_homs, roundtrip_poset, to_lattice
from .kp import CoverFamily, notexact_witness
from .ladder import NAMED_OPERATORS, TOP_RN, eval_one_var, raw_sweep, utop_search
from .logic.formula import formula_pool
from .logic.prover import Prover, decide
from .nerve import SHEAF_PRESENTATIONS, omega, pi_connect, poset_nerve, sheaf_check
from .poset import UpsetAlgebra, all_upset_masks, open_maps
from . import quantifiers as Q

GRIDS = {
    # quick: smaller slices for smoke runs
    "quick": {"omega_size": 3, "utop_depth": 3, "raw_size": 5, "fiber_depth": 1,
              "posets": ["one", "sigma", "chain3", "vee"], "roundtrip_size": 4, "hom_size": 3,
              "oracle_size": 5, "sheaf_size": 3, "zigzag_size": 2, "stage_bound": 3},
    "default": {"omega_size": 4, "utop_depth": 4, "raw_size": 8, "fiber_depth": 2,
                "posets": ["one", "sigma", "chain3", "vee"], "roundtrip_size": 5, "hom_size": 4,
                "oracle_size": 7, "sheaf_size": 4, "zigzag_size": 3, "stage_bound": 4},
}


@dataclass
class Report:
    suite: str
    cases: int = 0
    failures: list = field(default_factory=list)  # of {"case": key, ...payload}
    grid: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, case: str, **payload):
        self.failures.append({"case": case, **{k: jsonio.to_json(v) for k, v in payload.items()}})

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "ok": self.ok, "cases": self.cases,
               "failures": sorted(self.failures, key=lambda f: f["case"]), "grid": self.grid}
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _name(P) -> str:
    return jsonio.key_of(catalog.canonical_form(P))


def suite_coequalizer(grid: dict) -> Report:
    r = Report("coequalizer", grid={"universal_bound": 4})
    w = notexact_witness(4)
    r.cases = 1
    if not w.ok:
        r.fail("notexact", quotient=w.quotient.poset, three_chain=w.is_three_chain,
               projection_open=w.projection_open, universal=w.universal_ok)
    return r


def suite_two_valued(grid: dict) -> Report:
    r = Report("two-valued")
    stage = omega(catalog.one())
    r.cases = 1
    if len(stage) != 2:
        r.fail("omega(1)", size=len(stage))
    return r


def suite_omega(grid: dict) -> Report:
    n = grid["omega_size"]
    r = Report("omega", grid={"max_size": n})
    S = catalog.sigma()
    for P in catalog.posets_up_to(n):
        r.cases += 1
        ups = set(all_upset_masks(P))
        from_models = {M.valuation["x"] for M in omega(P).models}
        from_maps = {f.preimage_mask(S.mask_of([1])) for f in poset_nerve(S, P)}
        sizes = (len(omega(P)), len(poset_nerve(S, P)), len(ups))
        if not (from_models == from_maps == ups and len(set(sizes)) == 1):
            r.fail(_name(P), poset=P, sizes=list(sizes))
    return r


def suite_utop(grid: dict) -> Report:
    d, raw = grid["utop_depth"], grid["raw_size"]
    r = Report("utop", grid={"depth_bound": d, "raw_size": raw})
    expected = set(NAMED_OPERATORS.values())
    prover = Prover()
    res = utop_search(d, prover)
    r.cases += res.classes_tested
    got = {v for v, _ in res.passing}
    if got != expected:
        r.fail("classes", passing=sorted(jsonio.to_json(v) for v in got))
    tested, passing = raw_sweep(raw, prover)
    r.cases += tested
    if set(passing) != expected:
        r.fail("raw", passing=sorted(jsonio.to_json(v) for v in passing))
    return r


def _grid_posets(grid):
    return Q.grid_posets(grid["posets"])


def suite_frobenius(grid: dict) -> Report:
    d = grid["fiber_depth"]
    r = Report("frobenius", grid={"posets": grid["posets"], "fiber_depth": d})
    for name, P in _grid_posets(grid):
        v = Q.frobenius_check(P, d)
        r.cases += v.cases
        if not v.ok:
            r.fail(name, failing_cells=v.details["failures"], **v.counterexample)
    return r


def suite_joins(grid: dict) -> Report:
    d = grid["fiber_depth"]
    r = Report("joins", grid={"posets": grid["posets"], "fiber_depth": d, "control": "antichain2"})
    for name, P in _grid_posets(grid):
        v = Q.join_preservation_check(P, d)
        r.cases += v.cases
        if not v.ok:
            r.fail(name, **v.counterexample)
    c = Q.control_fiber_check()
    r.cases += c.cases
    if not c.ok:
        r.fail("control", message="no counterexample along the antichain fiber")
    return r


def suite_locality(grid: dict) -> Report:
    d = grid["fiber_depth"]
    r = Report("locality", grid={"posets": grid["posets"], "fiber_depth": d, "control": "antichain2"})
    for name, P in _grid_posets(grid):
        v = Q.locality_check(P, d)
        r.cases += v.cases
        if not v.ok:
            r.fail(name, **v.counterexample)
    c = Q.locality_check(catalog.antichain(2), d, allow_unrooted=True)
    r.cases += c.cases
    if c.ok:
        r.fail("control", message="the antichain passed the locality check")
    g = Q.locality_shadow()
    r.cases += 1
    if not (g.axioms_ok and g.implication_ok and g.is_local and g.r.is_heyting_hom()):
        r.fail("glue-shadow", axioms=g.axioms_ok, implication=g.implication_ok, local=g.is_local)
    return r


def suite_duality(grid: dict) -> Report:
    n, m = grid["roundtrip_size"], grid["hom_size"]
    r = Report("duality", grid={"roundtrip_size": n, "hom_size": m})
    for P in catalog.posets_up_to(n):
        r.cases += 1
        rep = roundtrip_poset(P)
        if not rep.ok:
            r.fail("roundtrip " + _name(P), poset=P)
    posets = catalog.posets_up_to(m)
    lattices = [to_lattice(UpsetAlgebra(P)) for P in posets]
    for i, P in enumerate(posets):
        for j, R in enumerate(posets):
            r.cases += 1
            a = len(open_maps(P, R))
            b = len(enumerate_homs(lattices[j], lattices[i], heyting=True))
            if a != b:
                r.fail(f"homs {_name(P)} {_name(R)}", open_maps=a, heyting_homs=b)
    return r


def suite_galois(grid: dict) -> Report:
    d = grid["fiber_depth"]
    r = Report("galois", grid={"posets": grid["posets"], "fiber_depth": d})
    for name, P in _grid_posets(grid):
        v = Q.galois_check(P, d)
        r.cases += v.cases
        if not v.ok:
            r.fail(name, **v.counterexample)
    v = Q.residuation_check(catalog.sigma(), d, max_families=1000)
    r.cases += v.cases
    if not v.ok:
        r.fail("residuation", **v.counterexample)
    return r


def suite_oracle(grid: dict) -> Report:
    n = grid["oracle_size"]
    r = Report("prover-ladder", grid={"max_size": n})
    prover = Prover()
    for f in formula_pool(n):
        r.cases += 1
        p = decide(f, prover, countermodel=False).provable
        if p != (eval_one_var(f) == TOP_RN):
            r.fail(jsonio.to_json(f), provable=p, value=eval_one_var(f))
    return r


def suite_sheaf(grid: dict) -> Report:
    n = grid["sheaf_size"]
    r = Report("sheaf", grid={"max_size": n, "presentations": [str(A) for A in SHEAF_PRESENTATIONS]})
    for A in SHEAF_PRESENTATIONS:
        for P in catalog.posets_up_to(n, include_empty=False):
            r.cases += 1
            v = sheaf_check(A, P, CoverFamily.rooted(P))
            if not v.ok:
                r.fail(f"{A} {_name(P)}", poset=P, witness=v.witness)
    return r


def suite_zigzag(grid: dict) -> Report:
    n, b = grid["zigzag_size"], grid["stage_bound"]
    r = Report("zigzag", grid={"max_size": n, "stage_bound": b})
    nodes = [(P, m) for P in catalog.rooted_posets_up_to(n) for m in all_upset_masks(P)]
    for P, a in nodes:
        for R, c in nodes:
            r.cases += 1
            try:
                pi_connect(P, a, R, c, b)
            except Exception as e:  # noqa: BLE001 - reported as a failure
                r.fail(f"{_name(P)}:{a} {_name(R)}:{c}", error=str(e))
    return r


SUITES = {
    "coequalizer": suite_coequalizer,
    "two-valued": suite_two_valued,
    "omega": suite_omega,
    "utop": suite_utop,
    "frobenius": suite_frobenius,
    "joins": suite_joins,
    "locality": suite_locality,
    "duality": suite_duality,
    "galois": suite_galois,
    "prover-ladder": suite_oracle,
    "sheaf": suite_sheaf,
    "zigzag": suite_zigzag,
}


def run_suite(name: str, grid: str | dict = "default") -> Report:
    params = GRIDS[grid] if isinstance(grid, str) else grid
    t = time.perf_counter()
    rep = SUITES[name](params)
    rep.wall_time = time.perf_counter() - t
    return rep


def run_all(grid: str | dict = "default", names=None) -> list[Report]:
    return [run_suite(n, grid) for n in (names or SUITES)]
