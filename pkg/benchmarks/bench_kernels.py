"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--json]

Both backends get identical inputs and must return identical results.
"""

import argparse
import json
import sys
import timeit

from ktopos import _kernels as K
from ktopos import catalog
from ktopos._kernels import _pykernels as py
from ktopos.ladder import ladder_trunc
from ktopos.poset import tensor


def cases():
    lad = ladder_trunc(5)  # 10 points
    grid, _, _ = tensor(catalog.chain(3), catalog.chain(3))
    v, c4 = catalog.vee(), catalog.chain(4)
    ups = py.enumerate_upsets(list(lad.up))
    pairs = [(a, b) for a in ups[::7] for b in ups[::5]]
    return {
        "enumerate_upsets ladder(5)": lambda m: m.enumerate_upsets(list(lad.up)),
        "enumerate_upsets chain3 x chain3": lambda m: m.enumerate_upsets(list(grid.up)),
        "upset_implies ladder(5) pairs": lambda m: [m.upset_implies(lad.up, a, b) for a, b in pairs],
        "monotone_maps chain4 -> vee": lambda m: m.monotone_maps(list(c4.up), list(v.up)),
        "open maps chain3 x chain3 -> chain3": lambda m: m.monotone_maps(
            list(grid.up), list(catalog.chain(3).up), True),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    c = getattr(K, "_c", None)
    if c is None:
        print("compiled kernels are not available; build with "
              "`pip install --no-build-isolation -e .`", file=sys.stderr)
        return 1
    rows = []
    for name, fn in cases().items():
        r_py, r_c = fn(py), fn(c)
        if sorted(map(repr, r_py)) != sorted(map(repr, r_c)):
            print(f"backends disagree on {name}", file=sys.stderr)
            return 1
        n = 1
        while timeit.timeit(lambda: fn(py), number=n) < 0.2:
            n *= 2
        t_py = min(timeit.repeat(lambda: fn(py), number=n, repeat=args.repeat)) / n
        t_c = min(timeit.repeat(lambda: fn(c), number=n, repeat=args.repeat)) / n
        rows.append({"case": name, "python_s": t_py, "cython_s": t_c, "speedup": t_py / t_c})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        w = max(len(r["case"]) for r in rows)
        print(f"{'case':<{w}}  {'python':>10}  {'cython':>10}  speedup")
        for r in rows:
            print(f"{r['case']:<{w}}  {r['python_s'] * 1e3:>8.3f}ms  {r['cython_s'] * 1e3:>8.3f}ms"
                  f"  {r['speedup']:>6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
