"""Compare the pure-Python and compiled scan kernels.

Usage: python3 benchmarks/bench_kernel.py [--formulas N] [--points N]

Generates random formulas and frames, runs both backends on identical
inputs, verifies they agree, and reports per-scan timings.
"""

import argparse
import random
import statistics
import sys
import time

from stitkit import _pykernel, kernel, syntax

try:
    from stitkit import _ckernel
except ImportError:
    _ckernel = None


def random_formula(rng, budget, atom_names=("p", "q"), agents=(0, 1)):
    kinds = ["atom"]
    if budget >= 2:
        kinds += ["not", "box"]
    if budget >= 4:
        kinds.append("cstit")
    if budget >= 5:
        kinds.append("and")
    if budget >= 6:
        kinds.append("dstit")
    kind = rng.choice(kinds)
    if kind == "atom":
        return syntax.Atom(rng.choice(atom_names))
    if kind == "not":
        return syntax.Not(random_formula(rng, budget - 1, atom_names, agents))
    if kind == "box":
        return syntax.Box(random_formula(rng, budget - 1, atom_names, agents))
    if kind == "cstit":
        return syntax.Cstit(rng.choice(agents),
                            random_formula(rng, budget - 3, atom_names,
                                           agents))
    if kind == "dstit":
        return syntax.Dstit(rng.choice(agents),
                            random_formula(rng, budget - 5, atom_names,
                                           agents))
    lb = rng.randint(1, budget - 4)
    return syntax.And(random_formula(rng, lb, atom_names, agents),
                      random_formula(rng, budget - 3 - lb, atom_names,
                                     agents))


def random_partition(rng, n):
    labels = [rng.randrange(1 + i // 2) for i in range(n)]
    cells = {}
    for i, lab in enumerate(labels):
        cells[lab] = cells.get(lab, 0) | (1 << i)
    return tuple(cells.values())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--formulas", type=int, default=200)
    ap.add_argument("--points", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    contradiction = syntax.And(syntax.Atom("p"), syntax.Not(syntax.Atom("p")))
    modes = {"early-exit": [], "exhaustive": []}
    for _ in range(args.formulas):
        f = random_formula(rng, 12)
        frame = kernel.Frame(args.points,
                             tuple(random_partition(rng, args.points)
                                   for _ in range(3)))
        for mode in modes:
            g = f if mode == "early-exit" else syntax.And(f, contradiction)
            names = sorted(syntax.atoms(g))
            ops, opargs = kernel.compile_formula(
                g, {p: k for k, p in enumerate(names)}, {0: 0, 1: 1})
            modes[mode].append((ops, opargs, frame, len(names)))

    backends = [("py", _pykernel)]
    if _ckernel is not None:
        backends.append(("c", _ckernel))
    else:
        print("compiled backend unavailable; benchmarking pure only",
              file=sys.stderr)

    for mode, cases in modes.items():
        results = {}
        outputs = {}
        for name, backend in backends:
            times = []
            outs = []
            for ops, opargs, frame, n_atoms in cases:
                t0 = time.perf_counter()
                outs.append(backend.scan(ops, opargs, frame.n_points,
                                         frame.blocks, n_atoms, True))
                times.append(time.perf_counter() - t0)
            results[name] = times
            outputs[name] = outs
            print(f"{mode:>10} {name:>3}: "
                  f"mean {statistics.mean(times) * 1e6:8.1f} us  "
                  f"median {statistics.median(times) * 1e6:8.1f} us  "
                  f"({len(cases)} scans, {args.points} points)")
        if len(outputs) == 2:
            assert outputs["py"] == outputs["c"], "backends disagreed"
            ratio = statistics.median(results["py"]) / \
                statistics.median(results["c"])
            print(f"{mode:>10}: compiled/pure median speedup {ratio:.1f}x")


if __name__ == "__main__":
    main()
