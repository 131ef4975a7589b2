"""Simulator work against tape length on the chained protocol-1 family.

Fits log(steps) = a + b log(n) and reports the exponent b.
"""

import argparse
import math
import statistics
import time

from pdaverify.corpus import scaled_protocol1, scaled_sizes
from pdaverify.programs import gen_verifier
from pdaverify.protocol import encode_tape
from pdaverify.sim import compile_program, simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--doublings", type=int, default=4)
    ap.add_argument("--base", type=int, default=60)
    args = ap.parse_args()

    verifier = compile_program(gen_verifier())
    ns, steps = [], []
    print(f"{'chain':>6} {'n':>6} {'configs':>9} {'steps':>10} {'summaries':>9} {'sec':>7}  verdict")
    for m in scaled_sizes(args.doublings, args.base):
        tape = encode_tape(scaled_protocol1(m))
        t0 = time.perf_counter()
        v = simulate(verifier, tape)
        dt = time.perf_counter() - t0
        ns.append(len(tape))
        steps.append(v.stats.steps)
        print(f"{m:>6} {len(tape):>6} {v.stats.configs:>9} {v.stats.steps:>10} "
              f"{v.stats.summaries:>9} {dt:>7.3f}  {'accept' if v.accepted else 'reject'}")
    if len(ns) > 1:
        fit = statistics.linear_regression([math.log(n) for n in ns], [math.log(s) for s in steps])
        print(f"log-log slope: {fit.slope:.2f}")


if __name__ == "__main__":
    main()
