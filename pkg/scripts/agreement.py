"""Simulator against closure on random operator-labeled automata."""

import argparse
import random
import time

from pdaverify.closure import is_insecure
from pdaverify.corpus import random_fsa
from pdaverify.programs import gen_verifier
from pdaverify.protocol import encode_tape, format_fsa
from pdaverify.sim import compile_program, simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-nodes", type=int, default=8)
    ap.add_argument("--max-edges", type=int, default=24)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    verifier = compile_program(gen_verifier())
    insecure = 0
    t0 = time.perf_counter()
    for i in range(args.n):
        f = random_fsa(rng, args.max_nodes, args.max_edges)
        s = simulate(verifier, encode_tape(f)).accepted
        c = is_insecure(f)
        if s != c:
            print(f"disagreement on instance {i}: sim={s} closure={c}")
            print(format_fsa(f))
            raise SystemExit(1)
        insecure += c
    print(f"{args.n} automata, {insecure} insecure, all agree, "
          f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
