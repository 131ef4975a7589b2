"""Verdicts, sizes and simulator counters for the three shipped protocols."""

import argparse
import json
import time

from pdaverify.closure import is_insecure
from pdaverify.corpus import PROTOCOLS
from pdaverify.programs import gen_verifier
from pdaverify.protocol import build_fsa, encode_tape
from pdaverify.sim import compile_program, simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    verifier = compile_program(gen_verifier())
    rows = []
    for k, proto in PROTOCOLS.items():
        f = build_fsa(proto)
        tape = encode_tape(f)
        t0 = time.perf_counter()
        v = simulate(verifier, tape)
        dt = time.perf_counter() - t0
        rows.append(dict(protocol=k, edges=len(f.edges), tape=len(tape),
                         configs=v.stats.configs, steps=v.stats.steps,
                         summaries=v.stats.summaries, seconds=round(dt, 4),
                         sim="accept" if v.accepted else "reject",
                         closure="insecure" if is_insecure(f) else "secure"))
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    cols = ["protocol", "edges", "tape", "configs", "steps", "summaries", "seconds", "sim", "closure"]
    print("  ".join(f"{c:>9}" for c in cols))
    for r in rows:
        print("  ".join(f"{r[c]!s:>9}" for c in cols))


if __name__ == "__main__":
    main()
