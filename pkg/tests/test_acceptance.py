"""Acceptance gate: one check per criterion, each reporting PASS or FAIL.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import random
import statistics
import time

import pytest

from oracles import brute_erasable, reachable
from pdaverify.closure import bounded_path_search, is_insecure
from pdaverify.corpus import (PROTOCOLS, digraph_tape, fixture_fsa, fixture_tape,
                              random_digraph, random_fsa, read_data,
                              scaled_protocol1, scaled_sizes)
from pdaverify.lang import expand_macros, parse_program
from pdaverify.programs import gen_pathfinder, gen_verifier
from pdaverify.protocol import (DEFAULT_TABLE, OPERATORS, PROTOCOL_1,
                                build_fsa, encode_tape, instantiate,
                                isomorphic, reduce_word)
from pdaverify.sim import compile_program, parse_tape, simulate

RESULTS = []
VERIFIER = compile_program(gen_verifier())


def report(name, ok, detail):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return ok


def c1_verdicts():
    want = {1: True, 2: False, 3: True}
    got, slowest = {}, 0.0
    for k in want:
        t0 = time.perf_counter()
        got[k] = simulate(VERIFIER, fixture_tape(k)).accepted
        slowest = max(slowest, time.perf_counter() - t0)
    ok = got == want and slowest < 1.0
    return ok, f"verdicts {got}, slowest run {slowest:.3f}s"


def c2_structure():
    sizes = []
    ok = True
    for k, (edges, tape) in zip((1, 2, 3), ((18, 56), (23, 71), (28, 86))):
        f = build_fsa(PROTOCOLS[k])
        n, m = len(f.edges), len(encode_tape(f))
        iso = isomorphic(f, fixture_fsa(k))
        ok &= n == edges and m == tape and iso
        sizes.append(f"P{k} {n} edges/{m} cells/iso={iso}")
    return ok, "; ".join(sizes)


def c3_oracle_equivalence(count=500):
    rng = random.Random(1)
    t0 = time.perf_counter()
    bad = insecure = 0
    for _ in range(count):
        f = random_fsa(rng, max_nodes=8, max_edges=24)
        s = simulate(VERIFIER, encode_tape(f)).accepted
        c = is_insecure(f)
        bad += s != c
        insecure += c
    dt = time.perf_counter() - t0
    return bad == 0 and dt < 60, (f"{count} FSAs, {insecure} insecure, "
                                  f"{bad} disagreements, {dt:.1f}s")


def c4_confluence(samples=10_000):
    pairs = list(DEFAULT_TABLE)
    rng = random.Random(4)
    bad = 0
    for _ in range(samples):
        w = [rng.choice(OPERATORS) for _ in range(rng.randint(0, 10))]
        bad += (not reduce_word(w)) != brute_erasable(w, pairs)
    six = ["EX", "DX", "PY", "MY", "M", "EZ"]
    exhaustive = 0
    for n in range(7):
        for w in itertools.product(six, repeat=n):
            bad += (not reduce_word(w)) != brute_erasable(w, pairs)
            exhaustive += 1
    return bad == 0, f"{samples} sampled + {exhaustive} exhaustive words, {bad} mismatches"


P1_DISPLAY = ["EX", "DX", "EZ", "DZ"]
P3_ATTACK = ["EY", "PX", "EY", "PZ", "EY", "DY", "MZ", "DY", "EZ", "DZ",
             "MX", "PZ", "EY", "DY", "MZ", "DY", "EZ", "DZ"]


def c5_attack_traces():
    p = PROTOCOL_1
    p1_instantiated = (instantiate(p.alpha1, "X", "Y") + instantiate(p.alpha2, "Z", "Y")
                       + ["DZ"])
    words_ok = all(reduce_word(w) == [] for w in (P1_DISPLAY, p1_instantiated, P3_ATTACK))
    found = {}
    for k, bound in ((1, 12), (3, 14)):
        path = bounded_path_search(build_fsa(PROTOCOLS[k]), DEFAULT_TABLE, bound)
        found[k] = path is not None and reduce_word([op for _, op, _ in path]) == []
    p2 = bounded_path_search(build_fsa(PROTOCOLS[2]), DEFAULT_TABLE, 12)
    ok = words_ok and found[1] and found[3] and p2 is None
    return ok, (f"attack words reduce: {words_ok}; witnesses P1={found[1]} "
                f"P3={found[3]} (max_len 14); P2 none up to 12: {p2 is None}")


def c6_polynomial():
    ns, steps = [], []
    for m in scaled_sizes():
        tape = encode_tape(scaled_protocol1(m))
        v = simulate(VERIFIER, tape)
        ns.append(len(tape))
        steps.append(v.stats.steps)
    slope = statistics.linear_regression([math.log(n) for n in ns],
                                         [math.log(s) for s in steps]).slope
    v = simulate(parse_program("init: push '0'; goto init"), parse_tape("> 0 <"))
    pusher_ok = not v.accepted and v.stats.steps <= v.stats.configs ** 2
    ok = slope <= 3.3 and pusher_ok
    return ok, (f"n={ns} steps={steps} slope={slope:.2f}; divergent pusher "
                f"{v.stats.steps} steps, {v.stats.configs} configs")


def c7_pathfinder(count=500):
    rng = random.Random(7)
    p = compile_program(gen_pathfinder())
    bad = cyclic = 0
    for _ in range(count):
        edges = random_digraph(rng, max_nodes=8)
        bad += simulate(p, digraph_tape(edges)).accepted != reachable(edges)
        cyclic += _has_cycle(edges)
    return bad == 0 and cyclic > 0, f"{count} digraphs ({cyclic} cyclic), {bad} mismatches"


def _has_cycle(edges):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
    state = {}

    def dfs(u):
        state[u] = 1
        for v in adj.get(u, ()):
            if state.get(v) == 1 or (v not in state and dfs(v)):
                return True
        state[u] = 2
        return False

    return any(u not in state and dfs(u) for u in list(adj))


def c8_listings():
    pf = parse_program(read_data("pathfinder.pda"))
    vf = parse_program(read_data("verifier.pda"))
    ok = (expand_macros(pf) == expand_macros(gen_pathfinder())
          and expand_macros(vf) == expand_macros(gen_verifier()))
    return ok, f"pathfinder equal: {pf == gen_pathfinder()}, verifier equal: {vf == gen_verifier()}"


CRITERIA = [
    ("1 fixture verdicts", c1_verdicts),
    ("2 fixture structure", c2_structure),
    ("3 oracle equivalence", c3_oracle_equivalence),
    ("4 reduction confluence", c4_confluence),
    ("5 attack-trace fixtures", c5_attack_traces),
    ("6 polynomial-time contract", c6_polynomial),
    ("7 pathfinder equivalence", c7_pathfinder),
    ("8 language conformance", c8_listings),
]


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, check):
    ok, detail = check()
    report(name, ok, detail)
    print(RESULTS[-1])
    assert ok, detail


if __name__ == "__main__":
    for name, check in CRITERIA:
        report(name, *check())
        print(RESULTS[-1])
