import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_erasable
from pdaverify.corpus import PROTOCOLS, fixture_fsa, fixture_tape, random_fsa, read_data
from pdaverify.programs import gen_verifier
from pdaverify.protocol import (COMMON_OPS, DEFAULT_TABLE, EMPTY_TABLE,
                                OPERATORS, SABOTEUR_OPS, Fsa,
                                MalformedEdge, ProtocolError,
                                RoleClash, TooManyNodes, UnknownOperator,
                                boxed, build_fsa, composition, decode_tape,
                                encode_tape, format_fsa, format_identities,
                                format_protocol, instantiate, is_reducible,
                                isomorphic, parse_fsa, parse_identities,
                                parse_protocol, reduce_word, reduction_steps,
                                user_ops)
from pdaverify.sim import MissingEndmarker, parse_tape, simulate

P3_ATTACK = ["EY", "PX", "EY", "PZ", "EY", "DY", "MZ", "DY", "EZ", "DZ",
             "MX", "PZ", "EY", "DY", "MZ", "DY", "EZ", "DZ"]


# --- alphabet and identities -------------------------------------------------

def test_alphabet_sizes():
    assert len(OPERATORS) == len(set(OPERATORS)) == 13
    assert len(COMMON_OPS) == 10
    for u in "XYZ":
        assert len(user_ops(u)) == 11
    assert set(SABOTEUR_OPS) == user_ops("Z")


def test_default_table():
    assert len(DEFAULT_TABLE) == 12
    for u in "XYZ":
        assert DEFAULT_TABLE.cancels(f"E{u}", f"D{u}")
        assert DEFAULT_TABLE.cancels(f"D{u}", f"E{u}")
        assert DEFAULT_TABLE.cancels(f"P{u}", f"M{u}")
        assert DEFAULT_TABLE.cancels(f"P{u}", "M")
        assert not DEFAULT_TABLE.cancels(f"M{u}", f"P{u}")
    assert not DEFAULT_TABLE.cancels("M", "PX")


def test_default_table_order():
    assert list(DEFAULT_TABLE)[:4] == [("EX", "DX"), ("DX", "EX"), ("EY", "DY"), ("DY", "EY")]
    assert list(DEFAULT_TABLE)[-2:] == [("PZ", "MZ"), ("PZ", "M")]


def test_identities_file_round_trip():
    ct = parse_identities(read_data("default.identities"))
    assert list(ct) == list(DEFAULT_TABLE)
    assert list(parse_identities(format_identities(ct))) == list(ct)
    assert list(parse_identities("DX EX = ε\n")) == [("EX", "DX")]


@pytest.mark.parametrize("text", ["DX\n", "DX EX EY\n", "D$ EX\n"])
def test_identities_errors(text):
    with pytest.raises(ProtocolError):
        parse_identities(text)


# --- instantiate and reduce ---------------------------------------------------

def test_instantiate():
    assert instantiate(("DB", "EA"), "Z", "Y") == ["DY", "EZ"]
    assert instantiate(("EB",), "X", "Y") == ["EY"]
    assert instantiate(("M",), "X", "Y") == ["M"]
    with pytest.raises(RoleClash):
        instantiate(("EA",), "X", "X")
    with pytest.raises(UnknownOperator):
        instantiate(("QA",), "X", "Y")


@pytest.mark.parametrize("word,rest", [
    (["EX", "DX", "EZ", "DZ"], []),
    (["EY", "DY", "EZ", "DZ"], []),
    (["EX", "DY"], ["EX", "DY"]),
    ([], []),
    (P3_ATTACK, []),
    (["MX", "PX"], ["MX", "PX"]),
    (["PX", "M"], []),
])
def test_reduce_examples(word, rest):
    assert reduce_word(word) == rest


def _erase(w, i):
    assert DEFAULT_TABLE.cancels(w[i], w[i + 1])
    return w[:i] + w[i + 2:]


def test_both_bracketings():
    w = ["DX", "EX", "DX", "EX"]   # EX DX EX DX in composition order
    assert reduce_word(w) == []
    assert _erase(_erase(w, 0), 0) == []   # outer pairs side by side
    assert _erase(_erase(w, 1), 0) == []   # middle pair first, then nested


def test_reduction_steps_trace():
    steps = reduction_steps(P3_ATTACK)
    assert len(steps) == len(P3_ATTACK) // 2
    for word, i in steps:
        assert DEFAULT_TABLE.cancels(word[i], word[i + 1])
    assert reduction_steps(["EX", "DY"]) == []


def test_display():
    assert composition(["EX", "DX"]) == "DX EX"
    assert composition([]) == "ε"
    assert boxed(["EY", "DY", "EZ", "DZ"], 0) == "DZ EZ [DY EY]"
    assert boxed(["EZ", "DZ"], 0) == "[DZ EZ]"


SIX = ["EX", "DX", "PY", "MY", "M", "EZ"]


def test_confluence_exhaustive_six():
    pairs = list(DEFAULT_TABLE)
    for n in range(7):
        for w in itertools.product(SIX, repeat=n):
            assert is_reducible(w) == brute_erasable(w, pairs), w


@settings(max_examples=500, deadline=None)
@given(st.lists(st.sampled_from(OPERATORS), max_size=10))
def test_confluence_sampled(w):
    assert is_reducible(w) == brute_erasable(w, list(DEFAULT_TABLE))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(OPERATORS), max_size=8),
       st.lists(st.sampled_from(OPERATORS), max_size=8))
def test_reduce_is_a_monoid_map(u, v):
    assert reduce_word(reduce_word(u) + reduce_word(v)) == reduce_word(u + v)


def test_empty_table_cancels_nothing():
    assert reduce_word(["EX", "DX"], EMPTY_TABLE) == ["EX", "DX"]


# --- protocols ----------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3])
def test_protocol_files(k):
    p = parse_protocol(read_data(f"protocol{k}.pp"))
    assert p == PROTOCOLS[k]
    assert parse_protocol(format_protocol(p)) == p


def test_protocol_words_are_application_order():
    p = PROTOCOLS[2]
    assert p.alpha1 == ("PA", "EB")
    assert p.alpha2 == ("DB", "MA", "EA")


@pytest.mark.parametrize("text", [
    "alpha1: EB\n", "alpha1: EB\nalpha2: QQ\n", "alpha1: EB\nalpha1: EB\nalpha2: EA\n",
    "garbage\n", "alpha1:\nalpha2: EA\n",
])
def test_protocol_errors(text):
    with pytest.raises(ProtocolError):
        parse_protocol(text)


# --- automata -----------------------------------------------------------------

def _trie_edges(p):
    total = 0
    for b in "XY":
        words = [tuple(instantiate(p.alpha2, a, b)) for a in "XYZ" if a != b]
        total += len({w[:k] for w in words for k in range(1, len(w) + 1)})
    return total


@pytest.mark.parametrize("k,edges,tape", [(1, 18, 56), (2, 23, 71), (3, 28, 86)])
def test_build_fsa_counts(k, edges, tape):
    p = PROTOCOLS[k]
    f = build_fsa(p)
    assert len(f.edges) == edges == len(p.alpha1) + 11 + _trie_edges(p)
    assert len(encode_tape(f)) == tape


@pytest.mark.parametrize("k", [1, 2, 3])
def test_build_fsa_matches_fixture(k):
    assert isomorphic(build_fsa(PROTOCOLS[k]), fixture_fsa(k))
    assert isomorphic(build_fsa(PROTOCOLS[k]), decode_tape(fixture_tape(k)))


def test_fixture_files_agree():
    for k in (1, 2, 3):
        assert encode_tape(fixture_fsa(k)) == fixture_tape(k)


def test_isomorphism_is_strict():
    f = build_fsa(PROTOCOLS[1])
    flipped = Fsa(f.edges[:-1] + ((f.edges[-1][0], "MX", f.edges[-1][2]),))
    assert not isomorphic(f, flipped)
    assert not isomorphic(build_fsa(PROTOCOLS[1]), build_fsa(PROTOCOLS[2]))


def test_fsa_structure():
    f = build_fsa(PROTOCOLS[1])
    loops = [op for u, op, v in f.edges if u == v == "1"]
    assert sorted(loops) == sorted(SABOTEUR_OPS)
    assert f.edges[0] == ("0", "EY", "1")
    assert f.source == "0" and f.target == "1"


def test_single_edge_tape():
    t = encode_tape(Fsa((("0", "EY", "1"),)))
    assert str(t) == "> 0 EY 1 <" and len(t) == 5


def test_encode_renames_source_and_target():
    f = Fsa((("a", "EY", "b"), ("b", "DY", "0")), source="a", target="0")
    t = encode_tape(f)
    g = decode_tape(t)
    assert g.edges[0][0] == "0" and g.edges[1][2] == "1"


@pytest.mark.parametrize("text,exc", [
    ("0 QQ 1\n", UnknownOperator),
    ("0 EY\n", MalformedEdge),
    ("0 EY EX\n", TooManyNodes),
    ("source: a b\n", MalformedEdge),
])
def test_parse_fsa_errors(text, exc):
    with pytest.raises(exc):
        parse_fsa(text)


def test_tape_errors():
    with pytest.raises(MissingEndmarker):
        parse_tape("> 0 EY 1")
    with pytest.raises(MalformedEdge):
        decode_tape(parse_tape("> 0 EY <"))
    with pytest.raises(UnknownOperator):
        decode_tape(parse_tape("> 0 QQ 1 <"))


def test_fsa_text_round_trip():
    f = build_fsa(PROTOCOLS[3])
    assert parse_fsa(format_fsa(f)) == f


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_tape_codec_idempotent(seed):
    f = random_fsa(random.Random(seed))
    t = encode_tape(f)
    assert encode_tape(decode_tape(parse_tape(str(t)))) == t


@pytest.mark.parametrize("k,want", [(1, True), (2, False), (3, True)])
def test_edge_order_irrelevant(k, want):
    rng = random.Random(k)
    verifier = gen_verifier()
    edges = list(build_fsa(PROTOCOLS[k]).edges)
    for _ in range(50):
        rng.shuffle(edges)
        assert simulate(verifier, encode_tape(Fsa(tuple(edges)))).accepted is want
