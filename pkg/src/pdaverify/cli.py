"""Command line: verify protocols, run pushdown programs, produce files.

Exit status: 0 secure / reject, 2 insecure / accept, 1 bad input,
3 when the simulator and the closure disagree (a bug, never expected).
"""

from __future__ import annotations

import argparse
import json
import sys

from .closure import bounded_path_search, dyck_closure
from .lang import ProgramError, format_program, parse_program
from .programs import attack_path, gen_pathfinder, gen_verifier
from .protocol import (DEFAULT_TABLE, ProtocolError, boxed, build_fsa,
                       composition, decode_tape, encode_tape, format_fsa,
                       parse_fsa, parse_identities, parse_protocol,
                       reduction_steps)
from .sim import TapeError, compile_program, parse_tape, simulate, stats_dict

EXIT_SECURE, EXIT_ERROR, EXIT_INSECURE, EXIT_DISAGREE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _table(args):
    return parse_identities(_read(args.identities)) if args.identities else DEFAULT_TABLE


def _witness_report(path, ct) -> dict:
    word = [op for _, op, _ in path]
    steps = [boxed(w, i) for w, i in reduction_steps(word, ct)]
    return {
        "path": [list(e) for e in path],
        "word": composition(word),
        "reduction": steps + ["ε"],
    }


def _closure_witness(fsa, ct):
    bound = 2 * len(fsa.nodes) * (len(fsa.edges) + 1)
    n = 4
    while True:
        path = bounded_path_search(fsa, ct, min(n, bound))
        if path is not None or n >= bound:
            return path
        n *= 2


def cmd_verify(args) -> int:
    ct = _table(args)
    fsa = tape = None
    if args.protocol:
        fsa = build_fsa(parse_protocol(_read(args.protocol)))
    elif args.fsa:
        fsa = parse_fsa(_read(args.fsa))
    else:
        tape = parse_tape(_read(args.tape))
        if args.method != "sim":
            fsa = decode_tape(tape)
    if tape is None:
        tape = encode_tape(fsa)

    report = {"method": args.method}
    sim_verdict = closure_verdict = None
    program = gen_verifier(ct)
    if args.method in ("sim", "both"):
        v = simulate(compile_program(program), tape, want_witness=args.witness)
        sim_verdict = v.accepted
        report["stats"] = stats_dict(v)
    if args.method in ("closure", "both"):
        rel = dyck_closure(fsa, ct)
        closure_verdict = (fsa.source, fsa.target) in rel
        report.setdefault("stats", {})["closure_pairs"] = len(rel)
    insecure = sim_verdict if sim_verdict is not None else closure_verdict
    agree = None
    if args.method == "both":
        agree = sim_verdict == closure_verdict
        report["methods_agree"] = agree
    report["verdict"] = "insecure" if insecure else "secure"

    if args.witness and insecure:
        if sim_verdict:
            path = attack_path(v.witness, tape, program)
        else:
            path = _closure_witness(fsa, ct)
        if path is not None:
            report["witness"] = _witness_report(path, ct)

    if args.json:
        sys.stdout.write(_dump(report))
    else:
        print(report["verdict"])
        if agree is not None:
            print(f"methods agree: {'yes' if agree else 'no'}")
        w = report.get("witness")
        if w:
            print(f"attack path ({len(w['path'])} edges): "
                  + " ".join(f"{u} -{op}-> {v}" for u, op, v in w["path"]))
            print(f"word: {w['word']}")
            print("reduction:")
            for line in w["reduction"]:
                print(f"  {line}")
    if agree is False:
        print("error: simulator and closure disagree", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_INSECURE if insecure else EXIT_SECURE


def cmd_run(args) -> int:
    program = parse_program(_read(args.program))
    tape = parse_tape(_read(args.tape))
    v = simulate(program, tape, want_witness=args.witness)
    print("accept" if v.accepted else "reject")
    if args.stats:
        print(json.dumps(stats_dict(v), sort_keys=True))
    if args.witness and v.witness:
        print("choices: " + " ".join(map(str, v.witness.choices)))
        for s in v.witness.trace:
            print(f"  pp {s.pp:4d}  heads {','.join(map(str, s.heads))}  {s.action}")
    return EXIT_INSECURE if v.accepted else EXIT_SECURE


def cmd_compile_fsa(args) -> int:
    _write(args.output, format_fsa(build_fsa(parse_protocol(_read(args.protocol)))))
    return 0


def cmd_encode_tape(args) -> int:
    tape = encode_tape(parse_fsa(_read(args.fsa)))
    _write(args.output, str(tape) + "\n")
    return 0


def cmd_emit_program(args) -> int:
    p = gen_pathfinder() if args.kind == "pathfinder" else gen_verifier(_table(args))
    _write(args.output, format_program(p))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pdaverify", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="decide protocol security")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--protocol", help="protocol file (alpha1:/alpha2: lines)")
    src.add_argument("--fsa", help="edge-list file")
    src.add_argument("--tape", help="tape file")
    v.add_argument("--method", choices=("sim", "closure", "both"), default="both")
    v.add_argument("--identities", help="operator identities file")
    v.add_argument("--witness", action="store_true", help="print an attack path")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("run", help="run a pushdown program on a tape")
    r.add_argument("--program", required=True)
    r.add_argument("--tape", required=True)
    r.add_argument("--stats", action="store_true")
    r.add_argument("--witness", action="store_true")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compile-fsa", help="protocol file to edge list")
    c.add_argument("--protocol", required=True)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_compile_fsa)

    e = sub.add_parser("encode-tape", help="edge list to tape")
    e.add_argument("--fsa", required=True)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_encode_tape)

    m = sub.add_parser("emit-program", help="write a generated program")
    m.add_argument("--kind", choices=("pathfinder", "verifier"), required=True)
    m.add_argument("--identities")
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_emit_program)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ProgramError, ProtocolError, TapeError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:   # --help
        return EXIT_SECURE if not exc.code else EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
