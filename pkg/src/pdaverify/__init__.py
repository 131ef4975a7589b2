"""Ping-pong protocol security by memoized two-way pushdown simulation."""

from .closure import bounded_path_search, dyck_closure, is_insecure
from .lang import classify, expand_macros, format_program, parse_program
from .programs import gen_pathfinder, gen_verifier
from .protocol import (DEFAULT_TABLE, CancelTable, Fsa, Protocol, build_fsa,
                       encode_tape, instantiate, parse_fsa, parse_protocol,
                       reduce_word)
from .sim import Tape, parse_tape, run_deterministic, simulate

__version__ = "0.1.0"
