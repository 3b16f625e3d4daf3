"""``biwa`` command line.

Every invocation prints exactly one JSON record on stdout; a short
human-readable rendering goes to stderr unless ``-q`` is given.

Exit status: 0 when the command ran (whatever the verdict), 2 for usage
errors, 3 for unreadable or malformed input files, 4 for semiring and
operation combinations that are not supported.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .automaton import (
    behaviour_table, coefficient, equiv_bounded, equiv_finite_semiring, is_bideterministic,
    is_deterministic, semantic_trim, to_dot, transpose, trim,
)
from .field import bideterminize_field, equiv_field, minimize_field_report
from .fileformat import FormatError, automaton_to_dict, read_automaton, write_automaton
from .gallery import NAMES, HypothesisError, PCPInstance, build_example, verify_example_claims
from .oracles import BudgetExceeded, lemma_zpk_check, search_bidet_equivalent
from .semiring import SemiringError
from .tropical import bideterminize_tropical, equiv_det_tropical

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 2, 3, 4


class Unsupported(Exception):
    pass


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(path):
    try:
        return read_automaton(path)
    except OSError as exc:
        raise FormatError(exc.strerror or str(exc), path) from None
    except FormatError as exc:
        raise FormatError(str(exc), path) from None


def _equiv_record(eq):
    rec = {"verdict": eq.equivalent}
    if not eq.equivalent:
        rec["counterexample"] = eq.counterexample
    return rec


def _decision_record(d):
    rec = {"verdict": d.verdict, "stage": d.stage}
    if d.witness is not None:
        rec["witness"] = automaton_to_dict(d.witness)
    if d.reason:
        rec["reason"] = d.reason
    if d.counterexample is not None:
        rec["counterexample"] = d.counterexample
    return rec


# -- subcommands ------------------------------------------------------------------

def cmd_eval(a):
    A = _load(a.file)
    try:
        A.check_word(a.word)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return {"word": a.word, "coefficient": str(coefficient(A, a.word))}


def cmd_table(a):
    T = behaviour_table(_load(a.file), a.max_len)
    return {"max_len": a.max_len, "table": [[w, str(v)] for w, v in T.coeffs.items()]}


def cmd_trim(a):
    return {"automaton": automaton_to_dict(trim(_load(a.file)))}


def cmd_semtrim(a):
    return {"automaton": automaton_to_dict(semantic_trim(_load(a.file)))}


def cmd_transpose(a):
    return {"automaton": automaton_to_dict(transpose(_load(a.file)))}


def cmd_is_bidet(a):
    check = is_bideterministic(_load(a.file))
    rec = {"verdict": bool(check)}
    if not check:
        rec["reason"] = check.describe()
        rec["condition"] = check.condition
    return rec


def cmd_minimize(a):
    rep = minimize_field_report(_load(a.file))
    return {"automaton": automaton_to_dict(rep.automaton), "states": rep.automaton.n,
            "domain": str(rep.domain), "within_domain": rep.within_domain}


def cmd_equiv(a):
    A, B = _load(a.first), _load(a.second)
    if A.semiring != B.semiring:
        raise Unsupported(f"automata over different semirings: {A.semiring} and {B.semiring}")
    if A.alphabet != B.alphabet:
        raise Unsupported(f"automata over different alphabets: {''.join(A.alphabet)} and {''.join(B.alphabet)}")
    S = A.semiring
    method = a.method
    if method is None:
        if a.max_len is not None:
            method = "bounded"
        elif S.is_finite:
            method = "exact-finite"
        elif S.is_field or S.kind == "integer":
            method = "field"
        elif S.is_tropical:
            method = "tropical"
        else:
            raise Unsupported(f"no exact equivalence for {S}; pass --max-len")
    if method == "bounded":
        if a.max_len is None:
            raise UsageError("--max-len is required for bounded comparison")
        rec = _equiv_record(equiv_bounded(A, B, a.max_len))
    elif method == "exact-finite":
        rec = _equiv_record(equiv_finite_semiring(A, B))
    elif method == "field":
        rec = _equiv_record(equiv_field(A, B))
    else:
        if not S.is_tropical:
            raise Unsupported(f"{S} is not tropical")
        if not is_deterministic(B):
            if not is_deterministic(A):
                raise Unsupported("tropical equivalence needs one deterministic automaton")
            A, B = B, A
        eq = equiv_det_tropical(A, B)
        rec = _equiv_record(eq)
        if not eq.equivalent:
            rec["phase"] = eq.phase
    rec["method"] = method
    return rec


def cmd_bideterminize(a):
    A = _load(a.file)
    mode = a.mode or ("tropical" if A.semiring.is_tropical else "field")
    d = bideterminize_tropical(A) if mode == "tropical" else bideterminize_field(A)
    rec = _decision_record(d)
    rec["mode"] = mode
    return rec


def _pcp_map(text):
    out = {}
    for part in text.split(","):
        c, _, img = part.partition(":")
        out[c] = img
    return out


def cmd_gallery(a):
    params = {}
    for item in a.params:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not key=value")
        params[key] = value
    if a.name == "fig9":
        gamma = params.pop("gamma", "c")
        f = _pcp_map(params.pop("f", "c:ab"))
        g = _pcp_map(params.pop("g", "c:ab"))
        try:
            params["pcp"] = PCPInstance(gamma, f, g)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if a.name == "zmod" and "m" in params:
        if not params["m"].isdigit():
            raise UsageError(f"m must be a positive integer, got {params['m']!r}")
        params["m"] = int(params["m"])
    entry = build_example(a.name, params)
    A = entry.automaton if a.part is None else entry.others.get(a.part)
    if A is None:
        raise UsageError(f"{a.name} has no part {a.part!r}; parts: {sorted(entry.others)}")
    if a.out:
        with open(a.out, "wb") as fh:
            fh.write(write_automaton(A))
    report = verify_example_claims(entry)
    return {"example": a.name, "params": {k: v for k, v in entry.params.items()},
            "automaton": automaton_to_dict(A), "claims": [list(r) for r in report.results],
            "verdict": report.passed}


def cmd_oracle_search(a):
    W = search_bidet_equivalent(_load(a.file), a.max_states)
    if W is None:
        return {"verdict": "none", "max_states": a.max_states}
    return {"verdict": "found", "max_states": a.max_states, "witness": automaton_to_dict(W)}


def cmd_lemma_check(a):
    return {"p": a.p, "k": a.k, "n": a.n, "verdict": lemma_zpk_check(a.p, a.k, a.n)}


def cmd_export_dot(a):
    dot = to_dot(_load(a.file), a.graph_name)
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            fh.write(dot)
    return {"dot": dot}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="biwa", description="Weighted automata: minimality, minimisation and bideterminisability.")
    p.add_argument("--version", action="version", version=f"biwa {__version__}")
    p.add_argument("-q", "--quiet", action="store_true", help="no human-readable output on stderr")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("eval", cmd_eval, "coefficient of one word")
    sp.add_argument("file")
    sp.add_argument("--word", default="")
    sp = add("table", cmd_table, "all nonzero coefficients up to a length")
    sp.add_argument("file")
    sp.add_argument("--max-len", type=int, default=4)
    for name, fn, h in (("trim", cmd_trim, "remove useless states"),
                        ("semtrim", cmd_semtrim, "remove states on no nonzero run"),
                        ("transpose", cmd_transpose, "reverse the automaton"),
                        ("is-bidet", cmd_is_bidet, "check bideterminism"),
                        ("minimize", cmd_minimize, "minimise over a field")):
        add(name, fn, h).add_argument("file")
    sp = add("equiv", cmd_equiv, "compare two automata")
    sp.add_argument("first")
    sp.add_argument("second")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--exact-finite", dest="method", action="store_const", const="exact-finite")
    g.add_argument("--field", dest="method", action="store_const", const="field")
    g.add_argument("--tropical", dest="method", action="store_const", const="tropical")
    g.add_argument("--max-len", type=int, default=None)
    sp = add("bideterminize", cmd_bideterminize, "decide bideterminisability")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=("field", "tropical"))
    sp = add("gallery", cmd_gallery, "build a worked example and check its claims")
    sp.add_argument("name", choices=NAMES)
    sp.add_argument("params", nargs="*", help="key=value parameters")
    sp.add_argument("--part", help="emit a companion automaton instead (e.g. fig3)")
    sp.add_argument("--out", help="also write the automaton to this file")
    sp = add("oracle-search", cmd_oracle_search, "search small bideterministic equivalents")
    sp.add_argument("file")
    sp.add_argument("--max-states", type=int, default=4)
    sp = add("lemma-check", cmd_lemma_check, "brute-force the Z/p^kZ submodule lemma")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--n", type=int, default=2)
    sp = add("export-dot", cmd_export_dot, "render as Graphviz DOT")
    sp.add_argument("file")
    sp.add_argument("--graph-name", default="A")
    sp.add_argument("--out")
    return p


def run_command(argv):
    """``(exit status, record)`` for one invocation."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return EXIT_USAGE, {"command": None, "error": str(exc)}
    if args.command is None:
        return EXIT_USAGE, {"command": None, "error": "no subcommand given"}
    rec = {"command": args.command}
    try:
        rec.update(args.fn(args))
        return EXIT_OK, rec
    except (UsageError, HypothesisError) as exc:
        status, message = EXIT_USAGE, str(exc)
    except FormatError as exc:
        status, message = EXIT_INPUT, str(exc)
    except (Unsupported, SemiringError, BudgetExceeded, ValueError) as exc:
        status, message = EXIT_UNSUPPORTED, str(exc)
    rec["error"] = message
    return status, rec


def _human(rec) -> str:
    if "error" in rec:
        return f"error: {rec['error']}"
    parts = [f"{k}: {v}" for k, v in rec.items() if k not in ("automaton", "witness", "dot", "command")]
    if "dot" in rec:
        parts.append(rec["dot"])
    return f"{rec['command']}: " + "; ".join(parts)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    status, rec = run_command(argv)
    print(json.dumps(rec, ensure_ascii=False, separators=(",", ":")))
    if "-q" not in argv and "--quiet" not in argv:
        print(_human(rec), file=sys.stderr)
    return status
