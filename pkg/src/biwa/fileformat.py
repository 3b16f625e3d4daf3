"""The ``.wa`` automaton file format (JSON, UTF-8).

Example::

    {
      "semiring": {"kind": "mod-int", "m": 6},
      "alphabet": ["a"],
      "states": 2,
      "initial": [[1, "1"]],
      "final": [[2, "3"]],
      "transitions": [
        [1, "a", 2, "2"]
      ]
    }

Weights are literals in the semiring's grammar.  Writing is canonical:
fixed key order, entries sorted, one transition per line.
"""
from __future__ import annotations

import json

from .automaton import AutomatonError, WeightedAutomaton
from .semiring import Semiring, SemiringError

KEYS = ("semiring", "alphabet", "states", "initial", "final", "transitions")


class FormatError(ValueError):
    """Syntax or semantic error in an automaton file; ``where`` locates it."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def _dump(x) -> str:
    return json.dumps(x, ensure_ascii=False)


def automaton_to_dict(A: WeightedAutomaton) -> dict:
    S = A.semiring
    pos = {c: i for i, c in enumerate(A.alphabet)}
    return {
        "semiring": S.spec(),
        "alphabet": list(A.alphabet),
        "states": A.n,
        "initial": [[q, str(v)] for q, v in sorted(A.iota.items())],
        "final": [[q, str(v)] for q, v in sorted(A.tau.items())],
        "transitions": [[p, c, q, str(v)] for (p, c, q), v in
                        sorted(A.sigma.items(), key=lambda kv: (kv[0][0], pos[kv[0][1]], kv[0][2]))],
    }


def format_automaton(A: WeightedAutomaton) -> str:
    d = automaton_to_dict(A)
    lines = ["{"]
    for key in KEYS:
        value = d[key]
        if key == "transitions" and value:
            body = ",\n".join("    " + _dump(t) for t in value)
            text = f"[\n{body}\n  ]"
        else:
            text = _dump(value)
        lines.append(f"  {_dump(key)}: {text}" + ("," if key != KEYS[-1] else ""))
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_automaton(A: WeightedAutomaton) -> bytes:
    return format_automaton(A).encode("utf-8")


def _expect(cond, message, where):
    if not cond:
        raise FormatError(message, where)


def _state(x, n, where):
    _expect(isinstance(x, int) and not isinstance(x, bool), "state must be an integer", where)
    _expect(1 <= x <= n, f"state {x} outside 1..{n}", where)
    return x


def _weight(S: Semiring, text, where):
    _expect(isinstance(text, str), "weight must be a string literal", where)
    try:
        v = S.parse(text)
    except SemiringError as exc:
        raise FormatError(str(exc), where) from None
    _expect(not v.is_zero, f"zero weight stored ({text!r} is the zero of {S})", where)
    return v


def automaton_from_dict(d) -> WeightedAutomaton:
    _expect(isinstance(d, dict), "top level must be an object", "")
    missing = [k for k in KEYS if k not in d]
    _expect(not missing, f"missing keys {missing}", "")
    extra = sorted(set(d) - set(KEYS))
    _expect(not extra, f"unknown keys {extra}", "")
    try:
        _expect(isinstance(d["semiring"], dict), "must be an object", "semiring")
        S = Semiring.from_spec(d["semiring"])
    except SemiringError as exc:
        raise FormatError(str(exc), "semiring") from None
    alphabet = d["alphabet"]
    _expect(isinstance(alphabet, list) and all(isinstance(c, str) and len(c) == 1 for c in alphabet),
            "must be a list of single-character strings", "alphabet")
    _expect(len(set(alphabet)) == len(alphabet), "repeated symbol", "alphabet")
    n = d["states"]
    _expect(isinstance(n, int) and not isinstance(n, bool) and n >= 0, "must be a nonnegative integer", "states")

    def entries(key, arity):
        items = d[key]
        _expect(isinstance(items, list), "must be a list", key)
        for i, item in enumerate(items):
            where = f"{key}[{i}]"
            _expect(isinstance(item, list) and len(item) == arity, f"entry must have {arity} fields", where)
            yield where, item

    maps = {}
    for key in ("initial", "final"):
        m = {}
        for where, (q, w) in entries(key, 2):
            q = _state(q, n, where)
            _expect(q not in m, f"state {q} listed twice", where)
            m[q] = _weight(S, w, where)
        maps[key] = m
    sigma = {}
    for where, (p, c, q, w) in entries("transitions", 4):
        p, q = _state(p, n, where), _state(q, n, where)
        _expect(c in alphabet, f"symbol {c!r} not in the alphabet", where)
        _expect((p, c, q) not in sigma, "transition listed twice", where)
        sigma[(p, c, q)] = _weight(S, w, where)
    try:
        return WeightedAutomaton(S, alphabet, n, sigma, maps["initial"], maps["final"])
    except AutomatonError as exc:
        raise FormatError(str(exc)) from None


def parse_automaton(data) -> WeightedAutomaton:
    """Parse bytes or text in the ``.wa`` format."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"not UTF-8 ({exc.reason})", f"byte {exc.start}") from None
    try:
        d = json.loads(data)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return automaton_from_dict(d)


def read_automaton(path) -> WeightedAutomaton:
    with open(path, "rb") as fh:
        return parse_automaton(fh.read())
