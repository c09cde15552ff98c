"""Plain-text machine format: parsing and order-stable serialization.

One directive per line; lines whose first non-blank character is '#'
are comments ('#' can still be an alphabet symbol inside a directive).

    type: nft
    alphabet: a b
    outputs: c d
    states: q0 q1
    initial: q0
    final: q1
    trans: q0 a q1 "cd"

Transition shapes per kind:
    buchi      trans: q a q'
    nft        trans: q a q' "out"
    2dbt       trans: q a q' "out" +1
    2dft-pla   trans: q a p q' "out" -1

2dft-pla files embed their look-ahead as an indented buchi block:

    lookahead:
      alphabet: ^ a b
      states: p1 p2
      initial: p1
      final: p2
      trans: p1 a p2

The endmarker is written ^.  Output words are quoted, the empty output
is "".  UP words elsewhere on the command line are written u(v), e.g.
ab(ba) or (b); the empty finite word is _.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .buchi import BuchiAutomaton
from .oneway import Transducer, transducer
from .twoway import TwoWayPLA, TwoWayTransducer, two_way, two_way_pla
from .words import UPWord, Word, up_word

Machine = Union[BuchiAutomaton, Transducer, TwoWayTransducer, TwoWayPLA]

KINDS = ("buchi", "nft", "2dbt", "2dft-pla")

FIXTURE_NAMES = ("t_nc", "t_c", "t_inf", "f_inf", "j", "dbl", "t_c_2way")


def fixture_path(name: str) -> str:
    """Path of one of the machine files shipped with the package."""
    from importlib import resources
    if name not in FIXTURE_NAMES:
        raise ValueError(f"unknown fixture {name!r}; "
                         f"have {', '.join(FIXTURE_NAMES)}")
    return str(resources.files("omegacont") / "machines" / f"{name}.txt")


class ParseError(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class ValidationError(Exception):
    pass


@dataclass(frozen=True)
class MachineFile:
    kind: str
    machine: Machine


# ---------------------------------------------------------------------------
# UP words and finite words

def parse_word(text: str) -> Word:
    if text == "_":
        return ()
    return tuple(text)


def format_word(w: Word) -> str:
    return "".join(map(str, w)) if w else "_"


def parse_up(text: str) -> UPWord:
    open_at = text.find("(")
    if open_at < 0 or not text.endswith(")"):
        raise ValueError(f"UP word must look like u(v): {text!r}")
    prefix, period = text[:open_at], text[open_at + 1:-1]
    if not period:
        raise ValueError(f"empty period in {text!r}")
    if prefix == "_":
        prefix = ""
    return up_word(prefix, period)


def format_up(x: UPWord) -> str:
    return "".join(map(str, x.prefix)) + \
        "(" + "".join(map(str, x.period)) + ")"


# ---------------------------------------------------------------------------
# Parsing

def _split_lines(text: str):
    """(lineno, indented, directive, payload) for every directive line."""
    for i, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        head, _, payload = stripped.partition(":")
        if not _ or " " in head:
            raise ParseError(i, f"expected 'directive: ...', got {raw!r}")
        yield i, raw[0].isspace(), head, payload.strip()


def _parse_quoted(lineno: int, tok: str) -> Word:
    if len(tok) < 2 or tok[0] != '"' or tok[-1] != '"':
        raise ParseError(lineno, f"output must be quoted, got {tok!r}")
    return tuple(tok[1:-1])


def _parse_direction(lineno: int, tok: str) -> int:
    if tok not in ("+1", "-1"):
        raise ParseError(lineno, f"direction must be +1 or -1, got {tok!r}")
    return 1 if tok == "+1" else -1


_TRANS_ARITY = {"buchi": 3, "nft": 4, "2dbt": 5, "2dft-pla": 6}


def _parse_trans(kind: str, lineno: int, payload: str):
    toks = payload.split()
    if len(toks) != _TRANS_ARITY[kind]:
        raise ParseError(lineno, f"{kind} transition needs "
                         f"{_TRANS_ARITY[kind]} fields, got {len(toks)}")
    if kind == "buchi":
        return tuple(toks)
    if kind == "nft":
        q, a, r, out = toks
        return (q, a, r, _parse_quoted(lineno, out))
    if kind == "2dbt":
        q, a, r, out, d = toks
        return (q, a, r, _parse_quoted(lineno, out),
                _parse_direction(lineno, d))
    q, a, p, r, out, d = toks
    return (q, a, p, r, _parse_quoted(lineno, out),
            _parse_direction(lineno, d))


_SET_DIRECTIVES = ("alphabet", "outputs", "states", "initial", "final")


def _collect(lines, kind: str):
    got = {k: None for k in _SET_DIRECTIVES}
    trans = []
    for lineno, _, head, payload in lines:
        if head in _SET_DIRECTIVES:
            if got[head] is not None:
                raise ParseError(lineno, f"duplicate directive {head!r}")
            got[head] = payload.split()
        elif head == "trans":
            trans.append(_parse_trans(kind, lineno, payload))
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")
    return got, trans


def _require(got, lineno, *keys):
    for k in keys:
        if got[k] is None:
            raise ParseError(lineno, f"missing directive {k!r}")


def parse_spec(text: str) -> MachineFile:
    lines = list(_split_lines(text))
    if not lines or lines[0][2] != "type":
        raise ParseError(lines[0][0] if lines else 1,
                         "first directive must be 'type:'")
    lineno, _, _, kind = lines[0]
    if kind not in KINDS:
        raise ParseError(lineno, f"unknown machine kind {kind!r}")
    body = lines[1:]

    la_block = None
    if kind == "2dft-pla":
        for i, (ln, indented, head, payload) in enumerate(body):
            if head == "lookahead":
                if payload:
                    raise ParseError(ln, "'lookahead:' takes no payload")
                block = []
                j = i + 1
                while j < len(body) and body[j][1]:
                    block.append(body[j])
                    j += 1
                la_block = block
                body = body[:i] + body[j:]
                break
        if la_block is None:
            raise ParseError(lineno, "2dft-pla file needs a lookahead block")

    got, trans = _collect(body, kind)
    last = body[-1][0] if body else lineno
    try:
        if kind == "buchi":
            _require(got, last, "alphabet", "states", "initial", "final")
            m = BuchiAutomaton(frozenset(got["alphabet"]),
                               frozenset(got["states"]), frozenset(trans),
                               frozenset(got["initial"]),
                               frozenset(got["final"]))
        elif kind == "nft":
            _require(got, last, "alphabet", "outputs", "states",
                     "initial", "final")
            m = transducer(got["alphabet"], got["outputs"], got["states"],
                           trans, got["initial"], got["final"])
        elif kind == "2dbt":
            _require(got, last, "alphabet", "outputs", "states",
                     "initial", "final")
            if len(got["initial"]) != 1:
                raise ValidationError("2dbt needs exactly one initial state")
            m = two_way(got["alphabet"], got["outputs"], got["states"],
                        trans, got["initial"][0], got["final"])
        else:
            _require(got, last, "alphabet", "outputs", "states", "initial")
            if got["final"] is not None:
                raise ValidationError(
                    "2dft-pla acceptance lives on the look-ahead")
            if len(got["initial"]) != 1:
                raise ValidationError(
                    "2dft-pla needs exactly one initial state")
            la_got, la_trans = _collect(la_block, "buchi")
            la_line = la_block[-1][0] if la_block else lineno
            _require(la_got, la_line, "alphabet", "states", "initial",
                     "final")
            la = BuchiAutomaton(frozenset(la_got["alphabet"]),
                                frozenset(la_got["states"]),
                                frozenset(la_trans),
                                frozenset(la_got["initial"]),
                                frozenset(la_got["final"]))
            for (q, a, p, r, g, d) in trans:
                if p not in la.states:
                    raise ValidationError(
                        f"transition refers to unknown look-ahead state {p!r}")
            m = two_way_pla(got["alphabet"], got["outputs"], got["states"],
                            trans, got["initial"][0], la)
    except ValueError as e:
        raise ValidationError(str(e)) from e
    return MachineFile(kind, m)


# ---------------------------------------------------------------------------
# Serialization

def kind_of(machine: Machine) -> str:
    if isinstance(machine, BuchiAutomaton):
        return "buchi"
    if isinstance(machine, Transducer):
        return "nft"
    if isinstance(machine, TwoWayPLA):
        return "2dft-pla"
    if isinstance(machine, TwoWayTransducer):
        return "2dbt"
    raise TypeError(f"not a machine: {machine!r}")


def _names(items):
    """Stable printable names; tuples and other composites get fresh
    token names so anything (trimmed products, closures) serializes."""
    out = {}
    plain = all(isinstance(q, str) and q and not any(c.isspace() for c in q)
                for q in items)
    for i, q in enumerate(sorted(items, key=str)):
        out[q] = q if plain else f"s{i}"
    return out


def _quote(g: Word) -> str:
    return '"' + "".join(map(str, g)) + '"'


def _set_line(label, names):
    return f"{label}: " + " ".join(sorted(names, key=str))


def _buchi_lines(a: BuchiAutomaton, indent=""):
    nm = _names(a.states)
    lines = [indent + _set_line("alphabet", a.alphabet),
             indent + _set_line("states", nm.values()),
             indent + _set_line("initial", {nm[q] for q in a.initial}),
             indent + _set_line("final", {nm[q] for q in a.final})]
    for (q, x, r) in sorted(a.transitions, key=str):
        lines.append(f"{indent}trans: {nm[q]} {x} {nm[r]}")
    return lines


def serialize(machine: Machine) -> str:
    kind = kind_of(machine)
    lines = [f"type: {kind}"]
    if kind == "buchi":
        lines += _buchi_lines(machine)
        return "\n".join(lines) + "\n"
    m = machine
    nm = _names(m.states)
    lines += [_set_line("alphabet", m.alphabet),
              _set_line("outputs", m.output_alphabet),
              _set_line("states", nm.values()),
              _set_line("initial", [nm[q] for q in
                                    (m.initial if kind == "nft"
                                     else [m.initial])])]
    if kind == "nft":
        lines.append(_set_line("final", {nm[q] for q in m.final}))
        for (q, a, r, g) in sorted(m.transitions, key=str):
            lines.append(f"trans: {nm[q]} {a} {nm[r]} {_quote(g)}")
    elif kind == "2dbt":
        lines.append(_set_line("final", {nm[q] for q in m.final}))
        for (q, a), (r, g, d) in sorted(m.delta.items(), key=str):
            lines.append(f"trans: {nm[q]} {a} {nm[r]} {_quote(g)} "
                         f"{'+1' if d == 1 else '-1'}")
    else:
        lines.append("lookahead:")
        lines += _buchi_lines(m.lookahead.automaton, indent="  ")
        pn = _names(m.lookahead.automaton.states)
        for (q, a, p), (r, g, d) in sorted(m.delta.items(), key=str):
            lines.append(f"trans: {nm[q]} {a} {pn[p]} {nm[r]} {_quote(g)} "
                         f"{'+1' if d == 1 else '-1'}")
    return "\n".join(lines) + "\n"
