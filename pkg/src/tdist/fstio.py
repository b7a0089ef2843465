"""Reading and writing the line-based FST text format.

::

    fst <name>
    inputs a b
    outputs a b
    state q0 initial final ""
    q0 q1 a "b"
    end

``#`` starts a comment.  A document holds one or more ``fst`` blocks; a
document with several blocks describes the union of their relations.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field

from .core import MachineDescription, MultiTapeTransducer, StateDecl, TransitionDecl, build_machine, describe
from .errors import DuplicateName, EmptyDocument, FstSyntaxError


@dataclass
class FstDocument:
    machines: list[MultiTapeTransducer] = field(default_factory=list)

    @property
    def names(self) -> list[str]:
        return [m.name for m in self.machines]

    def __len__(self):
        return len(self.machines)

    def __iter__(self):
        return iter(self.machines)

    def __getitem__(self, i):
        return self.machines[i]


def _split(line: str, lineno: int) -> list[str]:
    lexer = shlex.shlex(line, posix=True)
    lexer.whitespace_split = True
    lexer.commenters = "#"
    try:
        return list(lexer)
    except ValueError as exc:
        raise FstSyntaxError(str(exc), lineno, line.find('"') + 1 or None) from None


def _column(line: str, token: str) -> int | None:
    pos = line.find(token)
    return pos + 1 if pos >= 0 else None


def _letters(tokens, line, lineno) -> list[str]:
    for tok in tokens:
        if len(tok) != 1:
            raise FstSyntaxError(f"letters are single characters, got {tok!r}", lineno, _column(line, tok))
    return list(tokens)


def parse_fst(text: str, *, sequential: bool = False) -> FstDocument:
    """Parse a document; semantic checks are left to :func:`build_machine`."""
    doc = FstDocument()
    names = set()
    current = None
    start_line = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _split(line, lineno)
        if not tokens:
            continue
        head = tokens[0]
        if current is None:
            if head != "fst":
                raise FstSyntaxError(f"expected 'fst <name>', got {head!r}", lineno, _column(line, head))
            if len(tokens) != 2:
                raise FstSyntaxError("'fst' takes exactly one name", lineno, 1)
            if tokens[1] in names:
                raise DuplicateName(f"machine {tokens[1]!r} defined twice", lineno, _column(line, tokens[1]))
            names.add(tokens[1])
            current = MachineDescription(tokens[1], [], [], [], [])
            start_line = lineno
            continue
        if head == "end":
            if len(tokens) != 1:
                raise FstSyntaxError("'end' takes no arguments", lineno, _column(line, tokens[1]))
            doc.machines.append(build_machine(current, sequential=sequential))
            current = None
        elif head == "inputs":
            current.inputs.extend(_letters(tokens[1:], line, lineno))
        elif head == "outputs":
            current.outputs.extend(_letters(tokens[1:], line, lineno))
        elif head == "state":
            current.states.append(_state(tokens, line, lineno))
        elif len(tokens) == 4:
            src, dst, letter, out = tokens
            if len(letter) != 1:
                raise FstSyntaxError(f"input letter must be one character, got {letter!r}",
                                     lineno, _column(line, letter))
            current.transitions.append(TransitionDecl(src, dst, letter, out))
        else:
            raise FstSyntaxError(f"cannot parse {line.strip()!r}", lineno, 1)
    if current is not None:
        raise FstSyntaxError(f"block {current.name!r} opened here is never closed", start_line, 1)
    if not doc.machines:
        raise EmptyDocument("document contains no machine")
    return doc


def _state(tokens, line, lineno) -> StateDecl:
    if len(tokens) < 2:
        raise FstSyntaxError("'state' needs an id", lineno, 1)
    name, initial, final = tokens[1], False, None
    rest = tokens[2:]
    i = 0
    while i < len(rest):
        tok = rest[i]
        if tok == "initial" and not initial:
            initial = True
            i += 1
        elif tok == "final" and final is None:
            if i + 1 >= len(rest):
                raise FstSyntaxError("'final' needs an output word", lineno, _column(line, "final"))
            final = rest[i + 1]
            i += 2
        else:
            raise FstSyntaxError(f"unexpected {tok!r} in state declaration", lineno, _column(line, tok))
    return StateDecl(name, initial, final)


def _quote(word: str) -> str:
    if any(c in word for c in "\"'\\#$`") or any(c.isspace() for c in word):
        return shlex.quote(word)
    return '"' + word + '"'


def _token(name: str) -> str:
    return name if name and shlex.quote(name) == name else _quote(name)


def serialize_machine(machine: MultiTapeTransducer) -> str:
    desc = describe(machine)
    lines = [f"fst {_token(desc.name or 'M')}",
             "inputs " + " ".join(map(_token, desc.inputs)),
             "outputs " + " ".join(map(_token, desc.outputs))]
    for st in desc.states:
        parts = ["state", _token(st.name)]
        if st.initial:
            parts.append("initial")
        if st.final is not None:
            parts += ["final", _quote(st.final)]
        lines.append(" ".join(parts))
    for t in desc.transitions:
        lines.append(f"{_token(t.src)} {_token(t.dst)} {_token(t.letter)} {_quote(t.output)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def serialize_fst(doc: FstDocument | list[MultiTapeTransducer]) -> str:
    machines = doc.machines if isinstance(doc, FstDocument) else list(doc)
    return "\n".join(serialize_machine(m) for m in machines)


def load_fst(path, *, sequential: bool = False) -> FstDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_fst(fh.read(), sequential=sequential)


def machine(text: str) -> MultiTapeTransducer:
    """The single machine of a one-block document."""
    doc = parse_fst(text)
    if len(doc) != 1:
        raise FstSyntaxError(f"expected one machine, found {len(doc)}")
    return doc[0]
