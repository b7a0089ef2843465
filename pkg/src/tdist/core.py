"""Multi-tape transducers, finite automata and the classical algorithms on them.

A :class:`MultiTapeTransducer` is a real-time transducer whose transitions and
final states carry one output word per tape.  Single-tape machines are the
ordinary transducers read from files; products stack the tapes of their
components.  States are always the integers ``0 .. num_states - 1``; human
readable names live in ``labels``.

Input letters are arbitrary hashable values (single characters for machines
read from text, annotated tuples for synchronised products).  Output words
are plain strings.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    AlphabetMismatch,
    ArityMismatch,
    DuplicateTransitionOnSequentialFlag,
    EmptyMachine,
    IndexOutOfRange,
    NonSequentialComponent,
    TransducerError,
    UndeclaredState,
    UndeclaredSymbol,
)

SINK_LABEL = "⊥"


@dataclass(frozen=True)
class Transition:
    src: int
    letter: Hashable
    dst: int
    outputs: tuple[str, ...]


class StateDecl(NamedTuple):
    name: str
    initial: bool = False
    final: str | None = None


class TransitionDecl(NamedTuple):
    src: str
    dst: str
    letter: str
    output: str


@dataclass
class MachineDescription:
    """A single-tape machine as written by a user, with named states."""

    name: str
    inputs: list[str]
    outputs: list[str]
    states: list[StateDecl]
    transitions: list[TransitionDecl]


@dataclass(frozen=True, eq=False)
class MultiTapeTransducer:
    num_states: int
    inputs: tuple
    outputs: tuple[str, ...]
    initial: frozenset
    transitions: tuple[Transition, ...]
    finals: dict
    tapes: int = 1
    labels: tuple[str, ...] | None = None
    # per state, finality of each product component (set by stack_product)
    component_finals: tuple[tuple[bool, ...], ...] | None = None
    name: str = ""

    def __post_init__(self):
        n = self.num_states
        if self.tapes < 1:
            raise ArityMismatch("a machine needs at least one tape")
        if len(set(self.inputs)) != len(self.inputs):
            raise TransducerError("duplicate input letters")
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "finals", dict(self.finals))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(q) for q in range(n)))
        elif len(self.labels) != n:
            raise TransducerError("one label per state expected")
        if self.component_finals is not None and len(self.component_finals) != n:
            raise TransducerError("one finality vector per state expected")

        letters = set(self.inputs)
        out_letters = set(self.outputs)
        for q in self.initial:
            if not 0 <= q < n:
                raise UndeclaredState(f"initial state {q} out of range")
        for t in self.transitions:
            if not (0 <= t.src < n and 0 <= t.dst < n):
                raise UndeclaredState(f"transition {t} uses an undeclared state")
            if t.letter not in letters:
                raise UndeclaredSymbol(f"input letter {t.letter!r} not declared")
            self._check_outputs(t.outputs, out_letters)
        for q, outs in self.finals.items():
            if not 0 <= q < n:
                raise UndeclaredState(f"final state {q} out of range")
            self._check_outputs(outs, out_letters)

    def _check_outputs(self, outs, out_letters):
        if len(outs) != self.tapes:
            raise ArityMismatch(f"expected {self.tapes} output words, got {len(outs)}")
        for word in outs:
            for c in word:
                if c not in out_letters:
                    raise UndeclaredSymbol(f"output letter {c!r} not declared")

    @property
    def states(self) -> range:
        return range(self.num_states)

    @cached_property
    def _out(self) -> list[list[Transition]]:
        out = [[] for _ in range(self.num_states)]
        for t in self.transitions:
            out[t.src].append(t)
        return out

    @cached_property
    def _step(self) -> dict:
        step = {}
        for t in self.transitions:
            step.setdefault((t.src, t.letter), []).append(t)
        return step

    def out_transitions(self, q: int) -> list[Transition]:
        return self._out[q]

    def step(self, q: int, letter) -> list[Transition]:
        return self._step.get((q, letter), [])

    def is_final(self, q: int) -> bool:
        return q in self.finals

    @cached_property
    def is_sequential(self) -> bool:
        return len(self.initial) == 1 and all(len(ts) == 1 for ts in self._step.values())

    @cached_property
    def is_complete(self) -> bool:
        return all((q, a) in self._step for q in self.states for a in self.inputs)

    @cached_property
    def is_trim(self) -> bool:
        return len(useful_states(self)) == self.num_states

    @property
    def is_empty(self) -> bool:
        return not useful_states(self)

    def delta(self, q: int, letter) -> Transition | None:
        """The unique transition of a sequential machine, or None."""
        ts = self._step.get((q, letter))
        return ts[0] if ts else None

    def __repr__(self):
        return (
            f"<MultiTapeTransducer {self.name or ''} states={self.num_states} "
            f"tapes={self.tapes} transitions={len(self.transitions)}>"
        )


def build_machine(desc: MachineDescription, *, sequential: bool = False) -> MultiTapeTransducer:
    """Validate a user description and turn it into a single-tape machine.

    With ``sequential=True`` the description must be deterministic.
    """
    if not desc.states:
        raise EmptyMachine(f"machine {desc.name!r} declares no states")
    if not desc.inputs:
        raise TransducerError(f"machine {desc.name!r} declares no input letters")
    for alphabet in (desc.inputs, desc.outputs):
        if len(set(alphabet)) != len(alphabet):
            raise TransducerError(f"duplicate letters in alphabet of {desc.name!r}")
    index = {}
    for decl in desc.states:
        if decl.name in index:
            raise TransducerError(f"state {decl.name!r} declared twice")
        index[decl.name] = len(index)

    def sid(name):
        if name not in index:
            raise UndeclaredState(f"state {name!r} is not declared in {desc.name!r}")
        return index[name]

    transitions = []
    seen = set()
    for td in desc.transitions:
        t = Transition(sid(td.src), td.letter, sid(td.dst), (td.output,))
        if sequential and (t.src, t.letter) in seen:
            raise DuplicateTransitionOnSequentialFlag(
                f"state {td.src!r} has two transitions on {td.letter!r}"
            )
        seen.add((t.src, t.letter))
        transitions.append(t)
    initial = [index[d.name] for d in desc.states if d.initial]
    if sequential and len(initial) != 1:
        raise DuplicateTransitionOnSequentialFlag("a sequential machine has exactly one initial state")
    finals = {index[d.name]: (d.final,) for d in desc.states if d.final is not None}
    return MultiTapeTransducer(
        num_states=len(index),
        inputs=tuple(desc.inputs),
        outputs=tuple(desc.outputs),
        initial=frozenset(initial),
        transitions=tuple(transitions),
        finals=finals,
        labels=tuple(d.name for d in desc.states),
        name=desc.name,
    )


def describe(machine: MultiTapeTransducer) -> MachineDescription:
    """Inverse of :func:`build_machine` for single-tape machines."""
    if machine.tapes != 1:
        raise ArityMismatch("only single-tape machines can be described")
    names = list(machine.labels)
    if len(set(names)) != len(names):
        names = [f"s{q}" for q in machine.states]
    states = [
        StateDecl(
            names[q],
            q in machine.initial,
            machine.finals[q][0] if q in machine.finals else None,
        )
        for q in machine.states
    ]
    transitions = [
        TransitionDecl(names[t.src], names[t.dst], t.letter, t.outputs[0])
        for t in machine.transitions
    ]
    return MachineDescription(
        machine.name, list(machine.inputs), list(machine.outputs), states, transitions
    )


# ---------------------------------------------------------------------------
# Reachability, trimming, completion


def _forward(machine: MultiTapeTransducer, sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for t in machine.out_transitions(q):
            if t.dst not in seen:
                seen.add(t.dst)
                todo.append(t.dst)
    return seen


def _backward(machine: MultiTapeTransducer, targets: Iterable[int]) -> set[int]:
    preds = [[] for _ in machine.states]
    for t in machine.transitions:
        preds[t.dst].append(t.src)
    seen = set(targets)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for p in preds[q]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def useful_states(machine: MultiTapeTransducer) -> set[int]:
    """States lying on at least one accepting run."""
    return _forward(machine, machine.initial) & _backward(machine, machine.finals)


def _letter_rank(machine: MultiTapeTransducer) -> dict:
    return {a: i for i, a in enumerate(machine.inputs)}


def _renumber(
    machine: MultiTapeTransducer, keep: set[int], transitions: Iterable[Transition] | None = None,
    initial: Iterable[int] | None = None, finals: dict | None = None,
) -> MultiTapeTransducer:
    """Restrict to ``keep`` and renumber in canonical breadth-first order."""
    rank = _letter_rank(machine)
    if transitions is None:
        transitions = machine.transitions
    transitions = [t for t in transitions if t.src in keep and t.dst in keep]
    initial = sorted(q for q in (machine.initial if initial is None else initial) if q in keep)
    finals = {q: o for q, o in (machine.finals if finals is None else finals).items() if q in keep}

    out = {}
    for t in transitions:
        out.setdefault(t.src, []).append(t)
    for ts in out.values():
        ts.sort(key=lambda t: (rank[t.letter], t.outputs, t.dst))

    order = {}
    queue = deque()
    for q in initial:
        if q not in order:
            order[q] = len(order)
            queue.append(q)
    while queue:
        q = queue.popleft()
        for t in out.get(q, ()):
            if t.dst not in order:
                order[t.dst] = len(order)
                queue.append(t.dst)
    for q in sorted(keep):  # unreachable leftovers, only when not trim
        if q not in order:
            order[q] = len(order)

    new_transitions = sorted(
        (Transition(order[t.src], t.letter, order[t.dst], t.outputs) for t in transitions),
        key=lambda t: (t.src, rank[t.letter], t.outputs, t.dst),
    )
    inverse = sorted(order, key=order.get)
    return MultiTapeTransducer(
        num_states=len(order),
        inputs=machine.inputs,
        outputs=machine.outputs,
        initial=frozenset(order[q] for q in initial),
        transitions=tuple(new_transitions),
        finals={order[q]: o for q, o in finals.items()},
        tapes=machine.tapes,
        labels=tuple(machine.labels[q] for q in inverse),
        component_finals=(
            None if machine.component_finals is None
            else tuple(machine.component_finals[q] for q in inverse)
        ),
        name=machine.name,
    )


def trim(machine: MultiTapeTransducer) -> MultiTapeTransducer:
    """Remove every state that lies on no accepting run; the relation is unchanged."""
    return _renumber(machine, useful_states(machine))


def complete(machine: MultiTapeTransducer) -> MultiTapeTransducer:
    """Route every missing (state, letter) to one fresh non-final sink.

    The sink outputs the empty word on every tape, so neither the relation
    nor the set of accepting runs changes.  Complete machines are returned
    as they are.
    """
    missing = [(q, a) for q in machine.states for a in machine.inputs if not machine.step(q, a)]
    if not missing:
        return machine
    sink = machine.num_states
    eps = ("",) * machine.tapes
    extra = [Transition(q, a, sink, eps) for q, a in missing]
    extra += [Transition(sink, a, sink, eps) for a in machine.inputs]
    cf = machine.component_finals
    if cf is not None:
        width = len(cf[0]) if cf else 0
        cf = cf + ((False,) * width,)
    return MultiTapeTransducer(
        num_states=sink + 1,
        inputs=machine.inputs,
        outputs=machine.outputs,
        initial=machine.initial,
        transitions=machine.transitions + tuple(extra),
        finals=machine.finals,
        tapes=machine.tapes,
        labels=machine.labels + (SINK_LABEL,),
        component_finals=cf,
        name=machine.name,
    )


def single_initial(machine: MultiTapeTransducer) -> MultiTapeTransducer:
    """Equivalent machine with at most one initial state.

    A fresh initial state copies the outgoing transitions of every old
    initial state.  Runs are in bijection with the old ones, so
    unambiguity is preserved.
    """
    if len(machine.initial) <= 1:
        return machine
    finals_here = [q for q in sorted(machine.initial) if q in machine.finals]
    if len(finals_here) > 1 and len({machine.finals[q] for q in finals_here}) > 1:
        # keep every epsilon output reachable: not expressible with one state
        raise TransducerError("several initial states produce different outputs on the empty word")
    new = machine.num_states
    extra = [
        Transition(new, t.letter, t.dst, t.outputs)
        for q in sorted(machine.initial)
        for t in machine.out_transitions(q)
    ]
    finals = dict(machine.finals)
    if finals_here:
        finals[new] = machine.finals[finals_here[0]]
    cf = machine.component_finals
    if cf is not None:
        cf = cf + (cf[min(machine.initial)],)
    return MultiTapeTransducer(
        num_states=new + 1,
        inputs=machine.inputs,
        outputs=machine.outputs,
        initial=frozenset([new]),
        transitions=machine.transitions + tuple(extra),
        finals=finals,
        tapes=machine.tapes,
        labels=machine.labels + ("init",),
        component_finals=cf,
        name=machine.name,
    )


# ---------------------------------------------------------------------------
# Products and projections


def stack_product(
    machines: Sequence[MultiTapeTransducer],
    final_policy: Callable[[tuple[bool, ...]], bool] | None = None,
) -> MultiTapeTransducer:
    """Synchronous product of sequential machines with concatenated tapes.

    A product state is final when ``final_policy`` accepts the vector of
    component finalities (default: every component final).  A component
    without a transition on a letter moves to an implicit non-final sink that
    outputs nothing, which is the same as completing it first.  Only the
    part reachable from the initial state is built; callers trim.
    """
    if not machines:
        raise TransducerError("stack_product needs at least one machine")
    alphabet = machines[0].inputs
    for m in machines:
        if set(m.inputs) != set(alphabet):
            raise AlphabetMismatch("all components must share one input alphabet")
        if len(m.initial) > 1 or not all(len(ts) == 1 for ts in m._step.values()):
            raise NonSequentialComponent(f"component {m.name or m!r} is not sequential")
    if final_policy is None:
        final_policy = all
    out_alphabet = tuple(dict.fromkeys(c for m in machines for c in m.outputs))
    eps = [("",) * m.tapes for m in machines]
    rank = {a: i for i, a in enumerate(alphabet)}

    def finality(state):
        return tuple(q is not None and machines[i].is_final(q) for i, q in enumerate(state))

    start = tuple(next(iter(m.initial)) if m.initial else None for m in machines)
    index = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        letters = set()
        for m, q in zip(machines, state):
            if q is not None:
                letters.update(t.letter for t in m.out_transitions(q))
        for a in sorted(letters, key=rank.__getitem__):
            nxt, outs = [], []
            for i, (m, q) in enumerate(zip(machines, state)):
                t = m.delta(q, a) if q is not None else None
                if t is None:
                    nxt.append(None)
                    outs.extend(eps[i])
                else:
                    nxt.append(t.dst)
                    outs.extend(t.outputs)
            nxt = tuple(nxt)
            if all(q is None for q in nxt):
                continue
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            transitions.append(Transition(index[state], a, index[nxt], tuple(outs)))

    finals = {}
    vectors = []
    for state in order:
        vec = finality(state)
        vectors.append(vec)
        if final_policy(vec):
            outs = []
            for i, (m, q) in enumerate(zip(machines, state)):
                outs.extend(m.finals[q] if vec[i] else eps[i])
            finals[index[state]] = tuple(outs)
    labels = tuple(
        "(" + ",".join(SINK_LABEL if q is None else m.labels[q] for m, q in zip(machines, state)) + ")"
        for state in order
    )
    return MultiTapeTransducer(
        num_states=len(order),
        inputs=alphabet,
        outputs=out_alphabet,
        initial=frozenset([0]),
        transitions=tuple(transitions),
        finals=finals,
        tapes=sum(m.tapes for m in machines),
        labels=labels,
        component_finals=tuple(vectors),
        name="×".join(m.name for m in machines if m.name),
    )


def project(machine: MultiTapeTransducer, tapes: Sequence[int]) -> MultiTapeTransducer:
    """Keep only the listed tapes, in the given order."""
    tapes = list(tapes)
    if not tapes:
        raise IndexOutOfRange("at least one tape must be selected")
    for i in tapes:
        if not 0 <= i < machine.tapes:
            raise IndexOutOfRange(f"tape {i} out of range for a {machine.tapes}-tape machine")
    pick = lambda outs: tuple(outs[i] for i in tapes)  # noqa: E731
    return MultiTapeTransducer(
        num_states=machine.num_states,
        inputs=machine.inputs,
        outputs=machine.outputs,
        initial=machine.initial,
        transitions=tuple(
            Transition(t.src, t.letter, t.dst, pick(t.outputs)) for t in machine.transitions
        ),
        finals={q: pick(o) for q, o in machine.finals.items()},
        tapes=len(tapes),
        labels=machine.labels,
        component_finals=machine.component_finals,
        name=machine.name,
    )


def restrict_finals(machine: MultiTapeTransducer, keep: Callable[[int], bool]) -> MultiTapeTransducer:
    """Same machine with only the final states satisfying ``keep``."""
    return MultiTapeTransducer(
        num_states=machine.num_states,
        inputs=machine.inputs,
        outputs=machine.outputs,
        initial=machine.initial,
        transitions=machine.transitions,
        finals={q: o for q, o in machine.finals.items() if keep(q)},
        tapes=machine.tapes,
        labels=machine.labels,
        component_finals=machine.component_finals,
        name=machine.name,
    )


def disjoint_union(machines: Sequence[MultiTapeTransducer]) -> MultiTapeTransducer:
    """One machine whose relation is the union of the components' relations."""
    if not machines:
        raise TransducerError("union of no machines")
    tapes = machines[0].tapes
    inputs = tuple(dict.fromkeys(a for m in machines for a in m.inputs))
    outputs = tuple(dict.fromkeys(c for m in machines for c in m.outputs))
    offset = 0
    initial, transitions, finals, labels = [], [], {}, []
    for m in machines:
        if m.tapes != tapes:
            raise ArityMismatch("union components must have the same number of tapes")
        initial += [q + offset for q in m.initial]
        transitions += [Transition(t.src + offset, t.letter, t.dst + offset, t.outputs) for t in m.transitions]
        finals.update({q + offset: o for q, o in m.finals.items()})
        labels += [f"{m.name}.{lab}" if m.name else lab for lab in m.labels]
        offset += m.num_states
    return MultiTapeTransducer(offset, inputs, outputs, frozenset(initial), tuple(transitions),
                               finals, tapes, tuple(labels))


# ---------------------------------------------------------------------------
# Strongly connected components and the paths through the condensation


def strongly_connected_components(machine: MultiTapeTransducer) -> list[frozenset[int]]:
    """Tarjan's algorithm (iterative); components come out in topological order."""
    succ = [sorted({t.dst for t in machine.out_transitions(q)}) for q in machine.states]
    index, low = {}, {}
    on_stack = set()
    stack, result = [], []
    counter = itertools.count()
    for root in machine.states:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                result.append(frozenset(comp))
    result.reverse()
    return result


def has_cycle(machine: MultiTapeTransducer, component: frozenset[int]) -> bool:
    """True when the component carries at least one loop."""
    return len(component) > 1 or any(
        t.dst == t.src for q in component for t in machine.out_transitions(q)
    )


@dataclass(frozen=True)
class SccPath:
    """Alternation of components and bridging transitions, initial to final."""

    sccs: tuple[frozenset[int], ...]
    bridges: tuple[Transition, ...]

    def describe(self, machine: MultiTapeTransducer) -> list[list[str]]:
        return [sorted(machine.labels[q] for q in scc) for scc in self.sccs]


def scc_paths(machine: MultiTapeTransducer) -> list[SccPath]:
    """Every path through the condensation, with every choice of bridge."""
    comps = strongly_connected_components(machine)
    comp_of = {q: c for c in comps for q in c}
    bridges_from = {c: [] for c in comps}
    rank = _letter_rank(machine)
    for t in sorted(machine.transitions, key=lambda t: (t.src, rank[t.letter], t.dst)):
        if comp_of[t.src] is not comp_of[t.dst]:
            bridges_from[comp_of[t.src]].append(t)

    paths = []

    def extend(sccs, bridges):
        current = sccs[-1]
        if any(q in machine.finals for q in current):
            paths.append(SccPath(tuple(sccs), tuple(bridges)))
        for t in bridges_from[current]:
            extend(sccs + [comp_of[t.dst]], bridges + [t])

    for c in comps:
        if c & machine.initial:
            extend([c], [])
    return paths


def sub_machine(machine: MultiTapeTransducer, path: SccPath) -> MultiTapeTransducer:
    """The trim sub-transducer keeping only ``path``'s components and bridges.

    Initial states are restricted to the first component and final states to
    the last one, so that every accepting run of a sequential machine belongs
    to exactly one path.
    """
    where = {}
    for k, scc in enumerate(path.sccs):
        for q in scc:
            where[q] = k
    bridges = set(path.bridges)
    kept = [
        t for t in machine.transitions
        if t in bridges or (t.src in where and where.get(t.dst) == where[t.src])
    ]
    first, last = path.sccs[0], path.sccs[-1]
    restricted = _renumber(
        machine, set(where), kept,
        initial=[q for q in machine.initial if q in first],
        finals={q: o for q, o in machine.finals.items() if q in last},
    )
    return trim(restricted)


# ---------------------------------------------------------------------------
# Finite automata


@dataclass(frozen=True, eq=False)
class Nfa:
    """Nondeterministic automaton; ``None`` as a letter is an epsilon move."""

    num_states: int
    alphabet: tuple
    initial: frozenset
    transitions: tuple[tuple[int, Hashable, int], ...]
    finals: frozenset
    epsilon: bool = False
    labels: tuple | None = None

    def __post_init__(self):
        letters = set(self.alphabet)
        for src, a, dst in self.transitions:
            if a is None:
                if not self.epsilon:
                    raise TransducerError("epsilon transition in an automaton not flagged for it")
            elif a not in letters:
                raise UndeclaredSymbol(f"letter {a!r} not in the alphabet")
            if not (0 <= src < self.num_states and 0 <= dst < self.num_states):
                raise UndeclaredState(f"transition ({src}, {a!r}, {dst}) out of range")

    @cached_property
    def _succ(self) -> list[dict]:
        succ = [dict() for _ in range(self.num_states)]
        for src, a, dst in self.transitions:
            succ[src].setdefault(a, set()).add(dst)
        return succ

    def closure(self, states: Iterable[int]) -> frozenset:
        result = set(states)
        if not self.epsilon:
            return frozenset(result)
        todo = list(result)
        while todo:
            q = todo.pop()
            for r in self._succ[q].get(None, ()):
                if r not in result:
                    result.add(r)
                    todo.append(r)
        return frozenset(result)

    def start(self) -> frozenset:
        return self.closure(self.initial)

    def post(self, states: Iterable[int], letter) -> frozenset:
        nxt = set()
        for q in states:
            nxt.update(self._succ[q].get(letter, ()))
        return self.closure(nxt)

    def letters_from(self, states: Iterable[int]) -> set:
        letters = set()
        for q in states:
            letters.update(self._succ[q])
        letters.discard(None)
        return letters

    def accepts(self, word: Iterable) -> bool:
        current = self.start()
        for a in word:
            current = self.post(current, a)
            if not current:
                return False
        return bool(current & self.finals)

    def is_empty(self) -> bool:
        return shortest_word(self) is None


def domain_nfa(machine: MultiTapeTransducer) -> Nfa:
    """Erase the outputs."""
    transitions = tuple(dict.fromkeys((t.src, t.letter, t.dst) for t in machine.transitions))
    return Nfa(machine.num_states, machine.inputs, machine.initial, transitions,
               frozenset(machine.finals), labels=machine.labels)


def union_nfa(automata: Sequence[Nfa]) -> Nfa:
    alphabet = tuple(dict.fromkeys(a for n in automata for a in n.alphabet))
    offset = 0
    initial, transitions, finals = [], [], []
    eps = False
    for n in automata:
        initial += [q + offset for q in n.initial]
        transitions += [(s + offset, a, d + offset) for s, a, d in n.transitions]
        finals += [q + offset for q in n.finals]
        eps = eps or n.epsilon
        offset += n.num_states
    return Nfa(offset, alphabet, frozenset(initial), tuple(transitions), frozenset(finals), eps)


def _rank_key(alphabet):
    rank = {a: i for i, a in enumerate(alphabet)}
    return lambda a: rank.get(a, len(rank))


def shortest_word(nfa: Nfa) -> tuple | None:
    """A shortest accepted word (length-lexicographic first), or None."""
    key = _rank_key(nfa.alphabet)
    start = nfa.start()
    parent = {start: None}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        if current & nfa.finals:
            word = []
            while parent[current] is not None:
                current, a = parent[current]
                word.append(a)
            return tuple(reversed(word))
        for a in sorted(nfa.letters_from(current), key=key):
            nxt = nfa.post(current, a)
            if nxt and nxt not in parent:
                parent[nxt] = (current, a)
                queue.append(nxt)
    return None


def inclusion_counterexample(a: Nfa, b: Nfa) -> tuple | None:
    """A word of L(a) outside L(b), or None when L(a) ⊆ L(b).

    Explores pairs (state of ``a``, subset of ``b``) on the fly, i.e. ``a``
    against the subset construction of ``b``.  A pair is skipped when an
    earlier pair has the same state of ``a`` and a smaller subset: whatever
    the larger subset fails to accept, the smaller one fails too.  Exact.
    """
    key = _rank_key(a.alphabet)
    start_b = b.start()
    parent = {}
    kept = {}  # state of a -> subsets explored with it, none containing another
    post = {}
    queue = deque()

    def subsumed(pair):
        q, subset = pair
        if pair in parent or any(old <= subset for old in kept.get(q, ())):
            return True
        kept[q] = [old for old in kept.get(q, ()) if not subset <= old] + [subset]
        return False

    for q in sorted(a.start()):
        pair = (q, start_b)
        if not subsumed(pair):
            parent[pair] = None
            queue.append(pair)
    while queue:
        pair = queue.popleft()
        q, subset = pair
        if q in a.finals and not (subset & b.finals):
            word = []
            while parent[pair] is not None:
                pair, letter = parent[pair]
                if letter is not None:
                    word.append(letter)
            return tuple(reversed(word))
        moves = []
        for letter, targets in a._succ[q].items():
            if letter is None:
                nxt_b = subset
            else:
                if (subset, letter) not in post:
                    post[subset, letter] = b.post(subset, letter)
                nxt_b = post[subset, letter]
            for r in targets:
                moves.append((letter, (r, nxt_b)))
        moves.sort(key=lambda m: (m[0] is not None, key(m[0]) if m[0] is not None else -1, m[1][0]))
        for letter, nxt in moves:
            if not subsumed(nxt):
                parent[nxt] = (pair, letter)
                queue.append(nxt)
    return None


def domain_included(a: Nfa, b: Nfa) -> bool:
    return inclusion_counterexample(a, b) is None


def domain_equal(a: Nfa, b: Nfa) -> bool:
    return domain_included(a, b) and domain_included(b, a)


def determinize(nfa: Nfa) -> Nfa:
    """Subset construction over the full alphabet (the empty set is the sink)."""
    start = nfa.start()
    index = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for a in nfa.alphabet:
            t = nfa.post(s, a)
            if t not in index:
                index[t] = len(order)
                order.append(t)
                queue.append(t)
            transitions.append((index[s], a, index[t]))
    finals = frozenset(index[s] for s in order if s & nfa.finals)
    return Nfa(len(order), nfa.alphabet, frozenset([0]), tuple(transitions), finals, labels=tuple(order))


def complement(nfa: Nfa) -> Nfa:
    d = determinize(nfa)
    return Nfa(d.num_states, d.alphabet, d.initial, d.transitions,
               frozenset(range(d.num_states)) - d.finals)


def boolean_product(automata: Sequence[Nfa], predicate: Callable[[tuple[bool, ...]], bool]) -> Nfa:
    """Deterministic automaton for a boolean combination of the languages.

    A word is accepted when ``predicate`` holds on the vector of memberships.
    """
    alphabet = tuple(dict.fromkeys(a for n in automata for a in n.alphabet))
    start = tuple(n.start() for n in automata)
    index = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for a in alphabet:
            t = tuple(n.post(part, a) for n, part in zip(automata, s))
            if t not in index:
                index[t] = len(order)
                order.append(t)
                queue.append(t)
            transitions.append((index[s], a, index[t]))
    vectors = tuple(tuple(bool(part & n.finals) for n, part in zip(automata, s)) for s in order)
    finals = frozenset(q for q, vec in enumerate(vectors) if predicate(vec))
    # labels hold the membership vector of every state
    return Nfa(len(order), alphabet, frozenset([0]), tuple(transitions), finals, labels=vectors)


# ---------------------------------------------------------------------------
# Structural comparison


def _signature(machine: MultiTapeTransducer, start: Sequence[int]):
    """Breadth-first relabelling from ``start``; canonical for deterministic machines."""
    rank = _letter_rank(machine)
    order = {}
    queue = deque()
    for q in start:
        order[q] = len(order)
        queue.append(q)
    while queue:
        q = queue.popleft()
        for t in sorted(machine.out_transitions(q), key=lambda t: (rank[t.letter], t.outputs)):
            if t.dst not in order:
                order[t.dst] = len(order)
                queue.append(t.dst)
    if len(order) != machine.num_states:
        return None
    trans = sorted((order[t.src], rank[t.letter], order[t.dst], t.outputs) for t in machine.transitions)
    finals = sorted((order[q], o) for q, o in machine.finals.items())
    return trans, finals, sorted(order[q] for q in machine.initial)


def isomorphic(a: MultiTapeTransducer, b: MultiTapeTransducer) -> bool:
    """Structural isomorphism (same alphabets, outputs and finality)."""
    if (a.num_states, len(a.transitions), a.tapes) != (b.num_states, len(b.transitions), b.tapes):
        return False
    if set(a.inputs) != set(b.inputs) or len(a.initial) != len(b.initial):
        return False
    if a.is_sequential and b.is_sequential:
        sa = _signature(a, sorted(a.initial))
        sb = _signature(b, sorted(b.initial))
        if sa is not None and sb is not None:
            return sa == sb
    if a.num_states > 8:
        raise TransducerError("isomorphism test limited to small nondeterministic machines")
    rank = _letter_rank(a)
    target = (
        sorted((t.src, rank[t.letter], t.dst, t.outputs) for t in b.transitions),
        sorted(b.finals.items()),
        sorted(b.initial),
    )
    for perm in itertools.permutations(range(a.num_states)):
        cand = (
            sorted((perm[t.src], rank[t.letter], perm[t.dst], t.outputs) for t in a.transitions),
            sorted((perm[q], o) for q, o in a.finals.items()),
            sorted(perm[q] for q in a.initial),
        )
        if cand == target:
            return True
    return False


def words(alphabet: Sequence, max_len: int, min_len: int = 0) -> Iterator[tuple]:
    """All words over ``alphabet`` in length-lexicographic order."""
    for n in range(min_len, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)
