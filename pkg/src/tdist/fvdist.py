"""Distance between finite-valued relations given as unions of unambiguous machines.

Both unions are turned into multi-sequential machines over one common
automaton whose letters record, next to the input letter, the transition
taken by every component.  The distance is then the larger of the relative
distances from each side's components to the other side's union.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .core import (
    MultiTapeTransducer,
    Transition,
    complete,
    domain_nfa,
    inclusion_counterexample,
    project,
    restrict_finals,
    trim,
    union_nfa,
)
from .errors import AmbiguousComponent, DomainMismatch, TransducerError
from .metrics import Metric
from .reldist import DistanceResult, relative_distance


@dataclass
class SyncProduct:
    """The joint automaton and the sequential machines reading it.

    ``joint`` has one tape per component, T components first.  Its letters
    are ``(input letter, transitions)`` pairs; ``letter_of`` maps them back.
    """

    joint: MultiTapeTransducer
    t_components: list[MultiTapeTransducer]
    s_components: list[MultiTapeTransducer]
    letter_of: dict

    def input_word(self, rho) -> tuple:
        return tuple(self.letter_of[x] for x in rho)


def is_unambiguous(machine: MultiTapeTransducer) -> bool:
    """No input has two accepting runs (self-product search)."""
    start = [(p, q, p != q) for p in machine.initial for q in machine.initial]
    seen = set(start)
    queue = deque(start)
    while queue:
        p, q, split = queue.popleft()
        if split and p in machine.finals and q in machine.finals:
            return False
        for t1 in machine.out_transitions(p):
            for t2 in machine.step(q, t1.letter):
                nxt = (t1.dst, t2.dst, split or t1 != t2)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return True


def _widen(machine: MultiTapeTransducer, alphabet: tuple, outputs: tuple) -> MultiTapeTransducer:
    if machine.inputs == alphabet and machine.outputs == outputs:
        return machine
    return MultiTapeTransducer(machine.num_states, alphabet, outputs, machine.initial,
                               machine.transitions, machine.finals, machine.tapes,
                               machine.labels, machine.component_finals, machine.name)


def _prepare(machines: Sequence[MultiTapeTransducer]) -> list[MultiTapeTransducer]:
    prepared = []
    for m in machines:
        if m.tapes != 1:
            raise TransducerError("components must be single-tape machines")
        if not is_unambiguous(m):
            raise AmbiguousComponent(f"component {m.name or m!r} has two accepting runs on some input")
        prepared.append(m)
    return prepared


def sync_product(t_comps: Sequence[MultiTapeTransducer],
                 s_comps: Sequence[MultiTapeTransducer]) -> SyncProduct:
    """Synchronous runs of all components, as one deterministic automaton.

    A state gives, per component, the state of the followed run and the
    set of all states reachable on the input read so far.  A state is final
    when some T and some S component accept and every component that can
    accept the input is following its accepting run.
    """
    t_comps, s_comps = _prepare(t_comps), _prepare(s_comps)
    comps = t_comps + s_comps
    if not t_comps or not s_comps:
        raise TransducerError("both sides need at least one component")
    alphabet = tuple(dict.fromkeys(a for m in comps for a in m.inputs))
    out_alphabet = tuple(dict.fromkeys(c for m in comps for c in m.outputs))
    comps = [complete(_widen(m, alphabet, out_alphabet)) for m in comps]
    dom_t = union_nfa([domain_nfa(m) for m in comps[:len(t_comps)]])
    dom_s = union_nfa([domain_nfa(m) for m in comps[len(t_comps):]])
    for a, b in ((dom_t, dom_s), (dom_s, dom_t)):
        missing = inclusion_counterexample(a, b)
        if missing is not None:
            raise DomainMismatch(f"domains differ on {''.join(map(str, missing))!r}")

    n_t = len(t_comps)
    # None marks "no letter read yet": any initial state may start the run
    start = tuple((None, m.initial) for m in comps)
    index = {start: 0}
    order = [start]
    transitions = []
    letter_of = {}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for a in alphabet:
            options = []
            for m, (q, reach) in zip(comps, state):
                sources = reach if q is None else (q,)
                options.append([t for src in sorted(sources) for t in m.step(src, a)])
            reach_next = [
                frozenset(t.dst for src in reach for t in m.step(src, a))
                for m, (_, reach) in zip(comps, state)
            ]
            for choice in _choices(options):
                symbol = (a, tuple((t.src, t.dst, t.outputs[0]) for t in choice))
                letter_of[symbol] = a
                nxt = tuple((t.dst, r) for t, r in zip(choice, reach_next))
                if nxt not in index:
                    index[nxt] = len(order)
                    order.append(nxt)
                    queue.append(nxt)
                transitions.append(Transition(index[state], symbol, index[nxt],
                                              tuple(t.outputs[0] for t in choice)))

    finals, vectors = {}, []
    for state in order:
        accepting = [_accepting_output(m, q, reach) for m, (q, reach) in zip(comps, state)]
        vectors.append(tuple(o is not None for o in accepting))
        ok_t = any(o is not None for o in accepting[:n_t])
        ok_s = any(o is not None for o in accepting[n_t:])
        if ok_t and ok_s and _runs_committed(comps, state):
            finals[index[state]] = tuple(o or "" for o in accepting)

    symbols = tuple(dict.fromkeys(t.letter for t in transitions)) or ((alphabet[0], ()),)
    for s in symbols:
        letter_of.setdefault(s, s[0])
    labels = tuple(
        "(" + ",".join(
            ("·" if q is None else m.labels[q]) + "|{" + ",".join(m.labels[r] for r in sorted(reach)) + "}"
            for m, (q, reach) in zip(comps, state)
        ) + ")"
        for state in order
    )
    joint = MultiTapeTransducer(
        num_states=len(order), inputs=symbols, outputs=out_alphabet, initial=frozenset([0]),
        transitions=tuple(transitions), finals=finals, tapes=len(comps), labels=labels,
        component_finals=tuple(vectors),
    )
    joint = trim(joint)
    if joint.is_empty:
        joint = MultiTapeTransducer(1, symbols, out_alphabet, frozenset([0]), (), {}, len(comps))
    letter_of = {s: letter_of[s] for s in joint.inputs}

    def tape(i):
        machine = project(joint, [i])
        cf = joint.component_finals
        return restrict_finals(machine, lambda q: cf is not None and cf[q][i])

    t_side = [tape(i) for i in range(n_t)]
    s_side = [tape(i) for i in range(n_t, len(comps))]
    return SyncProduct(joint, t_side, s_side, letter_of)


def _choices(options):
    if not options:
        yield ()
        return
    head, *rest = options
    for t in head:
        for tail in _choices(rest):
            yield (t,) + tail


def _accepting_output(machine, q, reach):
    """Final output of the followed run, or None when it does not accept."""
    if q is None:
        finals = [r for r in sorted(reach) if r in machine.finals]
        return machine.finals[finals[0]][0] if finals else None
    return machine.finals[q][0] if q in machine.finals else None


def _runs_committed(comps, state) -> bool:
    """Every component with an accepting run is following it."""
    for m, (q, reach) in zip(comps, state):
        if q is not None and q not in m.finals and any(r in m.finals for r in reach):
            return False
    return True


def _relative(args):
    f, others, metric = args
    return relative_distance(f, others, metric)


def multiseq_distance(sp: SyncProduct, metric: Metric = Metric.LEV,
                      parallel: int | None = None) -> DistanceResult:
    """Max over each side's components of the relative distance to the other side."""
    metric = Metric.parse(metric)
    jobs = [(f, sp.s_components, metric) for f in sp.t_components]
    jobs += [(g, sp.t_components, metric) for g in sp.s_components]
    if parallel and parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_relative, jobs))
    else:
        results = [_relative(job) for job in jobs]
    n_t = len(sp.t_components)
    names = [("left", i) for i in range(n_t)] + [("right", j) for j in range(len(sp.s_components))]
    for (side, i), res in zip(names, results):
        if not res.is_finite:
            witnesses = [{"side": side, "component": i, "reason": res.reason}]
            for w in res.witnesses:
                if "input" in w:
                    w = dict(w, input=sp.input_word(w["input"]))
                witnesses.append(w)
            return DistanceResult.infinite(f"{side} component {i} is not within finite distance", witnesses)
    value = max(r.value for r in results)
    where = [{"side": s, "component": i, "value": r.value} for (s, i), r in zip(names, results)]
    return DistanceResult.finite(value, "maximum of relative distances", where)


def finite_valued_distance(T: Sequence[MultiTapeTransducer], S: Sequence[MultiTapeTransducer],
                           metric: Metric = Metric.LEV, parallel: int | None = None) -> DistanceResult:
    """Distance between the unions ``T`` and ``S`` of unambiguous machines."""
    metric = Metric.parse(metric)
    T = [trim(m) for m in _prepare(list(T))]
    S = [trim(m) for m in _prepare(list(S))]
    T = [m for m in T if not m.is_empty]
    S = [m for m in S if not m.is_empty]
    if not T and not S:
        return DistanceResult.finite(0, "both relations are empty")
    dom_t = union_nfa([domain_nfa(m) for m in T]) if T else None
    dom_s = union_nfa([domain_nfa(m) for m in S]) if S else None
    for a, b, side in ((dom_t, dom_s, "left"), (dom_s, dom_t, "right")):
        if a is None:
            continue
        word = inclusion_counterexample(a, b) if b is not None else ()
        if word is not None:
            return DistanceResult.infinite(
                "domains differ", [{"input": tuple(word), "only_in": side}])
    sp = sync_product(T, S)
    return multiseq_distance(sp, metric, parallel)
