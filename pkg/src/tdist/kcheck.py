"""Is the distance from tape 0 to the closest other tape at most k?

The automaton built here reads inputs of a sequential product machine and
follows, for every comparison tape ``i``, an alignment of tape 0 against
tape ``i`` chunk by chunk.  A state records the product state, the edit
budget left per tape, and per tape the unmatched suffix ("leftover")
carried to the next step.  A leftover longer than the cap turns the tape
dead.  The product's domain is covered by the automaton exactly when every
input admits some tape within ``k`` edits.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Mapping, NamedTuple

from .core import MultiTapeTransducer, Nfa, domain_equal, domain_nfa
from .errors import BudgetNegative
from .metrics import Metric, distance_table, edit_distance

# A leftover is ``(left, right)``: unmatched suffixes of tape 0 and tape i.
# With insertions, deletions and substitutions at most one side is
# non-empty.  Transpositions may straddle a chunk boundary, so for DL one
# side may additionally hold a single pending letter.  ``DEAD`` is the
# absorbing "can no longer be matched" marker.
DEAD = None
EMPTY = ("", "")


class AckState(NamedTuple):
    state: int
    budgets: tuple[int, ...]
    leftovers: tuple


def delta_max(machine: MultiTapeTransducer) -> int:
    """``N * l``: states times the largest per-transition length imbalance.

    The imbalance compares tape 0 with every other tape, on transitions
    and on final outputs.
    """
    if machine.tapes < 2:
        return 0
    ell = 0
    labels = [t.outputs for t in machine.transitions] + list(machine.finals.values())
    for outs in labels:
        for i in range(1, machine.tapes):
            ell = max(ell, abs(len(outs[0]) - len(outs[i])))
    return machine.num_states * ell


def leftover_cap(machine: MultiTapeTransducer, k: int) -> int:
    """Longest leftover kept alive: ``max(delta_max, k)``."""
    return max(delta_max(machine), k)


def step_match(leftover, chunk0: str, chunk_i: str, budget: int, metric: Metric = Metric.LEV,
               cap: int | None = None) -> set:
    """Every ``(new leftover, cost)`` reachable by partially matching one step.

    With ``X = left + chunk0`` and ``Y = right + chunk_i``, a prefix of one
    side is aligned with the whole of the other side; the rest becomes the
    new leftover.  Only costs within ``budget`` are returned.  Leftovers
    longer than ``cap`` collapse to ``(DEAD, 0)``.
    """
    if leftover is DEAD:
        raise ValueError("a dead leftover cannot be extended")
    metric = Metric.parse(metric)
    left, right = leftover
    X, Y = left + chunk0, right + chunk_i
    table = distance_table(X, Y, metric)
    n, m = len(X), len(Y)
    results = set()

    def emit(i, j):
        cost = table[i][j]
        if cost > budget:
            return
        s, t = X[i:], Y[j:]
        if cap is not None and max(len(s), len(t)) > cap:
            results.add((DEAD, 0))
        else:
            results.add(((s, t), cost))

    for i in range(n + 1):
        emit(i, m)
    for j in range(m):
        emit(n, j)
    if metric is Metric.DL:
        # one letter pending on a side, the other side partially consumed
        if n >= 1:
            for j in range(m):
                emit(n - 1, j)
        if m >= 1:
            for i in range(n - 1):
                emit(i, m - 1)
    return results


def _default_valid(machine: MultiTapeTransducer) -> dict:
    everyone = frozenset(range(1, machine.tapes))
    if machine.component_finals is None:
        return {q: everyone for q in machine.finals}
    return {
        q: frozenset(i for i in everyone if machine.component_finals[q][i])
        for q in machine.finals
    }


def build_ack(machine: MultiTapeTransducer, k: int, metric: Metric = Metric.LEV,
              valid_tapes: Mapping[int, frozenset] | None = None,
              cap: int | None = None) -> Nfa:
    """The budget/leftover automaton for bound ``k``.

    ``valid_tapes[q]`` lists the tapes that may witness acceptance at the
    final state ``q``; by default, the tapes whose component is final there.
    Automaton states are :class:`AckState` values, kept in ``labels``.
    """
    if k < 0:
        raise BudgetNegative(f"budget must be non-negative, got {k}")
    metric = Metric.parse(metric)
    if valid_tapes is None:
        valid_tapes = _default_valid(machine)
    if cap is None:
        cap = leftover_cap(machine, k)
    m = machine.tapes - 1
    start_states = [AckState(q, (k,) * m, (EMPTY,) * m) for q in sorted(machine.initial)]
    if m == 0:
        start_states = []

    live = _live_tapes(machine, valid_tapes)
    match_cache = {}

    def options(leftover, out0, outi, budget):
        if leftover is DEAD:
            return [(DEAD, 0)]
        key = (leftover, out0, outi, budget)
        if key not in match_cache:
            # more budget left never accepts less, so keep the cheapest cost per leftover
            cheapest = {}
            for lo, cost in step_match(leftover, out0, outi, budget, metric, cap):
                cheapest[lo] = min(cost, cheapest.get(lo, cost))
            match_cache[key] = sorted(cheapest.items(), key=repr) or [(DEAD, 0)]
        return match_cache[key]

    index = {}
    order = []
    transitions = []
    queue = deque()
    for s in start_states:
        index[s] = len(order)
        order.append(s)
        queue.append(s)
    while queue:
        st = queue.popleft()
        for t in machine.out_transitions(st.state):
            per_tape = [
                options(st.leftovers[i - 1], t.outputs[0], t.outputs[i], st.budgets[i - 1])
                for i in range(1, m + 1)
            ]
            for combo in _product(per_tape):
                # a tape that can no longer witness acceptance carries nothing
                combo = tuple(opt if i in live[t.dst] else (DEAD, 0) for i, opt in enumerate(combo, 1))
                if all(lo is DEAD for lo, _ in combo):
                    continue
                nxt = AckState(
                    t.dst,
                    tuple(b - c for b, (_, c) in zip(st.budgets, combo)),
                    tuple(lo for lo, _ in combo),
                )
                if nxt not in index:
                    index[nxt] = len(order)
                    order.append(nxt)
                    queue.append(nxt)
                transitions.append((index[st], t.letter, index[nxt]))

    finals = frozenset(index[st] for st in order if _accepting(machine, st, valid_tapes, metric))
    return Nfa(len(order), machine.inputs, frozenset(index[s] for s in start_states),
               tuple(transitions), finals, labels=tuple(order))


def _live_tapes(machine: MultiTapeTransducer, valid_tapes) -> dict:
    """Per state, the tapes valid at some final state reachable from it."""
    live = {q: set(valid_tapes.get(q, ())) if q in machine.finals else set()
            for q in range(machine.num_states)}
    changed = True
    while changed:
        changed = False
        for t in machine.transitions:
            if not live[t.dst] <= live[t.src]:
                live[t.src] |= live[t.dst]
                changed = True
    return live


def _product(lists):
    if not lists:
        yield ()
        return
    head, *rest = lists
    for x in head:
        for tail in _product(rest):
            yield (x,) + tail


def _accepting(machine, st: AckState, valid_tapes, metric) -> bool:
    if st.state not in machine.finals:
        return False
    outs = machine.finals[st.state]
    for i in valid_tapes.get(st.state, ()):
        leftover = st.leftovers[i - 1]
        if leftover is DEAD:
            continue
        left, right = leftover
        if edit_distance(left + outs[0], right + outs[i], metric) <= st.budgets[i - 1]:
            return True
    return False


def k_bounded(machine: MultiTapeTransducer, k: int, metric: Metric = Metric.LEV,
              valid_tapes: Mapping[int, frozenset] | None = None,
              cap: int | None = None) -> bool:
    """True iff every input of the machine has a valid tape within ``k`` edits of tape 0."""
    ack = build_ack(machine, k, metric, valid_tapes, cap)
    return domain_equal(ack, domain_nfa(machine))


def k_bounded_predicate(machine: MultiTapeTransducer, metric: Metric = Metric.LEV,
                        valid_tapes: Mapping[int, frozenset] | None = None) -> Callable[[int], bool]:
    return lambda k: k_bounded(machine, k, metric, valid_tapes)
