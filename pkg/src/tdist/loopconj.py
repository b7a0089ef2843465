"""Do all loops of a sequential machine produce conjugate pairs of outputs?

For two tapes of one machine, boundedness of the edit distance between
them is equivalent to every loop producing a conjugate output pair.  The
check runs per strongly connected component:

1. an integer potential balances output lengths; an inconsistent edge
   exposes a loop with outputs of different lengths;
2. otherwise every state ``q`` gets an element ``w_q`` of the free group
   with ``u . w_q' = w_q . v`` on every internal transition
   ``q -(u, v)-> q'``.  Such a labelling gives ``u w = w v`` for every
   loop, and positive words conjugate in the free group are cyclic
   shifts of each other.  Labels may need inverse letters: tape 0 can run
   ahead in one state and behind in another.  One loop at the base state
   pins its label down to ``p^n x`` (``p`` the primitive root, ``x`` the
   rotation), and every remaining edge restricts ``n``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .core import (
    MultiTapeTransducer,
    Transition,
    has_cycle,
    strongly_connected_components,
    trim,
)
from .metrics import conjugate, primitive_root


@dataclass(frozen=True)
class Loop:
    """A loop rooted at ``state``: its transitions and the two outputs."""

    state: int
    transitions: tuple[Transition, ...]
    outputs: tuple[str, str]

    @property
    def word(self) -> tuple:
        return tuple(t.letter for t in self.transitions)


@dataclass(frozen=True)
class DelayLabeling:
    """Per-state labels as reduced free-group words, see :func:`label_word`."""

    base: int
    potential: dict
    witness: dict


@dataclass
class LoopVerdict:
    conjugate: bool
    reason: str = ""
    scc: frozenset | None = None
    loop: Loop | None = None
    labelings: list[DelayLabeling] = field(default_factory=list)

    def __bool__(self):
        return self.conjugate


def _loop(machine, transitions, pair) -> Loop:
    i, j = pair
    u = "".join(t.outputs[i] for t in transitions)
    v = "".join(t.outputs[j] for t in transitions)
    return Loop(transitions[0].src, tuple(transitions), (u, v))


def _internal(machine, scc):
    return [t for q in sorted(scc) for t in machine.out_transitions(q) if t.dst in scc]


def _shortest_path(edges_from, source, target, allowed) -> list[Transition] | None:
    """Fewest transitions from source to target inside ``allowed`` (may be empty)."""
    if source == target:
        return []
    parent = {source: None}
    queue = deque([source])
    while queue:
        q = queue.popleft()
        for t in edges_from.get(q, ()):
            if t.dst in allowed and t.dst not in parent:
                parent[t.dst] = t
                if t.dst == target:
                    path = []
                    while parent[target] is not None:
                        path.append(parent[target])
                        target = parent[target].src
                    return path[::-1]
                queue.append(t.dst)
    return None


def _base_loop(edges_from, base, scc, pair) -> list[Transition] | None:
    """Shortest loop at ``base`` through a transition with non-empty output on ``pair``.

    Ties go to the transition met first in canonical order.
    """
    best = None
    i, j = pair
    for q in sorted(scc):
        for t in edges_from.get(q, ()):
            if t.dst not in scc or not (t.outputs[i] or t.outputs[j]):
                continue
            to_src = _shortest_path(edges_from, base, t.src, scc)
            back = _shortest_path(edges_from, t.dst, base, scc)
            cand = to_src + [t] + back
            if best is None or len(cand) < len(best):
                best = cand
    return best


def _search_bad_loop(machine, scc, pair, max_len) -> Loop | None:
    """Breadth-first search for a loop with non-conjugate outputs."""
    edges_from = {}
    for t in _internal(machine, scc):
        edges_from.setdefault(t.src, []).append(t)
    i, j = pair
    for root in sorted(scc):
        # (state, u, v, path) frontier; length grows by one per round
        frontier = [(root, "", "", ())]
        for _ in range(max_len):
            nxt = []
            for q, u, v, path in frontier:
                for t in edges_from.get(q, ()):
                    u2, v2, p2 = u + t.outputs[i], v + t.outputs[j], path + (t,)
                    if t.dst == root and not conjugate(u2, v2):
                        return Loop(root, p2, (u2, v2))
                    nxt.append((t.dst, u2, v2, p2))
            frontier = nxt
            if len(frontier) > 20000:
                break
    return None


def _check_scc(machine, scc, pair) -> LoopVerdict:
    i, j = pair
    internal = _internal(machine, scc)
    edges_from = {}
    for t in internal:
        edges_from.setdefault(t.src, []).append(t)
    base = min(scc)

    # 1. length balance
    potential = {base: 0}
    tree = {base: None}
    queue = deque([base])
    while queue:
        q = queue.popleft()
        for t in edges_from.get(q, ()):
            p = potential[q] + len(t.outputs[j]) - len(t.outputs[i])
            if t.dst not in potential:
                potential[t.dst] = p
                tree[t.dst] = t
                queue.append(t.dst)
    for t in internal:
        if potential[t.dst] != potential[t.src] + len(t.outputs[j]) - len(t.outputs[i]):
            loop = _unbalanced_loop(machine, edges_from, scc, base, t, pair)
            return LoopVerdict(False, "loop outputs have different lengths", scc, loop)

    # 2. nothing is ever produced inside the component
    if all(not t.outputs[i] and not t.outputs[j] for t in internal):
        lab = DelayLabeling(base, potential, {q: () for q in scc})
        return LoopVerdict(True, "silent component", scc, labelings=[lab])

    # 3. one loop at the base state fixes the labels up to a power of its root
    cycle = _base_loop(edges_from, base, scc, pair)
    loop0 = _loop(machine, cycle, pair)
    u0, v0 = loop0.outputs
    if not conjugate(u0, v0):
        return LoopVerdict(False, "loop outputs are not conjugate", scc, loop0)
    shift = next(s for s in range(len(u0)) if u0[s:] + u0[:s] == v0)
    x, p = _letters(u0[:shift]), _letters(primitive_root(u0))

    # 4. every edge off the spanning tree restricts the exponent n in z = p^n x
    U, V = {base: ()}, {base: ()}
    for q in _bfs_order(edges_from, base)[1:]:
        t = tree[q]
        U[q] = _mul(U[t.src], _letters(t.outputs[i]))
        V[q] = _mul(V[t.src], _letters(t.outputs[j]))
    allowed = None  # None: every exponent
    seen = set()
    for t in internal:
        if tree.get(t.dst) is t:
            continue
        X = _mul(U[t.src], _letters(t.outputs[i]), _inv(U[t.dst]))
        Y = _mul(x, V[t.src], _letters(t.outputs[j]), _inv(V[t.dst]), _inv(x))
        if (X, Y) in seen:
            continue
        seen.add((X, Y))
        if Y == X and _mul(Y, p) == _mul(p, Y):
            continue
        if allowed is None:
            reach = len(X) + len(Y) + 2
            allowed = range(-reach, reach + 1)
        allowed = {n for n in allowed if _mul(_pow(p, n), Y, _pow(p, -n)) == X}
        if not allowed:
            loop = _search_bad_loop(machine, scc, pair, max_len=3 * len(scc) + 3)
            return LoopVerdict(False, "no consistent witness labelling", scc, loop)

    n = 0 if allowed is None else min(allowed, key=lambda k: (abs(k), k))
    z = _mul(_pow(p, n), x)
    label = {q: _mul(_inv(U[q]), z, V[q]) for q in U}
    return LoopVerdict(True, "common witness labelling", scc,
                       labelings=[DelayLabeling(base, potential, label)])


def _bfs_order(edges_from, base):
    seen = [base]
    known = {base}
    queue = deque([base])
    while queue:
        q = queue.popleft()
        for t in edges_from.get(q, ()):
            if t.dst not in known:
                known.add(t.dst)
                seen.append(t.dst)
                queue.append(t.dst)
    return seen


# Reduced words of the free group: tuples of (letter, +1 or -1).


def _letters(word: str) -> tuple:
    return tuple((c, 1) for c in word)


def _mul(*parts) -> tuple:
    out = []
    for part in parts:
        for c in part:
            if out and out[-1][0] == c[0] and out[-1][1] == -c[1]:
                out.pop()
            else:
                out.append(c)
    return tuple(out)


def _inv(g) -> tuple:
    return tuple((c, -e) for c, e in reversed(g))


def _pow(g, n: int) -> tuple:
    return _mul(*([g] * n)) if n >= 0 else _mul(*([_inv(g)] * -n))


def label_word(g) -> str | None:
    """A label as a plain word, or None when it has inverse letters."""
    if any(e < 0 for _, e in g):
        return None
    return "".join(c for c, _ in g)


def _unbalanced_loop(machine, edges_from, scc, base, edge, pair) -> Loop:
    """A loop through or beside ``edge`` whose outputs differ in length."""
    to_src = _shortest_path(edges_from, base, edge.src, scc)
    back = _shortest_path(edges_from, edge.dst, base, scc)
    to_dst = _shortest_path(edges_from, base, edge.dst, scc)
    for cand in (to_src + [edge] + back, to_dst + back):
        if cand:
            loop = _loop(machine, cand, pair)
            if len(loop.outputs[0]) != len(loop.outputs[1]):
                return loop
    return _loop(machine, to_src + [edge] + back, pair)


def scc_conjugate(machine: MultiTapeTransducer, scc: frozenset, pair: Sequence[int] = (0, 1)) -> LoopVerdict:
    """The loop check restricted to one strongly connected component."""
    pair = tuple(pair)
    if not has_cycle(machine, scc):
        return LoopVerdict(True, "no loop", scc)
    return _check_scc(machine, scc, pair)


def loops_conjugate(machine: MultiTapeTransducer, pair: Sequence[int] = (0, 1)) -> LoopVerdict:
    """Decide whether every loop outputs a conjugate pair on tapes ``pair``.

    The machine should be trim; loops outside accepting runs are otherwise
    taken into account as well.
    """
    pair = tuple(pair)
    labelings = []
    for scc in strongly_connected_components(machine):
        if not has_cycle(machine, scc):
            continue
        verdict = _check_scc(machine, scc, pair)
        if not verdict:
            return verdict
        labelings.extend(verdict.labelings)
    return LoopVerdict(True, "every loop is conjugate", labelings=labelings)


def pair_finite(machine: MultiTapeTransducer, pair: Sequence[int] = (0, 1)) -> bool:
    """Is the edit distance between the two tapes bounded?

    Both tapes share the machine's automaton, so their domains agree and
    loop conjugacy is the whole criterion.
    """
    return loops_conjugate(trim(machine), pair).conjugate
