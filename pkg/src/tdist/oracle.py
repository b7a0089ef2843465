"""Brute-force reference computations on short inputs.

Everything here enumerates inputs exhaustively and is meant as ground truth
for the decision procedures at small sizes.  Inputs leading to identical
configurations (per component, the set of pairs "state, output so far") have
identical output sets on every extension, so they are merged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .core import MultiTapeTransducer, Transition
from .errors import CapExceeded
from .metrics import INFINITY, Metric, conjugate, directed_set_distance, edit_distance, hausdorff

DEFAULT_CAP = 16
MAX_CONFIGS = 200_000


def run_outputs(machine: MultiTapeTransducer, word, cap: int = DEFAULT_CAP) -> set[tuple[str, ...]]:
    """Output tuples of every accepting run on ``word`` (depth first)."""
    word = tuple(word)
    if len(word) > cap:
        raise CapExceeded(f"input of length {len(word)} exceeds the cap {cap}")
    found = set()
    stack = [(q, 0, ("",) * machine.tapes) for q in sorted(machine.initial)]
    while stack:
        q, i, outs = stack.pop()
        if i == len(word):
            if q in machine.finals:
                found.add(tuple(o + f for o, f in zip(outs, machine.finals[q])))
            continue
        for t in machine.step(q, word[i]):
            stack.append((t.dst, i + 1, tuple(o + x for o, x in zip(outs, t.outputs))))
    return found


def union_outputs(machines: Sequence[MultiTapeTransducer], word, cap: int = DEFAULT_CAP) -> set[str]:
    """Outputs of a union of single-tape machines."""
    return {o[0] for m in machines for o in run_outputs(m, word, cap)}


@dataclass
class TrendReport:
    per_length: dict[int, float]
    classification: str           # "bounded-plateau" or "growing"
    plateau_value: int | None
    mismatch: tuple | None = None  # an input in one domain only
    argmax: dict = field(default_factory=dict)  # length -> an input attaining the value

    @property
    def estimate(self):
        """Infinite on a domain mismatch or growth, else the plateau."""
        if self.mismatch is not None or self.classification == "growing":
            return INFINITY
        return self.plateau_value


def classify(per_length: dict[int, float]) -> tuple[str, int | None]:
    values = [per_length[n] for n in sorted(per_length)]
    window = values[-max(2, len(values) // 3):]
    growing = all(a < b for a, b in zip(window, window[1:]))
    if growing:
        return "growing", None
    finite = [v for v in values if v != INFINITY]
    return "bounded-plateau", int(max(finite)) if finite else None


class _Configs:
    """Length-by-length enumeration of merged configurations."""

    def __init__(self, machines: Sequence[MultiTapeTransducer]):
        for m in machines:
            if m.tapes != 1:
                raise ValueError("oracle enumeration expects single-tape machines")
        self.machines = list(machines)
        self.alphabet = tuple(dict.fromkeys(a for m in machines for a in m.inputs))

    def start(self):
        first = tuple(frozenset((q, "") for q in m.initial) for m in self.machines)
        return {first: ()}

    def advance(self, level):
        nxt = {}
        for config, word in level.items():
            for a in self.alphabet:
                new = tuple(
                    frozenset((t.dst, out + t.outputs[0]) for q, out in part for t in m.step(q, a))
                    for m, part in zip(self.machines, config)
                )
                if new not in nxt:
                    nxt[new] = word + (a,)
        if len(nxt) > MAX_CONFIGS:
            raise CapExceeded(f"more than {MAX_CONFIGS} configurations")
        return nxt

    def outputs(self, config, indices) -> set[str]:
        res = set()
        for i in indices:
            m = self.machines[i]
            res.update(out + m.finals[q][0] for q, out in config[i] if q in m.finals)
        return res


def _report(per_length, argmax, mismatch) -> TrendReport:
    cls, plateau = classify(per_length)
    return TrendReport(per_length, cls, plateau, mismatch, argmax)


def oracle_distance(T: Sequence[MultiTapeTransducer], S: Sequence[MultiTapeTransducer],
                    max_len: int, metric: Metric = Metric.LEV) -> TrendReport:
    """Per input length, the largest Hausdorff distance between the output sets."""
    metric = Metric.parse(metric)
    enum = _Configs(list(T) + list(S))
    left, right = range(len(T)), range(len(T), len(T) + len(S))
    level = enum.start()
    per_length, argmax, mismatch = {}, {}, None
    for n in range(max_len + 1):
        best, best_word = 0, None
        for config, word in level.items():
            R, Sw = enum.outputs(config, left), enum.outputs(config, right)
            if not R and not Sw:
                continue
            d = hausdorff(R, Sw, metric)
            if d == INFINITY and mismatch is None:
                mismatch = word
            if d > best or best_word is None:
                best, best_word = max(best, d), word
        per_length[n] = best
        argmax[n] = best_word
        if n < max_len:
            level = enum.advance(level)
    return _report(per_length, argmax, mismatch)


def oracle_relative(f: MultiTapeTransducer, components: Sequence[MultiTapeTransducer],
                    max_len: int, metric: Metric = Metric.LEV) -> TrendReport:
    """Per input length, the largest distance from f's output to the closest output of R."""
    metric = Metric.parse(metric)
    enum = _Configs([f, *components])
    rel = range(1, len(components) + 1)
    level = enum.start()
    per_length, argmax, mismatch = {}, {}, None
    for n in range(max_len + 1):
        best, best_word = 0, None
        for config, word in level.items():
            F = enum.outputs(config, [0])
            if not F:
                continue
            d = directed_set_distance(F, enum.outputs(config, rel), metric)
            if d == INFINITY and mismatch is None:
                mismatch = word
            if d > best or best_word is None:
                best, best_word = max(best, d), word
        per_length[n] = best
        argmax[n] = best_word
        if n < max_len:
            level = enum.advance(level)
    return _report(per_length, argmax, mismatch)


def brute_relation_distance(T, S, max_len: int, metric: Metric = Metric.LEV):
    """``max`` of :func:`oracle_distance` over all lengths up to ``max_len``."""
    rep = oracle_distance(T, S, max_len, metric)
    return max(rep.per_length.values())


def brute_relative_distance(f, components, max_len: int, metric: Metric = Metric.LEV):
    rep = oracle_relative(f, components, max_len, metric)
    return max(rep.per_length.values())


# ---------------------------------------------------------------------------
# Loops by pumping


def closed_walks(machine: MultiTapeTransducer, max_len: int, pair=(0, 1)):
    """Output pairs of every closed walk of at most ``max_len`` transitions.

    Yields ``(state, u, v, walk)``; walks with the same state and outputs
    are reported once.
    """
    i, j = pair
    for root in machine.states:
        frontier = {(root, "", ""): ()}
        for _ in range(max_len):
            nxt = {}
            for (q, u, v), walk in frontier.items():
                for t in machine.out_transitions(q):
                    key = (t.dst, u + t.outputs[i], v + t.outputs[j])
                    if key not in nxt:
                        nxt[key] = walk + (t,)
            for (q, u, v), walk in nxt.items():
                if q == root:
                    yield root, u, v, walk
            frontier = nxt


def pumping_classification(machine: MultiTapeTransducer, pair=(0, 1),
                           max_len: int | None = None) -> tuple[bool, tuple[Transition, ...] | None]:
    """Are the outputs of every closed walk up to ``max_len`` (default 3n) conjugate?

    Returns the verdict and, when false, a failing walk.
    """
    if max_len is None:
        max_len = 3 * machine.num_states
    for _, u, v, walk in closed_walks(machine, max_len, pair):
        if not conjugate(u, v):
            return False, walk
    return True, None


def pumped_distances(machine: MultiTapeTransducer, word, pair=(0, 1), cap: int = 64,
                     metric: Metric = Metric.LEV) -> list[int]:
    """Distances between two tapes on ``word``, as a list per accepting run."""
    i, j = pair
    return [edit_distance(o[i], o[j], metric) for o in run_outputs(machine, word, cap)]


def min_tape_distance(outputs: Sequence[str], valid: Sequence[int], metric: Metric = Metric.LEV):
    """``min over valid i`` of the distance between tape 0 and tape i."""
    if not valid:
        return math.inf
    return min(edit_distance(outputs[0], outputs[i], metric) for i in valid)
