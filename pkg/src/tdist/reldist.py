"""Relative distance from a sequential function to a multi-sequential relation.

``d(f, R) = sup over u in dom(f) of min over v in R(u) of d(f(u), v)``, where
``R`` is the union of sequential components ``D_1 .. D_m``.  Finiteness is
decided structurally, class by class of the domain partition; the value is
then found by searching for the least ``k`` accepted by :mod:`kcheck`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .core import (
    MultiTapeTransducer,
    Nfa,
    boolean_product,
    determinize,
    domain_nfa,
    inclusion_counterexample,
    scc_paths,
    shortest_word,
    stack_product,
    trim,
    union_nfa,
)
from .errors import NonSequentialComponent, PredicateNotMonotone, TransducerError
from .kcheck import build_ack, k_bounded
from .loopconj import scc_conjugate
from .metrics import Metric


@dataclass
class DistanceResult:
    """Finite(value) when ``value`` is an int, Infinite when it is None."""

    value: int | None
    reason: str = ""
    witnesses: list = field(default_factory=list)

    @classmethod
    def finite(cls, value: int, reason: str = "", witnesses=None) -> "DistanceResult":
        if value < 0:
            raise ValueError("distances are non-negative")
        return cls(value, reason, list(witnesses or []))

    @classmethod
    def infinite(cls, reason: str = "", witnesses=None) -> "DistanceResult":
        return cls(None, reason, list(witnesses or []))

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __eq__(self, other):
        if isinstance(other, DistanceResult):
            return self.value == other.value
        if other == float("inf"):
            return self.value is None
        return self.value is not None and self.value == other

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"Finite({self.value})" if self.is_finite else "Infinite"


@dataclass(frozen=True)
class PartitionClass:
    """Inputs of ``f`` accepted by exactly the components in ``P`` (1-based)."""

    P: frozenset
    domain: Nfa


@dataclass
class PathReport:
    path: list           # state labels per component of the path
    witness: int | None  # tape whose loops are all conjugate with tape 0


@dataclass
class ClassReport:
    P: frozenset
    paths: list[PathReport]

    @property
    def finite(self) -> bool:
        return all(p.witness is not None for p in self.paths)


@dataclass
class FinitenessReport:
    finite: bool
    reason: str = ""
    classes: list[ClassReport] = field(default_factory=list)
    missing: tuple | None = None  # an input of f that no component accepts

    def __bool__(self):
        return self.finite


def _check_sequential(machines):
    for m in machines:
        if not m.is_sequential:
            raise NonSequentialComponent(f"machine {m.name or m!r} is not sequential")


def partition_classes(f: MultiTapeTransducer,
                      components: Sequence[MultiTapeTransducer]) -> list[PartitionClass]:
    """The non-empty classes ``C_P``, by increasing size of ``P`` then lexicographically."""
    doms = [determinize(domain_nfa(f))] + [determinize(domain_nfa(d)) for d in components]
    m = len(components)
    base = boolean_product(doms, lambda v: v[0])
    classes = []
    for size in range(1, m + 1):
        for chosen in combinations(range(1, m + 1), size):
            P = frozenset(chosen)
            finals = frozenset(
                q for q, v in enumerate(base.labels)
                if v[0] and all(v[i] == (i in P) for i in range(1, m + 1))
            )
            # every state of the product is reachable, so any final state is a witness
            if finals:
                classes.append(PartitionClass(P, Nfa(base.num_states, base.alphabet, base.initial,
                                                     base.transitions, finals, labels=base.labels)))
    return classes


def build_class_product(f: MultiTapeTransducer, components: Sequence[MultiTapeTransducer],
                        P) -> MultiTapeTransducer:
    """Trim product of ``f`` and the components, accepting exactly on ``C_P``."""
    P = frozenset(P)
    m = len(components)

    def policy(v):
        return v[0] and all(v[i] == (i in P) for i in range(1, m + 1))

    return trim(stack_product([f, *components], policy))


def full_product(f: MultiTapeTransducer, components: Sequence[MultiTapeTransducer]) -> MultiTapeTransducer:
    """Trim product accepting on ``dom(f)``; component finality says which tapes count."""
    return trim(stack_product([f, *components], lambda v: v[0]))


def finite_relative(f: MultiTapeTransducer, components: Sequence[MultiTapeTransducer]) -> FinitenessReport:
    """Is the relative distance from ``f`` to the union of ``components`` finite?

    Every input of ``f`` must be accepted by some component.  Then, in each
    class, every path through the component graph of the class product needs
    one tape of the class whose loops are all conjugate with tape 0.
    """
    _check_sequential([f, *components])
    if f.is_empty:
        return FinitenessReport(True, "empty domain")
    if not components:
        return FinitenessReport(False, "no component", missing=shortest_word(domain_nfa(f)))
    missing = inclusion_counterexample(domain_nfa(f), union_nfa([domain_nfa(d) for d in components]))
    if missing is not None:
        return FinitenessReport(False, "domain not included", missing=missing)

    reports = []
    finite = True
    for cls in partition_classes(f, components):
        product = build_class_product(f, components, cls.P)
        verdicts = {}

        def tape_ok(scc, i):
            if (scc, i) not in verdicts:
                verdicts[scc, i] = scc_conjugate(product, scc, (0, i)).conjugate
            return verdicts[scc, i]

        # loops live inside components, so paths differing only in bridges agree
        paths, seen = [], set()
        for path in scc_paths(product):
            if path.sccs in seen:
                continue
            seen.add(path.sccs)
            witness = next((i for i in sorted(cls.P) if all(tape_ok(c, i) for c in path.sccs)), None)
            paths.append(PathReport(path.describe(product), witness))
        report = ClassReport(cls.P, paths)
        finite = finite and report.finite
        reports.append(report)
    reason = "every path has a conjugate tape" if finite else "some path has no conjugate tape"
    return FinitenessReport(finite, reason, reports)


def search_value(is_finite: bool, k_predicate: Callable[[int], bool],
                 limit: int | None = None, verify: bool = False) -> DistanceResult:
    """Least ``k`` with ``k_predicate(k)``: exponential search, then bisection.

    The predicate must be monotone; a true answer below a false one raises
    :class:`PredicateNotMonotone`.  The search itself only ever sees false
    answers below true ones; ``verify`` asks once more at ``k + 1``, which
    can cost more than the whole search for large automata.
    """
    if not is_finite:
        return DistanceResult.infinite("not finite")
    seen = {}

    def ask(k):
        if k not in seen:
            seen[k] = bool(k_predicate(k))
            for j, v in seen.items():
                if (j < k and v and not seen[k]) or (j > k and not v and seen[k]):
                    raise PredicateNotMonotone(f"predicate true at {min(j, k)} but false at {max(j, k)}")
        return seen[k]

    if ask(0):
        if verify:
            ask(1)
        return DistanceResult.finite(0, "attained")
    hi = 1
    while not ask(hi):
        if limit is not None and hi > limit:
            raise TransducerError(f"no k up to {hi} satisfies the predicate")
        hi *= 2
    lo = hi // 2  # predicate false at lo (lo = 0 when hi = 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ask(mid):
            hi = mid
        else:
            lo = mid
    if verify:
        ask(hi + 1)
    return DistanceResult.finite(hi, "attained")


def relative_distance(f: MultiTapeTransducer, components: Sequence[MultiTapeTransducer],
                      metric: Metric = Metric.LEV) -> DistanceResult:
    """Exact relative distance, or Infinite with the reason."""
    metric = Metric.parse(metric)
    report = finite_relative(f, components)
    if not report.finite:
        witnesses = []
        if report.missing is not None:
            witnesses.append({"input": tuple(report.missing)})
        for cls in report.classes:
            for p in cls.paths:
                if p.witness is None:
                    witnesses.append({"class": sorted(cls.P), "path": p.path})
        return DistanceResult.infinite(report.reason, witnesses)
    if f.is_empty:
        return DistanceResult.finite(0, "empty domain")
    product = full_product(f, components)
    result = search_value(True, lambda k: k_bounded(product, k, metric))
    k = result.value
    witnesses = [{"k": k}]
    if k > 0:
        word = inclusion_counterexample(domain_nfa(product), build_ack(product, k - 1, metric))
        if word is not None:
            witnesses.append({"input": tuple(word), "needs": k})
    return DistanceResult.finite(k, "least k accepted", witnesses)


def relative_distance_by_class(f: MultiTapeTransducer, components: Sequence[MultiTapeTransducer],
                               metric: Metric = Metric.LEV) -> DistanceResult:
    """Same value as :func:`relative_distance`, as a maximum over the classes."""
    metric = Metric.parse(metric)
    report = finite_relative(f, components)
    if not report.finite:
        return DistanceResult.infinite(report.reason)
    best = 0
    for cls in partition_classes(f, components):
        product = build_class_product(f, components, cls.P)
        valid = {q: cls.P for q in product.finals}
        value = search_value(True, lambda k: k_bounded(product, k, metric, valid)).value
        best = max(best, value)
    return DistanceResult.finite(best, "maximum over classes")
