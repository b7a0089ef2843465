"""Edit distances of the Levenshtein family, conjugacy, and set distances."""

from __future__ import annotations

import math
from enum import Enum
from typing import Collection, Sequence

from .errors import EmptyWord

INFINITY = math.inf


class Metric(str, Enum):
    """Which edit operations are allowed."""

    LEV = "lev"
    LCS = "lcs"
    DL = "dl"

    @property
    def operations(self) -> frozenset[str]:
        ops = {"insert", "delete"}
        if self is not Metric.LCS:
            ops.add("substitute")
        if self is Metric.DL:
            ops.add("transpose")
        return frozenset(ops)

    @classmethod
    def parse(cls, value) -> "Metric":
        if isinstance(value, Metric):
            return value
        return cls(str(value).lower())


def edit_distance(u: Sequence, v: Sequence, metric: Metric = Metric.LEV) -> int:
    """Minimal number of allowed edits turning ``u`` into ``v``.

    ``Metric.DL`` is the restricted Damerau-Levenshtein distance (optimal
    string alignment): a transposed pair is not edited again.
    """
    metric = Metric.parse(metric)
    if len(u) < len(v) and metric is not Metric.DL:
        u, v = v, u
    if not v:
        return len(u)
    sub = metric is not Metric.LCS
    prev2 = None
    prev = list(range(len(v) + 1))
    for i in range(1, len(u) + 1):
        a = u[i - 1]
        cur = [i] + [0] * len(v)
        for j in range(1, len(v) + 1):
            b = v[j - 1]
            best = min(prev[j], cur[j - 1]) + 1
            if a == b:
                best = min(best, prev[j - 1])
            elif sub:
                best = min(best, prev[j - 1] + 1)
                if (prev2 is not None and j > 1 and metric is Metric.DL
                        and a == v[j - 2] and u[i - 2] == b):
                    best = min(best, prev2[j - 2] + 1)
            cur[j] = best
        prev2, prev = prev, cur
    return prev[-1]


def distance_table(u: Sequence, v: Sequence, metric: Metric = Metric.LEV) -> list[list[int]]:
    """``table[i][j]`` is the distance between ``u[:i]`` and ``v[:j]``."""
    metric = Metric.parse(metric)
    n, m = len(u), len(v)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    sub = metric is not Metric.LCS
    dl = metric is Metric.DL
    for i in range(1, n + 1):
        a = u[i - 1]
        row, up = d[i], d[i - 1]
        for j in range(1, m + 1):
            b = v[j - 1]
            best = min(up[j], row[j - 1]) + 1
            if a == b:
                best = min(best, up[j - 1])
            elif sub:
                best = min(best, up[j - 1] + 1)
                if dl and i > 1 and j > 1 and a == v[j - 2] and u[i - 2] == b:
                    best = min(best, d[i - 2][j - 2] + 1)
            row[j] = best
    return d


def conjugate(u: Sequence, v: Sequence) -> bool:
    """True iff ``u = xy`` and ``v = yx`` for some words x, y."""
    if len(u) != len(v):
        return False
    if isinstance(u, str) and isinstance(v, str):
        return v in u + u
    u, v = tuple(u), tuple(v)
    doubled = u + u
    return any(doubled[i:i + len(v)] == v for i in range(len(u) or 1))


def primitive_root(w: Sequence) -> Sequence:
    """Shortest p with ``w = p^n``."""
    if not w:
        raise EmptyWord("the empty word has no primitive root")
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w  # unreachable: p = n always matches


def conjugacy_witnesses(u: str, v: str, max_len: int) -> set[str]:
    """Every ``z`` with ``|z| <= max_len`` and ``u z = z v``.

    Solutions are exactly ``x (yx)^*`` over the factorisations ``u = xy``
    with ``v = yx``.  For ``u = v = ε`` the equation holds for every word;
    only ``ε`` is reported.
    """
    found = set()
    if len(u) != len(v):
        return found
    for i in range(len(u) + 1):
        x, y = u[:i], u[i:]
        if y + x != v:
            continue
        z = x
        period = y + x
        while len(z) <= max_len:
            found.add(z)
            if not period:
                break
            z += period
    return found


def directed_set_distance(U: Collection, V: Collection, metric: Metric = Metric.LEV):
    """``sup_{u in U} inf_{v in V} d(u, v)``; 0 for empty U, infinite for empty V."""
    if not U:
        return 0
    if not V:
        return INFINITY
    return max(min(edit_distance(u, v, metric) for v in V) for u in U)


def hausdorff(U: Collection, V: Collection, metric: Metric = Metric.LEV):
    if not U and not V:
        return 0
    return max(directed_set_distance(U, V, metric), directed_set_distance(V, U, metric))
