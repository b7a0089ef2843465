import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdist.core import words
from tdist.errors import EmptyWord
from tdist.metrics import (
    INFINITY,
    Metric,
    conjugacy_witnesses,
    conjugate,
    directed_set_distance,
    distance_table,
    edit_distance,
    hausdorff,
    primitive_root,
)

ab_words = st.text(alphabet="ab", max_size=8)


@pytest.mark.parametrize("u, v, metric, expected", [
    ("aabb", "bbaa", "lev", 4),
    ("aabb", "bbaa", "lcs", 4),
    ("aabb", "bbaa", "dl", 3),
    ("ab", "ba", "lev", 2),
    ("ab", "ba", "dl", 1),
    ("ab", "ba", "lcs", 2),
    ("a", "b", "lev", 1),
    ("a", "b", "lcs", 2),
    ("", "abc", "lev", 3),
    ("kitten", "sitting", "lev", 3),
    ("ca", "abc", "dl", 3),
    ("abab", "baba", "lev", 2),
    ("abab", "baba", "dl", 2),
])
def test_known_distances(u, v, metric, expected):
    assert edit_distance(u, v, metric) == expected


def test_metric_parse():
    assert Metric.parse("lev") is Metric.LEV
    assert Metric.parse(Metric.DL) is Metric.DL
    assert "transpose" in Metric.DL.operations
    assert Metric.LCS.operations == {"insert", "delete"}
    with pytest.raises(ValueError):
        Metric.parse("hamming")


@given(ab_words, ab_words)
def test_lcs_formula(u, v):
    # |u| + |v| - 2 * longest common subsequence
    table = [[0] * (len(v) + 1) for _ in range(len(u) + 1)]
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            table[i + 1][j + 1] = table[i][j] + 1 if a == b else max(table[i][j + 1], table[i + 1][j])
    assert edit_distance(u, v, Metric.LCS) == len(u) + len(v) - 2 * table[-1][-1]


@given(ab_words, ab_words)
def test_ordering_and_length_bound(u, v):
    dl, lev, lcs = (edit_distance(u, v, m) for m in (Metric.DL, Metric.LEV, Metric.LCS))
    assert dl <= lev <= lcs
    assert abs(len(u) - len(v)) <= lev <= max(len(u), len(v))


@given(ab_words, ab_words)
def test_table_corner_is_distance(u, v):
    for m in Metric:
        assert distance_table(u, v, m)[len(u)][len(v)] == edit_distance(u, v, m)


def test_table_prefixes():
    t = distance_table("ab", "ba", Metric.DL)
    assert t[0] == [0, 1, 2]
    assert t[1][1] == 1 and t[2][2] == 1


def test_osa_triangle_fails_over_three_letters():
    # restricted transpositions: no edits inside a transposed pair
    assert edit_distance("ca", "abc", Metric.DL) == 3
    assert edit_distance("ca", "ac", Metric.DL) + edit_distance("ac", "abc", Metric.DL) == 2


# --- conjugacy -------------------------------------------------------------


@pytest.mark.parametrize("u, v, expected", [
    ("aabb", "bbaa", True),
    ("abb", "bab", True),
    ("ab", "ab", True),
    ("", "", True),
    ("ab", "aa", False),
    ("a", "aa", False),
    ("aab", "abb", False),
])
def test_conjugate_examples(u, v, expected):
    assert conjugate(u, v) is expected


def test_conjugate_exhaustive_rotation():
    for n in range(6):
        for u in words("ab", n, min_len=n):
            rotations = {u[i:] + u[:i] for i in range(max(n, 1))}
            for v in words("ab", n, min_len=n):
                assert conjugate(u, v) == (v in rotations)


@pytest.mark.parametrize("w, root", [("abab", "ab"), ("aaa", "a"), ("aba", "aba"), ("abaaba", "aba")])
def test_primitive_root(w, root):
    assert "".join(primitive_root(w)) == root


def test_primitive_root_of_empty_word():
    with pytest.raises(EmptyWord):
        primitive_root("")


def test_witnesses():
    assert conjugacy_witnesses("ab", "ba", 3) == {"a", "aba"}
    assert conjugacy_witnesses("aa", "aa", 2) == {"", "a", "aa"}
    assert conjugacy_witnesses("ab", "aa", 5) == set()


@given(ab_words, ab_words, st.integers(0, 10))
def test_witnesses_solve_the_equation(u, v, n):
    for z in conjugacy_witnesses(u, v, n):
        assert len(z) <= n and u + z == z + v


# --- set distances ---------------------------------------------------------


def test_set_distances():
    assert directed_set_distance({"a"}, {"a", "bbb"}) == 0
    assert directed_set_distance({"a", "bbb"}, {"a"}) == 3
    assert hausdorff({"a"}, {"a", "bbb"}) == 3
    assert hausdorff({"ab"}, {"ba"}, Metric.DL) == 1
    assert hausdorff(set(), set()) == 0
    assert hausdorff({"a"}, set()) == INFINITY
    assert directed_set_distance(set(), {"a"}) == 0


@given(st.sets(ab_words, max_size=3), st.sets(ab_words, max_size=3))
def test_hausdorff_symmetric(U, V):
    for m in Metric:
        assert hausdorff(U, V, m) == hausdorff(V, U, m)
