import pytest

from corpus import AB, load, random_two_tape, rng_for
from tdist.core import MultiTapeTransducer, Transition, project, stack_product, strongly_connected_components, trim
from tdist.loopconj import label_word, loops_conjugate, pair_finite, scc_conjugate
from tdist.metrics import conjugate


def two_tape(n, edges, finals=None):
    trans = tuple(Transition(s, a, d, (u, v)) for s, a, d, u, v in edges)
    if finals is None:
        finals = {q: ("", "") for q in range(n)}
    return MultiTapeTransducer(n, AB, AB, frozenset([0]), trans, finals, tapes=2)


def branching_product():
    D = load("fig1D.fst")[0]
    D1, D2 = load("fig1R.fst")
    return trim(stack_product([D, D1, D2], all))


def test_branching_per_path():
    T = branching_product()
    by_label = {T.labels[q]: q for q in T.states}
    scc_q2 = frozenset([by_label["(q2,p,r)"]])
    scc_q3 = frozenset([by_label["(q3,p,r)"]])
    assert scc_conjugate(T, scc_q2, (0, 1))
    assert not scc_conjugate(T, scc_q2, (0, 2))
    assert scc_conjugate(T, scc_q3, (0, 2))
    assert not scc_conjugate(T, scc_q3, (0, 1))
    # the whole machine mixes both, so neither tape alone works
    assert not loops_conjugate(T, (0, 1)) and not loops_conjugate(T, (0, 2))


def test_composed_loops_break_conjugacy():
    m = two_tape(1, [(0, "a", 0, "ab", "ba"), (0, "b", 0, "ba", "ab")])
    assert conjugate("abba", "baab")
    assert not conjugate("ababba", "babaab")
    verdict = loops_conjugate(m)
    assert not verdict
    u, v = verdict.loop.outputs
    assert not conjugate(u, v)
    assert verdict.loop.word  # a real loop is reported


def test_single_conjugate_loop():
    verdict = loops_conjugate(two_tape(1, [(0, "a", 0, "ab", "ba")]))
    assert verdict
    (lab,) = verdict.labelings
    z = label_word(lab.witness[0])
    assert z is not None and "ab" + z == z + "ba"


def test_delays_in_both_directions():
    # tape 0 is ahead by "b" in state 1 and behind by "a" in state 2; every
    # loop outputs equal words, so no one-sided delay word works
    m = two_tape(3, [(0, "a", 1, "ab", "a"), (1, "a", 0, "", "b"),
                     (0, "b", 2, "bb", "bba"), (2, "b", 0, "aa", "a")])
    for pair in ((0, 1), (1, 0)):
        verdict = loops_conjugate(m, pair)
        assert verdict
        labels = verdict.labelings[0].witness
        assert any(label_word(g) is None for g in labels.values())


def test_labels_satisfy_edges():
    rng = rng_for(12)
    from tdist.loopconj import _letters, _mul

    for _ in range(60):
        _, m = random_two_tape(rng)
        verdict = loops_conjugate(m)
        for lab in verdict.labelings:
            w = lab.witness
            for t in m.transitions:
                if t.src in w and t.dst in w:
                    lhs = _mul(_letters(t.outputs[0]), w[t.dst])
                    assert lhs == _mul(w[t.src], _letters(t.outputs[1]))


def test_silent_and_acyclic():
    assert loops_conjugate(two_tape(1, [(0, "a", 0, "", "")]))
    acyclic = two_tape(3, [(0, "a", 1, "a", "bb"), (1, "b", 2, "aaa", "")], {2: ("", "")})
    assert loops_conjugate(acyclic)
    assert pair_finite(acyclic)
    for scc in strongly_connected_components(acyclic):
        assert scc_conjugate(acyclic, scc).reason == "no loop"


def test_length_imbalance():
    m = two_tape(2, [(0, "a", 1, "a", ""), (1, "a", 0, "a", "a")])
    verdict = loops_conjugate(m)
    assert not verdict and verdict.reason == "loop outputs have different lengths"
    u, v = verdict.loop.outputs
    assert len(u) != len(v)


def test_delay_across_states():
    # delay "a" in state 0 and "b" in state 1
    m = two_tape(2, [(0, "a", 1, "a", "b"), (1, "a", 0, "b", "a"), (0, "b", 0, "ab", "ba")])
    assert loops_conjugate(m)
    labels = loops_conjugate(m).labelings[0].witness
    assert {q: label_word(g) for q, g in labels.items()} == {0: "a", 1: "b"}


def test_each_loop_conjugate_but_not_their_composition():
    m = two_tape(2, [(0, "a", 1, "a", "b"), (1, "a", 0, "b", "a"), (0, "b", 0, "ab", "ab")])
    verdict = loops_conjugate(m)
    assert not verdict
    assert not conjugate(*verdict.loop.outputs)


def test_same_tape_always_conjugate():
    rng = rng_for(5)
    for _ in range(20):
        _, m = random_two_tape(rng)
        assert loops_conjugate(m, (0, 0))
        assert loops_conjugate(m, (1, 1))


def test_pair_order_irrelevant():
    rng = rng_for(6)
    for _ in range(30):
        _, m = random_two_tape(rng)
        assert bool(loops_conjugate(m, (0, 1))) == bool(loops_conjugate(m, (1, 0)))


def test_soundness_on_composed_loops():
    # a positive verdict must hold for every loop, including long compositions
    rng = rng_for(8)
    from tdist.oracle import closed_walks

    checked = 0
    for _ in range(40):
        _, m = random_two_tape(rng, max_states=3)
        if loops_conjugate(m):
            for _, u, v, _ in closed_walks(m, 6):
                assert conjugate(u, v)
            checked += 1
    assert checked >= 10


def test_pair_finite_trims():
    # the bad loop sits on a state that cannot reach a final state
    m = two_tape(2, [(0, "a", 0, "a", "a"), (0, "b", 1, "", ""), (1, "a", 1, "a", "b")], {0: ("", "")})
    assert not loops_conjugate(m)
    assert pair_finite(m)


def test_project_keeps_verdict():
    T = branching_product()
    sub = project(T, [0, 2])
    assert bool(loops_conjugate(sub)) == bool(loops_conjugate(T, (0, 2)))


@pytest.mark.parametrize("u, v", [("aab", "aba"), ("abb", "bba"), ("aabb", "abba")])
def test_single_loop_matches_conjugate(u, v):
    assert bool(loops_conjugate(two_tape(1, [(0, "a", 0, u, v)]))) == conjugate(u, v)
