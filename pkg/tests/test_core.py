import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import AB, load, mk, random_product, rep, rng_for
from tdist.core import (
    MachineDescription,
    MultiTapeTransducer,
    Nfa,
    StateDecl,
    Transition,
    TransitionDecl,
    build_machine,
    complete,
    complement,
    determinize,
    disjoint_union,
    domain_equal,
    domain_included,
    domain_nfa,
    inclusion_counterexample,
    isomorphic,
    project,
    scc_paths,
    single_initial,
    stack_product,
    strongly_connected_components,
    sub_machine,
    trim,
    words,
)
from tdist.errors import (
    AlphabetMismatch,
    ArityMismatch,
    DuplicateTransitionOnSequentialFlag,
    EmptyMachine,
    IndexOutOfRange,
    NonSequentialComponent,
    UndeclaredState,
    UndeclaredSymbol,
)
from tdist.oracle import run_outputs


def relation(machine, max_len=5):
    return {w: run_outputs(machine, w) for w in words(machine.inputs, max_len)}


@pytest.fixture
def branching():
    D = load("fig1D.fst")[0]
    D1, D2 = load("fig1R.fst")
    return D, D1, D2


def branching_product(D, D1, D2):
    return trim(stack_product([D, D1, D2], lambda v: v[0] and v[1] and v[2]))


# --- build_machine ---------------------------------------------------------


def test_branching_D_is_sequential(branching):
    D = branching[0]
    assert D.is_sequential
    assert D.num_states == 3
    assert D.is_complete
    assert run_outputs(D, "ab") == {("aa",)}
    assert run_outputs(D, "") == set()


def test_zero_states_rejected():
    with pytest.raises(EmptyMachine):
        build_machine(MachineDescription("z", ["a"], ["a"], [], []))


def test_self_loop_repeats_output():
    m = mk("ab", ["0 a 0 ab"], {"0": ""}, inputs=("a",))
    for n in range(6):
        assert run_outputs(m, "a" * n) == {("ab" * n,)}


def test_undeclared_symbols_and_states():
    states = [StateDecl("0", True, "")]
    with pytest.raises(UndeclaredSymbol):
        build_machine(MachineDescription("m", ["a"], ["a"], states, [TransitionDecl("0", "0", "b", "")]))
    with pytest.raises(UndeclaredSymbol):
        build_machine(MachineDescription("m", ["a"], ["a"], states, [TransitionDecl("0", "0", "a", "c")]))
    with pytest.raises(UndeclaredState):
        build_machine(MachineDescription("m", ["a"], ["a"], states, [TransitionDecl("0", "9", "a", "")]))


def test_sequential_flag_rejects_duplicates():
    states = [StateDecl("0", True, "")]
    trans = [TransitionDecl("0", "0", "a", "a"), TransitionDecl("0", "0", "a", "")]
    desc = MachineDescription("m", ["a"], ["a"], states, trans)
    assert not build_machine(desc).is_sequential
    with pytest.raises(DuplicateTransitionOnSequentialFlag):
        build_machine(desc, sequential=True)


def test_arity_checked():
    with pytest.raises(ArityMismatch):
        MultiTapeTransducer(1, AB, AB, {0}, (Transition(0, "a", 0, ("a",)),), {0: ("", "")}, tapes=2)


def test_flags():
    m = rep("a")
    assert m.is_sequential and m.is_complete and m.is_trim


# --- trim / complete -------------------------------------------------------


def test_trim_removes_unreachable_final_component():
    m = mk("m", ["0 a 0 a", "0 b 0 b", "5 a 6 a"], {"0": "", "6": ""})
    t = trim(m)
    assert t.num_states == 1
    assert relation(t) == relation(m)


def test_trim_fixpoint():
    m = trim(load("fig1D.fst")[0])
    assert isomorphic(trim(m), m)


def test_trim_unreachable_final_gives_empty():
    m = mk("m", ["0 a 0 a", "1 a 1 a"], {"1": ""})
    t = trim(m)
    assert t.num_states == 0 and t.is_empty
    assert domain_nfa(t).is_empty()


def test_complete_keeps_complete_machines(branching):
    D1 = branching[1]
    assert complete(D1) is D1


def test_complete_adds_non_final_sink():
    m = mk("m", ["0 a 0 a"], {"0": ""})
    c = complete(m)
    assert c.num_states == 2 and c.is_complete
    assert 1 not in c.finals
    assert relation(c) == relation(m)


def test_complete_then_trim_is_identity_on_total_machines():
    m = trim(load("fig1D.fst")[0])
    assert isomorphic(trim(complete(m)), m)


def test_single_initial_preserves_relation(branching):
    D1, D2 = branching[1], branching[2]
    u = disjoint_union([D1, D2])
    s = single_initial(u)
    assert len(s.initial) == 1
    assert relation(s, 4) == relation(u, 4)


# --- products --------------------------------------------------------------


def test_branching_product(branching):
    T = branching_product(*branching)
    assert T.num_states == 3 and T.tapes == 3 and T.is_sequential
    assert sorted(T.labels) == ["(q1,p,r)", "(q2,p,r)", "(q3,p,r)"]
    assert 0 not in T.finals
    outs = {(T.labels[t.src], t.letter, T.labels[t.dst]): t.outputs for t in T.transitions}
    assert outs[("(q1,p,r)", "a", "(q2,p,r)")] == ("a", "a", "b")
    assert outs[("(q2,p,r)", "b", "(q2,p,r)")] == ("a", "a", "b")
    assert outs[("(q3,p,r)", "a", "(q3,p,r)")] == ("b", "a", "b")


def test_product_of_one_machine_is_a_copy():
    m = trim(load("fig1D.fst")[0])
    assert isomorphic(trim(stack_product([m], lambda v: v[0])), m)


def test_product_disjoint_domains_is_empty():
    a_only = mk("a", ["0 a 0 a"], {"0": ""})
    b_only = mk("b", ["0 b 0 b"], {"0": ""})
    p = trim(stack_product([mk("a", ["0 a 1 a"], {"1": ""}), mk("b", ["0 b 1 b"], {"1": ""})], all))
    assert p.is_empty
    assert not trim(stack_product([a_only, b_only], all)).is_empty  # both accept the empty word


def test_product_errors():
    with pytest.raises(AlphabetMismatch):
        stack_product([rep("a"), mk("x", ["0 a 0 a"], {"0": ""}, inputs=("a",))])
    nd = mk("nd", ["0 a 0 a", "0 a 1 b"], {"0": ""})
    with pytest.raises(NonSequentialComponent):
        stack_product([rep("a"), nd])


def test_product_run_correspondence(branching):
    D, D1, D2 = branching
    T = branching_product(D, D1, D2)
    for w in words(AB, 6):
        expected = run_outputs(D, w)
        if not expected:
            assert run_outputs(T, w) == set()
            continue
        (o0,), = expected
        (o1,), = run_outputs(D1, w)
        (o2,), = run_outputs(D2, w)
        assert run_outputs(T, w) == {(o0, o1, o2)}


def test_project(branching):
    T = branching_product(*branching)
    f = project(T, [0])
    for w in words(AB, 5):
        assert run_outputs(f, w) == ({(w[0] * len(w),)} if w else set())
    g = project(T, [2])
    for w in words(AB, 5):
        assert run_outputs(g, w) == ({("b" * len(w),)} if w else set())
    assert relation(project(T, [0, 1, 2]), 4) == relation(T, 4)
    with pytest.raises(IndexOutOfRange):
        project(T, [3])


# --- SCC paths -------------------------------------------------------------


def test_branching_paths(branching):
    T = branching_product(*branching)
    paths = scc_paths(T)
    assert sorted(p.describe(T) for p in paths) == [
        [["(q1,p,r)"], ["(q2,p,r)"]],
        [["(q1,p,r)"], ["(q3,p,r)"]],
    ]


def test_single_scc_single_path():
    m = rep("a")
    paths = scc_paths(m)
    assert len(paths) == 1 and paths[0].bridges == ()


def test_path_count_with_parallel_bridges():
    # A -> B by two letters, A -> C by one; B and C final; A not final
    m = mk("m", ["A a B x", "A b B y", "A a C z", "B a B", "C b C"], {"B": "", "C": ""}, initial=("A",),
           outputs=("x", "y", "z"))
    m = MultiTapeTransducer(m.num_states, m.inputs, m.outputs, m.initial, m.transitions, m.finals,
                            labels=m.labels)
    m_nd = trim(m)
    paths = scc_paths(m_nd)
    assert len(paths) == 3
    assert sorted(len(p.bridges) for p in paths) == [1, 1, 1]


def test_paths_cover_language():
    rng = rng_for(7)
    for _ in range(15):
        m = random_product(rng)
        union = {w for p in scc_paths(m) for w in words(AB, 6) if run_outputs(sub_machine(m, p), w)}
        direct = {w for w in words(AB, 6) if run_outputs(m, w)}
        assert union == direct


def test_scc_topological_order():
    m = mk("m", ["0 a 1", "1 a 1", "1 b 2", "2 a 2"], {"2": ""})
    comps = strongly_connected_components(m)
    assert [sorted(m.labels[q] for q in c) for c in comps] == [["0"], ["1"], ["2"]]


# --- domains ---------------------------------------------------------------


def test_branching_domains(branching):
    D, D1, D2 = branching
    dD = domain_nfa(D)
    dR = domain_nfa(disjoint_union([D1, D2]))
    assert domain_included(dD, dR)
    assert not domain_equal(dD, dR)
    assert inclusion_counterexample(dR, dD) == ()


def test_domain_reflexive():
    d = domain_nfa(load("fig1D.fst")[0])
    assert domain_equal(d, d)


def test_all_words_vs_ending_in_a():
    everything = domain_nfa(rep("a"))
    ends_a = domain_nfa(mk("e", ["0 a 1", "0 b 0", "1 a 1", "1 b 0"], {"1": ""}))
    assert domain_included(ends_a, everything)
    assert not domain_included(everything, ends_a)
    # and against the complement of "ends in a"
    other = complement(ends_a)
    assert not domain_included(ends_a, other) and not domain_included(other, ends_a)
    for w in words(AB, 6):
        assert ends_a.accepts(w) == (w[-1:] == ("a",))
        assert other.accepts(w) != ends_a.accepts(w)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_equal_iff_mutual_inclusion(s1, s2):
    a = domain_nfa(random_product(rng_for(s1), max_states=3))
    b = domain_nfa(random_product(rng_for(s2), max_states=3))
    assert domain_equal(a, b) == (domain_included(a, b) and domain_included(b, a))
    sample = {w for w in words(AB, 5) if a.accepts(w)} <= {w for w in words(AB, 5) if b.accepts(w)}
    if domain_included(a, b):
        assert sample


def test_determinize_preserves_language():
    rng = rng_for(3)
    for _ in range(10):
        nfa = domain_nfa(random_product(rng))
        d = determinize(nfa)
        for w in words(AB, 6):
            assert nfa.accepts(w) == d.accepts(w)


def test_epsilon_nfa():
    n = Nfa(3, ("a",), frozenset([0]), ((0, None, 1), (1, "a", 2)), frozenset([2]), epsilon=True)
    assert n.accepts("a") and not n.accepts("") and not n.accepts("aa")


def test_sequential_machines_have_one_run():
    rng = rng_for(11)
    for _ in range(10):
        m = random_product(rng)
        for w in words(AB, 5):
            assert len(run_outputs(m, w)) <= 1
