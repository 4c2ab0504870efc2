import pytest

from smpds import (
    Configuration,
    PdsRule,
    Phase,
    SaturationStats,
    SelfModRule,
    SMPDS,
    from_configs,
    poststar,
)
from smpds.bench import GenParams, generate

from fixtures import push_loop_example, swap_example
from oracles import raw_reach


def test_poststar_push_loop_fixture():
    """Frozen successor set derived with the reference interpreter."""
    m, th0, th1, c0 = push_loop_example()
    sat = poststar(m, from_configs(m, [c0]))
    expected = {
        ("p0", ("g0",), th0),
        ("p1", ("g1", "g0"), th0),
        ("p1", ("g1", "g0"), th1),
        ("p2", ("g2", "g1", "g0"), th0),
        ("p2", ("g2", "g1", "g0"), th1),
        ("p3", ("g0", "g1", "g0"), th0),
        ("p4", ("g0", "g1", "g0"), th1),
        ("p4", ("g1", "g1", "g0"), th1),
    }
    got = sat.enumerate_configs(4)
    assert got == {Configuration(s, w, th) for s, w, th in expected}


def test_poststar_swap_example_endpoints():
    m, theta0, theta1, c0 = swap_example()
    sat = poststar(m, from_configs(m, [c0]))
    assert sat.accepts(c0)
    assert sat.accepts(Configuration("p3", ("g3", "g1"), theta1))
    assert not sat.accepts(Configuration("p3", ("g3", "g1"), theta0))
    assert not sat.accepts(Configuration("p3", ("g3", "g3"), theta1))


def test_poststar_does_not_mutate_input():
    m, theta0, theta1, c0 = swap_example()
    aut = from_configs(m, [c0])
    before = set(aut.transitions)
    poststar(m, aut)
    assert aut.transitions == before


def test_poststar_stats():
    m, th0, th1, c0 = push_loop_example()
    stats = SaturationStats()
    poststar(m, from_configs(m, [c0]), stats)
    assert stats.transitions_added > 0
    assert stats.phases_materialized >= 2
    assert stats.wall_seconds >= 0


def test_poststar_idempotent():
    m, th0, th1, c0 = push_loop_example()
    once = poststar(m, from_configs(m, [c0]))
    twice = poststar(m, once)
    assert twice.transitions == once.transitions
    assert twice.finals == once.finals


def test_poststar_rejects_wide_rules():
    rules = {0: PdsRule("p", "a", "p", ("a", "a", "a"))}
    m = SMPDS({"p"}, {"a"}, rules)
    aut = from_configs(m, [Configuration("p", ("a",), Phase.of([0]))])
    with pytest.raises(ValueError, match="normalize_push"):
        poststar(m, aut)


def test_poststar_rejects_self_referential_rules():
    rules = {0: SelfModRule("p", 0, 0, "p"), 1: PdsRule("p", "a", "p", ())}
    m = SMPDS({"p"}, {"a"}, rules)
    aut = from_configs(m, [Configuration("p", ("a",), Phase.of([0, 1]))])
    with pytest.raises(ValueError, match="normalize_selfmod"):
        poststar(m, aut)


def test_poststar_empty_stack_smrule_successors():
    # an smrule fires on the empty stack, so (q, eps) succeeds (p, eps)
    rules = {0: SelfModRule("p", 1, 1, "q"), 1: PdsRule("q", "a", "q", ("a",))}
    m = SMPDS({"p", "q"}, {"a"}, rules)
    th = Phase.of([0, 1])
    sat = poststar(m, from_configs(m, [Configuration("p", (), th)]))
    assert sat.accepts(Configuration("q", (), th))
    assert not sat.accepts(Configuration("q", ("a",), th))


def test_poststar_pop_then_continue():
    # after a pop empties the stack, an smrule can still fire
    rules = {
        0: PdsRule("p", "a", "q", ()),
        1: SelfModRule("q", 0, 0, "r"),
    }
    m = SMPDS({"p", "q", "r"}, {"a"}, rules)
    th = Phase.of([0, 1])
    sat = poststar(m, from_configs(m, [Configuration("p", ("a",), th)]))
    assert sat.accepts(Configuration("q", (), th))
    assert sat.accepts(Configuration("r", (), th))


@pytest.mark.parametrize("seed", range(30))
def test_poststar_agrees_with_interpreter(seed):
    inst = generate(GenParams(num_states=3, num_symbols=3, num_rules=5,
                              num_smrules=2, seed=2000 + seed))
    m, c0 = inst.smpds, inst.initial
    reach, truncated = raw_reach(m, c0, 5, 8000)
    if truncated:
        pytest.skip("interpreter bound hit")
    sat = poststar(m, from_configs(m, [c0]))
    for c in reach:
        assert sat.accepts(c), c
    for c in sat.enumerate_configs(4):
        assert c in reach, c
