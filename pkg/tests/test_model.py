import pytest
from hypothesis import given, settings, strategies as st

from smpds import (
    Configuration,
    PdsRule,
    Phase,
    SelfModRule,
    SMPDS,
    bounded_reach,
    check_configuration,
    normalize_push,
    normalize_selfmod,
    validate,
)
from smpds.model import step

from fixtures import SWAP_TRACE, swap_example
from oracles import raw_reach, raw_step, to_raw


def test_phase_interning_identity():
    a = Phase.of([3, 1, 2])
    b = Phase.of([1, 2, 3, 2])
    assert a is b
    assert a == b
    assert Phase.of([]) is Phase.of(())
    assert a is not Phase.of([1, 2])


def test_phase_update():
    a = Phase.of([1, 2])
    assert a.update(1, 3) is Phase.of([2, 3])
    assert a.update(1, 2) is Phase.of([2])
    # removing an absent id just adds
    assert a.update(7, 3) is Phase.of([1, 2, 3])


def test_phase_membership():
    a = Phase.of([1, 2])
    assert 1 in a and 3 not in a
    assert sorted(a) == [1, 2]


def test_swap_example_trace():
    m, theta0, theta1, c0 = swap_example()
    cur = {c0}
    for expected in SWAP_TRACE[1:]:
        nxt = set()
        for c in cur:
            nxt |= step(m, c)
        # the run is deterministic: exactly one successor at each step
        assert len(nxt) == 1
        (c,) = nxt
        assert (c.state, c.stack, tuple(sorted(c.phase.members))) == expected
        cur = nxt
    # the final configuration is terminal
    assert not step(m, next(iter(cur)))


def test_smrule_fires_on_empty_stack():
    rules = {0: SelfModRule("p", 1, 1, "q"), 1: PdsRule("p", "a", "p", ())}
    m = SMPDS({"p", "q"}, {"a"}, rules)
    c = Configuration("p", (), Phase.of([0, 1]))
    assert step(m, c) == {Configuration("q", (), Phase.of([0, 1]))}


def test_smrule_needs_removed_rule_present():
    rules = {0: SelfModRule("p", 1, 1, "q"), 1: PdsRule("p", "a", "p", ())}
    m = SMPDS({"p", "q"}, {"a"}, rules)
    c = Configuration("p", (), Phase.of([0]))
    assert not step(m, c)


def test_plain_rule_needs_matching_top():
    m, theta0, _, _ = swap_example()
    assert not step(m, Configuration("p1", ("g2",), theta0))
    assert not step(m, Configuration("p1", (), theta0))


def test_validate_reports_problems():
    rules = {
        0: PdsRule("p", "a", "nowhere", ("a",)),
        1: PdsRule("p", "b", "p", ("a", "a", "a")),
        2: SelfModRule("p", 9, 0, "p"),
        3: SelfModRule("p", 3, 0, "p"),
    }
    m = SMPDS({"p"}, {"a"}, rules)
    rep = validate(m)
    assert not rep.ok
    text = " ".join(rep.violations)
    assert "nowhere" in text            # unknown state
    assert "'b'" in text                # unknown symbol
    assert "dangling" in text           # smrule 2 references rule 9
    warn = " ".join(rep.warnings)
    assert "normalize_push" in warn
    assert "normalize_selfmod" in warn


def test_check_configuration():
    m, theta0, _, c0 = swap_example()
    check_configuration(m, c0)
    with pytest.raises(ValueError):
        check_configuration(m, Configuration("nope", (), theta0))
    with pytest.raises(ValueError):
        check_configuration(m, Configuration("p1", ("zz",), theta0))
    with pytest.raises(ValueError):
        check_configuration(m, Configuration("p1", (), Phase.of([99])))


def test_bounded_reach_matches_oracle():
    m, theta0, _, c0 = swap_example()
    got = bounded_reach(m, c0, max_stack=6, max_steps=10000)
    want, trunc = raw_reach(m, c0, 6, 10000)
    assert not got.truncated and not trunc
    assert got.configs == want
    assert len(got.configs) == 6


def test_bounded_reach_truncates():
    rules = {0: PdsRule("p", "a", "p", ("a", "a"))}
    m = SMPDS({"p"}, {"a"}, rules)
    r = bounded_reach(m, Configuration("p", ("a",), Phase.of([0])),
                      max_stack=4, max_steps=1000)
    assert r.truncated
    assert all(len(c.stack) <= 4 for c in r.configs)


# -- property tests against the independent step oracle ---------------------

_states = st.sampled_from(["p", "q", "r"])
_symbols = st.sampled_from(["a", "b"])


@st.composite
def small_systems(draw):
    n = draw(st.integers(1, 5))
    rules = {}
    for rid in range(n):
        rules[rid] = PdsRule(draw(_states), draw(_symbols), draw(_states),
                             tuple(draw(st.lists(_symbols, max_size=2))))
    for rid in range(n, n + draw(st.integers(0, 2))):
        rules[rid] = SelfModRule(draw(_states), draw(st.integers(0, n - 1)),
                                 draw(st.integers(0, n - 1)), draw(_states))
    m = SMPDS({"p", "q", "r"}, {"a", "b"}, rules)
    phase = Phase.of(draw(st.sets(st.sampled_from(sorted(rules)))))
    stack = tuple(draw(st.lists(_symbols, max_size=3)))
    return m, Configuration(draw(_states), stack, phase)


@given(small_systems())
@settings(max_examples=150, deadline=None)
def test_step_agrees_with_oracle(mc):
    m, c = mc
    got = {to_raw(c2) for c2 in step(m, c)}
    assert got == raw_step(m, to_raw(c))


# -- normalizations ----------------------------------------------------------

def test_normalize_selfmod_noop_when_clean():
    m, *_ = swap_example()
    n = normalize_selfmod(m)
    assert n.smpds is m
    assert n.rewrite_phase(Phase.of([1, 2])) is Phase.of([1, 2])
    assert n.project_phase(Phase.of([1, 2])) is Phase.of([1, 2])


def test_normalize_selfmod_equivalence():
    rules = {
        0: PdsRule("p", "a", "p", ("a", "a")),
        1: SelfModRule("p", 1, 0, "q"),      # removes itself
        2: PdsRule("q", "a", "p", ()),
    }
    m = SMPDS({"p", "q"}, {"a"}, rules)
    n = normalize_selfmod(m)
    rep = validate(n.smpds)
    assert rep.ok and not rep.warnings
    c0 = Configuration("p", ("a",), Phase.of([0, 1, 2]))
    # the push rule grows the stack without bound; the normalization leaves
    # stacks untouched, so the explorations cut off at the same depth
    orig, _ = raw_reach(m, c0, 5, 20000)
    norm, _ = raw_reach(n.smpds, n.rewrite_config(c0), 5, 40000)
    projected = {n.project_config(c) for c in norm if c.state in m.states}
    assert projected == orig


def test_normalize_push_equivalence():
    rules = {
        0: PdsRule("p", "a", "p", ("b", "a", "b", "a")),
        1: PdsRule("p", "b", "q", ()),
        2: PdsRule("q", "a", "p", ()),
        3: SelfModRule("q", 0, 1, "p"),
    }
    m = SMPDS({"p", "q"}, {"a", "b"}, rules)
    n = normalize_push(m)
    rep = validate(n.smpds)
    assert rep.ok and not rep.warnings
    assert all(len(n.smpds.rules[rid].rhs_word) <= 2 for rid in n.smpds.delta)
    assert n.warnings  # smrule 3 references the split rule
    c0 = Configuration("p", ("a",), Phase.of([0, 1, 2, 3]))
    orig, t1 = raw_reach(m, c0, 8, 50000)
    norm, t2 = raw_reach(n.smpds, n.rewrite_config(c0), 10, 100000)
    assert not t1 and not t2
    projected = {n.project_config(c) for c in norm
                 if c.state in m.states
                 and all(g in m.alphabet for g in c.stack)
                 and len(c.stack) <= 8}
    assert projected == orig


def test_normalize_push_noop_when_clean():
    m, *_ = swap_example()
    n = normalize_push(m)
    assert n.smpds is m and not n.rule_map
