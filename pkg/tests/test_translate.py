import pytest

from smpds import (
    Configuration,
    PdsRule,
    Phase,
    SelfModRule,
    SMPDS,
    config_to_pds,
    from_configs,
    pds_accepts,
    pds_from_configs,
    pds_poststar,
    pds_prestar,
    phase_closure,
    poststar,
    prestar,
    to_pds,
    to_symbolic_pds,
)
from smpds.bench import GenParams, generate
from smpds.model import step
from smpds.translate import Identity, Modify, pds_step, symbolic_step

from fixtures import swap_example
from oracles import raw_reach


def test_phase_closure_contains_seeds_and_successors():
    m, theta0, theta1, _ = swap_example()
    closed = phase_closure(m, [theta0])
    assert theta0 in closed and theta1 in closed


def test_phase_closure_backward():
    m, theta0, theta1, _ = swap_example()
    closed = phase_closure(m, [theta1])
    assert theta0 in closed


def test_to_pds_requires_closed_set():
    m, theta0, theta1, _ = swap_example()
    with pytest.raises(ValueError, match="closed"):
        to_pds(m, [theta0])


def test_to_pds_rule_shape():
    m, theta0, theta1, _ = swap_example()
    pds = to_pds(m, phase_closure(m, [theta0]))
    # the modifying rule becomes one paired rule per stack symbol
    paired = [r for r in pds.rules
              if r.lhs_state == ("p3", theta0) and r.rhs_state[0] == "p4"]
    assert {r.lhs_symbol for r in paired} == set(m.alphabet)
    for r in paired:
        assert r.rhs_word == (r.lhs_symbol,)
        assert r.rhs_state[1] is theta1


def test_symbolic_size_formula():
    m, *_ = swap_example()
    spds = to_symbolic_pds(m)
    assert len(spds.rules) == len(m.delta) + len(m.delta_c) * len(m.alphabet)


def test_relations():
    ident = Identity(3)
    assert ident.image(Phase.of([3])) is Phase.of([3])
    assert ident.image(Phase.of([1])) is None
    assert ident.holds(Phase.of([3]), Phase.of([3]))
    mod = Modify(guard=4, removed=1, added=3)
    assert mod.image(Phase.of([1, 2, 4])) is Phase.of([2, 3, 4])
    assert mod.image(Phase.of([2, 4])) is None      # removed rule absent
    assert mod.image(Phase.of([1, 2])) is None      # guard absent
    assert mod.holds(Phase.of([1, 2, 4]), Phase.of([2, 3, 4]))
    assert not mod.holds(Phase.of([1, 2, 4]), Phase.of([1, 2, 4]))


@pytest.mark.parametrize("seed", range(25))
def test_pds_step_equivalence(seed):
    """Single steps agree between the model and both translations
    (on nonempty stacks; the paired PDS cannot fire modifying rules
    against an empty stack)."""
    inst = generate(GenParams(num_states=3, num_symbols=3, num_rules=5,
                              num_smrules=2, seed=3000 + seed))
    m, c0 = inst.smpds, inst.initial
    pds = to_pds(m, phase_closure(m, [c0.phase]))
    spds = to_symbolic_pds(m)
    reach, _ = raw_reach(m, c0, 4, 4000)
    for c in reach:
        if not c.stack:
            continue
        succ = step(m, c)
        state, stack = config_to_pds(c)
        assert pds_step(pds, state, stack) == {config_to_pds(s) for s in succ}
        assert symbolic_step(spds, c) == succ


@pytest.mark.parametrize("seed", range(15))
def test_classical_saturations_cross_check(seed):
    """Direct saturation and translate-then-classical agree."""
    inst = generate(GenParams(num_states=3, num_symbols=3, num_rules=5,
                              num_smrules=2, seed=4000 + seed))
    m, c0 = inst.smpds, inst.initial
    reach, truncated = raw_reach(m, c0, 5, 8000)
    if truncated:
        pytest.skip("interpreter bound hit")
    targets = [c for c in sorted(reach, key=repr) if c.stack][:1]
    if not targets:
        pytest.skip("only empty-stack configurations reachable")
    target = targets[0]
    phases = phase_closure(m, [c0.phase, target.phase])
    pds = to_pds(m, phases)
    pre = prestar(m, from_configs(m, [target]))
    ppre = pds_prestar(pds, pds_from_configs(pds, [config_to_pds(target)]))
    post = poststar(m, from_configs(m, [c0]))
    ppost = pds_poststar(pds, pds_from_configs(pds, [config_to_pds(c0)]))
    for c in reach:
        if not c.stack:
            continue
        state, stack = config_to_pds(c)
        assert pds_accepts(ppre, state, stack) == pre.accepts(c), c
        assert pds_accepts(ppost, state, stack) == post.accepts(c), c


def test_classical_poststar_matches_interpreter():
    m, theta0, theta1, c0 = swap_example()
    pds = to_pds(m, phase_closure(m, [theta0]))
    sat = pds_poststar(pds, pds_from_configs(pds, [config_to_pds(c0)]))
    final = Configuration("p3", ("g3", "g1"), theta1)
    state, stack = config_to_pds(final)
    assert pds_accepts(sat, state, stack)
    assert not pds_accepts(sat, ("p3", theta0), ("g3", "g1"))


def test_classical_prestar_rejects_epsilon_input():
    m, theta0, *_ = swap_example()
    pds = to_pds(m, phase_closure(m, [theta0]))
    aut = pds_from_configs(pds, [(("p1", theta0), ("g1",))])
    from smpds.automaton import EPS, Plain
    aut.add_transition(Plain("x"), EPS, Plain("y"))
    with pytest.raises(ValueError, match="epsilon"):
        pds_prestar(pds, aut)
