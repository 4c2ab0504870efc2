"""Hand-built example systems shared across the test modules."""

from __future__ import annotations

from smpds.model import Configuration, PdsRule, Phase, SelfModRule, SMPDS


def swap_example() -> tuple[SMPDS, Phase, Phase, Configuration]:
    """The worked example from samples/example1.smpds.

    Rule 4 swaps rule 1 out for rule 3; the canonical 5-step run from
    (<p1, g1 g1>, theta0) ends in (<p3, g3 g1>, theta1).
    """
    rules = {
        1: PdsRule("p1", "g1", "p2", ("g2", "g1")),
        2: PdsRule("p2", "g2", "p3", ()),
        3: PdsRule("p4", "g1", "p2", ("g2", "g3")),
        4: SelfModRule("p3", 1, 3, "p4"),
    }
    m = SMPDS({"p1", "p2", "p3", "p4"}, {"g1", "g2", "g3"}, rules)
    theta0 = Phase.of([1, 2, 4])
    theta1 = Phase.of([2, 3, 4])
    return m, theta0, theta1, Configuration("p1", ("g1", "g1"), theta0)


# the canonical run of swap_example, one configuration per step
SWAP_TRACE = [
    ("p1", ("g1", "g1"), (1, 2, 4)),
    ("p2", ("g2", "g1", "g1"), (1, 2, 4)),
    ("p3", ("g1", "g1"), (1, 2, 4)),
    ("p4", ("g1", "g1"), (2, 3, 4)),
    ("p2", ("g2", "g3", "g1"), (2, 3, 4)),
    ("p3", ("g3", "g1"), (2, 3, 4)),
]


def pop_chain_example() -> tuple[SMPDS, Phase, Phase]:
    """Backward-analysis example: a swap enables a pop chain.

    From phase theta0 the system can reach p3 (via rules 2 and 3) where
    smrule 6 swaps rule 1 in for rule 5, reaching phase theta1.
    """
    rules = {
        1: PdsRule("p5", "g2", "p5", ("g2", "g2")),       # inert in theta0
        2: PdsRule("p5", "g1", "p2", ("g2", "g0")),
        3: PdsRule("p2", "g2", "p3", ()),
        4: PdsRule("p4", "g0", "p0", ()),
        5: PdsRule("p1", "g1", "p4", ("g0",)),
        6: SelfModRule("p3", 5, 1, "p4"),
    }
    m = SMPDS({"p0", "p1", "p2", "p3", "p4", "p5"},
              {"g0", "g1", "g2"}, rules)
    theta0 = Phase.of([2, 3, 4, 5, 6])
    theta1 = Phase.of([1, 2, 3, 4, 6])
    return m, theta0, theta1


def push_loop_example() -> tuple[SMPDS, Phase, Phase, Configuration]:
    """Forward-analysis example: a swap redirects a push loop.

    Rule 6 swaps rule 3 out for rule 5 once control reaches p3.
    """
    rules = {
        1: PdsRule("p0", "g0", "p1", ("g1", "g0")),
        2: PdsRule("p1", "g1", "p2", ("g2", "g1")),
        3: PdsRule("p2", "g2", "p3", ("g0",)),
        4: PdsRule("p4", "g0", "p1", ()),
        5: PdsRule("p2", "g2", "p4", ("g1",)),
        6: SelfModRule("p3", 3, 5, "p4"),
    }
    m = SMPDS({"p0", "p1", "p2", "p3", "p4"}, {"g0", "g1", "g2"}, rules)
    theta0 = Phase.of([1, 2, 3, 4, 6])
    theta1 = Phase.of([1, 2, 4, 5, 6])
    return m, theta0, theta1, Configuration("p0", ("g0",), theta0)
