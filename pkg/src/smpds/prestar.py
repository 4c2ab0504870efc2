"""Direct backward saturation: compute pre*(L(A)) on the P-automaton itself.

Two saturation rules, applied until fixpoint:

  alpha1: for a plain rule <p,g> -> <p1,w> in a phase theta, whenever the
          automaton has a path (p1,theta) --w--> q, add ((p,theta), g, q).

  alpha2: for a modifying rule p --(r1,r2)--> p1, whenever a transition
          (p1,theta) --g--> q exists with the rule and r2 in theta, add
          ((p,theta'), g, q) for every predecessor phase theta' with
          theta = (theta' - {r1}) | {r2}.

The input automaton may contain epsilon transitions (they are honoured
during matching); the saturation itself only adds symbol-labelled
transitions, plus final-state markings for empty-stack predecessors
reached through modifying rules.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automaton import EPS, AutState, Initial, PAutomaton
from .model import Phase, PdsRule, RuleId, SelfModRule, SMPDS


@dataclass
class SaturationStats:
    transitions_added: int = 0
    finals_added: int = 0
    phases_materialized: int = 0
    wall_seconds: float = 0.0


def solve_predecessor_phases(theta: Phase, rid: RuleId,
                             rule: SelfModRule) -> list[Phase]:
    """Phases theta' from which firing `rule` yields `theta`.

    The set equation theta = (theta' - {removed}) | {added} has at most two
    solutions; each candidate is verified by applying the forward update,
    and must contain both the modifying rule itself and its removed rule.
    """
    if rule.added not in theta:
        return []
    members = theta.members
    candidates = {
        Phase.of(members | {rule.removed}),
        Phase.of((members - {rule.added}) | {rule.removed}),
    }
    out = []
    for cand in candidates:
        if rid in cand and rule.removed in cand \
                and cand.update(rule.removed, rule.added) is theta:
            out.append(cand)
    return out


class _PrestarEngine:
    def __init__(self, smpds: SMPDS, aut: PAutomaton, tick=None):
        for rid in smpds.delta_c:
            if smpds.rules[rid].removed == rid:
                raise ValueError(
                    "self-referential modifying rule; run normalize_selfmod first")
        self.smpds = smpds
        self.aut = aut.copy()
        self.stats = SaturationStats()
        self.tick = tick

        # rule indexes
        self.pop_rules: list[tuple[RuleId, PdsRule]] = []
        self.one_rules: dict[tuple[str, str], list[tuple[RuleId, PdsRule]]] = {}
        self.two_rules: dict[tuple[str, str], list[tuple[RuleId, PdsRule]]] = {}
        for rid in smpds.delta:
            r = smpds.rules[rid]
            if len(r.rhs_word) == 0:
                self.pop_rules.append((rid, r))
            elif len(r.rhs_word) == 1:
                self.one_rules.setdefault(
                    (r.rhs_state, r.rhs_word[0]), []).append((rid, r))
            elif len(r.rhs_word) == 2:
                self.two_rules.setdefault(
                    (r.rhs_state, r.rhs_word[0]), []).append((rid, r))
            else:
                raise ValueError(f"rule {rid} pushes more than 2 symbols; "
                                 "run normalize_push first")
        self.sm_by_target: dict[str, list[tuple[RuleId, SelfModRule]]] = {}
        for rid in smpds.delta_c:
            r = smpds.rules[rid]
            self.sm_by_target.setdefault(r.to_state, []).append((rid, r))

        # epsilon structure is static: the input may carry eps edges but the
        # saturation never adds any
        self.eps_succ: dict[AutState, frozenset[AutState]] = {}
        self.eps_pred: dict[AutState, set[AutState]] = {}
        for q in self.aut.states:
            cl = self.aut.eclosure(q)
            self.eps_succ[q] = cl
            for q2 in cl:
                self.eps_pred.setdefault(q2, set()).add(q)

        # eps-folded reading facts: (src, symbol) -> set of dst
        self.facts: dict[tuple[AutState, str], set[AutState]] = {}
        # partial matches for two-symbol rules: (mid-state, symbol) ->
        # transitions ((p,theta), g) waiting for the second edge
        self.pending: dict[tuple[AutState, str], set[tuple[Initial, str]]] = {}

        self.phases: set[Phase] = set()
        self.worklist: deque[tuple[AutState, str, AutState]] = deque()

    def _eps_succ(self, q: AutState) -> frozenset[AutState]:
        return self.eps_succ.get(q, frozenset((q,)))

    def _eps_pred(self, q: AutState) -> set[AutState]:
        return self.eps_pred.get(q, {q})

    def run(self) -> PAutomaton:
        for q in list(self.aut.states):
            if isinstance(q, Initial) and q.phase is not None:
                self._materialize_phase(q.phase)
        for src, label, dst in list(self.aut.transitions):
            if label is not EPS:
                self.worklist.append((src, label, dst))
        self._mark_initial_eps_accepting()
        while self.worklist:
            if self.tick is not None:
                self.tick()
            self._process(*self.worklist.popleft())
        return self.aut

    # -- transition insertion --------------------------------------------

    def _add(self, src: Initial, label: str, dst: AutState) -> None:
        if self.aut.add_transition(src, label, dst):
            self.stats.transitions_added += 1
            self.worklist.append((src, label, dst))
            if src.phase is not None:
                self._materialize_phase(src.phase)

    def _materialize_phase(self, theta: Phase) -> None:
        if theta in self.phases:
            return
        self.phases.add(theta)
        self.stats.phases_materialized += 1
        # alpha1 for pop rules: the path (p1,theta) --eps--> q always exists
        for rid, r in self.pop_rules:
            if rid in theta:
                for q in self._eps_succ(Initial(r.rhs_state, theta)):
                    self._add(Initial(r.lhs_state, theta), r.lhs_symbol, q)

    # -- fact-driven rule firing -------------------------------------------

    def _process(self, src: AutState, label: str, dst: AutState) -> None:
        for s in self._eps_pred(src):
            for d in self._eps_succ(dst):
                key = (s, label)
                known = self.facts.setdefault(key, set())
                if d in known:
                    continue
                known.add(d)
                self._new_fact(s, label, d)

    def _new_fact(self, src: AutState, label: str, dst: AutState) -> None:
        for waiting_src, waiting_label in self.pending.get((src, label), ()):
            self._add(waiting_src, waiting_label, dst)
        if not isinstance(src, Initial) or src.phase is None:
            return
        p1, theta = src.control, src.phase
        for rid, r in self.one_rules.get((p1, label), ()):
            if rid in theta:
                self._add(Initial(r.lhs_state, theta), r.lhs_symbol, dst)
        for rid, r in self.two_rules.get((p1, label), ()):
            if rid in theta:
                trigger = (Initial(r.lhs_state, theta), r.lhs_symbol)
                self.pending.setdefault((dst, r.rhs_word[1]), set()).add(trigger)
                for q2 in self.facts.get((dst, r.rhs_word[1]), ()):
                    self._add(trigger[0], trigger[1], q2)
        for rid, r in self.sm_by_target.get(p1, ()):
            if rid in theta and r.added in theta:
                for theta_pred in solve_predecessor_phases(theta, rid, r):
                    self._add(Initial(r.from_state, theta_pred), label, dst)

    # -- empty-stack predecessors through modifying rules ------------------

    def _mark_initial_eps_accepting(self) -> None:
        # A modifying rule fires on an empty stack too: if (<p1, eps>, theta)
        # is accepted, its predecessor (<p, eps>, theta') must be as well,
        # which is only expressible by making (p, theta') final.
        queue = deque(q for q in self.aut.states
                      if isinstance(q, Initial) and q.phase is not None
                      and self._eps_succ(q) & self.aut.finals)
        seen = set(queue)
        while queue:
            q = queue.popleft()
            for rid, r in self.sm_by_target.get(q.control, ()):
                if rid in q.phase and r.added in q.phase:
                    for theta_pred in solve_predecessor_phases(q.phase, rid, r):
                        pred = Initial(r.from_state, theta_pred)
                        if pred not in self.aut.finals:
                            self.aut.add_final(pred)
                            self.stats.finals_added += 1
                            self._materialize_phase(theta_pred)
                        if pred not in seen:
                            seen.add(pred)
                            queue.append(pred)


def prestar(smpds: SMPDS, aut: PAutomaton,
            stats: SaturationStats | None = None, tick=None) -> PAutomaton:
    """Saturate a copy of `aut` so it accepts pre*(L(aut))."""
    import time
    t0 = time.perf_counter()
    engine = _PrestarEngine(smpds, aut, tick)
    result = engine.run()
    engine.stats.wall_seconds = time.perf_counter() - t0
    if stats is not None:
        stats.transitions_added = engine.stats.transitions_added
        stats.finals_added = engine.stats.finals_added
        stats.phases_materialized = engine.stats.phases_materialized
        stats.wall_seconds = engine.stats.wall_seconds
    return result
