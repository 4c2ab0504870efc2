"""Core model: self-modifying pushdown systems, phases, configurations.

A self-modifying pushdown system (SM-PDS) is a pushdown system whose rule
set can be rewritten at runtime.  A configuration therefore carries, next
to the control point and the stack word, the *phase*: the set of rule
identifiers currently enabled.  Plain rules rewrite the stack; modifying
rules swap one rule identifier for another in the phase.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

RuleId = int


class Phase:
    """Interned, immutable set of rule ids.

    Two phases with the same member set are the same object, so phase
    comparison during saturation is an identity check.
    """

    __slots__ = ("members", "_key")

    _table: dict[tuple[RuleId, ...], "Phase"] = {}

    def __init__(self, key: tuple[RuleId, ...]):
        self.members: frozenset[RuleId] = frozenset(key)
        self._key = key

    @classmethod
    def of(cls, ids: Iterable[RuleId]) -> "Phase":
        key = tuple(sorted(set(ids)))
        ph = cls._table.get(key)
        if ph is None:
            ph = cls(key)
            cls._table[key] = ph
        return ph

    def update(self, removed: RuleId, added: RuleId) -> "Phase":
        """The phase after firing a modifying rule: drop `removed`, add `added`."""
        return Phase.of((self.members - {removed}) | {added})

    def __contains__(self, rid: RuleId) -> bool:
        return rid in self.members

    def __iter__(self) -> Iterator[RuleId]:
        return iter(self._key)

    def __len__(self) -> int:
        return len(self._key)

    def __hash__(self) -> int:
        return hash(self._key)

    def __eq__(self, other: object) -> bool:
        return self is other

    def __repr__(self) -> str:
        return "{%s}" % ",".join(str(i) for i in self._key)


EMPTY_PHASE = Phase.of(())


@dataclass(frozen=True)
class PdsRule:
    """<p, gamma> -> <p', w>: pop gamma at p, push w, move to p'."""

    lhs_state: str
    lhs_symbol: str
    rhs_state: str
    rhs_word: tuple[str, ...]

    def __repr__(self) -> str:
        w = " ".join(self.rhs_word) if self.rhs_word else "eps"
        return f"<{self.lhs_state},{self.lhs_symbol}> -> <{self.rhs_state},{w}>"


@dataclass(frozen=True)
class SelfModRule:
    """p --(r1, r2)--> p': move to p', drop rule r1 from the phase, add r2."""

    from_state: str
    removed: RuleId
    added: RuleId
    to_state: str

    def __repr__(self) -> str:
        return f"{self.from_state} --({self.removed},{self.added})--> {self.to_state}"


Rule = Union[PdsRule, SelfModRule]


class SMPDS:
    """An SM-PDS: control points, stack alphabet, and an id-addressed rule table."""

    def __init__(self, states: Iterable[str], alphabet: Iterable[str],
                 rules: dict[RuleId, Rule]):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.rules = dict(rules)
        self.delta = frozenset(
            rid for rid, r in self.rules.items() if isinstance(r, PdsRule))
        self.delta_c = frozenset(
            rid for rid, r in self.rules.items() if isinstance(r, SelfModRule))

    def rule(self, rid: RuleId) -> Rule:
        return self.rules[rid]

    def all_rules_phase(self) -> Phase:
        return Phase.of(self.rules.keys())

    def fresh_rule_id(self) -> RuleId:
        return max(self.rules, default=-1) + 1

    def __repr__(self) -> str:
        return (f"SMPDS(|P|={len(self.states)}, |Gamma|={len(self.alphabet)}, "
                f"|Delta|={len(self.delta)}, |Delta_c|={len(self.delta_c)})")


@dataclass(frozen=True)
class Configuration:
    """(control point, stack word, phase); stack[0] is the top of the stack."""

    state: str
    stack: tuple[str, ...]
    phase: Phase

    def __repr__(self) -> str:
        w = " ".join(self.stack) if self.stack else "eps"
        return f"(<{self.state}, {w}>, {self.phase})"


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(smpds: SMPDS) -> ValidationReport:
    """Check every structural invariant; returns a report with diagnostics."""
    rep = ValidationReport()
    for rid, r in smpds.rules.items():
        if isinstance(r, PdsRule):
            if r.lhs_state not in smpds.states:
                rep.violations.append(f"rule {rid}: state {r.lhs_state!r} not in P")
            if r.rhs_state not in smpds.states:
                rep.violations.append(f"rule {rid}: state {r.rhs_state!r} not in P")
            if r.lhs_symbol not in smpds.alphabet:
                rep.violations.append(
                    f"rule {rid}: symbol {r.lhs_symbol!r} not in Gamma")
            for g in r.rhs_word:
                if g not in smpds.alphabet:
                    rep.violations.append(
                        f"rule {rid}: symbol {g!r} not in Gamma")
            if len(r.rhs_word) > 2:
                rep.warnings.append(
                    f"rule {rid}: rhs word longer than 2, needs normalize_push")
        else:
            if r.from_state not in smpds.states:
                rep.violations.append(f"smrule {rid}: state {r.from_state!r} not in P")
            if r.to_state not in smpds.states:
                rep.violations.append(f"smrule {rid}: state {r.to_state!r} not in P")
            for ref in (r.removed, r.added):
                if ref not in smpds.rules:
                    rep.violations.append(f"smrule {rid}: dangling RuleId {ref}")
            if r.removed == rid:
                rep.warnings.append(
                    f"smrule {rid}: removes itself, needs normalize_selfmod")
    return rep


def check_configuration(smpds: SMPDS, c: Configuration) -> None:
    if c.state not in smpds.states:
        raise ValueError(f"configuration state {c.state!r} not in P")
    for g in c.stack:
        if g not in smpds.alphabet:
            raise ValueError(f"configuration symbol {g!r} not in Gamma")
    if not c.phase.members <= set(smpds.rules):
        raise ValueError("configuration phase references unknown rule ids")


def step(smpds: SMPDS, c: Configuration) -> frozenset[Configuration]:
    """All immediate successors of `c`.

    A plain rule fires when it is in the phase, the control point matches
    and its symbol is on top of the stack.  A modifying rule fires when it
    is in the phase, the control point matches and its removed rule is in
    the phase; the stack is not inspected.
    """
    check_configuration(smpds, c)
    out = set()
    for rid in c.phase:
        r = smpds.rules[rid]
        if isinstance(r, PdsRule):
            if r.lhs_state == c.state and c.stack and c.stack[0] == r.lhs_symbol:
                out.add(Configuration(r.rhs_state, r.rhs_word + c.stack[1:], c.phase))
        else:
            if r.from_state == c.state and r.removed in c.phase:
                out.add(Configuration(r.to_state, c.stack,
                                      c.phase.update(r.removed, r.added)))
    return frozenset(out)


@dataclass
class ReachResult:
    configs: frozenset[Configuration]
    truncated: bool

    def __contains__(self, c: Configuration) -> bool:
        return c in self.configs


def bounded_reach(smpds: SMPDS, c0: Configuration, max_stack: int,
                  max_steps: int) -> ReachResult:
    """BFS closure of `step` from c0.

    Configurations whose stack exceeds `max_stack` are discarded (and the
    result flagged as truncated); expansion stops after `max_steps`
    configurations have been expanded.
    """
    if len(c0.stack) > max_stack:
        raise ValueError("initial stack exceeds max_stack")
    seen = {c0}
    queue = deque([c0])
    truncated = False
    expansions = 0
    while queue:
        if expansions >= max_steps:
            truncated = True
            break
        c = queue.popleft()
        expansions += 1
        for c2 in step(smpds, c):
            if len(c2.stack) > max_stack:
                truncated = True
                continue
            if c2 not in seen:
                seen.add(c2)
                queue.append(c2)
    return ReachResult(frozenset(seen), truncated)


@dataclass
class SelfmodNormalization:
    smpds: SMPDS
    bottom_rule: RuleId | None
    # old smrule id -> id of the inserted second-half rule
    companions: dict[RuleId, RuleId]

    def rewrite_phase(self, phase: Phase) -> Phase:
        """Lift a phase of the original system into the normalized one."""
        if self.bottom_rule is None:
            return phase
        ids = set(phase.members) | {self.bottom_rule}
        for old, comp in self.companions.items():
            if old in phase:
                ids.add(comp)
        return Phase.of(ids)

    def rewrite_config(self, c: Configuration) -> Configuration:
        return Configuration(c.state, c.stack, self.rewrite_phase(c.phase))

    def project_phase(self, phase: Phase) -> Phase:
        """Drop the helper ids; inverse of rewrite_phase up to stale companions."""
        if self.bottom_rule is None:
            return phase
        ids = set(phase.members) - {self.bottom_rule} - set(self.companions.values())
        return Phase.of(ids)

    def project_config(self, c: Configuration) -> Configuration:
        return Configuration(c.state, c.stack, self.project_phase(c.phase))


def normalize_selfmod(smpds: SMPDS) -> SelfmodNormalization:
    """Remove self-referential modifying rules (r removing itself).

    Each offending rule r = p --(r,r2)--> p' becomes the pair
    r = p --(r_bot,r_bot)--> p_i and p_i --(r,r2)--> p', with a fresh
    intermediate state p_i and a distinguished no-effect rule r_bot that
    belongs to every phase.  Systems without offending rules are returned
    unchanged.
    """
    offending = [rid for rid in smpds.delta_c
                 if smpds.rules[rid].removed == rid]
    if not offending:
        return SelfmodNormalization(smpds, None, {})
    rules = dict(smpds.rules)
    states = set(smpds.states)
    alphabet = set(smpds.alphabet)
    bot_state = _fresh_name("p_bot", states)
    states.add(bot_state)
    # the no-effect rule is an ordinary rule anchored at an unreachable
    # state, so removing and re-adding it leaves every phase unchanged
    bot_sym = next(iter(sorted(alphabet)), None)
    if bot_sym is None:
        bot_sym = _fresh_name("g_bot", alphabet)
        alphabet.add(bot_sym)
    bot_id = max(rules) + 1
    rules[bot_id] = PdsRule(bot_state, bot_sym, bot_state, (bot_sym,))
    next_id = bot_id + 1
    companions: dict[RuleId, RuleId] = {}
    for rid in offending:
        old = rules[rid]
        mid = _fresh_name(f"{old.from_state}_i{rid}", states)
        states.add(mid)
        rules[rid] = SelfModRule(old.from_state, bot_id, bot_id, mid)
        rules[next_id] = SelfModRule(mid, rid, old.added, old.to_state)
        companions[rid] = next_id
        next_id += 1
    return SelfmodNormalization(SMPDS(states, alphabet, rules),
                                bot_id, companions)


@dataclass
class PushNormalization:
    smpds: SMPDS
    # old rule id -> the chain of rule ids replacing it (first = entry rule)
    rule_map: dict[RuleId, list[RuleId]]
    warnings: list[str]

    def rewrite_phase(self, phase: Phase) -> Phase:
        ids: set[RuleId] = set()
        for rid in phase:
            ids.update(self.rule_map.get(rid, (rid,)))
        return Phase.of(ids)

    def rewrite_config(self, c: Configuration) -> Configuration:
        return Configuration(c.state, c.stack, self.rewrite_phase(c.phase))

    def project_phase(self, phase: Phase) -> Phase:
        """Drop the chain-tail ids (the head keeps the original id)."""
        tails = {rid for chain in self.rule_map.values() for rid in chain[1:]}
        return Phase.of(set(phase.members) - tails)

    def project_config(self, c: Configuration) -> Configuration:
        return Configuration(c.state, c.stack, self.project_phase(c.phase))


def normalize_push(smpds: SMPDS) -> PushNormalization:
    """Split rules pushing more than two symbols into two-symbol chains.

    <p,g> -> <p', g1..gn> (n > 2) becomes
    <p,g> -> <p_1, a_1 gn>, <p_1,a_1> -> <p_2, a_2 g_{n-1}>, ...,
    <p_{n-2}, a_{n-2}> -> <p', g1 g2> with fresh states and fresh symbols.
    Modifying rules that reference a split rule are remapped to the first
    rule of its chain (flagged with a warning).
    """
    long_rules = [rid for rid in smpds.delta
                  if len(smpds.rules[rid].rhs_word) > 2]
    if not long_rules:
        return PushNormalization(smpds, {}, [])
    rules = dict(smpds.rules)
    states = set(smpds.states)
    alphabet = set(smpds.alphabet)
    next_id = max(rules) + 1
    rule_map: dict[RuleId, list[RuleId]] = {}
    warnings: list[str] = []
    for rid in long_rules:
        old: PdsRule = rules[rid]
        word = old.rhs_word
        n = len(word)
        mids = []
        for k in range(1, n - 1):
            st = _fresh_name(f"{old.rhs_state}_s{rid}_{k}", states)
            states.add(st)
            sym = _fresh_name(f"a{rid}_{k}", alphabet)
            alphabet.add(sym)
            mids.append((st, sym))
        chain = [rid]
        # first rule keeps the old id so phase membership survives the split
        rules[rid] = PdsRule(old.lhs_state, old.lhs_symbol,
                             mids[0][0], (mids[0][1], word[n - 1]))
        for k in range(1, n - 2):
            rules[next_id] = PdsRule(mids[k - 1][0], mids[k - 1][1],
                                     mids[k][0], (mids[k][1], word[n - 1 - k]))
            chain.append(next_id)
            next_id += 1
        rules[next_id] = PdsRule(mids[-1][0], mids[-1][1],
                                 old.rhs_state, (word[0], word[1]))
        chain.append(next_id)
        next_id += 1
        rule_map[rid] = chain
    for rid in smpds.delta_c:
        r: SelfModRule = rules[rid]
        if r.removed in rule_map or r.added in rule_map:
            # ids are preserved for chain heads, so references stay valid
            warnings.append(
                f"smrule {rid} references a split rule; mapped to the chain head")
    return PushNormalization(SMPDS(states, alphabet, rules), rule_map, warnings)


def _fresh_name(base: str, taken: set[str]) -> str:
    name = base
    k = 0
    while name in taken:
        k += 1
        name = f"{base}_{k}"
    return name
