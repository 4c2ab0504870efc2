"""A toy self-modifying assembly language and its SM-PDS compilation.

Program syntax ('#' starts a comment, one instruction per line):

    entry <label>
    <label>: <opcode> [operands]

Opcodes:

    push <v>        push a data cell
    pop             pop a data cell
    jmp <label>     unconditional jump
    call <label>    push a return address and jump
    ret             return to the pushed address
    nop             do nothing
    selfmod <label> <opcode> [operands]
                    overwrite the instruction at <label> with the given one
    halt            stop

Compilation keeps a single generic data symbol on top of the stack, so
every instruction maps to one pushdown rule keyed on that symbol ('ret'
additionally gets one helper rule per call site to dispatch on the
return-address symbol; helpers are always enabled and cannot be the
target of a 'selfmod').  'selfmod' becomes a rule-set change: the rule
compiled for the target label is removed and the replacement rule is
added.  Replacement rules fall through to the target's successor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Configuration, Phase, PdsRule, RuleId, SelfModRule, SMPDS

DATA = "D"      # generic data/stack-frame symbol
BOTTOM = "Z"    # stack bottom marker
HALT = "__halt"

OPCODES = {"push": 1, "pop": 0, "jmp": 1, "call": 1, "ret": 0,
           "nop": 0, "halt": 0}


class AsmError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Instruction:
    label: str
    opcode: str
    operands: tuple[str, ...]
    lineno: int = 0


@dataclass
class Program:
    entry: str
    instructions: list[Instruction]

    def labels(self) -> dict[str, int]:
        return {ins.label: i for i, ins in enumerate(self.instructions)}


def parse_program(text: str, allow_meta_selfmod: bool = False) -> Program:
    entry = None
    instructions: list[Instruction] = []
    seen_labels: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("entry "):
            if entry is not None:
                raise AsmError(lineno, "duplicate entry directive")
            entry = line.split()[1]
            continue
        label, colon, body = line.partition(":")
        if not colon:
            raise AsmError(lineno, "expected '<label>: <opcode> ...'")
        label = label.strip()
        if label in seen_labels:
            raise AsmError(lineno, f"duplicate label {label!r}")
        seen_labels.add(label)
        toks = body.split()
        if not toks:
            raise AsmError(lineno, "missing opcode")
        op, operands = toks[0], tuple(toks[1:])
        if op == "selfmod":
            if len(operands) < 2:
                raise AsmError(lineno, "selfmod needs a target label and an instruction")
            if operands[1] == "selfmod" and not allow_meta_selfmod:
                raise AsmError(lineno, "selfmod of a selfmod instruction is not supported")
            inner_op = operands[1]
            if inner_op != "selfmod":
                if inner_op not in OPCODES:
                    raise AsmError(lineno, f"unknown opcode {inner_op!r}")
                if len(operands) - 2 != OPCODES[inner_op]:
                    raise AsmError(lineno, f"{inner_op!r} takes {OPCODES[inner_op]} operand(s)")
        elif op in OPCODES:
            if len(operands) != OPCODES[op]:
                raise AsmError(lineno, f"{op!r} takes {OPCODES[op]} operand(s)")
        else:
            raise AsmError(lineno, f"unknown opcode {op!r}")
        instructions.append(Instruction(label, op, operands, lineno))
    if not instructions:
        raise AsmError(0, "program has no instructions")
    if entry is None:
        raise AsmError(0, "program has no entry directive")
    labels = {ins.label for ins in instructions}
    labels.add(HALT)
    for ins in instructions:
        for target in _label_operands(ins):
            if target not in labels:
                raise AsmError(ins.lineno, f"unresolved label {target!r}")
    if entry not in labels:
        raise AsmError(0, f"unresolved entry label {entry!r}")
    return Program(entry, instructions)


def _label_operands(ins: Instruction):
    if ins.opcode in ("jmp", "call"):
        yield ins.operands[0]
    elif ins.opcode == "selfmod":
        yield ins.operands[0]
        if ins.operands[1] in ("jmp", "call"):
            yield ins.operands[2]


def print_program(prog: Program) -> str:
    """Canonical text form; parse o print is the identity."""
    width = max(len(ins.label) for ins in prog.instructions) + 1
    lines = [f"entry {prog.entry}"]
    for ins in prog.instructions:
        body = " ".join((ins.opcode,) + ins.operands)
        lines.append(f"{ins.label + ':':<{width + 1}} {body}")
    return "\n".join(lines) + "\n"


@dataclass
class CompiledProgram:
    smpds: SMPDS
    rule_for_label: dict[str, RuleId]
    initial_phase: Phase
    entry_config: Configuration = None


def compile_program(prog: Program, erase_selfmod: bool = False) -> CompiledProgram:
    """Compile to an SM-PDS.  Control states are instruction labels.

    With erase_selfmod=True every 'selfmod' is compiled as a 'nop',
    producing an ordinary (non-modifying) model for comparison runs.
    """
    labels = prog.labels()
    order = prog.instructions

    def succ(i: int) -> str:
        return order[i + 1].label if i + 1 < len(order) else HALT

    states = {ins.label for ins in order} | {HALT}
    alphabet = {DATA, BOTTOM}
    rules: dict[RuleId, PdsRule | SelfModRule] = {}
    rule_for_label: dict[str, RuleId] = {}
    initial_ids: list[RuleId] = []
    next_id = 0

    def add(rule, enabled: bool = True, primary_label: str | None = None) -> RuleId:
        nonlocal next_id
        rid = next_id
        next_id += 1
        rules[rid] = rule
        if enabled:
            initial_ids.append(rid)
        if primary_label is not None:
            rule_for_label[primary_label] = rid
        return rid

    def body_rule(label: str, op: str, operands: tuple[str, ...],
                  fallthrough: str) -> PdsRule:
        if op == "push":
            return PdsRule(label, DATA, fallthrough, (DATA, DATA))
        if op == "pop":
            return PdsRule(label, DATA, fallthrough, ())
        if op == "jmp":
            return PdsRule(label, DATA, operands[0], (DATA,))
        if op == "call":
            ret_sym = f"ra_{fallthrough}"
            alphabet.add(ret_sym)
            return PdsRule(label, DATA, operands[0], (DATA, ret_sym))
        if op == "ret":
            return PdsRule(label, DATA, f"{label}_ret", ())
        if op in ("nop", "halt"):
            target = fallthrough if op == "nop" else label
            return PdsRule(label, DATA, target, (DATA,))
        raise AsmError(0, f"cannot compile opcode {op!r}")

    # first pass: primary rule per instruction
    call_fallthroughs: list[str] = []
    ret_labels: list[str] = []
    selfmods: list[tuple[Instruction, str]] = []
    for i, ins in enumerate(order):
        fall = succ(i)
        if ins.opcode == "selfmod" and not erase_selfmod:
            selfmods.append((ins, fall))
            continue
        op = "nop" if ins.opcode == "selfmod" else ins.opcode
        add(body_rule(ins.label, op, ins.operands, fall),
            primary_label=ins.label)
        if op == "call":
            call_fallthroughs.append(fall)
        elif op == "ret":
            states.add(f"{ins.label}_ret")
            ret_labels.append(ins.label)

    # selfmod instructions: one rule-set change plus the disabled replacement
    for ins, fall in selfmods:
        target = ins.operands[0]
        target_idx = labels.get(target)
        target_fall = succ(target_idx) if target_idx is not None else HALT
        inner_op, inner_operands = ins.operands[1], ins.operands[2:]
        if inner_op == "call":
            call_fallthroughs.append(target_fall)
        elif inner_op == "ret":
            states.add(f"{target}_ret")
            ret_labels.append(target)
        replacement = add(body_rule(target, inner_op, inner_operands, target_fall),
                          enabled=False)
        old = rule_for_label.get(target)
        if old is None:
            raise AsmError(ins.lineno,
                           f"selfmod target {target!r} is itself a selfmod instruction")
        add(SelfModRule(ins.label, old, replacement, fall), primary_label=ins.label)

    # return dispatch helpers: always enabled, never selfmod targets
    for rl in ret_labels:
        for fall in sorted(set(call_fallthroughs)):
            add(PdsRule(f"{rl}_ret", f"ra_{fall}", fall, (DATA,)))

    smpds = SMPDS(states, alphabet, rules)
    phase = Phase.of(initial_ids)
    entry = Configuration(prog.entry, (DATA, BOTTOM), phase)
    return CompiledProgram(smpds, rule_for_label, phase, entry)
