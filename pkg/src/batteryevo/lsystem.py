"""L-system genotypes for flat modular robots.

A genotype is a deterministic, context-free grammar with exactly one
production rule per module symbol (core ``C``, brick ``B``, joint ``J``).
The axiom is always the single core token.  Turtle symbols ``l``/``r`` and
the branch brackets ``[``/``]`` are terminals.

Joint tokens carry the oscillator parameters of the joint they will
become, so the controller is evolved together with the body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

CORE, BRICK, JOINT = "C", "B", "J"
LEFT, RIGHT, PUSH, POP = "l", "r", "[", "]"

KINDS = (CORE, BRICK, JOINT, LEFT, RIGHT, PUSH, POP)
PREDECESSORS = (CORE, BRICK, JOINT)
FILLER_KINDS = (BRICK, JOINT, LEFT, RIGHT)

# Parameters live on a 0.01 grid so the text form round-trips exactly.
AMPLITUDE_RANGE = (0.0, 1.0)
PERIOD_RANGE = (1.0, 10.0)
PHASE_RANGE = (0.0, 1.0)  # half-open


class GenotypeError(ValueError):
    pass


@dataclass(frozen=True)
class JointParams:
    amplitude: float
    period: float
    phase: float

    def __post_init__(self):
        a_lo, a_hi = AMPLITUDE_RANGE
        t_lo, t_hi = PERIOD_RANGE
        if not a_lo <= self.amplitude <= a_hi:
            raise GenotypeError(f"amplitude {self.amplitude} outside [0, 1]")
        if not t_lo <= self.period <= t_hi:
            raise GenotypeError(f"period {self.period} outside [1, 10]")
        if not 0.0 <= self.phase < 1.0:
            raise GenotypeError(f"phase {self.phase} outside [0, 1)")

    @classmethod
    def random(cls, rng: np.random.Generator) -> "JointParams":
        return cls(
            amplitude=int(rng.integers(0, 101)) / 100,
            period=int(rng.integers(100, 1001)) / 100,
            phase=int(rng.integers(0, 100)) / 100,
        )


@dataclass(frozen=True)
class Token:
    kind: str
    params: JointParams | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GenotypeError(f"unknown symbol {self.kind!r}")
        if (self.kind == JOINT) != (self.params is not None):
            raise GenotypeError("joint parameters must be present exactly on J tokens")

    def __str__(self):
        if self.params is None:
            return self.kind
        p = self.params
        return f"J({p.amplitude:.2f},{p.period:.2f},{p.phase:.2f})"


@dataclass(frozen=True)
class Rule:
    predecessor: str
    replacement: tuple[Token, ...]

    def __str__(self):
        return f"{self.predecessor} -> " + " ".join(str(t) for t in self.replacement)


@dataclass(frozen=True)
class Genotype:
    rules: tuple[Rule, Rule, Rule]  # ordered C, B, J

    axiom = (Token(CORE),)

    def rule(self, predecessor: str) -> Rule:
        return self.rules[PREDECESSORS.index(predecessor)]

    def __str__(self):
        return "\n".join(str(r) for r in self.rules)


@dataclass(frozen=True)
class RewriteConfig:
    iterations: int = 3
    max_string_length: int = 1000

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.max_string_length < 1:
            raise ValueError("max_string_length must be >= 1")


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# --- validation ---------------------------------------------------------


def brackets_balanced(tokens) -> bool:
    depth = 0
    for t in tokens:
        if t.kind == PUSH:
            depth += 1
        elif t.kind == POP:
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def rule_problems(rule: Rule) -> list[str]:
    problems = []
    rep = rule.replacement
    if rule.predecessor not in PREDECESSORS:
        problems.append(f"bad predecessor {rule.predecessor!r}")
    if len(rep) < 1:
        problems.append(f"{rule.predecessor}: empty replacement")
    n_core = sum(t.kind == CORE for t in rep)
    if rule.predecessor == CORE:
        if n_core != 1 or rep[0].kind != CORE:
            problems.append("C rule must hold exactly one C, at position 0")
    elif n_core:
        problems.append(f"{rule.predecessor} rule contains a core token")
    if not brackets_balanced(rep):
        problems.append(f"{rule.predecessor}: unbalanced brackets")
    return problems


def validate(g: Genotype) -> None:
    """Raise GenotypeError if ``g`` breaks any structural invariant."""
    if tuple(r.predecessor for r in g.rules) != PREDECESSORS:
        raise GenotypeError("genotype needs exactly one rule for each of C, B, J")
    for rule in g.rules:
        problems = rule_problems(rule)
        if problems:
            raise GenotypeError("; ".join(problems))


def is_valid(g: Genotype) -> bool:
    try:
        validate(g)
    except GenotypeError:
        return False
    return True


# --- generation ---------------------------------------------------------


def _random_filler(rng: np.random.Generator) -> Token:
    kind = FILLER_KINDS[int(rng.integers(len(FILLER_KINDS)))]
    if kind == JOINT:
        return Token(JOINT, JointParams.random(rng))
    return Token(kind)


def _random_rule(predecessor: str, rng: np.random.Generator) -> Rule:
    length = int(rng.integers(2, 7))
    head = [Token(CORE)] if predecessor == CORE else []
    # a wrapped suffix must be non-empty and may not swallow the core
    wrap = rng.random() < 0.2 and length - 2 > len(head)
    body_len = length - 2 if wrap else length
    symbols = head + [_random_filler(rng) for _ in range(body_len - len(head))]
    if wrap:
        split = int(rng.integers(len(head), len(symbols)))
        symbols = symbols[:split] + [Token(PUSH)] + symbols[split:] + [Token(POP)]
    return Rule(predecessor, tuple(symbols))


def random_genotype(seed) -> Genotype:
    rng = as_rng(seed)
    return Genotype(tuple(_random_rule(p, rng) for p in PREDECESSORS))


# --- rewriting ----------------------------------------------------------


def drop_unmatched(tokens) -> list[Token]:
    """Remove brackets that have no partner, keeping everything else in order."""
    keep = [True] * len(tokens)
    opens = []
    for i, t in enumerate(tokens):
        if t.kind == PUSH:
            opens.append(i)
        elif t.kind == POP:
            if opens:
                opens.pop()
            else:
                keep[i] = False
    for i in opens:
        keep[i] = False
    return [t for t, k in zip(tokens, keep) if k]


def rewrite(g: Genotype, cfg: RewriteConfig = RewriteConfig()) -> list[Token]:
    """Expand the axiom with parallel rewriting.

    Every C/B/J token is replaced by its rule's replacement in each
    iteration.  Replacements never shrink the string, so capping the
    intermediate strings at ``max_string_length`` yields the same prefix as
    expanding fully and truncating at the end.
    """
    table = {r.predecessor: r.replacement for r in g.rules}
    cap = cfg.max_string_length
    tokens = list(g.axiom)
    for _ in range(cfg.iterations):
        out = []
        for t in tokens:
            rep = table.get(t.kind)
            if rep is None:
                out.append(t)
            else:
                out.extend(rep)
            if len(out) >= cap:
                break
        tokens = out[:cap]
    return drop_unmatched(tokens[:cap])


# --- variation ----------------------------------------------------------


def _replace_rule(g: Genotype, rule: Rule) -> Genotype:
    rules = list(g.rules)
    rules[PREDECESSORS.index(rule.predecessor)] = rule
    return Genotype(tuple(rules))


def repair(original: Rule, candidate: Rule) -> Rule:
    """Restore rule invariants after an edit.

    An edit that broke the core-token constraint is reverted outright;
    otherwise unmatched brackets are stripped.
    """
    cores = [i for i, t in enumerate(candidate.replacement) if t.kind == CORE]
    if candidate.predecessor == CORE:
        core_ok = cores == [0]
    else:
        core_ok = not cores
    if not core_ok:
        return original
    rep = tuple(drop_unmatched(candidate.replacement))
    if not rep:
        return original
    return Rule(candidate.predecessor, rep)


def add_token(rule: Rule, position: int, token: Token) -> Rule:
    rep = list(rule.replacement)
    rep.insert(position, token)
    return repair(rule, Rule(rule.predecessor, tuple(rep)))


def delete_token(rule: Rule, position: int) -> Rule:
    if len(rule.replacement) <= 1:
        return rule
    rep = list(rule.replacement)
    del rep[position]
    return repair(rule, Rule(rule.predecessor, tuple(rep)))


def swap_tokens(rule: Rule, i: int, j: int) -> Rule:
    rep = list(rule.replacement)
    rep[i], rep[j] = rep[j], rep[i]
    return repair(rule, Rule(rule.predecessor, tuple(rep)))


def _random_symbol(rng: np.random.Generator) -> Token:
    kind = KINDS[int(rng.integers(len(KINDS)))]
    if kind == JOINT:
        return Token(JOINT, JointParams.random(rng))
    return Token(kind)


def mutate(g: Genotype, seed) -> Genotype:
    """Add, delete or swap one symbol in one randomly chosen rule."""
    rng = as_rng(seed)
    rule = g.rules[int(rng.integers(3))]
    op = ("add", "delete", "swap")[int(rng.integers(3))]
    n = len(rule.replacement)
    if op == "add":
        new = add_token(rule, int(rng.integers(n + 1)), _random_symbol(rng))
    elif op == "delete":
        new = delete_token(rule, int(rng.integers(n)))
    else:
        new = swap_tokens(rule, int(rng.integers(n)), int(rng.integers(n)))
    return _replace_rule(g, new)


def crossover_with_flips(p1: Genotype, p2: Genotype, flips) -> Genotype:
    """Child takes rule i from ``p2`` where ``flips[i]`` is true, else from ``p1``."""
    return Genotype(tuple(b if f else a for a, b, f in zip(p1.rules, p2.rules, flips)))


def crossover(p1: Genotype, p2: Genotype, seed) -> Genotype:
    rng = as_rng(seed)
    flips = rng.random(3) < 0.5
    return crossover_with_flips(p1, p2, flips)


# --- text form ----------------------------------------------------------

_TOKEN_RE = re.compile(r"J\(([-\d.]+),([-\d.]+),([-\d.]+)\)|[CBJlr\[\]]")


def parse_tokens(text: str) -> list[Token]:
    tokens = []
    for part in text.split():
        m = _TOKEN_RE.fullmatch(part)
        if m is None:
            raise GenotypeError(f"cannot parse token {part!r}")
        if m.group(1) is not None:
            params = JointParams(*(float(m.group(k)) for k in (1, 2, 3)))
            tokens.append(Token(JOINT, params))
        elif part == JOINT:
            raise GenotypeError("J token without parameters")
        else:
            tokens.append(Token(part))
    return tokens


def format_tokens(tokens) -> str:
    return " ".join(str(t) for t in tokens)


def parse_genotype(text: str) -> Genotype:
    """Parse ``C -> ...`` rule lines; ``;`` is accepted as a line separator."""
    found = {}
    for line in re.split(r"[\n;]", text):
        line = line.strip()
        if not line:
            continue
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise GenotypeError(f"missing '->' in {line!r}")
        pred = lhs.strip()
        if pred not in PREDECESSORS or pred in found:
            raise GenotypeError(f"bad or repeated predecessor {pred!r}")
        found[pred] = Rule(pred, tuple(parse_tokens(rhs)))
    if set(found) != set(PREDECESSORS):
        raise GenotypeError("genotype needs rules for C, B and J")
    g = Genotype(tuple(found[p] for p in PREDECESSORS))
    validate(g)
    return g


def genotype_to_line(g: Genotype) -> str:
    """Single-line form used inside CSV cells."""
    return "; ".join(str(r) for r in g.rules)
