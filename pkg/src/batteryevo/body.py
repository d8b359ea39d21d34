"""Turtle decoding of token strings into flat robot bodies."""

from __future__ import annotations

from dataclasses import dataclass, field

from .lsystem import BRICK, CORE, JOINT, LEFT, POP, PUSH, RIGHT, JointParams, Token

# Directions as (dx, dy); l turns counter-clockwise.
_CCW = {(1, 0): (0, 1), (0, 1): (-1, 0), (-1, 0): (0, -1), (0, -1): (1, 0)}
_CW = {v: k for k, v in _CCW.items()}


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class Module:
    id: int
    kind: str
    pos: tuple[int, int]
    parent: int | None
    attach_dir: tuple[int, int] | None  # None for the core
    params: JointParams | None = None


@dataclass
class Body:
    modules: list[Module]
    children: dict[int, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        self.children = {m.id: [] for m in self.modules}
        for m in self.modules:
            if m.parent is not None:
                self.children[m.parent].append(m.id)

    @property
    def core(self) -> Module:
        return self.modules[0]

    @property
    def joints(self) -> list[Module]:
        return [m for m in self.modules if m.kind == JOINT]

    @property
    def n_joints(self) -> int:
        return sum(m.kind == JOINT for m in self.modules)

    @property
    def n_bricks(self) -> int:
        return sum(m.kind == BRICK for m in self.modules)

    def subtree(self, root: int) -> list[tuple[int, int]]:
        """(module id, depth below ``root``) for every module under ``root``."""
        out = []
        stack = [(root, 0)]
        while stack:
            mid, depth = stack.pop()
            out.append((mid, depth))
            stack.extend((c, depth + 1) for c in self.children[mid])
        return out

    def dump(self) -> str:
        lines = []
        for m in self.modules:
            parent = "-" if m.parent is None else str(m.parent)
            lines.append(f"{m.id} {m.kind} ({m.pos[0]},{m.pos[1]}) {parent}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Descriptors:
    size: int
    n_joints: int
    n_bricks: int
    branching: int
    proportion: float


def decode(tokens: list[Token], max_joints: int = 10, max_bricks: int = 20) -> Body:
    """Place modules on the grid by walking the token string with a turtle.

    The turtle starts on the core at (0, 0) facing +x.  A B/J token grows a
    module into the cell ahead of the cursor and moves the cursor there; it
    is skipped when the cell is taken or its kind has hit its limit.
    """
    start = next((i for i, t in enumerate(tokens) if t.kind == CORE), None)
    if start is None:
        raise DecodeError("token string has no core")

    modules = [Module(0, CORE, (0, 0), None, None)]
    occupied = {(0, 0): 0}
    counts = {BRICK: 0, JOINT: 0}
    limits = {BRICK: max_bricks, JOINT: max_joints}
    cursor, heading = 0, (1, 0)
    stack = []

    for t in tokens[start + 1:]:
        k = t.kind
        if k == LEFT:
            heading = _CCW[heading]
        elif k == RIGHT:
            heading = _CW[heading]
        elif k == PUSH:
            stack.append((cursor, heading))
        elif k == POP:
            if stack:
                cursor, heading = stack.pop()
        elif k in (BRICK, JOINT):
            x, y = modules[cursor].pos
            target = (x + heading[0], y + heading[1])
            if target in occupied or counts[k] >= limits[k]:
                continue
            mid = len(modules)
            modules.append(Module(mid, k, target, cursor, heading, t.params))
            occupied[target] = mid
            counts[k] += 1
            cursor = mid
        # further core tokens are ignored
    return Body(modules)


def descriptors(body: Body) -> Descriptors:
    xs = [m.pos[0] for m in body.modules]
    ys = [m.pos[1] for m in body.modules]
    w = max(xs) - min(xs) + 1
    h = max(ys) - min(ys) + 1
    return Descriptors(
        size=len(body.modules),
        n_joints=body.n_joints,
        n_bricks=body.n_bricks,
        branching=sum(len(c) >= 2 for c in body.children.values()),
        proportion=min(w, h) / max(w, h),
    )
