"""
Deterministic stack-sorting machines.

Every machine reads its input left to right. At each step it pushes the next
input entry if the push is legal, otherwise it pops the top of the stack to
the output; once the input is exhausted the stack is drained. The machines
differ only in the legality rule:

``west``               push iff the stack is empty or the entry is below the top
``classical``          the stack read top to bottom must avoid one pattern
``consecutive``        ... must avoid one pattern consecutively
``consecutive_multi``  ... must avoid every pattern of a set consecutively

West's machine coincides with ``consecutive 21`` and ``classical 21``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from .patterns import Mode, Pattern, contains, matches_window
from .perm_core import InvalidInput, Permutation, parse_perm

__all__ = [
    "Kind",
    "MachineSpec",
    "SortTrace",
    "Event",
    "make_sorter",
    "parse_spec",
    "run",
    "sc",
    "step_legal_push",
]


class Kind(str, Enum):
    WEST = "west"
    CLASSICAL = "classical"
    CONSECUTIVE = "consecutive"
    CONSECUTIVE_MULTI = "consecutive_multi"


@dataclass(frozen=True)
class MachineSpec:
    kind: Kind
    patterns: tuple[Pattern, ...] = ()

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        pats = tuple(self.patterns)
        object.__setattr__(self, "patterns", pats)
        if kind is Kind.WEST and pats:
            raise InvalidInput("west takes no pattern")
        if kind is Kind.CLASSICAL and (len(pats) != 1 or pats[0].mode is not Mode.CLASSICAL):
            raise InvalidInput("classical machine needs exactly one classical pattern")
        if kind is Kind.CONSECUTIVE and (len(pats) != 1 or pats[0].mode is not Mode.CONSECUTIVE):
            raise InvalidInput("consecutive machine needs exactly one consecutive pattern")
        if kind is Kind.CONSECUTIVE_MULTI and (
            not pats or any(p.mode is not Mode.CONSECUTIVE for p in pats)
        ):
            raise InvalidInput("multi-pattern machine needs consecutive patterns only")

    @classmethod
    def west(cls) -> "MachineSpec":
        return cls(Kind.WEST)

    @classmethod
    def consecutive(cls, sigma) -> "MachineSpec":
        return cls(Kind.CONSECUTIVE, (Pattern.consecutive(sigma),))

    @classmethod
    def classical(cls, sigma) -> "MachineSpec":
        return cls(Kind.CLASSICAL, (Pattern.classical(sigma),))

    @classmethod
    def multi(cls, sigmas) -> "MachineSpec":
        return cls(Kind.CONSECUTIVE_MULTI, tuple(Pattern.consecutive(s) for s in sigmas))

    def __str__(self) -> str:
        def word(p: Pattern) -> str:
            return ("" if p.k <= 9 else ",").join(map(str, p.perm))

        if self.kind is Kind.WEST:
            return "west"
        if self.kind is Kind.CLASSICAL:
            return "s:" + word(self.patterns[0])
        if self.kind is Kind.CONSECUTIVE:
            return "sc:" + word(self.patterns[0])
        return "scb:" + "+".join(word(p) for p in self.patterns)


def parse_spec(text: str) -> MachineSpec:
    """Parse ``west``, ``sc:<perm>``, ``s:<perm>`` or ``scb:<perm>+<perm>+...``."""
    text = text.strip()
    if text == "west":
        return MachineSpec.west()
    head, sep, tail = text.partition(":")
    if not sep:
        raise InvalidInput(f"bad machine spec {text!r}")
    if head == "sc":
        return MachineSpec.consecutive(parse_perm(tail))
    if head == "s":
        return MachineSpec.classical(parse_perm(tail))
    if head == "scb":
        return MachineSpec.multi(parse_perm(t) for t in tail.split("+"))
    raise InvalidInput(f"bad machine spec {text!r}")


def step_legal_push(stack: Sequence[int], next_entry: int, spec: MachineSpec) -> bool:
    """Whether pushing ``next_entry`` onto ``stack`` (bottom to top) is allowed."""
    if not stack:
        return True
    if spec.kind is Kind.WEST:
        return next_entry < stack[-1]
    if spec.kind is Kind.CLASSICAL:
        return not contains((next_entry, *reversed(stack)), spec.patterns[0])
    for p in spec.patterns:
        k = p.k
        if len(stack) + 1 >= k:
            window = (next_entry, *stack[-1:-k:-1])
            if matches_window(window, p.order):
                return False
    return True


@dataclass(frozen=True)
class Event:
    step: int
    action: str  # "push" | "pop"
    value: int


@dataclass
class SortTrace:
    input: Permutation
    spec: MachineSpec
    output: Permutation
    events: list[Event] = field(default_factory=list)
    pop_class: dict[int, str] = field(default_factory=dict)
    f_snapshots: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def pre_popped(self) -> set[int]:
        return {e for e, c in self.pop_class.items() if c == "pre"}

    @property
    def post_popped(self) -> set[int]:
        return {e for e, c in self.pop_class.items() if c == "post"}

    def to_json(self) -> dict:
        # integer keys become strings so the document is plain JSON
        return {
            "input": list(self.input),
            "spec": str(self.spec),
            "events": [{"step": e.step, "action": e.action, "value": e.value}
                       for e in self.events],
            "pop_class": {str(e): c for e, c in self.pop_class.items()},
            "f_snapshots": {str(e): list(f) for e, f in self.f_snapshots.items()},
            "output": list(self.output),
        }


def run(pi: Sequence[int], spec: MachineSpec) -> SortTrace:
    """One full pass of the machine over ``pi`` with a complete event log."""
    pi = pi if isinstance(pi, Permutation) else Permutation(pi)
    n = len(pi)
    stack: list[int] = []
    out: list[int] = []
    events: list[Event] = []
    pop_class: dict[int, str] = {}
    f_snapshots: dict[int, tuple[int, ...]] = {}
    i = 0
    while i < n or stack:
        if i < n and step_legal_push(stack, pi[i], spec):
            stack.append(pi[i])
            events.append(Event(len(events) + 1, "push", pi[i]))
            i += 1
        else:
            f_snapshots[stack[-1]] = (*stack, *pi[i:])
            e = stack.pop()
            out.append(e)
            events.append(Event(len(events) + 1, "pop", e))
            # the final entry is pushed once i reaches n
            pop_class[e] = "pre" if i < n else "post"
    return SortTrace(pi, spec, Permutation.trusted(out), events, pop_class, f_snapshots)


def _sorter_west(pi: Sequence[int]) -> tuple[int, ...]:
    stack: list[int] = []
    out: list[int] = []
    push, pop, emit = stack.append, stack.pop, out.append
    for x in pi:
        while stack and stack[-1] < x:
            emit(pop())
        push(x)
    out.extend(reversed(stack))
    return tuple(out)


def _sorter_single(order: tuple[int, ...]) -> Callable[[Sequence[int]], tuple[int, ...]]:
    k = len(order)
    km1 = k - 1
    # window slot 0 is the incoming entry, slot i >= 1 is stack[-i]
    rest = order[1:]
    first = order[0]

    def sorter(pi: Sequence[int]) -> tuple[int, ...]:
        stack: list[int] = []
        out: list[int] = []
        push, pop, emit = stack.append, stack.pop, out.append
        for x in pi:
            while len(stack) >= km1 and stack:
                prev = x if first == 0 else stack[-first]
                for j in rest:
                    cur = x if j == 0 else stack[-j]
                    if cur < prev:
                        break
                    prev = cur
                else:
                    emit(pop())
                    continue
                break
            push(x)
        out.extend(reversed(stack))
        return tuple(out)

    return sorter


def _sorter_k3(order: tuple[int, ...]) -> Callable[[Sequence[int]], tuple[int, ...]]:
    # length-3 patterns dominate every workload; unroll the window test
    a, b, c = order

    def sorter(pi: Sequence[int]) -> tuple[int, ...]:
        stack: list[int] = []
        out: list[int] = []
        push, pop, emit = stack.append, stack.pop, out.append
        for x in pi:
            while len(stack) >= 2:
                w = (x, stack[-1], stack[-2])
                if w[a] < w[b] < w[c]:
                    emit(pop())
                else:
                    break
            push(x)
        out.extend(reversed(stack))
        return tuple(out)

    return sorter


def make_sorter(spec: MachineSpec) -> Callable[[Sequence[int]], tuple[int, ...]]:
    """A traceless pass ``pi -> output`` as a plain-tuple function.

    Used in the hot loops of the dynamics and search modules; returns tuples,
    not :class:`Permutation`, to skip validation.
    """
    if spec.kind is Kind.WEST:
        return _sorter_west
    if spec.kind is Kind.CONSECUTIVE:
        order = spec.patterns[0].order
        if len(order) == 2:
            # 21 forbids x above the top (West); 12 forbids x below it
            return _sorter_west if order == (1, 0) else _sorter_single(order)
        return _sorter_k3(order) if len(order) == 3 else _sorter_single(order)

    def sorter(pi: Sequence[int]) -> tuple[int, ...]:
        return tuple(run(pi, spec).output)

    return sorter


_SC_CACHE: dict[tuple[int, ...], Callable] = {}


def sc(pi: Sequence[int], sigma: Sequence[int]) -> Permutation:
    """One pass of the consecutive machine for ``sigma`` over ``pi``."""
    key = tuple(sigma)
    sorter = _SC_CACHE.get(key)
    if sorter is None:
        sorter = _SC_CACHE[key] = make_sorter(MachineSpec.consecutive(key))
    pi = pi if isinstance(pi, Permutation) else Permutation(pi)
    return Permutation.trusted(sorter(pi))
