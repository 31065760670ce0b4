"""
Classical and consecutive pattern containment.

A :class:`Pattern` is a permutation together with a containment mode. Text form
is ``"c:231"`` (consecutive) or ``"p:231"`` (classical, "plain").
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import inf
from typing import Collection, Iterable, Iterator, Sequence

from .perm_core import (
    ENUMERATION_CAP,
    InvalidInput,
    Permutation,
    enumerate_sn,
    parse_perm,
)

__all__ = [
    "Mode",
    "Pattern",
    "Occurrence",
    "avoids_all",
    "contains",
    "enumerate_av",
    "matches_window",
    "occurrences",
    "parse_pattern",
    "parse_patterns",
]


class Mode(str, Enum):
    CLASSICAL = "classical"
    CONSECUTIVE = "consecutive"


_PREFIX = {Mode.CLASSICAL: "p", Mode.CONSECUTIVE: "c"}


@dataclass(frozen=True)
class Pattern:
    perm: Permutation
    mode: Mode = Mode.CONSECUTIVE

    def __post_init__(self):
        if not isinstance(self.perm, Permutation):
            object.__setattr__(self, "perm", Permutation(self.perm))
        object.__setattr__(self, "mode", Mode(self.mode))
        if len(self.perm) < 2:
            raise InvalidInput("patterns need length at least 2")

    @property
    def k(self) -> int:
        return len(self.perm)

    @property
    def order(self) -> tuple[int, ...]:
        """0-based window offsets listed by increasing pattern value."""
        return tuple(sorted(range(self.k), key=self.perm.__getitem__))

    def __str__(self) -> str:
        sep = "" if self.k <= 9 else ","
        return _PREFIX[self.mode] + ":" + sep.join(map(str, self.perm))

    @classmethod
    def consecutive(cls, perm: Iterable[int] | str) -> "Pattern":
        return cls(_as_perm(perm), Mode.CONSECUTIVE)

    @classmethod
    def classical(cls, perm: Iterable[int] | str) -> "Pattern":
        return cls(_as_perm(perm), Mode.CLASSICAL)


def _as_perm(perm) -> Permutation:
    return parse_perm(perm) if isinstance(perm, str) else Permutation(perm)


def parse_pattern(text: str, default: Mode = Mode.CONSECUTIVE) -> Pattern:
    """Parse ``"c:231"``, ``"p:231"`` or a bare ``"231"`` (uses ``default``)."""
    text = text.strip()
    head, sep, tail = text.partition(":")
    if sep:
        modes = {"c": Mode.CONSECUTIVE, "p": Mode.CLASSICAL}
        if head not in modes:
            raise InvalidInput(f"unknown pattern mode {head!r} in {text!r}")
        return Pattern(parse_perm(tail), modes[head])
    return Pattern(parse_perm(text), default)


def parse_patterns(text: str, default: Mode = Mode.CONSECUTIVE) -> list[Pattern]:
    """Parse a comma-separated list such as ``"p:132,p:231"``."""
    return [parse_pattern(t, default) for t in text.split(",") if t.strip()]


@dataclass(frozen=True)
class Occurrence:
    positions: tuple[int, ...]  # 1-based, strictly increasing


def matches_window(window: Sequence[int], order: Sequence[int]) -> bool:
    """True iff ``window`` is order-isomorphic to the pattern with ``order``.

    ``order`` lists window offsets by increasing pattern value, so the window
    matches iff its entries increase along ``order``.
    """
    prev = window[order[0]]
    for i in order[1:]:
        cur = window[i]
        if cur < prev:
            return False
        prev = cur
    return True


def _consecutive_starts(host: Sequence[int], p: Pattern) -> Iterator[int]:
    k, order = p.k, p.order
    for i in range(len(host) - k + 1):
        if matches_window(host[i:i + k], order):
            yield i


def _classical_embeddings(host: Sequence[int], p: Pattern) -> Iterator[tuple[int, ...]]:
    # extend partial embeddings left to right; each new host entry must sit
    # strictly between the already-placed entries that bound its pattern value
    sigma, k, n = p.perm, p.k, len(host)
    lower = []  # for slot j: slot of largest earlier pattern value below sigma[j]
    upper = []
    for j in range(k):
        below = [i for i in range(j) if sigma[i] < sigma[j]]
        above = [i for i in range(j) if sigma[i] > sigma[j]]
        lower.append(max(below, key=sigma.__getitem__) if below else None)
        upper.append(min(above, key=sigma.__getitem__) if above else None)

    chosen: list[int] = []

    def extend(start: int) -> Iterator[tuple[int, ...]]:
        j = len(chosen)
        if j == k:
            yield tuple(chosen)
            return
        lo = host[chosen[lower[j]]] if lower[j] is not None else -inf
        hi = host[chosen[upper[j]]] if upper[j] is not None else inf
        for pos in range(start, n - (k - j) + 1):
            if lo < host[pos] < hi:
                chosen.append(pos)
                yield from extend(pos + 1)
                chosen.pop()

    yield from extend(0)


def contains(host: Sequence[int], p: Pattern) -> bool:
    if p.mode is Mode.CONSECUTIVE:
        return next(_consecutive_starts(host, p), None) is not None
    return next(_classical_embeddings(host, p), None) is not None


def occurrences(host: Sequence[int], p: Pattern) -> list[Occurrence]:
    """All occurrences of ``p`` in ``host``, lexicographic by positions."""
    if p.mode is Mode.CONSECUTIVE:
        return [Occurrence(tuple(range(i + 1, i + p.k + 1)))
                for i in _consecutive_starts(host, p)]
    return [Occurrence(tuple(i + 1 for i in e)) for e in _classical_embeddings(host, p)]


def avoids_all(host: Sequence[int], ps: Collection[Pattern]) -> bool:
    return not any(contains(host, p) for p in ps)


def enumerate_av(n: int, ps: Collection[Pattern], cap: int = ENUMERATION_CAP) -> list[Permutation]:
    """Members of S_n avoiding every pattern in ``ps``, in lexicographic order."""
    return [pi for pi in enumerate_sn(n, cap) if avoids_all(pi, ps)]
