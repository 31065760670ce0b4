"""
Permutations in one-line notation over ``1..n`` and the elementary symmetries
used throughout the package.

Positions and values are 1-based, matching the usual combinatorial notation:
``pi[i - 1]`` is the entry at position ``i``.

>>> p = Permutation([2, 4, 1, 3, 5])
>>> p.reverse(), p.complement(), p.inverse()
((5, 3, 1, 4, 2), (4, 2, 5, 3, 1), (3, 1, 4, 2, 5))
>>> relative_index(p, 3, 1)
RelativeIndex(value=1, iterate_parity=1)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator, Sequence

__all__ = [
    "ENUMERATION_CAP",
    "MAX_ENTRY",
    "CapacityError",
    "InvalidInput",
    "Permutation",
    "RelativeIndex",
    "complement",
    "enumerate_sn",
    "identity",
    "inverse",
    "parse_perm",
    "rank",
    "relative_index",
    "reverse",
    "standardize",
    "unrank",
]

# entries are stored as small ints; 255 keeps every value within a byte
MAX_ENTRY = 255
ENUMERATION_CAP = 12


class InvalidInput(ValueError):
    """Malformed permutation, word or argument."""


class CapacityError(ValueError):
    """Requested size exceeds an enumeration cap."""


class Permutation(tuple):
    """An immutable permutation of ``1..n`` in one-line notation.

    Subclasses ``tuple`` so that permutations hash, compare and slice like
    plain tuples; the constructor validates the entries.
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[int] = ()):
        t = tuple.__new__(cls, entries)
        n = len(t)
        if n < 1:
            raise InvalidInput("a permutation needs at least one entry")
        if n > MAX_ENTRY:
            raise InvalidInput(f"length {n} exceeds {MAX_ENTRY}")
        if sorted(t) != list(range(1, n + 1)):
            raise InvalidInput(f"{tuple(t)} is not a rearrangement of 1..{n}")
        return t

    @classmethod
    def trusted(cls, entries: Iterable[int]) -> "Permutation":
        """Wrap entries already known to be a permutation, skipping checks."""
        return tuple.__new__(cls, entries)

    @property
    def n(self) -> int:
        return len(self)

    def reverse(self) -> "Permutation":
        return reverse(self)

    def complement(self) -> "Permutation":
        return complement(self)

    def inverse(self) -> "Permutation":
        return inverse(self)

    def __repr__(self) -> str:
        return f"Permutation({tuple(self)!r})"

    def __str__(self) -> str:
        return " ".join(map(str, self))

    def to_json(self) -> list[int]:
        return list(self)


def identity(n: int) -> Permutation:
    return Permutation.trusted(range(1, n + 1))


_SEPARATORS = re.compile(r"[\s,]+")


def parse_perm(text: str) -> Permutation:
    """Parse ``"4 6 8 5"``, ``"4,6,8,5"`` or ``"[4, 6, 8, 5]"``.

    A run of digits with no separator (``"231"``) is read one digit per entry,
    which is only unambiguous for n <= 9.
    """
    body = text.strip().strip("[]()").strip()
    if not body:
        raise InvalidInput("empty permutation text")
    parts = [p for p in _SEPARATORS.split(body) if p]
    if len(parts) == 1 and len(parts[0]) > 1:
        parts = list(parts[0])
    try:
        entries = [int(p) for p in parts]
    except ValueError:
        raise InvalidInput(f"cannot parse permutation from {text!r}") from None
    return Permutation(entries)


def standardize(word: Sequence[int]) -> Permutation:
    """Order-isomorphic permutation of a word of distinct integers.

    >>> standardize((4, 9, 2))
    Permutation((2, 3, 1))
    """
    if len(word) < 1:
        raise InvalidInput("cannot standardize an empty word")
    if len(set(word)) != len(word):
        raise InvalidInput(f"word {tuple(word)} has repeated entries")
    ranks = [0] * len(word)
    for r, i in enumerate(sorted(range(len(word)), key=word.__getitem__), 1):
        ranks[i] = r
    return Permutation.trusted(ranks)


def reverse(pi: Sequence[int]) -> Permutation:
    return Permutation.trusted(reversed(pi))


def complement(pi: Sequence[int]) -> Permutation:
    m = len(pi) + 1
    return Permutation.trusted(m - v for v in pi)


def inverse(pi: Sequence[int]) -> Permutation:
    inv = [0] * len(pi)
    for i, v in enumerate(pi, 1):
        inv[v - 1] = i
    return Permutation.trusted(inv)


@dataclass(frozen=True)
class RelativeIndex:
    """Signed offset of an entry from the maximal entry ``n``.

    ``value = (-1)**iterate_parity * (pos(j) - pos(n))``; the sign flips on
    odd iterates so that a permutation which is reversed by every pass keeps
    each entry at a fixed index.
    """

    value: int
    iterate_parity: int


def relative_index(pi: Sequence[int], j: int, a: int) -> RelativeIndex:
    """Index of entry ``j`` in ``pi``, taken to be the ``a``-th iterate."""
    n = len(pi)
    if not 1 <= j <= n:
        raise InvalidInput(f"entry {j} outside 1..{n}")
    offset = pi.index(j) - pi.index(n)
    parity = a % 2
    return RelativeIndex(-offset if parity else offset, parity)


def _check_cap(n: int, cap: int) -> None:
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    if n > cap:
        raise CapacityError(f"n={n} exceeds enumeration cap {cap}")


def enumerate_sn(n: int, cap: int = ENUMERATION_CAP) -> Iterator[Permutation]:
    """All of S_n in lexicographic order."""
    _check_cap(n, cap)
    trusted = Permutation.trusted
    for p in permutations(range(1, n + 1)):
        yield trusted(p)


def rank(pi: Sequence[int]) -> int:
    """Lexicographic rank of ``pi`` in S_n (Lehmer code in factorial base)."""
    n = len(pi)
    r = 0
    for i in range(n):
        smaller = sum(1 for v in pi[i + 1:] if v < pi[i])
        r = r * (n - i) + smaller
    return r


def unrank(n: int, r: int) -> Permutation:
    """Inverse of :func:`rank`: the permutation of rank ``r`` in S_n."""
    if not 0 <= r < math.factorial(n):
        raise InvalidInput(f"rank {r} outside [0, {n}!)")
    digits = []
    for base in range(1, n + 1):
        r, d = divmod(r, base)
        digits.append(d)
    pool = list(range(1, n + 1))
    return Permutation.trusted(pool.pop(d) for d in reversed(digits))
