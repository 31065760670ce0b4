"""
Iterating the consecutive-pattern machines: orbits, periodic points, sorting
times, and exhaustive checks of the known structural results for SC_231.

All exhaustive checks return a :class:`Report`; a check never raises on a
counterexample, it lists it. Reports over disjoint rank ranges of S_n combine
with :meth:`Report.merge`, which is associative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Collection, Iterable, Sequence

from .machine import MachineSpec, make_sorter
from .patterns import Pattern, avoids_all, enumerate_av, matches_window
from .perm_core import (
    ENUMERATION_CAP,
    CapacityError,
    InvalidInput,
    Permutation,
    enumerate_sn,
    reverse,
    unrank,
)

__all__ = [
    "BoundViolation",
    "DStat",
    "OrbitResult",
    "Report",
    "census_multi",
    "d_stat",
    "delete_one",
    "is_periodic",
    "max_sort_time",
    "orbit",
    "period",
    "periodic_points",
    "sort_time_cap",
    "sort_time_fn",
    "target_test",
    "time_to_avoider",
    "verify_bound",
    "verify_claim_adjacent12",
    "verify_d_decrease",
    "verify_theorem_1",
]

SIGMA_231 = (2, 3, 1)


class BoundViolation(RuntimeError):
    """An orbit failed to reach the avoidance set within the iteration cap."""


@dataclass
class OrbitResult:
    iterates: list[Permutation]
    cycle_start: int | None
    cycle_length: int | None
    hit_time: int | None = None
    truncated: bool = False

    @property
    def is_periodic(self) -> bool:
        return self.cycle_start == 0

    def to_json(self) -> dict:
        return {
            "iterates": [list(p) for p in self.iterates],
            "cycle_start": self.cycle_start,
            "cycle_length": self.cycle_length,
            "hit_time": self.hit_time,
            "truncated": self.truncated,
        }


@dataclass(frozen=True)
class DStat:
    value: int


@dataclass
class Report:
    check: str
    n: int
    sigma: str | None
    passed: bool = True
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def fail(self, violation) -> None:
        self.passed = False
        self.violations.append(violation)

    def merge(self, other: "Report") -> "Report":
        """Combine reports over disjoint parts of S_n.

        Stats named ``max_*`` combine by max, everything else by sum.
        """
        if (self.check, self.n, self.sigma) != (other.check, other.n, other.sigma):
            raise InvalidInput("cannot merge reports of different checks")
        stats = dict(self.stats)
        for key, v in other.stats.items():
            if key not in stats:
                stats[key] = v
            elif key.startswith("max_"):
                stats[key] = max(stats[key], v)
            else:
                stats[key] = stats[key] + v
        return Report(self.check, self.n, self.sigma, self.passed and other.passed,
                      self.violations + other.violations, stats)

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "n": self.n,
            "sigma": self.sigma,
            "pass": self.passed,
            "violations": [_jsonable(v) for v in self.violations],
            "stats": {k: _jsonable(v) for k, v in self.stats.items()},
        }


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (tuple, list, set, frozenset)):
        return [_jsonable(x) for x in v]
    return v


def _word(sigma: Sequence[int]) -> str:
    return ("" if len(sigma) <= 9 else ",").join(map(str, sigma))


def _sigma_tuple(sigma) -> tuple[int, ...]:
    if isinstance(sigma, Pattern):
        return tuple(sigma.perm)
    return tuple(Permutation(sigma))


def _require_theorem_sigma(sigma: Sequence[int]) -> None:
    if len(sigma) < 3:
        raise InvalidInput(
            f"sigma={_word(sigma)}: periodic-point results need pattern length >= 3")


def _ranks(n: int, ranks: tuple[int, int] | None, cap: int) -> Iterable[Permutation]:
    if n > cap:
        raise CapacityError(f"n={n} exceeds enumeration cap {cap}")
    if ranks is None:
        return enumerate_sn(n, cap)
    lo, hi = ranks
    return (unrank(n, r) for r in range(lo, hi))


def target_test(sigma: Sequence[int]) -> Callable[[Sequence[int]], bool]:
    """Fast membership test for the avoidance set of ``sigma`` and its reverse."""
    sigma = tuple(sigma)
    k = len(sigma)
    orders = {Pattern.consecutive(s).order for s in (sigma, tuple(reversed(sigma)))}
    if k == 3:
        # a 3-window matches sigma or its reverse iff its comparison signature does
        bad = set()
        for o in orders:
            w = [0, 0, 0]
            for v, i in enumerate(o):
                w[i] = v
            bad.add((w[0] < w[1], w[1] < w[2], w[0] < w[2]))

        def test(pi: Sequence[int]) -> bool:
            for i in range(len(pi) - 2):
                a, b, c = pi[i], pi[i + 1], pi[i + 2]
                if (a < b, b < c, a < c) in bad:
                    return False
            return True

        return test

    def test(pi: Sequence[int]) -> bool:
        for i in range(len(pi) - k + 1):
            w = pi[i:i + k]
            for o in orders:
                if matches_window(w, o):
                    return False
        return True

    return test


def orbit(
    pi: Sequence[int],
    sigma,
    target: Collection[Pattern] | None = None,
    max_iter: int = 10_000,
) -> OrbitResult:
    """Iterate SC_sigma from ``pi`` until a state repeats or ``max_iter`` passes.

    The repeated state is appended, so ``iterates[cycle_start + cycle_length]``
    equals ``iterates[cycle_start]``.
    """
    if max_iter < 1:
        raise InvalidInput("max_iter must be at least 1")
    sorter = make_sorter(MachineSpec.consecutive(_sigma_tuple(sigma)))
    cur = Permutation(pi)
    iterates = [cur]
    seen = {cur: 0}
    cycle_start = cycle_length = None
    for _ in range(max_iter):
        cur = Permutation.trusted(sorter(cur))
        iterates.append(cur)
        if cur in seen:
            cycle_start = seen[cur]
            cycle_length = len(iterates) - 1 - cycle_start
            break
        seen[cur] = len(iterates) - 1
    hit_time = None
    if target is not None:
        hit_time = next((t for t, p in enumerate(iterates) if avoids_all(p, target)), None)
    return OrbitResult(iterates, cycle_start, cycle_length, hit_time,
                       truncated=cycle_start is None)


def is_periodic(pi: Sequence[int], sigma) -> bool:
    return orbit(pi, sigma, max_iter=math.factorial(len(pi)) + 1).cycle_start == 0


def period(pi: Sequence[int], sigma) -> int | None:
    """Least period of ``pi`` under SC_sigma, or None if it is not periodic."""
    res = orbit(pi, sigma, max_iter=math.factorial(len(pi)) + 1)
    return res.cycle_length if res.cycle_start == 0 else None


def periodic_points(
    n: int, spec: MachineSpec, cap: int = ENUMERATION_CAP
) -> dict[Permutation, int]:
    """Every periodic point of the machine on S_n, mapped to its period.

    Tabulates the map once over S_n and reads the cycles off the functional
    graph; equivalent to calling :func:`is_periodic` on every element.
    """
    sorter = make_sorter(spec)
    image = {pi: sorter(pi) for pi in enumerate_sn(n, cap)}
    state: dict = {}  # 1 = on current walk, 2 = finished
    result: dict[Permutation, int] = {}
    for start in image:
        if start in state:
            continue
        path = []
        cur = start
        while cur not in state:
            state[cur] = 1
            path.append(cur)
            cur = image[cur]
        if state[cur] == 1:
            cycle = path[path.index(cur):]
            for p in cycle:
                result[Permutation.trusted(p)] = len(cycle)
        for p in path:
            state[p] = 2
    return result


def verify_theorem_1(n: int, sigma, cap: int = ENUMERATION_CAP) -> Report:
    """Periodic points of SC_sigma on S_n versus Av_n(c:sigma, c:rev(sigma))."""
    sigma = _sigma_tuple(sigma)
    _require_theorem_sigma(sigma)
    rep = Report("theorem1", n, _word(sigma))
    periodic = periodic_points(n, MachineSpec.consecutive(sigma), cap)
    av = set(enumerate_av(n, [Pattern.consecutive(sigma),
                              Pattern.consecutive(reverse(sigma))], cap))
    for pi in sorted(set(periodic) - av):
        rep.fail({"kind": "periodic_not_avoider", "perm": pi})
    for pi in sorted(av - set(periodic)):
        rep.fail({"kind": "avoider_not_periodic", "perm": pi})
    expected_period = 1 if n == 1 else 2
    for pi, per in sorted(periodic.items()):
        if per != expected_period:
            rep.fail({"kind": "period", "perm": pi, "period": per})
    rep.stats = {"periodic": len(periodic), "avoiders": len(av)}
    return rep


def d_stat(pi: Sequence[int]) -> DStat:
    """Number of entries strictly between the entries 1 and 2."""
    if len(pi) < 2:
        raise InvalidInput("D needs n >= 2")
    return DStat(abs(pi.index(1) - pi.index(2)) - 1)


def delete_one(pi: Sequence[int]) -> Permutation:
    """Remove the entry 1 and standardize what is left."""
    if len(pi) < 2:
        raise InvalidInput("cannot delete 1 from a permutation of length < 2")
    return Permutation.trusted(v - 1 for v in pi if v != 1)


def verify_d_decrease(
    n: int, ranks: tuple[int, int] | None = None, cap: int = ENUMERATION_CAP
) -> Report:
    sorter = make_sorter(MachineSpec.consecutive(SIGMA_231))
    rep = Report("d_decrease", n, "231")
    checked = 0
    for pi in _ranks(n, ranks, cap):
        if n < 2:
            break
        d = d_stat(pi).value
        if d == 0:
            continue
        checked += 1
        d2 = d_stat(sorter(sorter(pi))).value
        if d2 >= d:
            rep.fail({"perm": pi, "d": d, "d_after_two": d2})
    rep.stats = {"checked": checked}
    return rep


def verify_claim_adjacent12(
    n: int, ranks: tuple[int, int] | None = None, cap: int = ENUMERATION_CAP
) -> Report:
    """Deleting 1 commutes with SC_231 when 1 and 2 are adjacent."""
    sorter = make_sorter(MachineSpec.consecutive(SIGMA_231))
    rep = Report("claim_adjacent12", n, "231")
    checked = 0
    for pi in _ranks(n, ranks, cap):
        if n < 2 or d_stat(pi).value != 0:
            continue
        checked += 1
        out = sorter(pi)
        lhs = sorter(delete_one(pi))
        rhs = tuple(delete_one(out))
        if lhs != rhs:
            rep.fail({"kind": "commute", "perm": pi, "sc_of_star": lhs, "star_of_sc": rhs})
        if d_stat(out).value != 0:
            rep.fail({"kind": "adjacency", "perm": pi, "image": out})
    rep.stats = {"checked": checked}
    return rep


def sort_time_cap(n: int) -> int:
    """Iteration tripwire: the proven SC_231 bound plus two."""
    return (n - 1) * (n - 2) + 2


def time_to_avoider(pi: Sequence[int], sigma, max_iter: int | None = None) -> int:
    """Passes of SC_sigma until ``pi`` lands in Av(c:sigma, c:rev(sigma)).

    Raises :class:`BoundViolation` past ``max_iter`` passes, which defaults to
    :func:`sort_time_cap`.
    """
    sigma = _sigma_tuple(sigma)
    return sort_time_fn(sigma, max_iter)(tuple(Permutation(pi)))


def sort_time_fn(sigma: tuple[int, ...], max_iter: int | None = None) -> Callable[[tuple], int]:
    sorter = make_sorter(MachineSpec.consecutive(sigma))
    in_target = target_test(sigma)

    def time(pi: tuple) -> int:
        cap = sort_time_cap(len(pi)) if max_iter is None else max_iter
        t = 0
        while not in_target(pi):
            if t == cap:
                raise BoundViolation(
                    f"{pi} not sorted into Av(c:{_word(sigma)}, rev) after {cap} passes")
            pi = sorter(pi)
            t += 1
        return t

    return time


def max_sort_time(
    n: int, sigma, cap: int = ENUMERATION_CAP, max_iter: int | None = None
) -> tuple[int, list[Permutation]]:
    """Largest sorting time over S_n and every permutation attaining it."""
    sigma = _sigma_tuple(sigma)
    time = sort_time_fn(sigma, max_iter)
    best, witnesses = -1, []
    for pi in enumerate_sn(n, cap):
        t = time(pi)
        if t > best:
            best, witnesses = t, [pi]
        elif t == best:
            witnesses.append(pi)
    return best, witnesses


def verify_bound(
    n: int, ranks: tuple[int, int] | None = None, cap: int = ENUMERATION_CAP
) -> Report:
    """Every pi in S_n reaches Av(c:231, c:132) within (n-1)(n-2) passes."""
    bound = (n - 1) * (n - 2)
    time = sort_time_fn(SIGMA_231)
    rep = Report("bound", n, "231")
    worst = 0
    for pi in _ranks(n, ranks, cap):
        try:
            t = time(pi)
        except BoundViolation:
            rep.fail({"perm": pi, "steps": None, "bound": bound})
            continue
        worst = max(worst, t)
        if t > bound:
            rep.fail({"perm": pi, "steps": t, "bound": bound})
    rep.stats = {"max_steps": worst}
    return rep


def census_multi(n: int, patterns: Collection[Pattern], cap: int = ENUMERATION_CAP) -> Report:
    """Periodic points of SC_B against the candidate Av_n(B and its reverses).

    Exploratory: the report always passes and only records what it finds.
    """
    patterns = list(patterns)
    spec = MachineSpec.multi(p.perm for p in patterns)
    periodic = periodic_points(n, spec, cap)
    candidates = patterns + [Pattern.consecutive(reverse(p.perm)) for p in patterns]
    av = set(enumerate_av(n, candidates, cap))
    rep = Report("census_multi", n, str(spec)[4:])
    periods: dict[int, int] = {}
    for per in periodic.values():
        periods[per] = periods.get(per, 0) + 1
    rep.stats = {
        "periodic": {str(p): per for p, per in sorted(periodic.items())},
        "periods": periods,
        "candidates": [list(p) for p in sorted(av)],
        "periodic_not_candidate": [list(p) for p in sorted(set(periodic) - av)],
        "candidate_not_periodic": [list(p) for p in sorted(av - set(periodic))],
    }
    return rep
