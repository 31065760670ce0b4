"""
Extremal sorting-time search over S_n.

Exhaustive mode walks lexicographic ranks ``[0, n!)`` in contiguous chunks.
Chunks may run in a process pool, but results are merged strictly in rank
order and witnesses are kept as the lowest-ranked ones, so the outcome does
not depend on the worker count or on where a run was interrupted. After every
merged chunk the checkpoint is rewritten atomically.

Sampled mode draws distinct ranks from a seeded RNG, for n where n! is out of
reach.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .dynamics import BoundViolation, sort_time_fn, time_to_avoider
from .patterns import Mode, Pattern, parse_pattern
from .perm_core import CapacityError, InvalidInput, Permutation, unrank

__all__ = [
    "HARD_CAP",
    "IntegrityError",
    "SearchCheckpoint",
    "SearchRecord",
    "SearchResult",
    "default_workers",
    "exhaustive_search",
    "load_checkpoint",
    "read_records",
    "sampled_search",
    "verify_record",
    "write_records",
]

log = logging.getLogger(__name__)

HARD_CAP = 12
CHUNK_SIZE = 100_000
WITNESS_LIMIT = 100
WORKERS_ENV = "SCSORT_WORKERS"


class IntegrityError(ValueError):
    """A checkpoint file is corrupt or belongs to a different search."""


def default_workers() -> int:
    return int(os.environ.get(WORKERS_ENV, "1"))


def _sigma_pattern(sigma) -> Pattern:
    if isinstance(sigma, Pattern):
        pat = sigma
    elif isinstance(sigma, str):
        pat = parse_pattern(sigma)
    else:
        pat = Pattern.consecutive(sigma)
    if pat.mode is not Mode.CONSECUTIVE:
        raise InvalidInput("sorting-time search runs the consecutive machine only")
    return pat


@dataclass(frozen=True)
class SearchRecord:
    n: int
    sigma: str
    perm: Permutation
    steps: int
    discovered_at: int

    def to_json(self) -> dict:
        return {"n": self.n, "sigma": self.sigma, "perm": list(self.perm),
                "steps": self.steps, "discovered_at": self.discovered_at}

    @classmethod
    def from_json(cls, d: dict) -> "SearchRecord":
        return cls(d["n"], d["sigma"], Permutation(d["perm"]), d["steps"], d["discovered_at"])


@dataclass
class SearchCheckpoint:
    n: int
    sigma: str
    next_rank: int = 0
    best_steps: int = -1
    best: list[SearchRecord] = field(default_factory=list)

    def _body(self) -> dict:
        return {"n": self.n, "sigma": self.sigma, "next_rank": self.next_rank,
                "best_steps": self.best_steps, "best": [r.to_json() for r in self.best]}

    def to_json(self) -> dict:
        body = self._body()
        body["sha256"] = _digest(body)
        return body

    def save(self, path: str | os.PathLike) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(json.dumps(self.to_json(), indent=1))
        os.replace(tmp, path)


def _digest(body: dict) -> str:
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def load_checkpoint(path: str | os.PathLike) -> SearchCheckpoint:
    try:
        doc = json.loads(Path(path).read_text())
        digest = doc.pop("sha256")
        if digest != _digest(doc):
            raise IntegrityError(f"{path}: checksum mismatch")
        cp = SearchCheckpoint(doc["n"], doc["sigma"], doc["next_rank"], doc["best_steps"],
                              [SearchRecord.from_json(r) for r in doc["best"]])
    except IntegrityError:
        raise
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise IntegrityError(f"{path}: unreadable checkpoint ({exc})") from exc
    if not 0 <= cp.next_rank <= math.factorial(cp.n):
        raise IntegrityError(f"{path}: next_rank {cp.next_rank} out of range")
    if any(r.steps != cp.best_steps for r in cp.best):
        raise IntegrityError(f"{path}: witnesses disagree with best_steps")
    return cp


@dataclass
class SearchResult:
    max_steps: int
    records: list[SearchRecord]
    checkpoint: SearchCheckpoint
    complete: bool


def _lex_run(start: Sequence[int], count: int) -> Iterator[tuple[int, ...]]:
    """``count`` consecutive permutations in lexicographic order from ``start``."""
    a = list(start)
    n = len(a)
    for _ in range(count):
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] > a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] < a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def _scan_chunk(args) -> tuple[int, list[tuple[int, tuple[int, ...]]]]:
    n, sigma, lo, hi, limit = args
    time = sort_time_fn(sigma)
    best, wits = -1, []
    for r, pi in enumerate(_lex_run(unrank(n, lo), hi - lo), lo):
        t = time(pi)
        if t > best:
            best, wits = t, [(r, pi)]
        elif t == best and len(wits) < limit:
            wits.append((r, pi))
    return best, wits


def _merge(best: int, wits: list, other_best: int, other_wits: list, limit: int):
    # keep the lowest ranks among all witnesses of the larger maximum
    if other_best > best:
        return other_best, sorted(other_wits)[:limit]
    if other_best == best:
        return best, sorted(wits + other_wits)[:limit]
    return best, wits


def exhaustive_search(
    n: int,
    sigma="c:231",
    workers: int | None = None,
    checkpoint_path: str | os.PathLike | None = None,
    records_path: str | os.PathLike | None = None,
    chunk_size: int = CHUNK_SIZE,
    witness_limit: int = WITNESS_LIMIT,
    stop_after_chunks: int | None = None,
) -> SearchResult:
    """Maximum sorting time over S_n with its lowest-ranked witnesses.

    Resumes from ``checkpoint_path`` when the file exists. ``stop_after_chunks``
    ends the run early (leaving a valid checkpoint), as an interruption would.
    """
    pat = _sigma_pattern(sigma)
    sigma_text = str(pat)
    if not 1 <= n <= HARD_CAP:
        raise CapacityError(f"n={n} outside 1..{HARD_CAP}")
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise InvalidInput("workers must be at least 1")
    total = math.factorial(n)

    cp = SearchCheckpoint(n, sigma_text)
    if checkpoint_path is not None and Path(checkpoint_path).exists():
        cp = load_checkpoint(checkpoint_path)
        if (cp.n, cp.sigma) != (n, sigma_text):
            raise IntegrityError(
                f"checkpoint is for n={cp.n} sigma={cp.sigma}, not n={n} sigma={sigma_text}")
        log.info("resuming n=%d %s at rank %d/%d", n, sigma_text, cp.next_rank, total)

    best = cp.best_steps
    wits = [(r.discovered_at, tuple(r.perm)) for r in cp.best]
    starts = range(cp.next_rank, total, chunk_size)
    if stop_after_chunks is not None:
        starts = starts[:stop_after_chunks]
    jobs = [(n, tuple(pat.perm), lo, min(lo + chunk_size, total), witness_limit)
            for lo in starts]

    def results() -> Iterable:
        if workers == 1 or len(jobs) <= 1:
            yield from map(_scan_chunk, jobs)
        else:
            with ProcessPoolExecutor(workers) as pool:
                yield from pool.map(_scan_chunk, jobs)

    for job, (c_best, c_wits) in zip(jobs, results()):
        best, wits = _merge(best, wits, c_best, c_wits, witness_limit)
        cp.next_rank = job[3]
        cp.best_steps = best
        cp.best = [SearchRecord(n, sigma_text, Permutation.trusted(p), best, r) for r, p in wits]
        if checkpoint_path is not None:
            cp.save(checkpoint_path)
        log.debug("n=%d %s: ranks < %d done, max %d", n, sigma_text, cp.next_rank, best)

    complete = cp.next_rank == total
    if complete and records_path is not None:
        write_records(records_path, cp.best)
    return SearchResult(best, list(cp.best), cp, complete)


def sampled_search(
    n: int,
    sigma="c:231",
    sample_count: int = 0,
    seed: int = 0,
    include: Iterable[Sequence[int]] = (),
) -> SearchRecord | None:
    """Best sorting time among ``include`` plus ``sample_count`` distinct random
    permutations drawn with ``random.Random(seed)``.

    Ties keep the earliest; ``discovered_at`` is the position in that sequence.
    """
    pat = _sigma_pattern(sigma)
    time = sort_time_fn(tuple(pat.perm))
    rng = random.Random(seed)
    total = math.factorial(n)
    ranks = rng.sample(range(total), min(sample_count, total))
    candidates = [tuple(Permutation(p)) for p in include]
    candidates += [tuple(unrank(n, r)) for r in ranks]
    best = None
    for i, pi in enumerate(candidates):
        if len(pi) != n:
            raise InvalidInput(f"{pi} is not in S_{n}")
        t = time(pi)
        if best is None or t > best.steps:
            best = SearchRecord(n, str(pat), Permutation.trusted(pi), t, i)
    return best


def verify_record(r: SearchRecord) -> bool:
    """Recompute the sorting time of a record and compare."""
    try:
        pat = _sigma_pattern(r.sigma)
        return len(r.perm) == r.n and time_to_avoider(r.perm, pat) == r.steps
    except (InvalidInput, BoundViolation):
        return False


def write_records(path: str | os.PathLike, records: Iterable[SearchRecord]) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w") as fh:
        for r in records:
            fh.write(json.dumps(r.to_json()) + "\n")
    os.replace(tmp, path)


def read_records(path: str | os.PathLike) -> list[SearchRecord]:
    with open(path) as fh:
        return [SearchRecord.from_json(json.loads(line)) for line in fh if line.strip()]
