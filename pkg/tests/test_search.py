import json
import math
import os
import signal
import subprocess
import sys
import time

import pytest

from scsort.dynamics import max_sort_time
from scsort.perm_core import CapacityError, InvalidInput, Permutation, rank
from scsort.search import (
    IntegrityError,
    SearchRecord,
    exhaustive_search,
    load_checkpoint,
    read_records,
    sampled_search,
    verify_record,
)

WITNESS = (4, 6, 8, 5, 11, 7, 2, 9, 10, 3, 1)


@pytest.mark.parametrize("n, expected", [(3, 2), (4, 4), (5, 6), (6, 8), (7, 10)])
def test_exhaustive_max_is_2n_minus_4(n, expected):
    res = exhaustive_search(n, "c:231")
    assert res.complete and res.max_steps == expected


def test_witnesses_match_dynamics():
    value, witnesses = max_sort_time(6, (2, 3, 1))
    res = exhaustive_search(6, "c:231", chunk_size=97)
    assert res.max_steps == value
    assert [r.perm for r in res.records] == witnesses
    assert all(r.discovered_at == rank(r.perm) for r in res.records)


def test_worker_count_does_not_matter():
    a = exhaustive_search(3, "c:231", workers=1)
    b = exhaustive_search(3, "c:231", workers=8)
    assert a.records == b.records and a.max_steps == b.max_steps == 2


def test_witness_limit_keeps_lowest_ranks():
    full = exhaustive_search(6, "c:123")
    capped = exhaustive_search(6, "c:123", witness_limit=2, chunk_size=50)
    assert len(full.records) > 2
    assert capped.records == full.records[:2]


@pytest.mark.parametrize("stop", [1, 3, 10])
def test_resume_matches_uninterrupted(tmp_path, stop):
    cp = tmp_path / "cp.json"
    whole = exhaustive_search(6, "c:132", chunk_size=40)
    part = exhaustive_search(6, "c:132", checkpoint_path=cp, chunk_size=40, stop_after_chunks=stop)
    assert not part.complete
    saved = load_checkpoint(cp)
    assert saved.next_rank == 40 * stop
    assert saved.best_steps == max(r.steps for r in part.records)
    rest = exhaustive_search(6, "c:132", checkpoint_path=cp, chunk_size=40, workers=2)
    assert rest.complete
    assert (rest.max_steps, rest.records) == (whole.max_steps, whole.records)


def test_records_file(tmp_path):
    out = tmp_path / "rec.jsonl"
    res = exhaustive_search(6, "c:231", records_path=out)
    lines = out.read_text().splitlines()
    assert len(lines) == len(res.records)
    assert set(json.loads(lines[0])) == {"n", "sigma", "perm", "steps", "discovered_at"}
    records = read_records(out)
    assert records == res.records
    assert all(verify_record(r) for r in records)


def test_checkpoint_corruption_detected(tmp_path):
    cp = tmp_path / "cp.json"
    exhaustive_search(5, "c:231", checkpoint_path=cp, chunk_size=10, stop_after_chunks=2)
    doc = json.loads(cp.read_text())
    doc["next_rank"] = 100
    cp.write_text(json.dumps(doc))
    with pytest.raises(IntegrityError):
        exhaustive_search(5, "c:231", checkpoint_path=cp)
    cp.write_text("{not json")
    with pytest.raises(IntegrityError):
        load_checkpoint(cp)


def test_checkpoint_for_other_search_refused(tmp_path):
    cp = tmp_path / "cp.json"
    exhaustive_search(5, "c:231", checkpoint_path=cp, chunk_size=10, stop_after_chunks=1)
    with pytest.raises(IntegrityError):
        exhaustive_search(5, "c:123", checkpoint_path=cp)
    with pytest.raises(IntegrityError):
        exhaustive_search(6, "c:231", checkpoint_path=cp)


def test_caps_and_arguments():
    with pytest.raises(CapacityError):
        exhaustive_search(13, "c:231")
    with pytest.raises(InvalidInput):
        exhaustive_search(4, "c:231", workers=0)
    with pytest.raises(InvalidInput):
        exhaustive_search(4, "p:231")


def test_sampled_search_finds_counterexample():
    rec = sampled_search(11, "c:231", sample_count=200, seed=2024, include=[WITNESS])
    assert rec.steps == 19 > 2 * 11 - 4
    assert rec.perm == WITNESS
    assert verify_record(rec)


def test_sampled_search_deterministic():
    a = sampled_search(10, "c:231", sample_count=300, seed=5)
    b = sampled_search(10, "c:231", sample_count=300, seed=5)
    assert a == b and verify_record(a)


def test_sampled_search_small_cases():
    assert sampled_search(3, "c:231", sample_count=6, seed=1).steps == 2
    assert sampled_search(3, "c:231", sample_count=50, seed=1).steps == 2
    assert sampled_search(8, "c:231", sample_count=0, seed=1) is None


def test_verify_record_detects_tampering():
    good = SearchRecord(11, "c:231", Permutation(WITNESS), 19, 0)
    assert verify_record(good)
    assert not verify_record(SearchRecord(11, "c:231", Permutation(WITNESS), 18, 0))
    assert not verify_record(SearchRecord(10, "c:231", Permutation(WITNESS), 19, 0))


def test_exhaustive_records_verify():
    for n in range(1, 7):
        assert all(verify_record(r) for r in exhaustive_search(n, "c:231").records)


def test_survives_sigkill(tmp_path):
    cp = tmp_path / "cp.json"
    argv = [sys.executable, "-m", "scsort", "search", "--n", "8", "--chunk-size", "2000",
            "--checkpoint", str(cp), "--format", "json"]
    proc = subprocess.Popen(argv, stdout=subprocess.DEVNULL)
    deadline = time.time() + 60
    while not cp.exists() and time.time() < deadline:
        time.sleep(0.02)
    os.kill(proc.pid, signal.SIGKILL)
    proc.wait()
    interrupted_at = load_checkpoint(cp).next_rank
    assert 0 < interrupted_at < math.factorial(8)
    resumed = exhaustive_search(8, "c:231", checkpoint_path=cp, chunk_size=2000)
    whole = exhaustive_search(8, "c:231", chunk_size=2000)
    assert resumed.complete
    assert (resumed.max_steps, resumed.records) == (whole.max_steps, whole.records)
    assert whole.max_steps == 12
