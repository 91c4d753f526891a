import numpy as np

from szdisc import parallel


def _square(x):
    return x * x


def test_worker_count_reads_environment(monkeypatch):
    monkeypatch.setenv("SZ_THREADS", "3")
    monkeypatch.setattr(parallel.os, "cpu_count", lambda: 8)
    assert parallel.worker_count() == 3
    monkeypatch.setenv("SZ_THREADS", "junk")
    assert parallel.worker_count() == 1
    monkeypatch.setenv("SZ_THREADS", "64")
    assert parallel.worker_count() == 8


def test_pool_results_match_serial(monkeypatch):
    serial = parallel.pmap(_square, range(10))
    monkeypatch.setenv("SZ_THREADS", "2")
    monkeypatch.setattr(parallel.os, "cpu_count", lambda: 2)
    assert parallel.pmap(_square, range(10)) == serial


def test_child_seeds_are_reproducible():
    a = parallel.child_seeds(3, 5)
    assert a == parallel.child_seeds(3, 5)
    assert len(set(a)) == 5
    assert a[:2] == parallel.child_seeds(3, 2)
