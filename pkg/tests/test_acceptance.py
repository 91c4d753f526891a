"""The eight acceptance criteria at their stated tolerances, one status line each."""
import pytest

from szdisc import acceptance

UNATTAINABLE = "moduli at radius 1-1e-6"

_cache = {}


def _run(k):
    if k not in _cache:
        _cache[k] = acceptance.CRITERIA[k]()
    return _cache[k]


def _report(r, capsys):
    with capsys.disabled():
        print("\n" + r.line())


@pytest.mark.parametrize("k", [1, 2, 4, 5, 6, 7, 8])
def test_criterion(k, capsys):
    r = _run(k)
    _report(r, capsys)
    assert r.passed, r.detail


@pytest.mark.xfail(
    strict=True,
    reason="|alpha| at radius 1 - 1e-6 deviates from 1 by about m (1 - r)/pi at the arc midpoint "
    "and by order one near the endpoints; 1e-6 is unattainable for m = 10, 100",
)
def test_criterion_3(capsys):
    r = _run(3)
    _report(r, capsys)
    assert r.passed, r.detail


def test_criterion_3_other_clauses():
    r = _run(3)
    failed = [name for name, ok in r.checks.items() if not ok]
    assert failed == [UNATTAINABLE]
    # the clause fails by the predicted amount at the arc midpoint, not by accident
    on_arc = {m: dev[0] for m, dev in r.detail["radius_deviation"].items()}
    assert on_arc[1] > 1e-6 and on_arc[10] > on_arc[1] and on_arc[100] > on_arc[10]
