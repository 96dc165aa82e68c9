import functools

from metric_invariants.counting.certificates import i_empirical
from metric_invariants.counting.fanout import run_ordered


def test_inline_run_keeps_order():
    jobs = [functools.partial(pow, 2, k) for k in range(6)]
    assert run_ordered(jobs) == [1, 2, 4, 8, 16, 32]


def test_process_pool_keeps_order():
    jobs = [functools.partial(pow, 3, k) for k in range(8)]
    assert run_ordered(jobs, workers=3) == [3**k for k in range(8)]


def test_no_jobs():
    assert run_ordered([], workers=4) == []


def test_parallel_certificate_matches_serial():
    serial = i_empirical(2, (2, 0), 3, trials=3, seed=11)
    parallel = i_empirical(2, (2, 0), 3, trials=3, seed=11, workers=2)
    assert parallel.to_dict() == serial.to_dict()
