"""Acceptance criteria on the shipped corpus, one test and one report line each."""
import time

import pytest

from graphconf.les import Status
from graphconf.oracle import DEFAULT_CELL_CAP
from graphconf.verify import CRITERIA, load_corpus, run_criterion, summarize

from conftest import CORPUS

MAX_N = 3
TRIALS = 1000

RESULTS: dict[int, str] = {}


@pytest.fixture(scope="module")
def corpus():
    c = load_corpus(CORPUS)
    assert c.graphs, "shipped corpus is empty"
    return c


@pytest.mark.slow
@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, corpus, capsys):
    start = time.perf_counter()
    verdicts = run_criterion(k, corpus, max_n=MAX_N, trials=TRIALS, cell_cap=DEFAULT_CELL_CAP)
    status = summarize(verdicts)
    counts = {s: sum(1 for v in verdicts if v.status is s) for s in Status}
    line = (f"{'PASS' if status is Status.PASS else 'FAIL'} criterion {k}: {CRITERIA[k]} "
            f"({counts[Status.PASS]} passed, {counts[Status.FAIL]} failed, {counts[Status.SKIPPED]} skipped, "
            f"{time.perf_counter() - start:.1f}s)")
    RESULTS[k] = line
    with capsys.disabled():
        print("\n" + line)
    failed = [f"{v.name}: {v.detail}" for v in verdicts if v.status is Status.FAIL]
    assert status is Status.PASS, failed[:10]
