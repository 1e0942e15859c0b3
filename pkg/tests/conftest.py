import time

import pytest

from pcmfill.metagraph import build_metagraph, extract_sequences, mark_optimal
from pcmfill.simulate import SimConfig, run_level_sweep

# master seed of the acceptance runs; all assertions below are deterministic
# functions of it
ACCEPTANCE_SEED = 20220422
ACCEPTANCE_N_SAMPLES = 100_000


def _timed_sweep(n):
    t0 = time.perf_counter()
    scores = run_level_sweep(
        SimConfig(n=n, n_samples=ACCEPTANCE_N_SAMPLES, master_seed=ACCEPTANCE_SEED)
    )
    return scores, time.perf_counter() - t0


@pytest.fixture(scope="session")
def sweep4():
    return _timed_sweep(4)


@pytest.fixture(scope="session")
def sweep5():
    return _timed_sweep(5)


@pytest.fixture(scope="session")
def sweep6():
    return _timed_sweep(6)


@pytest.fixture(scope="session")
def scored_all(sweep4, sweep5, sweep6):
    out = {}
    for n, (scores, _) in ((4, sweep4), (5, sweep5), (6, sweep6)):
        out[n] = mark_optimal(build_metagraph(n), scores)
    return out


@pytest.fixture(scope="session")
def sequences_all(scored_all):
    return {n: extract_sequences(scored) for n, scored in scored_all.items()}


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.VERDICTS):
            terminalreporter.write_line(line)
