from pathlib import Path

import numpy as np
import pytest

from nosig.counts import CountsTable

DATA = Path(__file__).parent / "data"

# P_ab(AB) for the distance-4 pair 49-66, rows ab = 00, 10, 01, 11 as printed
TABLE_VII = {
    (0, 0): [0.27779, 0.22945, 0.26979, 0.22297],
    (1, 0): [0.28060, 0.23202, 0.26679, 0.22059],
    (0, 1): [0.27800, 0.22958, 0.26975, 0.22267],
    (1, 1): [0.28092, 0.23137, 0.26742, 0.22029],
}
TABLE_VII_MARGINALS = {  # P(+*), P(*+)
    (0, 0): (0.50724, 0.54758),
    (1, 0): (0.51262, 0.54740),
    (0, 1): (0.50758, 0.54775),
    (1, 1): (0.51229, 0.54834),
}
# dP_0*, dP_1*, dP_*0, dP_*1 for 49-66 in units of 1e-4
TABLE_IV_49_66 = (-3.36, 3.29, 1.86, -5.89)


@pytest.fixture
def eagle_path():
    return DATA / "eagle127.json"


@pytest.fixture
def table_vii():
    p = np.zeros((2, 2, 4))
    for (a, b), row in TABLE_VII.items():
        p[a, b] = row
    # five printed decimals -> exact integer counts out of 1e5
    return CountsTable.from_probabilities(p, 100_000, pair=(49, 66), test="c")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
