import itertools

import pytest

from gamehedge.model import MarketParams

T20 = 20 / 52

# S/K x sigma grid used by the solver and greeks property checks (K = 50, r = 0.05, T = 20/52)
GAME_GRID = [
    MarketParams(50 * ratio, 50.0, sigma, 0.05, T20)
    for ratio, sigma in itertools.product((0.85, 0.98, 1.25), (0.15, 0.2, 0.3))
]


@pytest.fixture
def anchor() -> MarketParams:
    return MarketParams(49.0, 50.0, 0.2, 0.05, T20)


def grid_id(p: MarketParams) -> str:
    return f"S{p.S:g}-sig{p.sigma:g}"


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
