"""Weekly price paths used as built-in hedging scenarios, with their default sigma and r."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Fixture:
    name: str
    prices: tuple[float, ...]
    sigma: float
    rate: float
    strikes: tuple[float, ...]
    source: str


FIXTURES = {
    "S1": Fixture(
        "S1",
        (49.00, 48.12, 47.37, 50.25, 51.75, 53.12, 53.00, 51.87, 51.38, 53.00, 49.88,
         48.50, 49.88, 50.37, 52.13, 51.88, 52.87, 54.87, 54.62, 55.87, 57.25),
        0.2,
        0.05,
        (35, 50, 65),
        "textbook weekly path, 20 weeks, call finishes in the money",
    ),
    "S2": Fixture(
        "S2",
        (49.00, 49.75, 52.00, 50.00, 48.38, 48.25, 48.75, 49.63, 48.25, 48.25, 51.12,
         51.50, 49.88, 49.88, 48.75, 47.50, 48.00, 46.25, 48.13, 46.63, 48.12),
        0.2,
        0.05,
        (35, 50, 65),
        "textbook weekly path, 20 weeks, call finishes out of the money",
    ),
    "S3": Fixture(
        "S3",
        (35.50, 34.63, 33.75, 34.75, 33.75, 33.00, 33.88, 34.50, 33.75, 34.75, 34.38,
         35.13, 36.00, 37.00, 36.88, 38.75, 37.88, 38.00, 38.63, 38.50, 37.50),
        0.18,
        0.1,
        (25, 35, 45),
        "textbook weekly path, 20 weeks, sigma 0.18, r 0.1",
    ),
}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name.upper()]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None
