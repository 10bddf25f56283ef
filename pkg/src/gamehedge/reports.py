"""Price path files and JSON report documents.

A price path file is a CSV table with header ``week,price`` and optional metadata
comment lines such as ``# strike=50 sigma=0.2 rate=0.05 shares=100000``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .errors import GameHedgeError
from .hedge_sim import Comparison, HedgeReport, HedgeScenario, LedgerRow, Method

METADATA_KEYS = {"strike": float, "sigma": float, "rate": float, "shares": float, "method": str}


class PathFileError(GameHedgeError, ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass
class PricePath:
    prices: list[float]
    metadata: dict[str, Any] = field(default_factory=dict)


def parse_price_path(text: str) -> PricePath:
    metadata: dict[str, Any] = {}
    prices: list[float] = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                if "=" not in token:
                    continue
                key, _, value = token.partition("=")
                key = key.strip().lower()
                if key not in METADATA_KEYS:
                    continue
                try:
                    metadata[key] = METADATA_KEYS[key](value)
                except ValueError:
                    raise PathFileError(lineno, f"bad value for {key}: {value!r}") from None
            continue
        cells = [c.strip() for c in next(csv.reader([line]))]
        if not header_seen:
            if [c.lower() for c in cells] != ["week", "price"]:
                raise PathFileError(lineno, f"expected header 'week,price', got {line!r}")
            header_seen = True
            continue
        if len(cells) != 2:
            raise PathFileError(lineno, f"expected 2 columns, got {len(cells)}")
        try:
            week, price = int(cells[0]), float(cells[1])
        except ValueError:
            raise PathFileError(lineno, f"cannot parse {line!r}") from None
        if week != len(prices):
            raise PathFileError(lineno, f"weeks must run contiguously from 0; expected {len(prices)}, got {week}")
        if not price > 0:
            raise PathFileError(lineno, f"price must be positive, got {price}")
        prices.append(price)
    if not header_seen:
        raise PathFileError(1, "missing 'week,price' header")
    if len(prices) < 2:
        raise PathFileError(lineno if text else 1, "need at least two weekly prices")
    return PricePath(prices, metadata)


def read_price_path(path: Union[str, Path]) -> PricePath:
    return parse_price_path(Path(path).read_text())


def format_price_path(prices, metadata: Optional[dict[str, Any]] = None) -> str:
    out = io.StringIO()
    if metadata:
        out.write("# " + " ".join(f"{k}={v}" for k, v in metadata.items()) + "\n")
    out.write("week,price\n")
    for week, price in enumerate(prices):
        out.write(f"{week},{price!r}\n")
    return out.getvalue()


def write_price_path(path: Union[str, Path], prices, metadata: Optional[dict[str, Any]] = None) -> None:
    Path(path).write_text(format_price_path(prices, metadata))


def scenario_inputs(scenario: HedgeScenario) -> dict[str, Any]:
    return {
        "prices": list(scenario.prices),
        "strike": scenario.strike,
        "sigma": scenario.sigma,
        "rate": scenario.rate,
        "weeks": scenario.weeks,
        "shares": scenario.shares,
        "method": scenario.method.value,
        "rounding": scenario.rounding.value,
    }


def report_to_dict(report: HedgeReport) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "method": report.method.value,
        "rows": [asdict(row) for row in report.rows],
        "settlement": report.settlement,
        "final_cost": report.final_cost,
    }
    if report.scenario is not None:
        doc["inputs"] = scenario_inputs(report.scenario)
    return doc


def report_from_dict(doc: dict[str, Any]) -> HedgeReport:
    scenario = None
    if "inputs" in doc:
        inp = doc["inputs"]
        scenario = HedgeScenario(
            inp["prices"], inp["strike"], inp["sigma"], inp["rate"], inp["shares"], inp["method"], inp["rounding"]
        )
    return HedgeReport(
        rows=[LedgerRow(**row) for row in doc["rows"]],
        final_cost=int(doc["final_cost"]),
        method=Method(doc["method"]),
        settlement=doc["settlement"],
        scenario=scenario,
    )


def comparison_to_dict(cmp: Comparison, game: HedgeReport, bs: HedgeReport) -> dict[str, Any]:
    return {
        "strike": cmp.strike,
        "game_cost": cmp.game_cost,
        "bs_cost": cmp.bs_cost,
        "relative_difference": cmp.relative_difference,
        "game": report_to_dict(game),
        "bs": report_to_dict(bs),
    }


def dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, allow_nan=True)
