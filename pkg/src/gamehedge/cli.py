"""Command-line interface: price, greeks, hedge, compare and export.

Exit codes: 0 success, 2 bad flags or input file, 3 solver failure, 4 trivial option.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import reports
from .black_scholes import bs_price
from .errors import DegenerateMaturity, GameHedgeError, HedgeError, SolverError, TrivialOption
from .fixtures import FIXTURES, get_fixture
from .game_pricing import game_greeks, solve_price
from .hedge_sim import HedgeReport, HedgeScenario, Method, Rounding, compare_reports, run_ledger
from .model import MarketParams

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_TRIVIAL = 4


class UsageError(Exception):
    pass


def _add_market_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-S", "--stock", type=float, required=True, help="stock price")
    p.add_argument("-K", "--strike", type=float, required=True, help="exercise price")
    p.add_argument("--sigma", type=float, required=True, help="annual volatility")
    p.add_argument("-r", "--rate", type=float, required=True, help="continuously compounded annual rate")
    p.add_argument("--weeks", type=int, required=True, help="time to expiry in weeks")
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.GAME.value)
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _add_path_flags(p: argparse.ArgumentParser, strike_help: str) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fixture", type=str.upper, choices=sorted(FIXTURES), help="built-in price path")
    src.add_argument("--file", help="price path CSV (header week,price)")
    p.add_argument("-K", "--strike", type=float, help=strike_help)
    p.add_argument("--sigma", type=float, help="override the path's volatility")
    p.add_argument("-r", "--rate", type=float, help="override the path's rate")
    p.add_argument("--shares", type=float, help="option-covered shares (default 100000)")
    p.add_argument("--rounding", choices=[r.value for r in Rounding], default=Rounding.HALF_EVEN.value)
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamehedge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("price", help="price a European call")
    _add_market_flags(p)

    p = sub.add_parser("greeks", help="delta and gamma of a European call")
    _add_market_flags(p)
    p.add_argument("--verbose", action="store_true", help="also print W, dW/dS and dt_u/dS")

    p = sub.add_parser("hedge", help="weekly delta-hedging cost on a price path")
    _add_path_flags(p, "exercise price (default: file metadata)")
    p.add_argument("--method", choices=[m.value for m in Method], help="default game, or file metadata")

    p = sub.add_parser("compare", help="hedging cost of both methods across strikes")
    _add_path_flags(p, "single strike (alternative to --strikes)")
    p.add_argument("--strikes", help="comma-separated strikes (default: the fixture's three)")

    p = sub.add_parser("export", help="write a built-in fixture as a price path file")
    p.add_argument("--fixture", type=str.upper, choices=sorted(FIXTURES), required=True)
    p.add_argument("-K", "--strike", type=float, help="strike recorded in the metadata")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    return parser


def _params(args) -> MarketParams:
    try:
        return MarketParams.from_weeks(args.stock, args.strike, args.sigma, args.rate, args.weeks)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(doc, text: str, as_json: bool) -> None:
    print(reports.dumps(doc) if as_json else text)


def cmd_price(args) -> int:
    params = _params(args)
    inputs = {"S": params.S, "K": params.K, "sigma": params.sigma, "r": params.r, "weeks": args.weeks}
    if args.method == Method.BS.value:
        res = bs_price(params)
        _emit({"inputs": inputs, "method": "bs", "price": res.price_bar}, f"price = {res.price_bar:.6g}", args.json)
        return EXIT_OK
    sol = solve_price(params)
    doc = {
        "inputs": inputs,
        "method": "game",
        "price": sol.u,
        "t_u": sol.t_u,
        "iterations": sol.iterations,
        "residual_f": sol.residual_f,
        "residual_g": sol.residual_g,
    }
    _emit(doc, f"price = {sol.u:.6g}\nt_u = {sol.t_u:.6g}\niterations = {sol.iterations}", args.json)
    return EXIT_OK


def cmd_greeks(args) -> int:
    params = _params(args)
    inputs = {"S": params.S, "K": params.K, "sigma": params.sigma, "r": params.r, "weeks": args.weeks}
    if args.method == Method.BS.value:
        res = bs_price(params)
        doc = {"inputs": inputs, "method": "bs", "delta": res.delta_bar, "gamma": res.gamma_bar}
        lines = [f"delta = {res.delta_bar:.6g}", f"gamma = {res.gamma_bar:.6g}"]
        if args.verbose:
            doc.update(d1=res.d1, d2=res.d2)
            lines += [f"d1 = {res.d1:.6g}", f"d2 = {res.d2:.6g}"]
    else:
        sol = solve_price(params)
        g = game_greeks(params, sol)
        doc = {"inputs": inputs, "method": "game", "price": sol.u, "t_u": sol.t_u, "delta": g.delta, "gamma": g.gamma}
        lines = [f"delta = {g.delta:.6g}", f"gamma = {g.gamma:.6g}"]
        if args.verbose:
            doc.update(w=g.w, dw_ds=g.dw_ds, dtu_ds=g.dtu_ds)
            lines += [f"W = {g.w:.6g}", f"dW/dS = {g.dw_ds:.6g}", f"dt_u/dS = {g.dtu_ds:.6g}"]
    _emit(doc, "\n".join(lines), args.json)
    return EXIT_OK


def _load_path(args):
    """Prices and defaults from --fixture or --file; flags override both."""
    if args.fixture:
        fx = get_fixture(args.fixture)
        prices = list(fx.prices)
        meta = {"sigma": fx.sigma, "rate": fx.rate}
        strikes = list(fx.strikes)
    else:
        try:
            pp = reports.read_price_path(args.file)
        except OSError as exc:
            raise UsageError(f"{args.file}: {exc.strerror}") from exc
        except reports.PathFileError as exc:
            raise UsageError(f"{args.file}: {exc}") from exc
        prices, meta = pp.prices, dict(pp.metadata)
        strikes = [meta["strike"]] if "strike" in meta else []
    for key in ("sigma", "rate", "shares"):
        if getattr(args, key, None) is not None:
            meta[key] = getattr(args, key)
    for key in ("sigma", "rate"):
        if key not in meta:
            raise UsageError(f"{key} missing: give --{key} or put it in the file metadata")
    return prices, meta, strikes


def _scenario(prices, meta, strike, method, rounding) -> HedgeScenario:
    try:
        return HedgeScenario(prices, strike, meta["sigma"], meta["rate"], meta.get("shares", 100_000), method, rounding)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def format_ledger(report: HedgeReport) -> str:
    lines = [f"{'Week':>4} {'Stock':>8} {'Delta':>6} {'Shares':>10} {'Cost':>10} {'Cumulative':>11} {'Interest':>8}"]
    for row in report.rows:
        lines.append(
            f"{row.week:>4} {row.price:>8.2f} {row.delta_rounded:>6.3f} {row.shares_traded:>10.0f} "
            f"{row.trade_cost:>10.1f} {row.cumulative_cost:>11.1f} {row.interest_accrued:>8.1f}"
        )
    return "\n".join(lines)


def cmd_hedge(args) -> int:
    prices, meta, strikes = _load_path(args)
    strike = args.strike if args.strike is not None else (strikes[0] if len(strikes) == 1 else None)
    if strike is None:
        raise UsageError("give a strike with -K")
    method = args.method or meta.get("method") or Method.GAME.value
    scenario = _scenario(prices, meta, strike, method, args.rounding)
    report = run_ledger(scenario)
    summary = f"K = {strike:g}, method = {scenario.method.value}, cost of hedging = {report.final_cost:,}"
    text = format_ledger(report) + "\n" + summary
    _emit(reports.report_to_dict(report), text, args.json)
    return EXIT_OK


def cmd_compare(args) -> int:
    prices, meta, strikes = _load_path(args)
    if args.strikes:
        try:
            strikes = [float(s) for s in args.strikes.split(",") if s.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --strikes: {args.strikes!r}") from exc
    elif args.strike is not None:
        strikes = [args.strike]
    if not strikes:
        raise UsageError("give strikes with --strikes or -K")
    rows, lines = [], [f"{'K':>8} {'game':>12} {'bs':>12} {'difference':>11}"]
    for strike in strikes:
        scenario = _scenario(prices, meta, strike, Method.GAME, args.rounding)
        cmp, game, bs = compare_reports(scenario)
        rows.append(reports.comparison_to_dict(cmp, game, bs))
        lines.append(f"{strike:>8g} {cmp.game_cost:>12,} {cmp.bs_cost:>12,} {cmp.relative_difference:>+10.1%}")
    _emit({"comparisons": rows}, "\n".join(lines), args.json)
    return EXIT_OK


def cmd_export(args) -> int:
    fx = get_fixture(args.fixture)
    meta = {"sigma": fx.sigma, "rate": fx.rate, "shares": 100000}
    if args.strike is not None:
        meta = {"strike": args.strike, **meta}
    text = reports.format_price_path(fx.prices, meta)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "price": cmd_price,
    "greeks": cmd_greeks,
    "hedge": cmd_hedge,
    "compare": cmd_compare,
    "export": cmd_export,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TrivialOption as exc:
        print(f"trivial option: {exc}", file=sys.stderr)
        return EXIT_TRIVIAL
    except HedgeError as exc:
        print(f"hedge failed at {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (SolverError, DegenerateMaturity) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except GameHedgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
