"""``frac-pp``: thin command-line client for the solver service.

The CLI only parses flags/config files, sends one request per invocation,
and writes the returned artifacts as CSV files.  By default the request is
served in-process (no server needed); pass ``--server URL`` to talk to a
running ``frac-pp serve`` instance instead.

Exit codes: 0 success, 2 config error, 3 guard abort, 4 solver failure.
"""
from __future__ import annotations

import argparse
import asyncio
import csv
import sys
from pathlib import Path
from typing import Optional

import httpx

from .config import BENCHMARK_IC, ConfigError, RunConfig, parse_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_SOLVER = 4

_ENDPOINTS = {
    "simulate": "/simulate",
    "converge-time": "/converge/time",
    "converge-space": "/converge/space",
    "stability": "/stability",
    "weights-dump": "/weights-dump",
}


def _fmt(value: float) -> str:
    """15 significant digits, enough to compare against tabulated values."""
    return f"{value:.15g}"


def _fail(category: str, detail: str, code: int) -> int:
    print(f"frac-pp: error category={category} detail={detail}", file=sys.stderr)
    return code


# -- service access ----------------------------------------------------------


def call_service(config: RunConfig, server: Optional[str] = None) -> tuple[int, dict]:
    """POST the config to its mode endpoint; returns (http_status, body)."""
    endpoint = _ENDPOINTS[config.mode]
    payload = config.model_dump(mode="json")
    if server is None:
        from .service import app  # imported lazily; pulls in fastapi

        async def _go() -> httpx.Response:
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://frac-pp.internal"
            ) as client:
                return await client.post(endpoint, json=payload, timeout=None)

        response = asyncio.run(_go())
    else:
        response = httpx.post(server.rstrip("/") + endpoint, json=payload, timeout=None)
    try:
        body = response.json()
    except ValueError:
        body = {"detail": response.text}
    return response.status_code, body


# -- artifact writers ---------------------------------------------------------


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_simulate(body: dict, out: Path) -> None:
    x = body["x"]
    rows = []
    for snap in body["snapshots"]:
        t = snap["t"]
        for xi, n, p in zip(x, snap["n"], snap["p"]):
            rows.append([_fmt(t), _fmt(xi), _fmt(n), _fmt(p)])
    _write_csv(out / "trajectory.csv", ["t", "x", "N", "P"], rows)
    _write_csv(
        out / "summary.csv",
        ["k", "minN", "maxN", "minP", "maxP", "guard_flag"],
        [
            [s["k"], _fmt(s["min_n"]), _fmt(s["max_n"]), _fmt(s["min_p"]), _fmt(s["max_p"]),
             int(s["guard_flag"])]
            for s in body["summary"]
        ],
    )
    for key, name in (("matrix_n", "matrix_N.csv"), ("matrix_p", "matrix_P.csv")):
        if body.get(key) is not None:
            _write_csv(
                out / name,
                [f"c{j}" for j in range(len(body[key][0]))],
                [[_fmt(v) for v in row] for row in body[key]],
            )


def _write_converge(body: dict, out: Path) -> None:
    rows = []
    for i, level in enumerate(body["levels"]):
        rate_n = _fmt(body["orders_n"][i - 1]) if i > 0 else ""
        rate_p = _fmt(body["orders_p"][i - 1]) if i > 0 else ""
        rows.append(
            [i, _fmt(level), _fmt(body["e_n"][i]), rate_n, _fmt(body["e_p"][i]), rate_p]
        )
    _write_csv(
        out / "convergence.csv", ["level", "h_or_tau", "e_N", "rate_N", "e_P", "rate_P"], rows
    )


def _print_converge_table(body: dict) -> None:
    label = "tau" if body["axis"] == "time" else "h"
    other = "h" if body["axis"] == "time" else "tau"
    print(f"{label} ({other} = {_fmt(body['fixed_step'])})"
          f"{'':4}e_N{'':18}rate{'':6}e_P{'':18}rate")
    for i, level in enumerate(body["levels"]):
        rate_n = f"{body['orders_n'][i - 1]:.5f}" if i > 0 else ""
        rate_p = f"{body['orders_p'][i - 1]:.5f}" if i > 0 else ""
        print(f"{level:<12.6g}{body['e_n'][i]:<22.15g}{rate_n:<10}"
              f"{body['e_p'][i]:<22.15g}{rate_p:<10}")


def _write_stability(body: dict, out: Path) -> None:
    _write_csv(
        out / "stability.csv",
        ["tau", "epsilon", "max_divergence", "ratio"],
        [
            [_fmt(r["tau"]), _fmt(r["epsilon"]), _fmt(r["max_divergence"]), _fmt(r["ratio"])]
            for r in body["rows"]
        ],
    )


def _write_weights(body: dict, out: Path) -> None:
    _write_csv(
        out / "weights.csv",
        ["j", "value"],
        [[j, _fmt(v)] for j, v in enumerate(body["values"])],
    )


# -- flag parsing --------------------------------------------------------------


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="flat JSON config file")
    parser.add_argument("--server", metavar="URL", help="remote service URL (default: in-process)")
    parser.add_argument("--alpha", type=float, help="time order in (0, 1]")
    parser.add_argument("--beta", type=float, help="space order in (1, 2]")
    parser.add_argument("--scheme", choices=["centered", "wsgd"])
    parser.add_argument("--M", type=int, dest="m_intervals", help="space subintervals")
    parser.add_argument("--steps", type=int, dest="n_steps", help="time steps")
    parser.add_argument("--T", type=float, dest="t_final", help="final time")
    parser.add_argument("--left", type=float)
    parser.add_argument("--right", type=float)
    parser.add_argument("--d1", type=float)
    parser.add_argument("--d2", type=float)
    parser.add_argument("--rho-q", type=float, dest="rho_q")
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--kappa", type=float)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--guards", choices=["off", "monitor", "strict"])
    parser.add_argument("--strict-bounds", action="store_true", help="shorthand for --guards strict")
    parser.add_argument("--p-upper", type=float, dest="p_upper", help="predator cap (default 1/gamma + 1)")
    parser.add_argument("--levels", type=_float_list, help="comma-separated stepsizes")
    parser.add_argument("--epsilons", type=_float_list, help="comma-separated perturbation sizes")
    parser.add_argument("--paper-exact", action="store_true", dest="paper_exact",
                        help="full tabulated resolution instead of the desk-scale default")
    parser.add_argument("--workers", type=int, help="worker pool size for refinement levels")
    parser.add_argument("--snapshot-stride", type=int, dest="snapshot_stride")
    parser.add_argument("--ic", metavar="paper-ic|PATH",
                        help="initial data: built-in profile or node-value CSV (x,N,P)")
    parser.add_argument("--family", choices=["caputo", "centered", "wsgd"],
                        help="weights-dump table family")
    parser.add_argument("--count", type=int, help="weights-dump table length")
    parser.add_argument("--out", dest="out_dir", metavar="DIR", help="artifact directory")
    parser.add_argument("--dump-matrix", action="store_true", dest="dump_matrix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frac-pp",
        description="solver for the coupled space-time fractional predator-prey system",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in _ENDPOINTS:
        _add_shared_flags(sub.add_parser(mode))
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_ic_csv(path: str) -> tuple[list[float], list[float]]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip() or row[0].lstrip().startswith("x"):
                continue  # header or blank
            rows.append((float(row[1]), float(row[2])))
    if not rows:
        raise ConfigError(f"initial-data file {path} holds no node values")
    return [r[0] for r in rows], [r[1] for r in rows]


def _overrides_from_args(args: argparse.Namespace) -> dict:
    skip = {"mode", "config", "server", "strict_bounds", "host", "port"}
    overrides = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    # boolean store_true flags: only forward when set, so file values survive
    for flag in ("paper_exact", "dump_matrix"):
        if not overrides.get(flag):
            overrides.pop(flag, None)
    if args.strict_bounds:
        overrides["guards"] = "strict"
    ic = overrides.get("ic")
    if ic is not None and ic != BENCHMARK_IC:
        ic_n, ic_p = _load_ic_csv(ic)
        overrides.update(ic="custom", ic_n=ic_n, ic_p=ic_p)
    overrides["mode"] = args.mode
    return overrides


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.mode == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    try:
        config = parse_config(args.config, _overrides_from_args(args))
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)

    try:
        status_code, body = call_service(config, args.server)
    except httpx.HTTPError as exc:
        return _fail("transport", str(exc), EXIT_CONFIG)
    if status_code != 200:
        return _fail("config", str(body.get("detail", body)), EXIT_CONFIG)
    if body.get("status") == "guard_abort":
        report = body.get("abort_report") or {}
        return _fail(
            "guard",
            f"{body.get('message')} (step {report.get('k')})",
            EXIT_GUARD,
        )
    if body.get("status") == "solver_failure":
        return _fail("solver", str(body.get("message")), EXIT_SOLVER)

    out = Path(config.out_dir)
    if config.mode == "simulate":
        _write_simulate(body, out)
        mins = min(s["min_n"] for s in body["summary"]) if body["summary"] else float("nan")
        maxs = max(s["max_n"] for s in body["summary"]) if body["summary"] else float("nan")
        minp = min(s["min_p"] for s in body["summary"]) if body["summary"] else float("nan")
        maxp = max(s["max_p"] for s in body["summary"]) if body["summary"] else float("nan")
        flagged = sum(s["guard_flag"] for s in body["summary"])
        print(f"simulate: mu={_fmt(body['mu'])} thresholds=({_fmt(body['mu_threshold_n'])}, "
              f"{_fmt(body['mu_threshold_p'])})")
        print(f"N in [{_fmt(mins)}, {_fmt(maxs)}], P in [{_fmt(minp)}, {_fmt(maxp)}], "
              f"flagged steps: {flagged}")
        print(f"artifacts: {out / 'trajectory.csv'}, {out / 'summary.csv'}")
    elif config.mode in ("converge-time", "converge-space"):
        _write_converge(body, out)
        _print_converge_table(body)
        print(f"artifacts: {out / 'convergence.csv'}")
    elif config.mode == "stability":
        _write_stability(body, out)
        for row in body["rows"]:
            print(f"tau={row['tau']:<8g} eps={row['epsilon']:<8g} "
                  f"divergence={row['max_divergence']:.6e} ratio={row['ratio']:.6f}")
        print(f"artifacts: {out / 'stability.csv'}")
    else:
        _write_weights(body, out)
        print(f"{config.family} table, {len(body['values'])} entries -> {out / 'weights.csv'}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
