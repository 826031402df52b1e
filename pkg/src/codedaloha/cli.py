"""Command-line front end.

Subcommands: ``threshold``, ``sweep``, ``de-trace``, ``bound``, ``penalty``.
Results go to CSV (``#`` comment header with the full parameter set) or JSON
(``metadata`` + ``rows``).  Exit status is 0 on success, 2 on usage or
validation errors and 1 on runtime failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager, nullcontext
from pathlib import Path

from . import __version__, de, mc
from .degree import CodeParams

SEED_ENV = "CODEDALOHA_SEED"

SWEEP_COLUMNS = ["protocol", "n", "k", "n_sa", "g_nominal", "g_realized", "frames", "i_max", "seed",
                 "t_mean", "t_stderr", "plr_mean", "plr_stderr"]
THRESHOLD_COLUMNS = ["n", "k", "rate", "delta_p_db", "g_star", "spc_bound"]
TRACE_COLUMNS = ["i", "p", "q"]

# rate-1/2 family, SPC family and the (7,4) code of the throughput figure
FIG3_CODES = [(2, 1), (4, 2), (6, 3), (8, 4), (3, 1), (4, 1), (5, 2), (5, 3), (6, 4), (7, 4),
              (8, 5), (8, 6)] + [(k + 1, k) for k in range(2, 9)]
FIG4_N_SA = (100, 400)
FIG4_CODE = (7, 4)
FIG4_GRID = "0.05:1.4:0.05"
FIG4_I_MAX = 20


class UsageError(Exception):
    pass


def parse_code(text: str) -> CodeParams:
    try:
        n, k = (int(t) for t in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise UsageError(f"cannot parse code pair {text!r}; expected n,k") from None
    try:
        return CodeParams(n, k)
    except ValueError as e:
        raise UsageError(f"code pair {text!r}: {e}") from None


def parse_grid(text: str) -> list[float]:
    """``a,b,c`` or ``start:stop:step`` (stop included)."""
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if step <= 0:
                raise UsageError("grid step must be positive")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            grid = [round(start + i * step, 12) for i in range(count)]
        else:
            grid = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse load grid {text!r}") from None
    if not grid:
        raise UsageError("load grid is empty")
    bad = [g for g in grid if not (g >= 0 and math.isfinite(g))]
    if bad:
        raise UsageError(f"g grid: offered load must be >= 0, got {bad}")
    return grid


def _fmt(v):
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return "" if v is None else str(v)


def _metadata(args, command: str) -> dict:
    meta = {"tool": "codedaloha", "version": __version__, "command": command}
    for key, val in sorted(vars(args).items()):
        if key in ("func", "config") or callable(val):
            continue
        meta[key] = val
    return meta


def render(rows: list[dict], columns: list[str], meta: dict, fmt: str) -> str:
    if fmt == "json":
        clean = [{c: (None if isinstance(r.get(c), float) and math.isinf(r[c]) else r.get(c)) for c in columns}
                 for r in rows]
        return json.dumps({"metadata": meta, "columns": columns, "rows": clean}, indent=2, default=str) + "\n"
    buf = io.StringIO()
    for key, val in meta.items():
        buf.write(f"# {key}: {json.dumps(val, default=str)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            yield fh


def _emit(args, command, rows, columns, path=None, extra_meta=None):
    meta = _metadata(args, command)
    meta.update(extra_meta or {})
    with _open_out(path if path is not None else args.output) as fh:
        fh.write(render(rows, columns, meta, args.format))


def _settings(args) -> de.DeSettings:
    try:
        return de.DeSettings(args.epsilon, args.max_iter)
    except ValueError as e:
        raise UsageError(str(e)) from None


# threshold -------------------------------------------------------------------

def cmd_threshold(args) -> int:
    pairs = list(args.code or [])
    if args.fig3:
        pairs += [f"{n},{k}" for n, k in FIG3_CODES]
    if not pairs:
        raise UsageError("threshold: give at least one --code n,k or --fig3")
    codes = list(dict.fromkeys(parse_code(p) for p in pairs))
    settings = _settings(args)
    if not 0 < args.lo < args.hi:
        raise UsageError("bracket: need 0 < --lo < --hi")
    if not args.tol > 0:
        raise UsageError("tol: must be positive")
    rows = []
    for code in codes:
        res = de.threshold(code, args.lo, args.hi, args.tol, settings)
        rows.append({
            "n": code.n, "k": code.k, "rate": code.rate, "delta_p_db": code.power_penalty_db,
            "g_star": res.g_star,
            "spc_bound": de.spc_bound(code.k) if code.n == code.k + 1 else None,
        })
    rows.sort(key=lambda r: (r["delta_p_db"], r["n"]))
    _emit(args, "threshold", rows, THRESHOLD_COLUMNS)
    return 0


# sweep -----------------------------------------------------------------------

def _asymptotic_rows(protocol, code, grid, i_max, seed):
    it = 1 if protocol in ("SA", "THMA") else i_max
    rows = []
    for g in grid:
        plr, t = de.asymptotic_throughput(g, code, it) if g > 0 else (0.0, 0.0)
        rows.append({"protocol": protocol, "n": code.n, "k": code.k, "n_sa": math.inf, "g_nominal": g,
                     "g_realized": g, "frames": 0, "i_max": i_max, "seed": seed,
                     "t_mean": t, "t_stderr": 0.0, "plr_mean": plr, "plr_stderr": 0.0})
    return rows


def _mc_rows(stats):
    rows = []
    for s in stats:
        r = s.as_row()
        r["g_nominal"] = r.pop("g")
        r["seed"] = r.pop("master_seed")
        rows.append(r)
    return rows


def _sweep_code(protocol, code_text):
    if protocol == "SA":
        return CodeParams.uncoded()
    return parse_code(code_text)


def _validate_sweep(protocol, code, n_sa, grid, frames, i_max, jobs):
    if protocol not in mc.PROTOCOLS:
        raise UsageError(f"protocol: expected one of {mc.PROTOCOLS}, got {protocol!r}")
    if frames < 1:
        raise UsageError("frames: must be >= 1")
    if i_max < 1:
        raise UsageError("i_max: must be >= 1")
    if jobs < 1:
        raise UsageError("jobs: must be >= 1")
    if n_sa is not None:
        if n_sa < 1:
            raise UsageError("n_sa: must be >= 1")
        if code.n > code.k * n_sa:
            raise UsageError(f"n_sa: frame of {code.k * n_sa} slots too small for code {code}")


def _run_sweep(args, protocol, code, n_sa, grid, seed, pool):
    if n_sa is None:
        return _asymptotic_rows(protocol, code, grid, args.i_max, seed)
    stats = mc.sweep(protocol, code, n_sa, grid, args.frames, args.i_max, seed, args.jobs, pool)
    return _mc_rows(stats)


def _with_pool(jobs):
    return ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else nullcontext()


def cmd_sweep(args) -> int:
    grid = parse_grid(args.g_grid)
    seed = args.seed
    if args.fig4:
        out_dir = Path(args.output if args.output not in (None, "-") else "fig4")
        code = CodeParams(*FIG4_CODE)
        args.i_max = FIG4_I_MAX
        jobs_list = []
        for n_sa in (*FIG4_N_SA, None):
            for protocol in mc.PROTOCOLS:
                c = CodeParams.uncoded() if protocol == "SA" else code
                _validate_sweep(protocol, c, n_sa, grid, args.frames, args.i_max, args.jobs)
                jobs_list.append((protocol, c, n_sa))
        ext = "json" if args.format == "json" else "csv"
        with _with_pool(args.jobs) as pool:
            for protocol, c, n_sa in jobs_list:
                rows = _run_sweep(args, protocol, c, n_sa, grid, seed, pool)
                tag = "asymptotic" if n_sa is None else f"nsa{n_sa}"
                name = f"{protocol.lower()}_{c.n}_{c.k}_{tag}.{ext}"
                _emit(args, "sweep", rows, SWEEP_COLUMNS, out_dir / name,
                      {"protocol": protocol, "code": str(c), "n_sa": "inf" if n_sa is None else n_sa,
                       "g_grid": grid})
        return 0
    protocol = args.protocol
    if protocol is None:
        raise UsageError("protocol: required (SA, THMA or CSA) unless --fig4")
    code = _sweep_code(protocol, args.code or "7,4")
    n_sa = None if args.asymptotic else args.n_sa
    if n_sa is None and not args.asymptotic:
        raise UsageError("n_sa: give --n-sa or --asymptotic")
    _validate_sweep(protocol, code, n_sa, grid, args.frames, args.i_max, args.jobs)
    with _with_pool(args.jobs) as pool:
        rows = _run_sweep(args, protocol, code, n_sa, grid, seed, pool)
    _emit(args, "sweep", rows, SWEEP_COLUMNS, extra_meta={"g_grid": grid})
    return 0


# de-trace, bound, penalty ----------------------------------------------------

def cmd_de_trace(args) -> int:
    code = parse_code(args.code)
    settings = _settings(args)
    if not args.g > 0:
        raise UsageError("g: offered load must be positive")
    trace = de.de_run(args.g, code, settings.max_iter, settings.epsilon)
    rows = [{"i": i, "p": p, "q": q} for i, p, q in trace.steps]
    _emit(args, "de-trace", rows, TRACE_COLUMNS,
          extra_meta={"converged": trace.converged, "final_p": trace.final_p,
                      "iterations_used": trace.iterations_used})
    return 0


def cmd_bound(args) -> int:
    if not args.k:
        raise UsageError("bound: give at least one k")
    if any(k < 1 for k in args.k):
        raise UsageError("k: must be >= 1")
    rows = [{"n": k + 1, "k": k, "spc_bound": de.spc_bound(k)} for k in args.k]
    _emit(args, "bound", rows, ["n", "k", "spc_bound"])
    return 0


def cmd_penalty(args) -> int:
    if not args.code:
        raise UsageError("penalty: give at least one --code n,k")
    rows = []
    for text in args.code:
        c = parse_code(text)
        rows.append({"n": c.n, "k": c.k, "rate": c.rate, "delta_p_db": c.power_penalty_db})
    _emit(args, "penalty", rows, ["n", "k", "rate", "delta_p_db"])
    return 0


# parser ----------------------------------------------------------------------

def _default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 1
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def _common(p: argparse.ArgumentParser):
    p.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--config", help="flat JSON object of option values; flags override it")


def _de_opts(p, max_iter):
    p.add_argument("--max-iter", type=int, default=max_iter)
    p.add_argument("--epsilon", type=float, default=de.DEFAULT_EPSILON)


def build_parser(default_seed: int = 1) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codedaloha", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", help="DE load thresholds G* for (n,k) codes")
    p.add_argument("--code", action="append", metavar="N,K")
    p.add_argument("--fig3", action="store_true", help="preset list of codes for the threshold figure")
    p.add_argument("--lo", type=float, default=de.BRACKET[0])
    p.add_argument("--hi", type=float, default=de.BRACKET[1])
    p.add_argument("--tol", type=float, default=de.BISECTION_TOL)
    _de_opts(p, de.DEFAULT_MAX_ITER)
    _common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("sweep", help="throughput vs offered load")
    p.add_argument("--protocol", choices=mc.PROTOCOLS)
    p.add_argument("--code", metavar="N,K", help="ignored for SA (default 7,4)")
    p.add_argument("--n-sa", type=int, dest="n_sa")
    p.add_argument("--asymptotic", action="store_true", help="density evolution instead of Monte Carlo")
    p.add_argument("--g-grid", default=FIG4_GRID, help="a,b,c or start:stop:step")
    p.add_argument("--frames", type=int, default=mc.DEFAULT_FRAMES)
    p.add_argument("--i-max", type=int, default=FIG4_I_MAX, dest="i_max")
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--fig4", action="store_true", help="all throughput-figure curves; -o names a directory")
    _common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("de-trace", help="per-iteration density-evolution trace")
    p.add_argument("--code", required=True, metavar="N,K")
    p.add_argument("--g", type=float, required=True)
    _de_opts(p, de.DEFAULT_MAX_ITER)
    _common(p)
    p.set_defaults(func=cmd_de_trace)

    p = sub.add_parser("bound", help="SPC threshold bound 1/(k+1)")
    p.add_argument("k", type=int, nargs="*")
    _common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("penalty", help="average power penalty 10 log10(n/k)")
    p.add_argument("--code", action="append", metavar="N,K")
    _common(p)
    p.set_defaults(func=cmd_penalty)
    return parser


def _apply_config(parser, argv, args):
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"config: cannot read {args.config}: {e}") from None
    if not isinstance(cfg, dict) or any(isinstance(v, (dict, list)) and k != "code" for k, v in cfg.items()):
        raise UsageError("config: expected a flat JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    unknown = sorted(set(cfg) - set(vars(args)))
    if unknown:
        raise UsageError(f"config: unknown keys {unknown}")
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    subparser.set_defaults(**cfg)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = build_parser(_default_seed())
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return int(e.code or 0)
        if args.config:
            args = _apply_config(parser, argv, args)
        return args.func(args)
    except UsageError as e:
        print(f"codedaloha: error: {e}", file=sys.stderr)
        return 2
    except de.BracketError as e:
        print(f"codedaloha: error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001
        print(f"codedaloha: runtime failure: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
