"""Command-line front end.

    hubbard-surface classify --U 1.3 --h1 0.84,0,0 --hN 0.5723,0,0.53
    hubbard-surface solve    --U 1.3 --h1 0,0,0.3 --hN 0,0,0.84 --N 64 --format json
    hubbard-surface bulk     --U 1.3
    hubbard-surface surface  --U 1.3 --h1 0.13,0,0 --beta-grid 0.15:0.7:0.05
    hubbard-surface sweep    --U 1.3 --h1 0.13,0,0 --hN 0.32,0,0.3164 --N-list 64,128,256
    hubbard-surface scaling  --U 1.3 --h1 0.13,0,0 --hN 0.12,0,0.1204 --N-list 4,6,8

A config file (``--config run.cfg``) holds flat ``key = value`` lines using
the long flag names without dashes (``U = 1.3``, ``h1 = 0.13,0,0``,
``N-list = 4,6,8``).  Flags given on the command line win.  U and the field
components are in units of the hopping t.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import bae, ed, thermo
from .model import CriticalLineError, ModelParams, derive_constants

log = logging.getLogger(__name__)

SCHEMA = 1
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
COMMANDS = ("classify", "solve", "bulk", "surface", "sweep", "scaling")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    U: float = 1.3
    h1: tuple[float, float, float] = (0.0, 0.0, 0.3)
    hN: tuple[float, float, float] = (0.0, 0.0, 0.3)
    N: int | None = None
    N_list: list[int] = field(default_factory=list)
    beta_grid: tuple[float, float, float] | None = None
    out: str | None = None
    format: str = "csv"
    jobs: int = 1
    tol: float = 1e-12
    timestamp: bool = True
    surface_form: str = "derived"
    data: str | None = None

    def params(self) -> ModelParams:
        return ModelParams(self.U, self.h1, self.hN)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("timestamp")
        return d


# ---------------------------------------------------------------------------
# parsing


def _vec(text: str) -> tuple[float, float, float]:
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if len(parts) != 3:
        raise InputError(f"expected a 3-vector x,y,z, got {text!r}")
    return tuple(float(p) for p in parts)


def _int_list(text: str) -> list[int]:
    return [int(p) for p in str(text).replace(" ", "").split(",") if p]


def _grid(text: str) -> tuple[float, float, float]:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise InputError(f"expected lo:hi:step, got {text!r}")
    lo, hi, step = (float(p) for p in parts)
    if step <= 0 or hi < lo:
        raise InputError(f"bad grid {text!r}")
    return lo, hi, step


def grid_values(grid: tuple[float, float, float]) -> list[float]:
    lo, hi, step = grid
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(n)]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hubbard-surface",
        description="Open Hubbard chain with boundary fields: regions, Bethe roots, bulk and surface energies, ED scaling.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat key = value file; flags override it")
    ap.add_argument("--U", type=float, help="on-site repulsion (units of t)")
    ap.add_argument("--h1", help="left boundary field x,y,z")
    ap.add_argument("--hN", help="right boundary field x,y,z")
    ap.add_argument("--N", type=int, help="chain length (even)")
    ap.add_argument("--N-list", dest="N_list", help="comma-separated chain lengths")
    ap.add_argument("--beta-grid", dest="beta_grid", help="lo:hi:step grid for |hN|")
    ap.add_argument("--out", help="output path (default stdout)")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--jobs", type=int, help="worker processes for sweeps")
    ap.add_argument("--tol", type=float, help="Bethe-equation residual tolerance")
    ap.add_argument("--surface-form", dest="surface_form", choices=("derived", "printed"))
    ap.add_argument("--data", help="scaling: read N,delta_e pairs from this CSV instead of running ED")
    ap.add_argument("--no-timestamp", dest="no_timestamp", action="store_true", help="omit the timestamp header line")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


_CONVERT = {
    "U": float,
    "h1": _vec,
    "hN": _vec,
    "N": int,
    "N_list": _int_list,
    "beta_grid": _grid,
    "out": str,
    "format": str,
    "jobs": int,
    "tol": float,
    "surface_form": str,
    "data": str,
}


def _read_config(path: str) -> dict:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    with open(path) as fh:
        cp.read_string("[run]\n" + fh.read())
    out = {}
    for key, val in cp["run"].items():
        key = key.replace("-", "_")
        if key not in _CONVERT:
            raise InputError(f"unknown config key {key!r}")
        out[key] = _CONVERT[key](val)
    return out


def resolve_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = _read_config(ns.config) if ns.config else {}
    for key, conv in _CONVERT.items():
        raw = getattr(ns, key, None)
        if raw is not None:
            values[key] = conv(raw) if isinstance(raw, str) and conv is not str else raw
    cfg = RunConfig(command=ns.command, **values)
    cfg.timestamp = not ns.no_timestamp
    if cfg.N is not None and cfg.N not in cfg.N_list and not cfg.N_list:
        cfg.N_list = [cfg.N]
    if cfg.jobs < 1:
        raise InputError("--jobs must be >= 1")
    for n in cfg.N_list:
        if n < 2 or n % 2:
            raise InputError(f"chain lengths must be even and >= 2, got {n}")
    return cfg


# ---------------------------------------------------------------------------
# output


def _header(cfg: RunConfig) -> list[str]:
    lines = [f"# schema={SCHEMA}"]
    if cfg.timestamp:
        lines.append(f"# generated={datetime.now(timezone.utc).isoformat(timespec='seconds')}")
    lines.append("# config=" + json.dumps(cfg.to_dict(), sort_keys=True))
    return lines


def render(cfg: RunConfig, rows: list[dict], extra: dict | None = None) -> str:
    if cfg.format == "json":
        doc = {"schema": SCHEMA, "config": cfg.to_dict(), "rows": rows}
        if cfg.timestamp:
            doc["generated"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write("\n".join(_header(cfg)) + "\n")
    if extra:
        for key, val in extra.items():
            buf.write(f"# {key}=" + json.dumps(val, sort_keys=True) + "\n")
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(v) for k, v in r.items()})
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_classify(cfg: RunConfig) -> str:
    dc = derive_constants(cfg.params())
    strings = [{"kind": s.kind, "side": s.side, "value": s.value} for s in dc.strings.strings]
    row = {
        "U": dc.U,
        "alpha": dc.alpha,
        "beta": dc.beta,
        "h0": dc.h0,
        "c": dc.c,
        "region": str(dc.region),
        "left": dc.left_class.value,
        "right": dc.right_class.value,
        "strings": json.dumps(strings),
    }
    return render(cfg, [row])


def cmd_solve(cfg: RunConfig) -> str:
    if not cfg.N_list:
        raise InputError("solve needs --N or --N-list")
    dc = derive_constants(cfg.params())
    opts = bae.SolverOptions(tol=cfg.tol)
    sols = [bae.solve(dc, N, opts) for N in cfg.N_list]
    if cfg.format == "json":
        doc = {"schema": SCHEMA, "config": cfg.to_dict(), "solutions": [json.loads(s.to_json()) for s in sols]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    rows = [
        {"N": s.roots.N, "region": s.region, "pattern": s.pattern, "E_hom": s.E_hom, "residual": s.residual_norm, "iterations": s.iterations}
        for s in sols
    ]
    return render(cfg, rows)


def cmd_bulk(cfg: RunConfig) -> str:
    row = {
        "U": cfg.U,
        "e_inf": thermo.bulk_energy_density(cfg.U, "quad"),
        "e_inf_kspace": thermo.bulk_energy_density(cfg.U, "kspace"),
    }
    return render(cfg, [row])


def _surface_point(args):
    U, h1, hN, beta, form = args
    n = float(np.linalg.norm(hN))
    hN = tuple(beta * np.asarray(hN) / n) if beta is not None else hN
    try:
        dc = derive_constants(ModelParams(U, h1, hN))
        res = thermo.surface_energy(dc, thermo.SurfaceForm(form))
        row = thermo.surface_energy_rows([res])[0]
        row["status"] = "ok"
    except (thermo.QuadratureError, CriticalLineError, ValueError) as exc:
        log.warning("beta=%s: %s", beta, exc)
        row = {"U": U, "alpha": float(np.linalg.norm(h1)), "beta": float(np.linalg.norm(hN)), "region": ""}
        row.update({"e_b": float("nan"), **{f"term_{i}": float("nan") for i in range(1, 6)}, "quad_error": float("nan")})
        row["status"] = f"failed: {exc}"
    return row


def _pool_map(fn, items, jobs):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def cmd_surface(cfg: RunConfig) -> str:
    betas = grid_values(cfg.beta_grid) if cfg.beta_grid else [None]
    items = [(cfg.U, cfg.h1, cfg.hN, b, cfg.surface_form) for b in betas]
    rows = _pool_map(_surface_point, items, cfg.jobs)
    if cfg.N_list:
        # overlay a Richardson estimate from the two largest chain lengths
        e_inf = thermo.bulk_energy_density(cfg.U)
        n1, n2 = sorted(cfg.N_list)[-2:] if len(cfg.N_list) > 1 else (None, cfg.N_list[0])
        for row in rows:
            try:
                dc = derive_constants(ModelParams.parallel(cfg.U, row["alpha"], row["beta"]))
                v2 = bae.solve(dc, n2).E_hom - n2 * e_inf
                if n1 is None:
                    row["e_b_bae"] = v2
                else:
                    v1 = bae.solve(dc, n1).E_hom - n1 * e_inf
                    row["e_b_bae"] = (n2 * v2 - n1 * v1) / (n2 - n1)
            except (bae.BaeConvergenceError, CriticalLineError, ValueError) as exc:
                log.warning("finite-N overlay failed at beta=%s: %s", row["beta"], exc)
                row["e_b_bae"] = float("nan")
    return render(cfg, rows)


def _sweep_point(args):
    U, h1, hN, N, tol = args
    dc = derive_constants(ModelParams(U, h1, hN))
    s = bae.solve(dc, N, bae.SolverOptions(tol=tol))
    return s


def cmd_sweep(cfg: RunConfig) -> str:
    if not cfg.N_list:
        raise InputError("sweep needs --N-list")
    e_inf = thermo.bulk_energy_density(cfg.U)
    dc = derive_constants(cfg.params())
    e_b = thermo.surface_energy(dc).e_b
    sols = _pool_map(_sweep_point, [(cfg.U, cfg.h1, cfg.hN, N, cfg.tol) for N in cfg.N_list], cfg.jobs)
    rows = []
    for N, s in zip(cfg.N_list, sols):
        fs = s.E_hom - N * e_inf
        rows.append({"N": N, "region": s.region, "E_hom": s.E_hom, "finite_size_e_b": fs, "e_b": e_b, "difference": fs - e_b})
    return render(cfg, rows)


def _read_scaling_data(path: str) -> list[tuple[float, float]]:
    pts = []
    with open(path) as fh:
        for row in csv.DictReader(line for line in fh if not line.startswith("#")):
            pts.append((float(row["N"]), float(row["delta_e"])))
    return pts


def cmd_scaling(cfg: RunConfig) -> str:
    if cfg.data:
        pts = _read_scaling_data(cfg.data)
        rows = [{"N": int(n), "delta_e": d} for n, d in pts]
    else:
        if not cfg.N_list:
            raise InputError("scaling needs --N-list or --data")
        for n in cfg.N_list:
            if n > ed.MAX_SITES:
                raise InputError(f"N={n} exceeds the ED limit of {ed.MAX_SITES} sites")
        params = cfg.params()
        results = _pool_map(_delta_point, [(params, N) for N in cfg.N_list], cfg.jobs)
        rows = [{"N": r.N, "E": r.E, "E_hom": r.E_hom, "delta_e": r.delta_e} for r in results]
        pts = [(r.N, r.delta_e) for r in results]
    if all(d < 1e-9 for _, d in pts):
        raise NumericalFailure("all delta_e below 1e-9 (parallel fields?); a power-law fit is meaningless")
    fit = ed.fit_power_law(pts)
    return render(cfg, rows, {"fit": {"gamma": fit.gamma, "tau": fit.tau, "rms": fit.rms_log_residual}})


def _delta_point(args):
    params, N = args
    return ed.delta_e(params, N)


class NumericalFailure(RuntimeError):
    pass


_DISPATCH = {
    "classify": cmd_classify,
    "solve": cmd_solve,
    "bulk": cmd_bulk,
    "surface": cmd_surface,
    "sweep": cmd_sweep,
    "scaling": cmd_scaling,
}


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
    except SystemExit as exc:  # argparse
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    args = sys.argv[1:] if argv is None else argv
    logging.basicConfig(level=logging.INFO if {"-v", "--verbose"} & set(args) else logging.WARNING)
    try:
        text = _DISPATCH[cfg.command](cfg)
    except CriticalLineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (bae.BaeConvergenceError, thermo.QuadratureError, NumericalFailure, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(cfg, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
