"""Command-line front end.

Every command reads an optional YAML config, applies flag overrides (flags
win), validates the result and writes a table as CSV or JSON.  Outputs
carry the resolved config and package version.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import statistics
import sys
import time

import yaml

from . import __version__
from .errors import ConfigError, DomainError, SpreadFFTError, UnsupportedGreek
from .models import GREEKS, GbmBasketParams, GbmParams, SvParams, VgParams
from .oracles import McConfig, err_grid, err_study, mc_price
from .payoff import EpsilonShift2, EpsilonShiftM
from .pricer import (
    Lattice,
    basket_price_at,
    fd_greek,
    greek_at,
    interpolate_strikes,
    price_at,
    price_panel,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

MODEL_DEFAULTS = {
    "gbm": {"r": 0.1, "T": 1.0, "sigma1": 0.2, "sigma2": 0.1, "rho": 0.5, "delta1": 0.05, "delta2": 0.05},
    "sv": {"r": 0.1, "T": 1.0, "sigma1": 1.0, "sigma2": 0.5, "rho": 0.5, "rho1": -0.5, "rho2": 0.25,
           "v0": 0.04, "kappa": 1.0, "mu": 0.04, "sigma_v": 0.05, "delta1": 0.05, "delta2": 0.05},
    "vg": {"r": 0.1, "T": 1.0, "a_plus": 20.4499, "a_minus": 24.4499, "alpha": 0.4, "lam": 10.0},
}
MODEL_TYPES = {"gbm": GbmParams, "sv": SvParams, "vg": VgParams}

DEFAULTS = {
    "model": "gbm",
    "params": {},
    "lattice": {"N": 256, "u_bar": 40.0, "offset": 0.5},
    "eps": [-3.0, 1.0],
    "spots": [[100.0, 96.0]],
    "strikes": [round(0.4 * k, 10) for k in range(1, 11)],
    "seed": 0,
    "price": {"path": "reanchor", "degree": 8},
    "greeks": {"which": list(GREEKS), "analytic": True, "fd": True, "displacement": 0.01},
    "err_study": {"Ns": [64, 128, 256, 512, 1024], "ubars": [20.0, 40.0, 80.0], "contour": "saddle",
                  "mc_paths": 100000, "mc_steps": 200},
    "bench": {"models": ["gbm", "sv", "vg"], "Ns": [64, 128, 256, 512], "repeats": 5},
    "basket": {"r": 0.1, "T": 1.0, "sigma": [0.2, 0.1, 0.1],
               "corr": [[1.0, 0.5, 0.5], [0.5, 1.0, 0.5], [0.5, 0.5, 1.0]], "delta": None,
               "spot_long": 200.0, "spot_short": [96.0, 96.0], "eps": None, "eps_tilde": None,
               "mc_paths": 0},
}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in (over or {}).items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def load_config(path=None, overrides: dict | None = None) -> dict:
    """Defaults, then the YAML file, then flag overrides."""
    cfg = copy.deepcopy(DEFAULTS)
    if path:
        try:
            with open(path) as fh:
                data = yaml.safe_load(fh) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a mapping")
        cfg = _merge(cfg, data)
    return _merge(cfg, overrides or {})


def build_model(cfg: dict):
    name = cfg["model"]
    if name not in MODEL_TYPES:
        raise ConfigError(f"unknown model {name!r}; expected one of {sorted(MODEL_TYPES)}")
    params = dict(MODEL_DEFAULTS[name])
    params.update(cfg.get("params") or {})
    try:
        return MODEL_TYPES[name](**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {name}: {exc}") from None


def build_lattice(cfg: dict) -> Lattice:
    lat = cfg["lattice"]
    return Lattice(lat["N"], float(lat["u_bar"]), float(lat.get("offset", 0.5)))


def build_eps(cfg: dict, model=None) -> EpsilonShift2:
    e = cfg["eps"]
    eps = EpsilonShift2(float(e[0]), float(e[1]))
    if model is not None:
        model.check_contour(eps.as_array())
    return eps


def _strikes(cfg: dict) -> list:
    ks = cfg.get("strikes") or []
    if not ks:
        raise ConfigError("no strikes")
    ks = [float(k) for k in ks]
    if any(not (k > 0 and math.isfinite(k)) for k in ks):
        raise ConfigError("strikes must be positive")
    return ks


def _spots(cfg: dict) -> list:
    sp = cfg.get("spots") or []
    if not sp:
        raise ConfigError("no spots")
    out = []
    for pair in sp:
        if len(pair) != 2 or min(pair) <= 0:
            raise ConfigError(f"spot pair must be two positive prices, got {pair}")
        out.append((float(pair[0]), float(pair[1])))
    return out


# ---------------------------------------------------------------- commands


def cmd_price(cfg: dict):
    model = build_model(cfg)
    lat = build_lattice(cfg)
    eps = build_eps(cfg, model)
    strikes, spots = _strikes(cfg), _spots(cfg)
    path = cfg["price"]["path"]
    if path not in ("reanchor", "bicubic", "diagonal"):
        raise ConfigError(f"unknown price path {path!r}")

    def run():
        rows = []
        for S10, S20 in spots:
            if path == "diagonal":
                panel = price_panel(model, lat, eps, center=(math.log(S10), math.log(S20)))
                vals = interpolate_strikes(panel, S10, S20, strikes, int(cfg["price"]["degree"]))
                rows += [{"S10": S10, "S20": S20, "K": K, "price": v, "path": "diagonal"}
                         for K, v in zip(strikes, vals)]
                continue
            panel = price_panel(model, lat, eps) if path == "bicubic" else None
            for K in strikes:
                q = price_at(model, S10, S20, K, lat, eps, path=path, panel=panel)
                rows.append({"S10": S10, "S20": S20, "K": K, "price": q.price, "path": q.path})
        return rows

    return run


def cmd_greeks(cfg: dict):
    model = build_model(cfg)
    lat = build_lattice(cfg)
    eps = build_eps(cfg, model)
    g = cfg["greeks"]
    which = list(g["which"])
    for w in which:
        if w not in GREEKS:
            raise ConfigError(f"unknown greek {w!r}")
    if g["analytic"] and not isinstance(model, GbmParams):
        raise UnsupportedGreek(f"no closed-form Greeks for model {model.name!r}; set greeks.analytic: false")
    rel = float(g["displacement"])
    if g["fd"] and not rel > 0:
        raise ConfigError("finite-difference displacement must be positive")
    (S10, S20), K = _spots(cfg)[0], _strikes(cfg)[0]

    def run():
        rows = []
        if g["analytic"]:
            rows.append({"method": "FFT", **{w: greek_at(model, S10, S20, K, lat, eps, w) for w in which}})
        if g["fd"]:
            rows.append({"method": "FD", **{w: fd_greek(model, S10, S20, K, lat, eps, w, rel) for w in which}})
        return rows

    return run


def cmd_err_study(cfg: dict):
    model = build_model(cfg)
    es = cfg["err_study"]
    Ns = [int(n) for n in es["Ns"]]
    ubars = [float(u) for u in es["ubars"]]
    for N in Ns:
        Lattice(N, 1.0)
    if not ubars or any(u <= 0 for u in ubars):
        raise ConfigError("u_bar values must be positive")
    if es["contour"] not in ("saddle", "fixed"):
        raise ConfigError(f"unknown contour policy {es['contour']!r}")
    eps = tuple(build_eps(cfg, model).as_array())
    offset = float(cfg["lattice"].get("offset", 0.5))

    def run():
        bench = None
        if not isinstance(model, GbmParams):
            mc = McConfig(int(es["mc_paths"]), int(es["mc_steps"]), int(cfg["seed"]), antithetic=True)
            bench = [float(mc_price(model, s1, s2, 1.0, mc).price) for s1, s2 in err_grid()]
        res = err_study(model, Ns, ubars, benchmark=bench, contour=es["contour"], eps=eps, offset=offset)
        return [{"model": model.name, **row} for row in res]

    return run


def cmd_bench(cfg: dict):
    b = cfg["bench"]
    models = []
    for name in b["models"]:
        models.append(build_model({**cfg, "model": name, "params": {}}))
    Ns = [int(n) for n in b["Ns"]]
    lats = [Lattice(N, float(cfg["lattice"]["u_bar"]), float(cfg["lattice"].get("offset", 0.5))) for N in Ns]
    k = int(b["repeats"])
    if k < 1:
        raise ConfigError("bench.repeats must be >= 1")
    eps = build_eps(cfg)
    for m in models:
        m.check_contour(eps.as_array())

    def run():
        rows = []
        for lat in lats:
            for m in models:
                times = []
                for _ in range(k):
                    t0 = time.perf_counter()
                    price_panel(m, lat, eps)
                    times.append(time.perf_counter() - t0)
                rows.append({"model": m.name, "N": lat.N, "median_s": statistics.median(times), "repeats": k})
        return rows

    return run


def cmd_basket(cfg: dict):
    b = cfg["basket"]
    model = GbmBasketParams(float(b["r"]), float(b["T"]), tuple(b["sigma"]),
                            tuple(map(tuple, b["corr"])), None if b["delta"] is None else tuple(b["delta"]))
    M = model.n_assets - 1
    short = [float(s) for s in b["spot_short"]]
    if len(short) != M:
        raise ConfigError(f"basket has {M} short assets but {len(short)} short spots")
    eps = None
    if b["eps"] is not None:
        eps = EpsilonShiftM(tuple(b["eps"]), float(b["eps_tilde"]))
    lat = build_lattice(cfg)
    strikes = _strikes(cfg)
    n_mc = int(b["mc_paths"])

    def run():
        rows = []
        mc = None
        if n_mc > 0:
            mc = mc_price(model, float(b["spot_long"]), short, strikes,
                          McConfig(n_mc, seed=int(cfg["seed"]), antithetic=True))
        for i, K in enumerate(strikes):
            row = {"S_long": float(b["spot_long"]), **{f"S_short{m + 1}": s for m, s in enumerate(short)},
                   "K": K, "price": basket_price_at(model, float(b["spot_long"]), short, K, lat, eps).price}
            if mc is not None:
                row["mc_price"] = float(mc.price[i])
                row["mc_std_error"] = float(mc.std_error[i])
            rows.append(row)
        return rows

    return run


COMMANDS = {"price": cmd_price, "greeks": cmd_greeks, "err-study": cmd_err_study,
            "bench": cmd_bench, "basket": cmd_basket}


# ---------------------------------------------------------------- output


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def render(rows: list, cfg: dict, command: str, fmt: str) -> str:
    """CSV with ``#``-prefixed config echo lines, or one JSON document."""
    if fmt == "json":
        return json.dumps({"version": __version__, "command": command, "config": cfg, "rows": rows},
                          indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# spreadfft {__version__} {command}\n")
    buf.write("# config: " + json.dumps(cfg, sort_keys=True) + "\n")
    if rows:
        keys = list(rows[0].keys())
        for r in rows[1:]:
            keys += [k for k in r if k not in keys]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([_fmt(r.get(k, "")) for k in keys])
    return buf.getvalue()


def read_csv_output(text: str) -> list:
    """Parse :func:`render` CSV back into dicts, converting numeric fields."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    out = []
    for r in csv.DictReader(lines):
        row = {}
        for k, v in r.items():
            try:
                row[k] = float(v)
            except ValueError:
                row[k] = v
        out.append(row)
    return out


def _error_record(kind: str, exc: BaseException) -> str:
    return json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config file")
    common.add_argument("--model", choices=sorted(MODEL_TYPES))
    common.add_argument("--N", type=int)
    common.add_argument("--ubar", type=float)
    common.add_argument("--eps1", type=float)
    common.add_argument("--eps2", type=float)
    common.add_argument("--strikes", help="comma-separated strikes")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int)
    p = argparse.ArgumentParser(prog="spreadfft", description="FFT pricing of spread options")
    p.add_argument("--version", action="version", version=f"spreadfft {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def _flag_overrides(ns) -> dict:
    over = {}
    lat, sweep, bench = {}, {}, {}
    if ns.model is not None:
        over["model"] = ns.model
        bench["models"] = [ns.model]
    if ns.N is not None:
        lat["N"] = ns.N
        sweep["Ns"] = bench["Ns"] = [ns.N]
    if ns.ubar is not None:
        lat["u_bar"] = ns.ubar
        sweep["ubars"] = [ns.ubar]
    # on the sweep commands a lattice flag pins the sweep to that one cell
    for key, val in (("lattice", lat), ("err_study", sweep), ("bench", bench)):
        if val:
            over[key] = val
    if ns.eps1 is not None or ns.eps2 is not None:
        over["eps"] = [ns.eps1, ns.eps2]
    if ns.strikes is not None:
        over["strikes"] = [float(s) for s in ns.strikes.split(",") if s.strip()]
    if ns.seed is not None:
        over["seed"] = ns.seed
    return over


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        over = _flag_overrides(ns)
        cfg = load_config(ns.config, over)
        if "eps" in over and None in over["eps"]:
            base = load_config(ns.config)["eps"]
            cfg["eps"] = [b if o is None else o for o, b in zip(over["eps"], base)]
        run = COMMANDS[ns.command](cfg)
    except (DomainError, UnsupportedGreek, ValueError, KeyError, TypeError) as exc:
        print(_error_record("config", exc), file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows = run()
    except (SpreadFFTError, ArithmeticError, ValueError) as exc:
        print(_error_record("numerical", exc), file=sys.stderr)
        return EXIT_NUMERIC
    text = render(rows, cfg, ns.command, ns.format)
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
