"""Batch experiment runner: presets, config parsing, CSV/JSON emission.

Configs are JSON files (nested key-value); unknown keys are rejected so
typos fail loudly. Every CSV starts with a comment line carrying the hash
of the resolved config, and reruns with the same config and seed are
byte-identical. Environment variables with the CTRLCOST_ prefix override
the corresponding flags (CTRLCOST_OUT, CTRLCOST_SEED, CTRLCOST_THREADS).

Subcommands: run, validate, list-presets.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .ramps import bob_pulse, ramp_from_dict
from .twolevel import integrated_cost, instantaneous_eigenstates
from .landau_zener import (LzConfig, lz_cd, lz_lcd, lz_bob,
                           lz_ground_state, qsl_time, optimize_bob_kicks,
                           cost_scan, find_cd_lcd_crossover, run_protocol,
                           DEFAULT_GQ)
from .oscillator import (FrequencySchedule, qstar_series, oscillator_cost,
                         cd_validity_edge, cd_is_valid, lcd_is_valid,
                         OscillatorError)
from .jaynes_cummings import (JcConfig, block_run, ensemble_run, jc_cost_scan,
                              find_jc_crossover, coherent_weights,
                              jc_cd_block, jc_lcd_block, TAIL_TOL)
from .oc import OcProblem, optimize, refine_result

ENV_PREFIX = "CTRLCOST_"

_MODEL_KEYS = {
    "lz": {"delta", "g0", "g1", "g_q"},
    "oscillator": {"omega0", "omega1", "beta"},
    "jc": {"omega", "delta", "g0", "g1", "n_cut", "alpha"},
    "oc": {"delta", "g0", "g1", "n_max", "gamma", "budget", "q_target", "steps",
           "restarts", "polish_budget"},
}
_TOP_KEYS = {"model", "preset", "protocols", "tau", "params", "seed", "out",
             "trajectory_steps", "scan_points", "description", "mode", "ramp"}


@dataclass
class ExperimentConfig:
    model: str
    protocols: list = field(default_factory=list)
    tau: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    seed: int = 0
    out: str = "out"
    trajectory_steps: int = 20_000
    scan_points: int = 25
    description: str = ""
    preset: str = ""
    mode: str = ""          # "" (auto), "trajectory" or "scan"
    ramp: dict | None = None  # {kind, parameters}, lz trajectory runs only

    def canonical(self) -> str:
        d = {k: getattr(self, k) for k in ("model", "protocols", "tau", "params",
                                           "seed", "trajectory_steps",
                                           "scan_points", "mode", "ramp")}
        return json.dumps(d, sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


def parse_config(raw: dict) -> ExperimentConfig:
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "preset" in raw:
        if raw["preset"] not in PRESETS:
            raise ValueError(f"unknown preset {raw['preset']!r}")
        base = dict(PRESETS[raw["preset"]])
        for k, v in raw.items():
            if k == "params":
                base["params"] = {**base.get("params", {}), **v}
            elif k != "preset":
                base[k] = v
        base["preset"] = raw["preset"]
        raw = base
    if "model" not in raw:
        raise ValueError("config needs a 'model' (or a 'preset')")
    model = raw["model"]
    if model not in ("lz", "oscillator", "jc", "oc"):
        raise ValueError(f"unknown model {model!r}")
    params = dict(raw.get("params", {}))
    bad = set(params) - _MODEL_KEYS[model]
    if bad:
        raise ValueError(f"unknown params for model {model!r}: {sorted(bad)}")
    tau = raw.get("tau", [])
    if isinstance(tau, dict):
        extra = set(tau) - {"min", "max", "num", "log"}
        if extra:
            raise ValueError(f"unknown tau grid keys: {sorted(extra)}")
        if tau.get("log", True):
            tau = list(np.geomspace(tau["min"], tau["max"], tau["num"]))
        else:
            tau = list(np.linspace(tau["min"], tau["max"], tau["num"]))
    mode = raw.get("mode", "")
    if mode not in ("", "trajectory", "scan"):
        raise ValueError(f"unknown mode {mode!r}")
    ramp = raw.get("ramp")
    if ramp is not None:
        if model != "lz":
            raise ValueError("a custom ramp is only supported for the lz model")
        ramp_from_dict(ramp)  # fail early on malformed descriptions
    return ExperimentConfig(model=model,
                            protocols=list(raw.get("protocols", [])),
                            tau=[float(t) for t in tau],
                            params=params,
                            seed=int(raw.get("seed", 0)),
                            out=raw.get("out", "out"),
                            trajectory_steps=int(raw.get("trajectory_steps", 20_000)),
                            scan_points=int(raw.get("scan_points", 25)),
                            description=raw.get("description", ""),
                            preset=raw.get("preset", ""),
                            mode=mode, ramp=ramp)


# ---------------------------------------------------------------------------
# presets (figure-style scenario bundles)

PRESETS = {
    "fig1": {
        "model": "lz",
        "description": "LZ trajectories: fidelity, cost rate and spectra at "
                       "tau = tau_QSL and tau = 0.1",
        "protocols": ["bare", "cd", "lcd", "bob"],
        "tau": [],  # filled with [tau_QSL, 0.1] at run time
    },
    "fig3": {
        "model": "lz",
        "description": "LZ cost vs duration for CD/LCD (quintic), blended-ramp "
                       "CD, plus the BOB point at tau_QSL",
        "protocols": ["cd", "lcd", "cd-blend"],
        "tau": {"min": 0.1, "max": 100.0, "num": 25, "log": True},
    },
    "fig3-oc": {
        "model": "oc",
        "description": "Fourier optimal control at tau = 25, 50, 100",
        "tau": [25.0, 50.0, 100.0],
    },
    "fig4": {
        "model": "oscillator",
        "description": "Oscillator Q* curves at tau = 1.6 and 2.5 plus cost "
                       "scan and CD validity edge",
        "protocols": ["bare", "cd", "lcd", "ie"],
        "tau": {"min": 1.55, "max": 10.0, "num": 20, "log": True},
    },
    "fig5": {
        "model": "jc",
        "description": "JC block fidelities at tau = 10, n = 0 cost scan and "
                       "coherent alpha = 2 ensemble",
        "protocols": ["bare", "cd", "lcd"],
        "tau": {"min": 5.0, "max": 40.0, "num": 17, "log": True},
        "params": {"alpha": 2.0},
    },
    "smoke": {
        "model": "lz",
        "description": "Tiny, fast scenario used for determinism checks",
        "protocols": ["cd", "lcd"],
        "tau": [1.0, 5.0],
        "trajectory_steps": 2000,
        "scan_points": 5,
    },
}


# ---------------------------------------------------------------------------
# output helpers

def _fmt(x) -> str:
    return f"{float(x):.17g}"


class CsvWriter:
    def __init__(self, path: Path, columns, config_hash: str):
        self.path = path
        self.columns = columns
        self.rows = []
        self.config_hash = config_hash

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError("row length mismatch")
        self.rows.append(row)

    def write(self):
        with open(self.path, "w", encoding="utf-8") as fh:
            fh.write(f"# config_hash={self.config_hash} ctrlcost={__version__}\n")
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(_fmt(x) for x in row) + "\n")


def _downsample(n: int, limit: int = 4001) -> int:
    return max(1, int(np.ceil(n / limit)))


# ---------------------------------------------------------------------------
# model runners

def _lz_config(cfg: ExperimentConfig, tau: float) -> LzConfig:
    p = cfg.params
    ramp = None
    if cfg.ramp is not None:
        ramp = ramp_from_dict(cfg.ramp)
        if abs(ramp.duration - tau) > 1e-12:
            raise ValueError(
                f"custom ramp duration {ramp.duration} differs from tau={tau}")
    return LzConfig(tau=tau, delta=p.get("delta", 0.1),
                    g0=p.get("g0", -0.2), g1=p.get("g1", 0.2), ramp=ramp)


def _run_lz(cfg: ExperimentConfig, outdir: Path, summary: dict, threads: int):
    h = cfg.digest()
    p0 = cfg.params
    delta = p0.get("delta", 0.1)
    psi_i = lz_ground_state(delta, p0.get("g0", -0.2))
    psi_t = lz_ground_state(delta, p0.get("g1", 0.2))
    tqsl = qsl_time(delta, psi_i, psi_t)
    summary["tau_qsl"] = tqsl
    g_q = cfg.params.get("g_q", DEFAULT_GQ)

    taus = cfg.tau or [tqsl, 0.1]
    trajectory_protocols = [p for p in cfg.protocols if p != "cd-blend"]
    scan_protocols = cfg.protocols
    trajectory_mode = (cfg.mode == "trajectory" or cfg.preset == "fig1"
                       or (not cfg.tau and cfg.mode != "scan"))
    if cfg.ramp is not None and not trajectory_mode:
        raise ValueError("a custom ramp requires mode='trajectory' "
                         "(scans rebuild the ramp family per duration)")

    if trajectory_mode:
        # trajectory preset: fidelity / cost-rate / spectra CSVs
        fid = CsvWriter(outdir / "fidelity.csv",
                        ["tau", "t"] + [f"F_{p}" for p in trajectory_protocols], h)
        rate = CsvWriter(outdir / "cost_rate.csv",
                         ["tau", "t"] + [f"dC_{p}" for p in trajectory_protocols], h)
        spectra_protocols = [p for p in ("cd", "lcd") if p in trajectory_protocols]
        spec = CsvWriter(outdir / "spectra.csv",
                         ["tau", "t"] + [f"E_{side}_{p}" for p in spectra_protocols
                                         for side in ("minus", "plus")], h)
        plain = LzConfig(tau=tqsl, delta=delta, g0=p0.get("g0", -0.2),
                         g1=p0.get("g1", 0.2))
        kicks = optimize_bob_kicks(plain, g_q) if "bob" in trajectory_protocols \
            else None
        if kicks is not None:
            summary["bob"] = {"phi1": kicks.phi1, "phi2": kicks.phi2,
                              "fidelity": kicks.fidelity}
        for tau in taus:
            lzc = _lz_config(cfg, tau)
            trajs = {}
            for proto in trajectory_protocols:
                if proto == "bob":
                    if abs(tau - tqsl) > 1e-9:
                        continue  # BOB is defined at the speed limit
                    traj, rep = run_protocol(lzc, "bob", steps=cfg.trajectory_steps,
                                             g_q=g_q, bob_kicks=kicks)
                else:
                    traj, rep = run_protocol(lzc, proto, steps=cfg.trajectory_steps)
                trajs[proto] = traj
                summary.setdefault("runs", []).append(
                    {"model": "lz", "protocol": proto, "tau": tau,
                     "final_fidelity": rep.final_fidelity,
                     "integrated_cost": rep.integrated_cost})
            t = next(iter(trajs.values())).times
            stride = _downsample(len(t))
            builders = {"cd": lz_cd, "lcd": lz_lcd}
            scheds = [builders[p](lzc) for p in spectra_protocols]
            for i in range(0, len(t), stride):
                fid.add(tau, t[i], *[trajs[p].fidelity[i] if p in trajs else np.nan
                                     for p in trajectory_protocols])
                rate.add(tau, t[i], *[trajs[p].cost_rate[i] if p in trajs else np.nan
                                      for p in trajectory_protocols])
                energies = []
                for sched in scheds:
                    _, _, em, ep = instantaneous_eigenstates(sched, t[i])
                    energies += [em, ep]
                spec.add(tau, t[i], *energies)
        for w in (fid, rate, spec):
            w.write()
        return

    # scan preset
    base = LzConfig(tau=taus[0], delta=delta, g0=p0.get("g0", -0.2),
                    g1=p0.get("g1", 0.2))
    scan = cost_scan(base, taus, scan_protocols, threads=threads)
    w = CsvWriter(outdir / "cost_scan.csv",
                  ["tau"] + [f"C_{p}" for p in scan_protocols], h)
    for i in range(len(taus)):
        w.add(taus[i], *[scan[p][i] for p in scan_protocols])
    w.write()
    if {"cd", "lcd"} <= set(scan_protocols):
        summary["crossover_cd_lcd"] = find_cd_lcd_crossover(base, taus)
    at_qsl = replace(base, tau=tqsl, ramp=None)
    kicks = optimize_bob_kicks(at_qsl, g_q)
    sched = lz_bob(at_qsl, bob_pulse(g_q, tqsl, (kicks.phi1, kicks.phi2)))
    summary["bob"] = {"tau": tqsl, "fidelity": kicks.fidelity,
                      "cost": integrated_cost(sched)}


def _run_oscillator(cfg: ExperimentConfig, outdir: Path, summary: dict, threads: int):
    h = cfg.digest()
    p = cfg.params
    w0, w1, beta = p.get("omega0", 1.0), p.get("omega1", 10.0), p.get("beta", 3.0)
    edge = cd_validity_edge(w0, w1)
    summary["cd_validity_edge"] = edge
    protocols = cfg.protocols or ["bare", "cd", "lcd", "ie"]

    for tau in (1.6, 2.5):
        sched = FrequencySchedule.quintic(w0, w1, tau)
        w = CsvWriter(outdir / f"qstar_tau{tau:g}.csv",
                      ["t"] + [f"qstar_{p_}" for p_ in protocols], h)
        series = {}
        for proto in protocols:
            try:
                t, q = qstar_series(sched, proto)
                series[proto] = (t, q)
            except OscillatorError as err:
                summary.setdefault("invalid", []).append(
                    {"model": "oscillator", "protocol": proto, "tau": tau,
                     "reason": str(err)})
        if not series:
            continue
        t = next(iter(series.values()))[0]
        stride = _downsample(len(t))
        for i in range(0, len(t), stride):
            w.add(t[i], *[series[p_][1][i] if p_ in series else np.nan
                          for p_ in protocols])
        w.write()
        for proto, (_, q) in series.items():
            summary.setdefault("qstar_end", []).append(
                {"tau": tau, "protocol": proto, "qstar_final": float(q[-1])})

    taus = cfg.tau or list(np.geomspace(max(1.05 * edge, 1.55), 10.0, cfg.scan_points))
    cost_protocols = [p_ for p_ in protocols if p_ != "bare"]
    w = CsvWriter(outdir / "cost_scan.csv",
                  ["tau"] + [f"C_{p_}" for p_ in cost_protocols], h)

    def cell(args):
        tau, proto = args
        sched = FrequencySchedule.quintic(w0, w1, tau)
        try:
            return oscillator_cost(sched, proto, beta), None
        except OscillatorError as err:
            return np.nan, str(err)

    cells = [(tau, proto) for tau in taus for proto in cost_protocols]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(cell, cells))
    else:
        vals = [cell(c) for c in cells]
    k = 0
    for tau in taus:
        row = []
        for proto in cost_protocols:
            value, reason = vals[k]
            row.append(value)
            if reason is not None:
                summary.setdefault("invalid", []).append(
                    {"model": "oscillator", "protocol": proto, "tau": tau,
                     "reason": reason})
            k += 1
        w.add(tau, *row)
    w.write()


def _run_jc(cfg: ExperimentConfig, outdir: Path, summary: dict, threads: int):
    h = cfg.digest()
    p = cfg.params
    jc = JcConfig(tau=10.0, omega=p.get("omega", 1.0), delta=p.get("delta", 0.1),
                  g0=p.get("g0", 0.0), g1=p.get("g1", 0.2),
                  n_cut=int(p.get("n_cut", 40)), alpha=p.get("alpha", 2.0))
    protocols = cfg.protocols or ["bare", "cd", "lcd"]

    # block fidelity curves at tau = 10
    w = CsvWriter(outdir / "fidelity_n0.csv",
                  ["t"] + [f"F_{p_}" for p_ in protocols], h)
    curves = {}
    for proto in protocols:
        traj, ffin, cost = block_run(jc, proto, n=0, steps=cfg.trajectory_steps)
        curves[proto] = traj
        summary.setdefault("runs", []).append(
            {"model": "jc", "protocol": proto, "tau": jc.tau, "n": 0,
             "final_fidelity": ffin, "integrated_cost": cost})
    t = next(iter(curves.values())).times
    stride = _downsample(len(t))
    for i in range(0, len(t), stride):
        w.add(t[i], *[curves[p_].fidelity[i] for p_ in protocols])
    w.write()

    # coherent ensemble at tau = 10
    ens_protocols = [p_ for p_ in protocols if p_ != "bare"]
    w = CsvWriter(outdir / "fidelity_coherent.csv",
                  ["t"] + [f"F_{p_}" for p_ in ens_protocols], h)
    ens_curves = {}
    for proto in ens_protocols:
        res = ensemble_run(jc, proto, steps=cfg.trajectory_steps)
        ens_curves[proto] = res
        summary.setdefault("runs", []).append(
            {"model": "jc", "protocol": proto, "tau": jc.tau,
             "alpha": jc.alpha, "ensemble_final_fidelity": float(res.fidelity[-1]),
             "ensemble_cost": res.cost})
    if ens_curves:
        t = next(iter(ens_curves.values())).times
        stride = _downsample(len(t))
        for i in range(0, len(t), stride):
            w.add(t[i], *[ens_curves[p_].fidelity[i] for p_ in ens_protocols])
        w.write()

    # cost scans: vacuum block and coherent ensemble
    taus = cfg.tau or list(np.geomspace(5.0, 40.0, cfg.scan_points))
    scan = jc_cost_scan(jc, taus, n=0)
    w = CsvWriter(outdir / "cost_scan_n0.csv", ["tau", "C_cd", "C_lcd"], h)
    for i in range(len(taus)):
        w.add(taus[i], scan["cd"][i], scan["lcd"][i])
    w.write()
    summary["crossover_n0"] = find_jc_crossover(jc)

    weights = coherent_weights(jc.alpha, jc.n_cut)
    w = CsvWriter(outdir / "cost_scan_coherent.csv", ["tau", "C_cd", "C_lcd"], h)
    builders = {"cd": jc_cd_block, "lcd": jc_lcd_block}
    for tau in taus:
        jc_t = replace(jc, tau=float(tau))
        row = [tau]
        for proto in ("cd", "lcd"):
            row.append(sum(weights[n] * integrated_cost(builders[proto](jc_t, n).schedule)
                           for n in range(jc.n_cut + 1)))
        w.add(*row)
    w.write()


def _run_oc(cfg: ExperimentConfig, outdir: Path, summary: dict, threads: int):
    h = cfg.digest()
    p = cfg.params
    base = LzConfig(tau=25.0, delta=p.get("delta", 0.1),
                    g0=p.get("g0", -0.2), g1=p.get("g1", 0.2))
    taus = cfg.tau or [25.0, 50.0, 100.0]
    w = CsvWriter(outdir / "oc_results.csv", ["tau", "q", "C", "nfev", "success"], h)
    records = []
    for tau in taus:
        prob = OcProblem(config=replace(base, tau=float(tau)),
                         n_max=int(p.get("n_max", 30)),
                         gamma=p.get("gamma", 5e-3),
                         budget=int(p.get("budget", 40_000)),
                         seed=cfg.seed,
                         steps=int(p.get("steps", 4096)),
                         q_target=p.get("q_target", 1e-9),
                         restarts=int(p.get("restarts", 0)),
                         polish_budget=int(p.get("polish_budget", 4_000)))
        res = refine_result(prob, optimize(prob))
        records.append(res.to_record())
        w.add(tau, res.q, res.cost, res.nfev, 1.0 if res.success else 0.0)
        tr = CsvWriter(outdir / f"oc_trace_tau{tau:g}.csv",
                       ["nfev", "q", "C", "objective"], h)
        for entry in res.trace:
            tr.add(entry["nfev"], entry["q"], entry["C"], entry["objective"])
        tr.write()
    w.write()
    summary["oc"] = records
    with open(outdir / "oc_results.json", "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=1, sort_keys=True)


_RUNNERS = {"lz": _run_lz, "oscillator": _run_oscillator, "jc": _run_jc,
            "oc": _run_oc}


def run(cfg: ExperimentConfig, threads: int = 1) -> Path:
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = {"config_hash": cfg.digest(), "model": cfg.model,
               "preset": cfg.preset, "seed": cfg.seed}
    _RUNNERS[cfg.model](cfg, outdir, summary, threads)
    with open(outdir / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
    return outdir


# ---------------------------------------------------------------------------
# validation

def validate(cfg: ExperimentConfig) -> dict:
    """Dry-run schema and physics-validity checks; report only."""
    report = {"model": cfg.model, "checks": [], "valid": True}

    def check(name, ok, detail=""):
        report["checks"].append({"check": name, "ok": bool(ok), "detail": detail})
        if not ok:
            report["valid"] = False

    if cfg.model == "oscillator":
        p = cfg.params
        w0, w1 = p.get("omega0", 1.0), p.get("omega1", 10.0)
        for tau in cfg.tau or [1.6, 2.5]:
            sched = FrequencySchedule.quintic(w0, w1, tau)
            check(f"cd_validity tau={tau:g}", cd_is_valid(sched),
                  "trap inversion: no CD protocol below the validity edge")
            check(f"lcd_validity tau={tau:g}", lcd_is_valid(sched),
                  "effective LCD frequency must stay positive")
    elif cfg.model == "oc":
        base = _lz_config(ExperimentConfig(model="lz", params={
            k: v for k, v in cfg.params.items() if k in ("delta", "g0", "g1")}), 1.0)
        tqsl = qsl_time(base.delta, lz_ground_state(base.delta, base.g0),
                        lz_ground_state(base.delta, base.g1))
        for tau in cfg.tau or [25.0, 50.0, 100.0]:
            check(f"tau>tau_qsl tau={tau:g}", tau > tqsl,
                  f"Fourier OC applies only above tau_QSL = {tqsl:.4f}")
    elif cfg.model == "jc":
        p = cfg.params
        alpha, n_cut = p.get("alpha", 2.0), int(p.get("n_cut", 40))
        tail = max(0.0, 1.0 - float(coherent_weights(alpha, n_cut).sum()))
        check("cutoff_tail", tail <= TAIL_TOL,
              f"tail mass {tail:.3e} for alpha={alpha}, n_cut={n_cut}")
    elif cfg.model == "lz":
        for tau in cfg.tau or []:
            check(f"tau>0 tau={tau:g}", tau > 0)
    return report


# ---------------------------------------------------------------------------
# entry point

def _env_default(name: str, fallback):
    return os.environ.get(ENV_PREFIX + name, fallback)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ctrlcost",
        description="Batch runner for adiabatic control-protocol experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a preset or a config file")
    p_run.add_argument("preset", nargs="?", help="preset name (see list-presets)")
    p_run.add_argument("--config", help="JSON config file")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--threads", type=int, default=None)

    p_val = sub.add_parser("validate", help="schema and physics-validity checks")
    p_val.add_argument("preset", nargs="?")
    p_val.add_argument("--config", help="JSON config file")

    sub.add_parser("list-presets", help="show available presets")

    args = parser.parse_args(argv)

    if args.command == "list-presets":
        for name, preset in PRESETS.items():
            print(f"{name:10s} {preset['description']}")
        return 0

    try:
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        elif args.preset:
            if args.preset not in PRESETS:
                raise ValueError(f"unknown preset {args.preset!r}; "
                                 f"available: {', '.join(PRESETS)}")
            raw = {"preset": args.preset}
        else:
            raise ValueError("give a preset name or --config FILE")
        cfg = parse_config(raw)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    if args.command == "validate":
        report = validate(cfg)
        print(json.dumps(report, indent=1, sort_keys=True))
        return 0

    out = args.out if args.out is not None else _env_default("OUT", None)
    seed = args.seed if args.seed is not None else _env_default("SEED", None)
    threads = args.threads if args.threads is not None else _env_default("THREADS", 1)
    if out is not None:
        cfg.out = out
    elif cfg.preset and cfg.out == "out":
        cfg.out = f"out_{cfg.preset}"
    if seed is not None:
        cfg.seed = int(seed)
    try:
        outdir = run(cfg, threads=max(1, int(threads)))
    except (ValueError, OscillatorError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {outdir}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
