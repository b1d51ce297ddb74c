"""Scenario runner: reproducible experiments from TOML configs.

``rdlab run config.toml [--out DIR] [--jobs N] [--filter GLOB] [--strict]``
executes the scenarios in the config, writing per-scenario directories of
CSV/JSON artifacts plus a rendered figure, and a manifest with content
hashes.  ``rdlab describe config.toml`` prints the scenario table without
running anything.

Artifacts are deterministic for a fixed config and package version: no
wall-clock data is embedded (timing goes to a separate timing.json that is
excluded from the manifest hash listing rationale: re-runs must be
byte-comparable).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import fnmatch
import hashlib
import json
import math
import os
import sys
import threading
import time
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import barriers, catalog, nonlinearity, ode_oracle, pde_lab  # noqa: E402
from .errors import ConfigError, InconclusiveError, RdlabError, ScenarioError  # noqa: E402

_PLOT_LOCK = threading.Lock()

KINDS = (
    "ClassifyTerm", "OsgoodDichotomy", "VInfinityCurve", "Thm1Certificate",
    "Thm3Certificate", "StationaryResiduals", "UniversalCollapse",
    "UniquenessProbe", "NonuniquenessWitness", "LongtimeLimit",
)

#: documented per-witness residual grids (the deep exponential towers leave
#: double range quickly)
WITNESS_GRIDS = {
    "ex1_level1": (-5.0, 5.0),
    "ex1_level2": (-2.0, 1.5),
    "ex2": (-50.0, 50.0),
    "ex3": (-50.0, 50.0),
}


# --------------------------------------------------------------------------
# config handling
# --------------------------------------------------------------------------

def load_config(path: str | Path) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        with open(p, "rb") as fh:
            cfg = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config does not parse: {exc}") from exc
    scenarios = cfg.get("scenario", {})
    if not isinstance(scenarios, dict):
        raise ConfigError("[scenario.<id>] tables expected")
    for sid, body in scenarios.items():
        if not isinstance(body, dict) or "kind" not in body:
            raise ConfigError(f"scenario {sid!r} has no kind")
        if body["kind"] not in KINDS:
            raise ConfigError(
                f"scenario {sid!r} has unknown kind {body['kind']!r}")
    return cfg


def _resolve_term(name: str, cfg: dict) -> nonlinearity.ReactionTerm:
    defs = cfg.get("terms", {})
    if name in defs:
        d = dict(defs[name])
        kind = d.pop("kind", None)
        try:
            if kind == "shifted_log_power":
                return nonlinearity.shifted_log_power(
                    d.get("gamma", 1.0), d["p"], d.get("shift", math.e))
            if kind == "linear_minus_power":
                return nonlinearity.linear_minus_power(
                    d.get("V", 0.0), d.get("gamma", 1.0), d["p"])
            if kind == "linear_minus_iterlog":
                return nonlinearity.linear_minus_iterlog(
                    d.get("V", 0.0), d.get("gamma", 1.0), d["m"], d["eps"])
        except KeyError as exc:
            raise ConfigError(f"term {name!r} missing field {exc}") from exc
        raise ConfigError(f"term {name!r} has unknown kind {kind!r}")
    return catalog.get_term(name)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _write_json(path: Path, obj) -> None:
    _write(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _figure(path: Path, draw) -> None:
    with _PLOT_LOCK:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        try:
            draw(ax)
            fig.tight_layout()
            fig.savefig(path, dpi=110)
        finally:
            plt.close(fig)


# --------------------------------------------------------------------------
# scenario handlers; each returns (passed, summary_dict)
# --------------------------------------------------------------------------

def _run_classify(sid, p, cfg, outdir, strict):
    term = _resolve_term(p["term"], cfg)
    R = float(p.get("R", math.inf))
    m = int(p.get("m", 0))
    eps = float(p.get("eps", 1.0))
    env = nonlinearity.envelope(term, R)
    spec = nonlinearity.check_F2(env, m, eps)
    _write(outdir / "report.json",
           spec.to_json_record(p["term"]) + "\n")
    us = [u for (u, _) in spec.probe_log]
    rs = [r for (_, r) in spec.probe_log]

    def draw(ax):
        ax.loglog(us, [max(-r, 1e-300) for r in rs], "o-")
        ax.set_xlabel("u")
        ax.set_ylabel("-F_R(u) / denominator")
        ax.set_title(f"{p['term']}: {spec.verdict.value}")
    _figure(outdir / "figure.png", draw)
    ok = spec.verdict is not nonlinearity.Verdict.Inconclusive or not strict
    return ok, {"verdict": spec.verdict.value}


def _run_osgood(sid, p, cfg, outdir, strict):
    G = catalog.get_G(p["G"])
    u0 = float(p.get("u0", 10.0))
    t = float(p.get("t", 1.0))
    decades = int(p.get("c_decades", 6))
    res = nonlinearity.osgood_test(G, u0)
    cs = [10.0 ** k for k in range(1, decades + 1)]
    dich = ode_oracle.dichotomy(G, t, cs)
    agree = res.convergent == dich.bounded
    _write_json(outdir / "report.json", {
        "schema": 1, "G": p["G"], "u0": u0, "t": t,
        "osgood_convergent": res.convergent,
        "tail_value": res.value,
        "dichotomy_bounded": dich.bounded,
        "dichotomy_limit": dich.limit,
        "agree": agree,
    })
    lines = ["segment,increment"]
    lines += [f"{i},{inc!r}" for i, inc in enumerate(res.increments)]
    _write(outdir / "data.csv", "\n".join(lines) + "\n")

    def draw(ax):
        ax.semilogy(range(len(res.increments)),
                    [max(i, 1e-300) for i in res.increments], "s-")
        ax.set_xlabel("doubling segment")
        ax.set_ylabel("tail increment")
        ax.set_title(f"{p['G']}: {'convergent' if res.convergent else 'divergent'}")
    _figure(outdir / "figure.png", draw)
    return agree, {"convergent": res.convergent, "bounded": dich.bounded}


def _run_vinf(sid, p, cfg, outdir, strict):
    G = catalog.get_G(p["G"])
    if "t_values" in p:
        ts = [float(t) for t in p["t_values"]]
    else:
        ts = list(np.geomspace(float(p.get("t_min", 0.01)),
                               float(p.get("t_max", 10.0)),
                               int(p.get("n", 25))))
    rows = [(t, ode_oracle.v_infinity(G, t)) for t in ts]
    _write(outdir / "data.csv", "t,v_infinity\n"
           + "\n".join(f"{t!r},{v!r}" for t, v in rows) + "\n")
    _write_json(outdir / "report.json",
                {"schema": 1, "G": p["G"], "points": len(rows)})

    def draw(ax):
        ax.loglog([t for t, _ in rows], [v for _, v in rows], "o-")
        ax.set_xlabel("t")
        ax.set_ylabel("v_infinity(t)")
        ax.set_title(f"decay-from-infinity profile: {p['G']}")
    _figure(outdir / "figure.png", draw)
    return True, {"points": len(rows)}


def _barrier_setup(p, cfg, family):
    term = _resolve_term(p["term"], cfg)
    op = catalog.get_operator(p.get("operator", "laplacian"))
    bp = barriers.BarrierParams(
        family, float(p.get("R", 1.0 if family is barriers.BarrierFamily.Thm1Barrier else 2.0)),
        float(p.get("l", 3.0)), float(p.get("K", 0.0)), 0, float(p.get("eps", 1.0)))
    xs, ts = barriers.barrier_grid(bp.R, int(p.get("nx", 201)),
                                   int(p.get("nt", 50)), float(p.get("T", 1.0)))
    return term, op, bp, xs, ts


def _run_thm1(sid, p, cfg, outdir, strict):
    term, op, bp, xs, ts = _barrier_setup(p, cfg, barriers.BarrierFamily.Thm1Barrier)
    K = p.get("K")
    if K is None:
        K = barriers.find_K(bp, op, term, xs, ts)
    rep = barriers.residual_thm1(bp.with_K(float(K)), op, term, xs, ts)
    _write(outdir / "report.json", rep.to_json() + "\n")
    _write(outdir / "data.csv", rep.to_csv())

    def draw(ax):
        ax.plot(xs, rep.residual_values[0], lw=1.2)
        ax.axhline(0.0, color="k", lw=0.7)
        ax.set_xlabel("x")
        ax.set_ylabel("scaled residual")
        ax.set_title(f"universal-bound barrier, R={bp.R:g}, K={float(K):.3g}")
    _figure(outdir / "figure.png", draw)
    return rep.sign_certified, {"K": float(K), "max_residual": rep.max_residual}


def _run_thm3(sid, p, cfg, outdir, strict):
    term, op, bp, xs, ts = _barrier_setup(p, cfg, barriers.BarrierFamily.Thm3Barrier)
    K = p.get("K")
    if K is None:
        K = barriers.find_K(bp, op, term, xs, ts)
    ladder = [bp.R * 2.0 ** j for j in range(int(p.get("ladder_doublings", 3)) + 1)]
    reports = []
    for R in ladder:
        scale = R / bp.R
        reports.append(barriers.residual_thm3(
            bp.with_K(float(K)).with_R(R), op, term, xs * scale, ts))
    ok = all(r.sign_certified for r in reports)
    _write_json(outdir / "report.json", {
        "schema": 1, "K": float(K), "ladder": ladder,
        "max_residuals": [r.max_residual for r in reports],
        "sign_certified": [bool(r.sign_certified) for r in reports],
    })
    _write(outdir / "data.csv", reports[0].to_csv())

    def draw(ax):
        for R, r in zip(ladder, reports):
            ax.plot(xs / bp.R, r.residual_values[-1], lw=1.0, label=f"R={R:g}")
        ax.axhline(0.0, color="k", lw=0.7)
        ax.set_xlabel("x / R")
        ax.set_ylabel("scaled residual")
        ax.legend()
        ax.set_title(f"R-uniform certificate, K={float(K):.3g}")
    _figure(outdir / "figure.png", draw)
    return ok, {"K": float(K)}


def _run_stationary(sid, p, cfg, outdir, strict):
    names = p.get("witnesses", list(catalog.WITNESS_NAMES))
    tol = float(p.get("tolerance", 1e-9))
    results = {}
    profiles = {}
    for name in names:
        w = catalog.get_witness(name)
        lo, hi = p.get("grid", WITNESS_GRIDS.get(name, (-3.0, 3.0)))
        grid = np.linspace(lo, hi, int(p.get("n", 1001)))
        results[name] = barriers.residual_stationary(w, grid)
        prof = []
        for x in grid:
            x = float(x)
            if w.excluded and w.excluded[0] < x < w.excluded[1]:
                continue
            lw = w.LW_eval(x)
            prof.append((x, abs(lw + w.f_eval(x, w.W_eval(x))) / max(1.0, abs(lw))))
        profiles[name] = prof
    ok = all(v <= tol for v in results.values())
    _write_json(outdir / "report.json",
                {"schema": 1, "tolerance": tol, "max_relative_residual": results})
    _write(outdir / "data.csv", "witness,x,relative_residual\n" + "\n".join(
        f"{n},{x!r},{r!r}" for n, prof in sorted(profiles.items()) for x, r in prof) + "\n")

    def draw(ax):
        for n, prof in sorted(profiles.items()):
            ax.semilogy([x for x, _ in prof], [max(r, 1e-18) for _, r in prof],
                        lw=1.0, label=n)
        ax.set_xlabel("x")
        ax.set_ylabel("relative residual")
        ax.legend()
        ax.set_title("stationary identity residuals")
    _figure(outdir / "figure.png", draw)
    return ok, {"max": max(results.values())}


def _run_collapse(sid, p, cfg, outdir, strict):
    term = _resolve_term(p.get("term", "model_log_cubed"), cfg)
    contrast = _resolve_term(p.get("contrast_term", "linear_decay"), cfg)
    op = catalog.get_operator(p.get("operator", "laplacian"))
    amps = [float(a) for a in p.get("amplitudes", [1e2, 1e4, 1e6, 1e8])]
    X = float(p.get("domain", 1.0))
    T = float(p.get("T", 0.1))
    nx = int(p.get("nx", 201))
    n_steps = int(p.get("n_steps", 400))

    vals, lin_vals = [], []
    for A in amps:
        tr = pde_lab.solve_dirichlet(A, op, term, X, T, boundary=(A, A),
                                     nx=nx, n_steps=n_steps, output_times=[T])
        vals.append(tr.probe(0.0, T))
        tr2 = pde_lab.solve_dirichlet(A, op, contrast, X, T, boundary=(A, A),
                                      nx=nx, n_steps=n_steps, output_times=[T])
        lin_vals.append(tr2.probe(0.0, T))
    diffs = [b - a for a, b in zip(vals, vals[1:])]
    shrinks = [a / b for a, b in zip(diffs, diffs[1:]) if b > 0.0]
    lin_ratios = [v / A for v, A in zip(lin_vals, amps)]
    lin_spread = (max(lin_ratios) - min(lin_ratios)) / max(lin_ratios)

    bp = barriers.BarrierParams(barriers.BarrierFamily.Thm1Barrier,
                                float(p.get("R", 1.0)), float(p.get("l", 3.0)),
                                0.0, 0, float(p.get("eps", 1.0)))
    xs, ts = barriers.barrier_grid(bp.R, 201, 10, max(T, 1.0))
    K = barriers.find_K(bp, op, term, xs, ts)
    vinf = ode_oracle.v_infinity(barriers.model_absorption(bp.eps), T)
    log_M = barriers.log_universal_bound(bp.with_K(K), 0.0, T, vinf)
    bounded = all(math.log(v) <= log_M + 1e-2 for v in vals)

    _write_json(outdir / "report.json", {
        "schema": 1, "amplitudes": amps, "probe_values": vals,
        "decade_differences": diffs, "shrink_factors": shrinks,
        "v_infinity_at_T": vinf, "log_barrier_bound": log_M,
        "bounded_by_barrier": bounded,
        "linear_contrast_values": lin_vals,
        "linear_contrast_ratio_spread": lin_spread,
    })
    _write(outdir / "data.csv", "A,u_probe,u_probe_linear\n" + "\n".join(
        f"{A!r},{v!r},{w!r}" for A, v, w in zip(amps, vals, lin_vals)) + "\n")

    def draw(ax):
        ax.semilogx(amps, vals, "o-", label="super-linear absorption")
        ax.axhline(vinf, color="gray", ls="--", label="v_infinity(T)")
        ax.set_xlabel("initial amplitude A")
        ax.set_ylabel("u(0, T)")
        ax.legend()
        ax.set_title("universal collapse of huge data")
    _figure(outdir / "figure.png", draw)
    ok = bounded and all(s >= 5.0 for s in shrinks) and lin_spread <= 0.05
    return ok, {"shrinks": shrinks, "bounded": bounded, "lin_spread": lin_spread}


def _probe_common(sid, p, cfg, outdir, expect):
    term = _resolve_term(p["term"], cfg)
    op = catalog.get_operator(p["operator"])
    ms = [int(m) for m in p.get("m_ladder", [2, 4, 8])]
    ks = [float(k) for k in p.get("k_ladder", [4.0, 16.0, 64.0, 256.0])]
    T = float(p.get("T", 1.0))
    probe = tuple(float(v) for v in p.get("probe", (0.0, 1.0)))
    W_ref = None
    if "witness_ref" in p:
        W_ref = catalog.get_witness(p["witness_ref"]).W_eval
    verdict = pde_lab.uniqueness_probe(op, term, ms, ks, T=T, probe=probe,
                                       W_ref=W_ref,
                                       n_steps=int(p.get("n_steps", 200)))
    oracle = None
    if verdict.kind == "NontrivialWitness":
        try:
            sh = nonlinearity.shift_envelopes(
                term, concave_hint=bool(p.get("concave_hint", True)))
            G_env = sh.G_eval
        except RdlabError:
            # fall back to the term's own x-sup profile (exact for
            # x-independent absorption with f(x, 0) = 0)
            G_env = lambda u: term.evaluator(0.0, u)  # noqa: E731
        oracle = ode_oracle.v_infinity(G_env, verdict.probe[1])
    rec = {
        "schema": 1, "verdict": verdict.kind,
        "value_at_probe": verdict.value_at_probe,
        "ladder_m": ms, "ladder_values": list(verdict.ladder_values),
        "ks_used": list(verdict.ks_used),
        "theta": verdict.theta, "v_infinity_oracle": oracle,
    }
    ok = verdict.kind == expect if expect else True
    if oracle is not None:
        ok = ok and verdict.value_at_probe <= oracle + 1e-2
    _write_json(outdir / "report.json", rec)
    _write(outdir / "data.csv", "m,k_used,probe_value\n" + "\n".join(
        f"{m},{k!r},{v!r}" for m, k, v in
        zip(ms, verdict.ks_used, verdict.ladder_values)) + "\n")

    def draw(ax):
        ax.semilogy(ms, [max(v, 1e-16) for v in verdict.ladder_values], "o-")
        ax.axhline(verdict.theta, color="gray", ls="--", label="theta")
        ax.set_xlabel("annulus scale m")
        ax.set_ylabel("u(probe)")
        ax.legend()
        ax.set_title(f"{verdict.kind}")
    _figure(outdir / "figure.png", draw)
    return ok, {"verdict": verdict.kind, "value": verdict.value_at_probe}


def _run_uniqueness(sid, p, cfg, outdir, strict):
    return _probe_common(sid, p, cfg, outdir, p.get("expect"))


def _run_nonuniqueness(sid, p, cfg, outdir, strict):
    return _probe_common(sid, p, cfg, outdir, "NontrivialWitness")


def _run_longtime(sid, p, cfg, outdir, strict):
    names = p.get("G", ["neg_u_sq", "cubic_roots", "one_minus_u"])
    tol = float(p.get("tolerance", 1e-4))
    rows = []
    for name in names:
        G = catalog.get_G(name)
        c0 = ode_oracle.largest_root(G).c0
        lt = ode_oracle.longtime_limit(G)
        rows.append((name, c0, lt, abs(lt - c0)))
    ok = all(d <= tol for (_, _, _, d) in rows)
    _write_json(outdir / "report.json", {
        "schema": 1, "tolerance": tol,
        "results": [{"G": n, "largest_root": c, "longtime_limit": l,
                     "gap": d} for n, c, l, d in rows],
    })
    _write(outdir / "data.csv", "G,largest_root,longtime_limit,gap\n"
           + "\n".join(f"{n},{c!r},{l!r},{d!r}" for n, c, l, d in rows) + "\n")

    def draw(ax):
        idx = range(len(rows))
        ax.bar([i - 0.15 for i in idx], [c for _, c, _, _ in rows], 0.3,
               label="largest root")
        ax.bar([i + 0.15 for i in idx], [l for _, _, l, _ in rows], 0.3,
               label="long-time limit")
        ax.set_xticks(list(idx), [n for n, _, _, _ in rows], rotation=20)
        ax.legend()
        ax.set_title("long-time limit vs largest root")
    _figure(outdir / "figure.png", draw)
    return ok, {"max_gap": max(d for (_, _, _, d) in rows)}


_HANDLERS = {
    "ClassifyTerm": _run_classify,
    "OsgoodDichotomy": _run_osgood,
    "VInfinityCurve": _run_vinf,
    "Thm1Certificate": _run_thm1,
    "Thm3Certificate": _run_thm3,
    "StationaryResiduals": _run_stationary,
    "UniversalCollapse": _run_collapse,
    "UniquenessProbe": _run_uniqueness,
    "NonuniquenessWitness": _run_nonuniqueness,
    "LongtimeLimit": _run_longtime,
}


# --------------------------------------------------------------------------
# runner
# --------------------------------------------------------------------------

def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _run_one(sid: str, body: dict, cfg: dict, outroot: Path, strict: bool):
    outdir = outroot / sid
    outdir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    try:
        handler = _HANDLERS[body["kind"]]
        ok, summary = handler(sid, body, cfg, outdir, strict)
        status = "pass" if ok else "fail"
    except InconclusiveError as exc:
        status = "fail" if strict else "inconclusive"
        summary = {"error": str(exc)}
    except RdlabError as exc:
        raise ScenarioError(sid, str(exc)) from exc
    return sid, status, summary, time.perf_counter() - t0


def run(config_path: str, out: str | None = None, jobs: int = 1,
        filter_glob: str | None = None, strict: bool = False) -> int:
    cfg = load_config(config_path)
    outroot = Path(out or os.environ.get("RDLAB_OUT", "rdlab_out"))
    outroot.mkdir(parents=True, exist_ok=True)
    scenarios = {
        sid: body for sid, body in cfg.get("scenario", {}).items()
        if filter_glob is None or fnmatch.fnmatch(sid, filter_glob)
    }

    results = {}
    timings = {}
    failures = []
    if jobs <= 1:
        iterator = (_run_one(s, b, cfg, outroot, strict)
                    for s, b in scenarios.items())
        runs = list(iterator)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(_run_one, s, b, cfg, outroot, strict)
                    for s, b in scenarios.items()]
            runs = [f.result() for f in futs]
    for sid, status, summary, dt in runs:
        results[sid] = (status, summary)
        timings[sid] = dt
        line = f"[{status:>12}] {sid}: {json.dumps(summary, sort_keys=True, default=str)}"
        print(line)
        if status == "fail":
            failures.append(sid)

    manifest = {
        "schema": 1,
        "config_sha256": hashlib.sha256(Path(config_path).read_bytes()).hexdigest(),
        "scenarios": {},
    }
    for sid in sorted(results):
        status, summary = results[sid]
        arts = {}
        sdir = outroot / sid
        if sdir.is_dir():
            for f in sorted(sdir.rglob("*")):
                if f.is_file():
                    arts[str(f.relative_to(outroot))] = _sha256(f)
        manifest["scenarios"][sid] = {"status": status, "artifacts": arts}
    _write_json(outroot / "manifest.json", manifest)
    _write_json(outroot / "timing.json",
                {"scenarios": timings, "total": sum(timings.values())})
    return 1 if failures else 0


def describe(config_path: str) -> int:
    cfg = load_config(config_path)
    scenarios = cfg.get("scenario", {})
    rows = [("id", "kind", "params", "artifacts")]
    for sid in sorted(scenarios):
        body = scenarios[sid]
        params = ", ".join(f"{k}={body[k]}" for k in sorted(body) if k != "kind")
        arts = "report.json, figure.png"
        if body["kind"] not in ("ClassifyTerm",):
            arts = "report.json, data.csv, figure.png"
        rows.append((sid, body["kind"], params, arts))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    for r in rows:
        print(f"{r[0]:<{widths[0]}}  {r[1]:<{widths[1]}}  {r[2]:<{widths[2]}}  {r[3]}")
    print(f"{len(scenarios)} scenario(s)")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="rdlab",
        description="scenario runner for the reaction-diffusion laboratory")
    sub = ap.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("run", help="execute scenarios from a config")
    rp.add_argument("config")
    rp.add_argument("--out", default=None, help="output directory (default: $RDLAB_OUT or ./rdlab_out)")
    rp.add_argument("--jobs", type=int, default=1)
    rp.add_argument("--filter", default=None, metavar="ID-GLOB")
    rp.add_argument("--strict", action="store_true",
                    help="treat inconclusive verdicts as failures")
    dp = sub.add_parser("describe", help="print the scenario table")
    dp.add_argument("config")
    args = ap.parse_args(argv)
    try:
        if args.command == "run":
            return run(args.config, args.out, args.jobs, args.filter, args.strict)
        return describe(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
