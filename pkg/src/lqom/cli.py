"""Command line entry point.

    lqom <eigen|dynamics|spectrum|longtime|verify> --config run.yaml [--out DIR] [--svg]

Exit status: 0 success, 1 numerical non-convergence or failed verification,
2 configuration or stability error.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, model, oracle, spectrum as spec
from .coefficients import nu_closed
from .config import EXPERIMENTS, RunConfig, load_config
from .errors import ConfigError, NonConvergence, StabilityError
from .observables import dynamics_sweep, phonon_number, quadrature
from .output import emit_csv, emit_metadata

log = logging.getLogger("lqom")

OUT_ENV = "LQOM_OUTPUT_DIR"


class VerificationFailure(RuntimeError):
    pass


def _gamma_label(g):
    return "inf" if math.isinf(g) else format(g, "g")


def _gamma_value(g):
    return "inf" if math.isinf(g) else g


def run_eigen(cfg: RunConfig, out: Path, svg: bool):
    s = cfg.system
    g_ls = cfg.g_l.values() if cfg.g_l is not None else np.array([s["g_l"]])
    g_qs = cfg.g_q.values() if cfg.g_q is not None else np.array([s["g_q"]])
    rows = []
    for g_l in g_ls:
        for g_q in g_qs:
            p = model.SystemParams(s["omega_c"], s["omega_m"], float(g_l), float(g_q))
            for n in range(cfg.n_max + 1):
                for N in range(cfg.N_max + 1):
                    rows.append((n, N, float(g_l), float(g_q), model.eigenvalue(p, n, N)))
    emit_csv(rows, ("n", "N", "g_l", "g_q", "energy"), out / "eigen.csv")
    if svg:
        from .plots import level_diagram

        for name, grid, col in (("g_l", g_ls, 2), ("g_q", g_qs, 3)):
            if len(grid) < 2:
                continue
            other = 3 if col == 2 else 2
            fixed = rows[0][other]
            curves = {}
            for r in rows:
                if r[other] == fixed:
                    curves.setdefault((r[0], r[1]), []).append(r[4])
            level_diagram(out / f"eigen_{name}.svg", grid, curves, name)
    return rows


def _time_grid(cfg):
    if cfg.time is None:
        return np.linspace(0.0, 20.0, 401)
    return cfg.time.values()


def run_dynamics(cfg: RunConfig, out: Path, svg: bool):
    state = cfg.state()
    grid = _time_grid(cfg)
    rows, panels = [], {"<N>": {}, "<X>": {}}
    for g in cfg.gammas:
        samples = dynamics_sweep(cfg.params(g), state, grid)
        rows += [(x.t, x.phonon_number, x.quadrature, _gamma_value(g)) for x in samples]
        panels["<N>"][f"gamma={_gamma_label(g)}"] = [x.phonon_number for x in samples]
        panels["<X>"][f"gamma={_gamma_label(g)}"] = [x.quadrature for x in samples]
    emit_csv(rows, ("t", "phonon_number", "quadrature", "gamma"), out / "dynamics.csv")
    if svg and len(grid) > 1:
        from .plots import line_panels

        line_panels(out / "dynamics.svg", grid, panels, "t")
    return rows


def _omega_grid(cfg, p):
    if cfg.omega is not None:
        return cfg.omega.values()
    n_top = max(n for n, _ in cfg.state().sectors())
    return spec.default_omega_grid(p, n_top)


def run_spectrum(cfg: RunConfig, out: Path, svg: bool):
    state = cfg.state()
    times = _time_grid(cfg)
    rows = []
    for g in cfg.gammas:
        p = cfg.params(g)
        omega = _omega_grid(cfg, p)
        Z = np.empty((len(omega), len(times)))
        for j, t in enumerate(times):
            Z[:, j] = spec.spectrum(p, state, spec.SpectrumParams(cfg.Gamma, omega, float(t)))
        for j, t in enumerate(times):
            rows += [(_gamma_value(g), float(t), float(w), float(Z[i, j])) for i, w in enumerate(omega)]
        if svg and len(times) > 1:
            from .plots import heatmap

            heatmap(out / f"spectrum_gamma_{_gamma_label(g)}.svg", times, omega, Z,
                    title=f"gamma = {_gamma_label(g)}")
    emit_csv(rows, ("gamma", "t", "omega", "spectrum"), out / "spectrum.csv")
    return rows


def run_longtime(cfg: RunConfig, out: Path, svg: bool):
    state = cfg.state()
    rows, panels = [], {"S(omega; t->inf)": {}}
    for g in cfg.gammas:
        if math.isinf(g):
            raise ConfigError("longtime needs a finite gamma; the unitary spectrum never settles")
        p = cfg.params(g)
        omega = _omega_grid(cfg, p)
        vals = spec.longtime_spectrum_state(p, state, cfg.Gamma, omega)
        rows += [(_gamma_value(g), float(w), float(v)) for w, v in zip(omega, vals)]
        panels["S(omega; t->inf)"][f"gamma={_gamma_label(g)}"] = vals
    emit_csv(rows, ("gamma", "omega", "spectrum"), out / "longtime.csv")
    if svg:
        from .plots import line_panels

        line_panels(out / "longtime.svg", omega, panels, "omega")
    return rows


def verification_checks(cfg: RunConfig):
    """Yield (name, gamma, error, cutoff_delta, tolerance) for every analytic/oracle pair."""
    state = cfg.state()
    N_max = cfg.oracle_n_max
    times = _time_grid(cfg)
    sectors = state.sectors()
    for g in cfg.gammas:
        p = cfg.params(g)

        def obs(cut):
            N, X = oracle.observables_series(p, state, times, N_max=cut)
            return np.stack([N, X])

        ref, delta = oracle.with_cutoff_delta(obs, N_max)
        yield "phonon_number", g, float(np.max(np.abs(ref[0] - phonon_number(p, state, times)))), delta, cfg.epsilon
        yield "quadrature", g, float(np.max(np.abs(ref[1] - quadrature(p, state, times)))), delta, cfg.epsilon

        n0 = sectors[0][0]
        t_mid = float(times[len(times) // 2])

        def proj(cut):
            B = oracle.heisenberg_b(p, n0, t_mid, N_max=cut)
            return np.array([B[0, 1], B[1, 0], B[0, 0]])

        ref, delta = oracle.with_cutoff_delta(proj, N_max)
        nu = nu_closed(p, n0, t_mid).as_array().conj()
        yield "nu_projection", g, float(np.max(np.abs(ref - nu))), delta, cfg.epsilon

        t1, t2 = float(times[len(times) // 3]), float(times[-1])

        def corr(cut):
            return oracle.correlation_numeric(p, state, t1, t2, N_max=cut)

        ref, delta = oracle.with_cutoff_delta(corr, N_max)
        err = abs(complex(ref) - spec.correlation(p, state, t1, t2))
        yield "correlation", g, float(err), delta, cfg.epsilon

        t_s = min(float(times[-1]), 5.0)
        if t_s > 0:
            omega = np.array(sorted({0.0, spec.sideband_frequency(p, n0)}))
            closed = spec.spectrum(p, state, spec.SpectrumParams(cfg.Gamma, omega, t_s))

            def quad(cut):
                return oracle.spectrum_numeric(p, state, cfg.Gamma, omega, t_s,
                                               grid_steps=cfg.quadrature_steps, N_max=cut)

            ref, delta = oracle.with_cutoff_delta(quad, N_max)
            scale = np.maximum(np.abs(closed), 1e-300)
            yield "spectrum_rel", g, float(np.max(np.abs(ref - closed) / scale)), delta / float(scale.min()), cfg.quadrature_rel


def run_verify(cfg: RunConfig, out: Path, svg: bool):
    rows = []
    failure = None
    for name, g, err, delta, tol in verification_checks(cfg):
        ok = err < tol and delta < 0.1 * tol
        rows.append((name, _gamma_value(g), err, delta, tol, ok))
        log.info("%-14s gamma=%-6s error=%.3e cutoff_delta=%.3e tol=%.1e %s",
                 name, _gamma_label(g), err, delta, tol, "ok" if ok else "FAIL")
        if not ok:
            failure = f"{name} (gamma={_gamma_label(g)}): error {err:.3e}, cutoff delta {delta:.3e}, tolerance {tol:.1e}"
            break
    emit_csv(rows, ("check", "gamma", "max_abs_error", "cutoff_delta", "tolerance", "pass"), out / "verify.csv")
    if failure:
        raise VerificationFailure(failure)
    return rows


RUNNERS = {
    "eigen": run_eigen,
    "dynamics": run_dynamics,
    "spectrum": run_spectrum,
    "longtime": run_longtime,
    "verify": run_verify,
}


def run(cfg: RunConfig, out_dir=None, svg=None) -> int:
    out = Path(out_dir or os.environ.get(OUT_ENV) or cfg.out_dir)
    svg = cfg.svg if svg is None else svg
    try:
        RUNNERS[cfg.experiment](cfg, out, svg)
    except (NonConvergence, VerificationFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, StabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    emit_metadata({"lqom_version": __version__, "config": cfg.resolved()},
                  out / f"{cfg.experiment}.meta.json")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="lqom", description=__doc__.split("\n\n")[0])
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--config", required=True, help="YAML run configuration")
    ap.add_argument("--out", help=f"output directory (overrides ${OUT_ENV} and output.dir)")
    ap.add_argument("--svg", action="store_true", default=None, help="also render SVG figures")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config, args.experiment)
    except (ConfigError, StabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg, args.out, args.svg)


if __name__ == "__main__":
    sys.exit(main())
