"""Run configuration: one YAML file holding the whole experiment."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import re

import yaml

from . import model, poisson
from .errors import ParseError, StabilityError, ValidationError
from .states import CoherentCoherent, NumberCoherent, NumberNumber

EXPERIMENTS = ("eigen", "dynamics", "spectrum", "longtime", "verify")

_SCHEMA = {
    "experiment": None,
    "system": {"omega_c", "omega_m", "g_l", "g_q", "gamma"},
    "initial_state": {"kind", "n", "N", "beta", "alpha_tilde"},
    "grids": {"time", "omega", "g_l", "g_q", "n_max", "N_max"},
    "spectrum": {"Gamma"},
    "output": {"dir", "svg"},
    "tolerances": {"oracle_n_max", "epsilon", "quadrature_rel", "quadrature_steps"},
}
_GRID_KEYS = {"start", "stop", "steps"}


class _Loader(yaml.SafeLoader):
    """SafeLoader that also reads 1e6 / 1.0e-3 (no dot or sign needed) as floats."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(
        r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
        |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
        |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
        |[-+]?\.(?:inf|Inf|INF)
        |\.(?:nan|NaN|NAN))$""",
        re.X,
    ),
    list("-+0123456789."),
)
STATE_KINDS = ("number_number", "number_coherent", "coherent_coherent")


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    steps: int

    def values(self):
        import numpy as np

        return np.linspace(self.start, self.stop, self.steps)


@dataclass
class RunConfig:
    system: dict
    initial_state: dict
    experiment: str | None = None
    time: Grid | None = None
    omega: Grid | None = None
    g_l: Grid | None = None
    g_q: Grid | None = None
    n_max: int = 3
    N_max: int = 3
    Gamma: float = 0.01
    out_dir: str = "out"
    svg: bool = False
    oracle_n_max: int = 80
    epsilon: float = 1e-6
    quadrature_rel: float = 1e-4
    quadrature_steps: int = 400
    gammas: tuple = field(default=(math.inf,))

    def params(self, gamma=None) -> model.SystemParams:
        s = self.system
        g = self.gammas[0] if gamma is None else gamma
        return model.SystemParams(s["omega_c"], s["omega_m"], s["g_l"], s["g_q"], g)

    def state(self):
        st = self.initial_state
        if st["kind"] == "number_number":
            return NumberNumber(st["n"], st["N"])
        if st["kind"] == "number_coherent":
            return NumberCoherent(st["n"], st["beta"])
        return CoherentCoherent(st["alpha_tilde"], st["beta"])

    def resolved(self) -> dict:
        d = asdict(self)
        d["gammas"] = [_gamma_out(g) for g in self.gammas]
        d["system"] = dict(d["system"], gamma=d["gammas"])
        st = dict(d["initial_state"])
        if "beta" in st:
            st["beta"] = [st["beta"].real, st["beta"].imag]
        d["initial_state"] = st
        return d


def _gamma_out(g):
    return "inf" if math.isinf(g) else g


def load_config(path, experiment: str | None = None) -> RunConfig:
    """Read and validate a YAML config; ``experiment`` (the CLI subcommand) must agree with the file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed YAML in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be a mapping")
    return parse_config(raw, experiment)


def parse_config(raw: dict, experiment: str | None = None) -> RunConfig:
    problems: list[str] = []
    _check_keys(raw, problems)
    if experiment is not None:
        if raw.get("experiment", experiment) != experiment:
            problems.append(
                f"experiment: file says {raw['experiment']!r} but {experiment!r} was requested"
            )
        raw = dict(raw, experiment=experiment)

    def num(section, key, default=None, required=False, positive=False):
        sec = raw.get(section) or {}
        if key not in sec:
            if required:
                problems.append(f"{section}.{key}: missing")
            return default
        v = sec[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            problems.append(f"{section}.{key}: expected a finite number, got {v!r}")
            return default
        if positive and not v > 0:
            problems.append(f"{section}.{key}: must be > 0, got {v}")
            return default
        return float(v)

    def integer(section, key, default=None, required=False, minimum=0):
        sec = raw.get(section) or {}
        if key not in sec:
            if required:
                problems.append(f"{section}.{key}: missing")
            return default
        v = sec[key]
        if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
            problems.append(f"{section}.{key}: expected an integer >= {minimum}, got {v!r}")
            return default
        return v

    system = {k: num("system", k, required=True) for k in ("omega_c", "g_l", "g_q")}
    system["omega_m"] = num("system", "omega_m", required=True, positive=True)
    gammas = _parse_gammas((raw.get("system") or {}).get("gamma", "inf"), problems)

    st_raw = raw.get("initial_state") or {}
    kind = st_raw.get("kind", "number_number")
    state = {"kind": kind}
    if kind not in STATE_KINDS:
        problems.append(f"initial_state.kind: must be one of {STATE_KINDS}, got {kind!r}")
    else:
        if kind in ("number_number", "number_coherent"):
            state["n"] = integer("initial_state", "n", default=0)
        if kind == "number_number":
            state["N"] = integer("initial_state", "N", default=0)
            _forbid(st_raw, ("beta", "alpha_tilde"), kind, problems)
        else:
            state["beta"] = _parse_complex(st_raw.get("beta", 0), "initial_state.beta", problems)
        if kind == "coherent_coherent":
            a = num("initial_state", "alpha_tilde", default=0.0)
            if a is not None and a < 0:
                problems.append("initial_state.alpha_tilde: must be >= 0")
            state["alpha_tilde"] = a
            _forbid(st_raw, ("n", "N"), kind, problems)
        elif kind == "number_coherent":
            _forbid(st_raw, ("N", "alpha_tilde"), kind, problems)

    grids = raw.get("grids") or {}
    parsed_grids = {k: _parse_grid(grids[k], f"grids.{k}", problems) for k in ("time", "omega", "g_l", "g_q") if k in grids}

    experiment = raw.get("experiment")
    if experiment is not None and experiment not in EXPERIMENTS:
        problems.append(f"experiment: must be one of {EXPERIMENTS}, got {experiment!r}")

    svg = (raw.get("output") or {}).get("svg", False)
    if not isinstance(svg, bool):
        problems.append(f"output.svg: expected true/false, got {svg!r}")
    out_dir = (raw.get("output") or {}).get("dir", "out")
    if not isinstance(out_dir, str) or not out_dir:
        problems.append("output.dir: expected a non-empty string")

    cfg = RunConfig(
        system=system,
        initial_state=state,
        experiment=experiment,
        gammas=tuple(gammas),
        n_max=integer("grids", "n_max", default=3),
        N_max=integer("grids", "N_max", default=3),
        Gamma=num("spectrum", "Gamma", default=0.01, positive=True),
        out_dir=out_dir,
        svg=svg,
        oracle_n_max=integer("tolerances", "oracle_n_max", default=80, minimum=8),
        epsilon=num("tolerances", "epsilon", default=1e-6, positive=True),
        quadrature_rel=num("tolerances", "quadrature_rel", default=1e-4, positive=True),
        quadrature_steps=integer("tolerances", "quadrature_steps", default=400, minimum=100),
        **parsed_grids,
    )
    if problems:
        raise ValidationError(problems)
    check_config_stability(cfg)
    return cfg


def check_config_stability(cfg: RunConfig) -> None:
    """Raise StabilityError for the first unstable photon sector any experiment could touch."""
    g_qs = [cfg.system["g_q"]]
    if cfg.g_q is not None:
        g_qs += list(cfg.g_q.values())
    st = cfg.initial_state
    if st["kind"] == "coherent_coherent":
        n_top = poisson.tail_cutoff(st["alpha_tilde"] ** 2)
    else:
        n_top = st["n"]
    if cfg.experiment == "eigen":
        n_top = max(n_top, cfg.n_max)
    for g_q in g_qs:
        p = model.SystemParams(cfg.system["omega_c"], cfg.system["omega_m"], cfg.system["g_l"], g_q)
        bad = model.first_unstable_sector(p, n_top)
        if bad is not None:
            raise StabilityError(bad, p.omega_m, g_q)


def _check_keys(raw, problems):
    for key, value in raw.items():
        if key not in _SCHEMA:
            problems.append(f"{key}: unknown key")
            continue
        allowed = _SCHEMA[key]
        if allowed is None:
            continue
        if value is None:
            continue
        if not isinstance(value, dict):
            problems.append(f"{key}: expected a mapping")
            continue
        for sub, subval in value.items():
            if sub not in allowed:
                problems.append(f"{key}.{sub}: unknown key")
            elif key == "grids" and sub in ("time", "omega", "g_l", "g_q") and isinstance(subval, dict):
                for k in subval:
                    if k not in _GRID_KEYS:
                        problems.append(f"{key}.{sub}.{k}: unknown key")


def _forbid(section, keys, kind, problems):
    for k in keys:
        if k in section:
            problems.append(f"initial_state.{k}: not used by kind {kind}")


def _parse_gammas(v, problems):
    items = v if isinstance(v, list) else [v]
    out = []
    for g in items:
        if isinstance(g, str) and g.strip().lower() in ("inf", "infinity"):
            out.append(math.inf)
        elif isinstance(g, (int, float)) and not isinstance(g, bool) and (g > 0):
            out.append(float(g))
        else:
            problems.append(f"system.gamma: expected a positive number or 'inf', got {g!r}")
    if not out and not problems:
        problems.append("system.gamma: empty list")
    return out


def _parse_complex(v, name, problems):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if (
        isinstance(v, list)
        and len(v) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        return complex(v[0], v[1])
    problems.append(f"{name}: expected a number or [re, im], got {v!r}")
    return 0j


def _parse_grid(g, name, problems):
    if not isinstance(g, dict):
        problems.append(f"{name}: expected a mapping with start/stop/steps")
        return None
    try:
        start, stop, steps = float(g["start"]), float(g["stop"]), g["steps"]
    except (KeyError, TypeError, ValueError):
        problems.append(f"{name}: needs numeric start, stop and integer steps")
        return None
    if isinstance(steps, bool) or not isinstance(steps, int):
        problems.append(f"{name}.steps: expected an integer")
        return None
    if steps == 1 and start == stop:
        return Grid(start, stop, 1)
    if steps < 2:
        problems.append(f"{name}.steps: must be >= 2 (or 1 with start == stop)")
        return None
    if not stop > start:
        problems.append(f"{name}: stop must exceed start")
        return None
    return Grid(start, stop, steps)
