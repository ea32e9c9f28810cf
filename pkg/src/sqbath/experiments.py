"""Canned, parameterized numerical experiments.

Each experiment has a typed parameter schema with defaults, a ``prepare`` step
that builds and validates every model parameter record without doing any heavy
numerics, and a ``compute`` step that returns a table plus a summary record.

Frequencies and widths in four-level experiments are reported in units of the
effective decay rate ``gamma``; the excited-state width ``Gamma`` is 1.
"""
from __future__ import annotations

import math
import re
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from ._version import __version__
from .analytics import (BlochState, bloch_evolve, cross_decay_rate, mollow_linewidths,
                        optimal_detuning_ratio, second_order_cross_decay_rate)
from .correlations import absorption_spectrum, default_grid, fluorescence_spectrum_four_level
from .errors import InvariantError, SqbathError
from .liouville import build_liouvillian, eigenmodes, evolve, mollow_modes, steady_state, unvec, vec
from .models import (AdiabaticValidityWarning, DriveParams, FourLevelParams, SqueezedBathParams,
                     SubsystemParams, effective_ground_master, four_level_master,
                     interference_subsystem_model, map_parameters, squeezed_bath_master)
from .operators import DensityMatrix, basis_operator, bloch_vector, projector
from .trajectories import DT_RATE_LIMIT, TrajectoryConfig, simulate

# ---------------------------------------------------------------- parameters


@dataclass(frozen=True)
class Param:
    kind: str                   # float | int | str | floats | choice | squeezing
    default: Any
    help: str = ""
    choices: tuple = ()


_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


def _parse_float(key: str, raw) -> float:
    if isinstance(raw, bool):
        raise InvariantError(f"{key}: expected a number, got {raw!r}")
    if isinstance(raw, str):
        if not _NUMBER.fullmatch(raw.strip()):
            raise InvariantError(f"{key}: expected a base-10 number, got {raw!r}")
        raw = raw.strip()
    try:
        x = float(raw)
    except (TypeError, ValueError):
        raise InvariantError(f"{key}: expected a base-10 number, got {raw!r}") from None
    if not math.isfinite(x):
        raise InvariantError(f"{key}: value must be finite, got {raw!r}")
    return x


def _parse_value(key: str, p: Param, raw):
    if raw is None:
        return None
    if p.kind == "float":
        return _parse_float(key, raw)
    if p.kind == "int":
        x = _parse_float(key, raw)
        if x != int(x):
            raise InvariantError(f"{key}: expected an integer, got {raw!r}")
        return int(x)
    if p.kind == "floats":
        items = raw.split(",") if isinstance(raw, str) else list(np.atleast_1d(raw))
        vals = [_parse_float(key, s) for s in items if not (isinstance(s, str) and not s.strip())]
        if not vals:
            raise InvariantError(f"{key}: expected a non-empty list of numbers, got {raw!r}")
        return vals
    if p.kind == "choice":
        val = str(raw).strip()
        if val not in p.choices:
            raise InvariantError(f"{key}: must be one of {', '.join(p.choices)}, got {raw!r}")
        return val
    if p.kind == "squeezing":
        if isinstance(raw, str) and raw.strip() == "max":
            return "max"
        return _parse_float(key, raw)
    return str(raw)


@dataclass(frozen=True)
class ExperimentSpec:
    """A fully resolved experiment request: name, typed parameters, output settings."""
    name: str
    parameters: dict = field(default_factory=dict)
    outdir: Optional[str] = None
    fmt: str = "csv"
    seed: Optional[int] = None

    @classmethod
    def from_overrides(cls, name: str, overrides: Optional[dict] = None, outdir: Optional[str] = None,
                       fmt: str = "csv", seed: Optional[int] = None) -> "ExperimentSpec":
        if name not in CATALOG:
            raise InvariantError(f"unknown experiment {name!r}; available: {', '.join(CATALOG)}")
        if fmt not in ("csv", "json-lines"):
            raise InvariantError(f"format must be csv or json-lines, got {fmt!r}")
        schema = CATALOG[name].schema
        params = {k: p.default for k, p in schema.items()}
        for k, raw in (overrides or {}).items():
            if k not in schema:
                raise InvariantError(f"unknown parameter {k!r} for experiment {name}; "
                                     f"known: {', '.join(schema)}")
            params[k] = _parse_value(k, schema[k], raw)
        if seed is not None:
            if int(seed) != seed or not 0 <= int(seed) < 2**64:
                raise InvariantError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
            seed = int(seed)
            if "seed" in schema:
                params["seed"] = seed
        return cls(name, params, outdir, fmt, seed)

    def to_dict(self) -> dict:
        return {"name": self.name, "parameters": dict(self.parameters), "format": self.fmt,
                "seed": self.seed}


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    spec: ExperimentSpec
    columns: tuple
    rows: list
    summary: dict


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    schema: dict
    prepare: Callable[[dict], Any]
    compute: Callable[[Any, dict, int], tuple]


def _map(fn, items: Sequence, workers: int) -> list:
    """Ordered map, optionally on a thread pool; result order is input order."""
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ---------------------------------------------------------------- helpers


def four_level_point(params: dict, g_l: float, phi: float) -> FourLevelParams:
    """Four-level parameters from squeezed-bath language, or from an explicit field."""
    eps_p, eps_m, omega = (params.get("field.eps_plus"), params.get("field.eps_minus"),
                           params.get("field.Omega"))
    given = [x is not None for x in (eps_p, eps_m, omega)]
    if any(given):
        if not all(given):
            raise InvariantError("field.eps_plus, field.eps_minus and field.Omega must be given together")
        base = FourLevelParams(omega, eps_p, eps_m, phi_L=phi, g_l=g_l)
    else:
        base = FourLevelParams.from_squeezed(params["N"], params["gamma_over_Gamma"], phi=phi, g_l=g_l)
    gamma = map_parameters(base).gamma
    return FourLevelParams(base.Omega, base.eps_plus, base.eps_minus, phi_L=phi, g_l=g_l,
                           Gamma=base.Gamma,
                           drive=DriveParams(params["drive.omega_over_gamma"] * gamma))


def build_model(p: FourLevelParams, kind: str):
    if kind == "full":
        return four_level_master(p)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdiabaticValidityWarning)
        return effective_ground_master(p)


def fit_center_halfwidth(omegas: np.ndarray, values: np.ndarray, guess: float) -> float:
    """Half width of a Lorentzian centred at 0 on a local quadratic background.

    Fits within ``|w| <= 2 guess``; amplitude and background enter linearly and are
    eliminated by least squares, leaving a bounded scalar search for the width.
    """
    win = np.abs(omegas) <= 2.0 * guess
    if win.sum() < 7:
        raise InvariantError(f"too few grid points ({win.sum()}) across the central line to fit its width")
    w, s = omegas[win], values[win]

    def cost(g):
        x = np.stack([1.0 / (1.0 + (w / g)**2), np.ones_like(w), w, w * w], axis=1)
        c = np.linalg.lstsq(x, s, rcond=None)[0]
        return float(np.sum((x @ c - s)**2))

    res = minimize_scalar(cost, bounds=(0.2 * guess, 5.0 * guess), method="bounded",
                          options={"xatol": 1e-10 * guess})
    return float(res.x)


def extract_cross_decay_rate(p: SubsystemParams, settle: float = 40.0) -> float:
    """Circular-photon emission rate per ground population from the master equation.

    Starting in ``g-``, the excited manifolds are followed for ``settle / min(Gamma)``
    until they have adiabatically followed the ground state. The returned rate is
    ``Tr[c rho c†] / rho_{g-,g-}`` for the circular channel, which in the weak-drive
    limit equals ``cross_decay_rate(p)``.
    """
    m = interference_subsystem_model(p)
    L = build_liouvillian(m)
    t = settle / min(p.Gamma_e, p.Gamma_a)
    rho0 = np.zeros((m.space.dim,) * 2, complex)
    rho0[0, 0] = 1.0
    rho = unvec(L.propagator(t) @ vec(rho0), m.space.dim)
    c = m.jumps[0][1].matrix
    return float(np.trace(c @ rho @ c.conj().T).real / rho[0, 0].real)


def eigenscan_point(N: float, omega_over_Gamma: float, omega_over_gamma: float,
                    g_l: float = 1.0, phi: float = 0.0) -> dict:
    """Triplet widths and positions (units of gamma) of the full and effective models."""
    gamma = omega_over_Gamma**2 / (2 * N + 1)
    base = FourLevelParams.from_squeezed(N, gamma, phi=phi, g_l=g_l,
                                         drive=DriveParams(omega_over_gamma * gamma))
    out = {"omega_over_Gamma": omega_over_Gamma, "gamma": gamma}
    for kind in ("full", "effective"):
        L = build_liouvillian(build_model(base, kind))
        t = mollow_modes(eigenmodes(L), base.drive.omega_D)
        out[kind] = {"halfwidths": tuple(h / gamma for h in t.halfwidths),
                     "positions": tuple(x / gamma for x in t.positions),
                     "next_halfwidth": None if t.next_halfwidth is None else t.next_halfwidth / gamma}
    return out


_FIELD = {
    "field.eps_plus": Param("float", None, "explicit field amplitude eps+ (overrides N)"),
    "field.eps_minus": Param("float", None, "explicit field amplitude eps- (overrides N)"),
    "field.Omega": Param("float", None, "explicit pump Rabi frequency (overrides gamma_over_Gamma)"),
}

# ---------------------------------------------------------------- steady-sweep


def _prep_steady(params):
    if params["phi_points"] < 2:
        raise InvariantError(f"phi_points must be at least 2, got {params['phi_points']}")
    phis = np.linspace(0.0, 2 * math.pi, params["phi_points"])
    pts = [(g, float(ph), four_level_point(params, g, float(ph))) for g in params["g_l"] for ph in phis]
    return pts


def _steady_bloch(args, kind):
    g, ph, p = args
    rho = steady_state(build_liouvillian(build_model(p, kind)))
    return (g, ph) + bloch_vector(rho, "g-", "g+")


def _compute_steady(pts, params, workers):
    rows = _map(lambda a: _steady_bloch(a, params["model"]), pts, workers)
    contrast = {}
    for g in params["g_l"]:
        sx = [r[2] for r in rows if r[0] == g]
        contrast[repr(g)] = max(sx) - min(sx)
    vals = list(contrast.values())
    order = np.argsort(-np.asarray([float(k) for k in contrast]))
    ordered = [vals[i] for i in order]
    summary = {"Sx_contrast": contrast,
               "contrast_decreases_with_cross_decay": bool(all(a > b for a, b in zip(ordered, ordered[1:]))),
               "gamma": map_parameters(pts[0][2]).gamma}
    return ("g_l", "phi", "S_x", "S_y", "S_z"), rows, summary


# ---------------------------------------------------------------- absorption


def _prep_absorption(params):
    return [(g, ph, four_level_point(params, g, ph)) for g in params["g_l"] for ph in params["phi"]]


def _absorption_curve(args, params):
    g, ph, p = args
    gamma = map_parameters(p).gamma
    L = build_liouvillian(build_model(p, params["model"]))
    rho = steady_state(L)
    om = default_grid(p.drive.omega_D, gamma, params["points"])
    spec = absorption_spectrum(L, rho, om)
    trip = mollow_modes(eigenmodes(L), p.drive.omega_D)
    hw = trip.center.halfwidth
    center = float(np.interp(0.0, om, spec.values))
    mid = (om > 2 * hw) & (om < p.drive.omega_D - trip.sidebands[1].halfwidth)
    info = {"g_l": g, "phi": ph, "center_value": center * gamma,
            "fluorescence_center_halfwidth": hw / gamma,
            "min_between_center_and_sideband": float(spec.values[mid].min() * gamma) if mid.any() else None}
    try:
        info["center_halfwidth_fit"] = fit_center_halfwidth(om, spec.values, hw) / gamma if center > 0 else None
    except InvariantError:
        info["center_halfwidth_fit"] = None
    rows = [(g, ph, w / gamma, v * gamma) for w, v in zip(om, spec.values)]
    return rows, info


def _compute_absorption(pts, params, workers):
    parts = _map(lambda a: _absorption_curve(a, params), pts, workers)
    rows = [r for part, _ in parts for r in part]
    return ("g_l", "phi", "omega", "absorption"), rows, {"curves": [info for _, info in parts]}


# ---------------------------------------------------------------- fluorescence


def _prep_fluorescence(params):
    return four_level_point(params, params["g_l"], params["phi"])


def _compute_fluorescence(p, params, workers):
    gamma = map_parameters(p).gamma
    L = build_liouvillian(build_model(p, params["model"]))
    rho = steady_state(L)
    om = default_grid(p.drive.omega_D, gamma, params["points"])
    spec = fluorescence_spectrum_four_level(L, p, rho, om, workers=workers)
    trip = mollow_modes(eigenmodes(L), p.drive.omega_D)
    summary = {"center_halfwidth": trip.center.halfwidth / gamma,
               "sideband_halfwidths": [m.halfwidth / gamma for m in trip.sidebands],
               "positions": [x / gamma for x in trip.positions],
               "coherent_weight": abs(spec.coherent),
               "gamma": gamma}
    try:
        summary["center_halfwidth_fit"] = fit_center_halfwidth(om, spec.values, trip.center.halfwidth) / gamma
    except InvariantError:
        summary["center_halfwidth_fit"] = None
    try:
        c, s = mollow_linewidths(map_parameters(p), p.phi_L, p.g_l)
        summary["table_center_halfwidth"], summary["table_sideband_halfwidth"] = c / gamma, s / gamma
    except InvariantError:
        pass
    rows = [(w / gamma, v * gamma) for w, v in zip(om, spec.values)]
    return ("omega", "intensity"), rows, summary


# ---------------------------------------------------------------- eigenscan


def _prep_eigenscan(params):
    lo, hi, n = params["omega_min"], params["omega_max"], params["points"]
    if not 0 < lo < hi:
        raise InvariantError(f"eigenscan range needs 0 < omega_min < omega_max, got {lo}, {hi}")
    if n < 2:
        raise InvariantError(f"eigenscan points must be at least 2, got {n}")
    # check the parameter record once at the weakest pump
    FourLevelParams.from_squeezed(params["N"], lo**2 / (2 * params["N"] + 1), g_l=params["g_l"])
    return list(np.geomspace(lo, hi, n))


def _compute_eigenscan(grid, params, workers):
    res = _map(lambda x: eigenscan_point(params["N"], float(x), params["drive.omega_over_gamma"],
                                         params["g_l"], params["phi"]), grid, workers)
    rows = []
    for r in res:
        f, e = r["full"], r["effective"]
        rows.append((r["omega_over_Gamma"],) + f["halfwidths"] + e["halfwidths"]
                    + (f["positions"][1], f["positions"][2], e["positions"][1], e["positions"][2],
                       f["next_halfwidth"]))
    cols = ("omega_over_Gamma", "center_full", "lower_full", "upper_full",
            "center_eff", "lower_eff", "upper_eff",
            "pos_lower_full", "pos_upper_full", "pos_lower_eff", "pos_upper_eff", "next_full")
    width_ratio = [[a / b for a, b in zip(r["full"]["halfwidths"], r["effective"]["halfwidths"])] for r in res]
    summary = {"width_ratio_full_over_effective": width_ratio,
               "max_rel_deviation_below_0.05": max(
                   [max(abs(x - 1) for x in w) for w, r in zip(width_ratio, res)
                    if r["omega_over_Gamma"] <= 0.05] or [0.0])}
    return cols, rows, summary


# ---------------------------------------------------------------- crossdecay


def _prep_crossdecay(params):
    base = SubsystemParams(params["Gamma_e"], params["Gamma_a"], 1.0, 1.0,
                           params["gc_e"], params["gc_a"], params["prefactor"])
    ratio = optimal_detuning_ratio(base)
    pts = []
    for x in params["gamma_over_delta"]:
        if not x > 0:
            raise InvariantError(f"gamma_over_delta entries must be positive, got {x}")
        da = params["Gamma_a"] / x
        pts.append((x, SubsystemParams(base.Gamma_e, base.Gamma_a, da, da, base.gc_e, base.gc_a, base.prefactor),
                    SubsystemParams(base.Gamma_e, base.Gamma_a, ratio * da, da, base.gc_e, base.gc_a,
                                    base.prefactor)))
    return pts


def _crossdecay_row(args, params):
    x, pb, po = args
    rb, ro = cross_decay_rate(pb), cross_decay_rate(po)
    row = [x, pb.Delta_a, po.Delta_e, rb, ro, rb / ro if ro > 0 else math.inf,
           second_order_cross_decay_rate(pb)]
    if params["extract"] == "yes":
        small = SubsystemParams(pb.Gamma_e, pb.Gamma_a, pb.Delta_e, pb.Delta_a, pb.gc_e, pb.gc_a,
                                params["extract_prefactor"])
        ex = extract_cross_decay_rate(small) * pb.prefactor / small.prefactor
        row += [ex, ex / rb - 1]
    return tuple(row)


def _compute_crossdecay(pts, params, workers):
    rows = _map(lambda a: _crossdecay_row(a, params), pts, workers)
    cols = ["gamma_over_delta", "Delta_a", "Delta_e_optimal", "rate_baseline", "rate_optimal",
            "suppression", "rate_second_order_baseline"]
    if params["extract"] == "yes":
        cols += ["extracted_baseline", "extracted_rel_dev"]
    summary = {"optimal_ratio": pts[0][2].Delta_e / pts[0][2].Delta_a}
    xs = np.array([r[0] for r in rows])
    if xs.size >= 2:
        rel = np.array([r[4] / r[3] for r in rows])
        summary["loglog_slope_relative_rate"] = float(np.polyfit(np.log(xs), np.log(rel), 1)[0])
        summary["loglog_slope_absolute_rate"] = float(np.polyfit(np.log(xs), np.log([r[4] for r in rows]), 1)[0])
    summary["suppression"] = {repr(r[0]): r[5] for r in rows}
    return tuple(cols), rows, summary


# ---------------------------------------------------------------- bloch-demo


def _prep_bloch(params):
    N = params["N"]
    M = math.sqrt(N * (N + 1)) if params["M"] == "max" else params["M"]
    p = SqueezedBathParams(N, M, params["phi"], params["gamma"])
    drive = DriveParams(params["drive.omega_D"], params["drive.phi_D"])
    model = squeezed_bath_master(p, drive)
    rate = model.total_jump_rate()
    dt = params["dt"] or 0.2 * DT_RATE_LIMIT / rate
    cfg = TrajectoryConfig(params["n_traj"], dt, params["t_max"], params["seed"]) if params["n_traj"] else None
    if cfg is not None and dt > DT_RATE_LIMIT / rate:
        raise InvariantError(f"dt = {dt:g} violates dt <= {DT_RATE_LIMIT}/total jump rate = {DT_RATE_LIMIT / rate:g}")
    return p, drive, model, cfg


def _compute_bloch(plan, params, workers):
    p, drive, model, cfg = plan
    times = np.linspace(0.0, params["t_max"], params["samples"])
    psi0 = np.array([1.0, 1.0]) / math.sqrt(2.0)     # S = (1, 0, 0)
    analytic = bloch_evolve(p, drive, 1.0, BlochState(1.0, 0.0, 0.0), times)
    states = evolve(build_liouvillian(model), DensityMatrix.pure(model.space, psi0), times)
    master = np.array([bloch_vector(r, "g", "e") for r in states])
    cols = ["t", "Sx_bloch", "Sy_bloch", "Sz_bloch", "Sx_master", "Sy_master", "Sz_master"]
    data = [times, *analytic.T, *master.T]
    summary = {"max_abs_bloch_minus_master": float(np.abs(analytic - master).max())}
    if cfg is not None:
        res = simulate(model, psi0, cfg, times, workers=workers)
        sp = model.space
        s = basis_operator(sp, "g", "e")
        ops = [s + s.dag(), (-1j) * (s - s.dag()), projector(sp, ["e"]) - projector(sp, ["g"])]
        zmax = 0.0
        for name, op, ref in zip(("Sx", "Sy", "Sz"), ops, master.T):
            mu, se = res.expectation(op)
            cols += [f"{name}_mc", f"{name}_se"]
            data += [mu.real, se]
            # identical trajectories at t=0 leave only round-off in se
            z = np.abs(mu.real - ref) / np.maximum(se, 1e-12)
            zmax = max(zmax, float(z.max()))
        summary["max_standard_errors_mc_vs_master"] = zmax
        summary["dt"] = cfg.dt
    rows = [tuple(float(v) for v in r) for r in zip(*data)]
    return tuple(cols), rows, summary


# ---------------------------------------------------------------- catalog

_DRIVE = "drive.omega_over_gamma"
CATALOG: dict[str, Experiment] = {
    "steady-sweep": Experiment(
        "steady-sweep", "steady-state Bloch vector versus squeezing phase for several g_l",
        {"N": Param("float", 2.1), "gamma_over_Gamma": Param("float", 1.9e-5),
         _DRIVE: Param("float", 5.1), "g_l": Param("floats", [1.0, 0.99, 0.95, 0.9]),
         "phi_points": Param("int", 73), "model": Param("choice", "full", choices=("full", "effective")),
         **_FIELD},
        _prep_steady, _compute_steady),
    "absorption": Experiment(
        "absorption", "probe absorption spectra of the Raman-driven ground states",
        {"N": Param("float", 1.0), "gamma_over_Gamma": Param("float", 1e-4 / 3),
         _DRIVE: Param("float", 7.1),
         "g_l": Param("floats", [1.0, 0.9, math.sqrt(2 / 3), math.sqrt(1 / 3)]),
         "phi": Param("floats", [0.0, math.pi]), "points": Param("int", 2001),
         "model": Param("choice", "effective", choices=("full", "effective")), **_FIELD},
        _prep_absorption, _compute_absorption),
    "fluorescence": Experiment(
        "fluorescence", "resonance fluorescence spectrum of the ground-state quadrature",
        {"N": Param("float", 0.2), "gamma_over_Gamma": Param("float", 7.1e-5),
         _DRIVE: Param("float", 7.1), "g_l": Param("float", 1.0), "phi": Param("float", 0.0),
         "points": Param("int", 2001),
         "model": Param("choice", "effective", choices=("full", "effective")), **_FIELD},
        _prep_fluorescence, _compute_fluorescence),
    "eigenscan": Experiment(
        "eigenscan", "Mollow triplet widths of full versus eliminated model against Omega/Gamma",
        {"N": Param("float", 0.2), _DRIVE: Param("float", 7.1), "g_l": Param("float", 1.0),
         "phi": Param("float", 0.0), "omega_min": Param("float", 0.01), "omega_max": Param("float", 1.0),
         "points": Param("int", 25)},
        _prep_eigenscan, _compute_eigenscan),
    "crossdecay": Experiment(
        "crossdecay", "suppression of cross decay by interfering upper manifolds",
        {"Gamma_e": Param("float", 1.0), "Gamma_a": Param("float", 1.5),
         "gc_e": Param("float", math.sqrt(2 / 3)), "gc_a": Param("float", math.sqrt(1 / 3)),
         "gamma_over_delta": Param("floats", [0.1, 0.05, 0.025]), "prefactor": Param("float", 1.0),
         "extract": Param("choice", "yes", choices=("yes", "no")),
         "extract_prefactor": Param("float", 1e-8)},
        _prep_crossdecay, _compute_crossdecay),
    "bloch-demo": Experiment(
        "bloch-demo", "driven Bloch equations against master equation and quantum trajectories",
        {"N": Param("float", 1.0), "M": Param("squeezing", "max"), "phi": Param("float", 0.0),
         "gamma": Param("float", 1.0), "drive.omega_D": Param("float", 2.0),
         "drive.phi_D": Param("float", 0.0), "t_max": Param("float", 5.0), "samples": Param("int", 20),
         "n_traj": Param("int", 2000), "dt": Param("float", 0.0), "seed": Param("int", 1)},
        _prep_bloch, _compute_bloch),
}


def _with_context(name: str, exc: SqbathError) -> SqbathError:
    new = type(exc)(f"{name}: {exc}")
    new.__cause__ = exc
    return new


def validate(spec: ExperimentSpec):
    """Check every parameter record the experiment would build; no numerics."""
    try:
        return CATALOG[spec.name].prepare(spec.parameters)
    except SqbathError as exc:
        raise _with_context(spec.name, exc) from exc


def run(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    plan = validate(spec)
    try:
        cols, rows, summary = CATALOG[spec.name].compute(plan, spec.parameters, workers)
    except SqbathError as exc:
        raise _with_context(spec.name, exc) from exc
    return ExperimentResult(spec, tuple(cols), rows, summary)


def describe() -> list[tuple[str, str, dict]]:
    """Catalog entries as ``(name, description, defaults)``."""
    return [(e.name, e.description, {k: p.default for k, p in e.schema.items()})
            for e in CATALOG.values()]


__all__ = ["CATALOG", "Experiment", "ExperimentResult", "ExperimentSpec", "Param", "describe",
           "eigenscan_point", "extract_cross_decay_rate", "fit_center_halfwidth", "four_level_point",
           "run", "validate", "__version__"]
