"""
Command-line entry point: pipeline stages and figure presets as CSV/JSON tables

Example:
  python cli.py ratio --zx-sweep 0.01:0.99:200 --N 1,2,5,10,15,20,150 --out out/ratio.csv
  python cli.py figure --preset 5 --out figures
"""
import argparse
import logging
import math
from functools import partial
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from config import settings
from models.density import GridSpec
from models.run import RunConfig
from services.density import wigner_profile
from services.observables import counting, dos, energy_axis, fit_be, fit_fd, fit_sweep, populations, shell_degeneracy
from services.oracle import arbitrate_zx, bose_convention_report
from services.spectrum import (
    build_spectrum,
    entropies,
    power_sum,
    power_sums,
    solve_equilibrium,
    spectrum_for_pairs,
    z_from_mu,
    z_from_widths,
    zs_from_physics,
)
from services.symfun import chi_bose, chi_fermi_dp, chi_fermi_newton, chi_fermi_partition, purity_bounds, ratio
from utils.errors import CobosonError, DomainError
from utils.logs import configure_logging
from utils.output import parse_list, parse_sweep, write_json, write_table
from utils.sweep import run_sweep


logger = logging.getLogger(__name__)

EXIT_ARGUMENTS = 2

# Figure presets
FIG1_N = [1, 2, 5, 10, 15, 20, 150]
FIG1_SWEEP = "0.01:0.99:200"
FIG2_N = [5, 10]
FIG2_MODES = [0, 1, 2, 3, 4, 5, 6, 10, 20]
FIG2_SWEEP = "0.01:0.99:50"
FIG3_Z = [0.1, 0.6, 0.85, 0.95, 0.99]
FIG3_N = [10, 100]
FIG3_SWEEP = "0.05:0.95:19"
FIG4_N = 150
FIG4_Z = [0.2, 0.5, 0.8, 0.95]
FIG4_SWEEP = "0.05:0.95:19"
FIG5_GAMMA = 1.0
FIG5_N = [1, 2, 3]
FIG5_G = {"weak": 0.01, "strong": 20.0}
FIG5_SWEEP = "0.01:0.99:50"


# === PARAMETER RESOLUTION ===

def _z_columns(axes: int) -> List[str]:
    if axes == 1:
        return ["zx"]
    if axes == 2:
        return ["zx", "zy"]
    return ["zx"] + [f"zy{k}" for k in range(1, axes)]


def _points(config: RunConfig) -> Tuple[List[str], List[Tuple[List[float], List[float]]]]:
    """Header prefix and (prefix values, zs) per sweep point"""
    if config.physical:
        if config.gamma is None and config.softening is None:
            raise DomainError("physical parameters need --gamma or --softening")
        if not config.g:
            raise DomainError("physical parameters need --g")
        trap = config.trap()
        points = []
        for g in config.g:
            zs = zs_from_physics(config.interaction(g), trap)
            points.append(([g] + zs, zs))
        return ["g"] + _z_columns(trap.dimension), points
    if not config.zx:
        raise DomainError("give --zx (with optional --zy) or physical parameters")
    points = [([zx] + list(config.zy), [zx] + list(config.zy)) for zx in config.zx]
    return _z_columns(1 + len(config.zy)), points


def _pairs(config: RunConfig) -> List[int]:
    if not config.N:
        raise DomainError("give --N")
    return list(config.N)


def _manifest(config: RunConfig, **extra) -> Dict:
    return {
        "command": config.subcommand,
        "parameters": config.parameters(),
        "settings": settings.numerics(),
        "version": settings.API_VERSION,
        **extra,
    }


def _target(config: RunConfig, suffix: str = "") -> Optional[Path]:
    if config.output is None:
        return None
    path = Path(config.output)
    if not suffix:
        return path
    return path.with_name(f"{path.stem}_{suffix}{path.suffix}")


def _max_bound(bounds: Sequence[float]) -> float:
    finite = [b for b in bounds if b is not None and math.isfinite(b)]
    return max(finite) if finite else 0.0


# === PER-POINT COMPUTATIONS ===

def _ratio_rows(zs: List[float], Ns: Sequence[int], kind: str, method: str, tail_tol: Optional[float]):
    top = max(Ns) + 1
    if method == "newton":
        table = chi_fermi_newton(power_sums(zs), top)
    else:
        spectrum = spectrum_for_pairs(zs, top, tail_tol)
        table = chi_fermi_dp(spectrum, top) if kind == "fermionic" else chi_bose(spectrum, top)
    linear = 1.0 - power_sum(zs, 2)
    rows = []
    for N in Ns:
        pair = purity_bounds(zs, N) if N >= 1 else None
        rows.append([
            N,
            ratio(table, N),
            pair.lower if pair else None,
            pair.upper if pair else None,
            linear,
        ])
    bound = float(table.tail_bound[-1]) if table.tail_bound is not None else 0.0
    return rows, bound


def _population_rows(zs: List[float], N: int, modes: Sequence[int], tail_tol: Optional[float]):
    # requested modes must survive truncation even when their occupation is below the tail
    spectrum = build_spectrum(zs, tail_tol, pad=max([N] + list(modes)) + 1)
    profile = populations(spectrum, N)
    picked = list(modes) if modes else list(range(min(spectrum.J, 4 * N + 1)))
    rows = []
    for j in picked:
        if j >= spectrum.J:
            raise DomainError("mode index beyond the retained spectrum", {"mode": j, "J": spectrum.J})
        rows.append([N, j, "-".join(str(v) for v in spectrum.label(j)), profile.n[j], profile.lambdas[j]])
    return rows, profile.sum_residual


def _dos_table(zs: List[float], N: int, degeneracy: str, tail_tol: Optional[float]):
    profile = populations(spectrum_for_pairs(zs, N, tail_tol), N)
    count = min(profile.n.size, 4 * N + 1)
    g = shell_degeneracy(degeneracy, profile.n.size)
    values = dos(profile, g)
    energies = energy_axis(count)
    rows = [[N, j, energies[j], profile.n[j], values[j]] for j in range(count)]
    return rows, values, g


def _fit_row(model: str, values: np.ndarray, g: np.ndarray, N: int) -> list:
    result = (fit_fd if model == "fd" else fit_be)(values, g, n_pairs=N)
    return [
        N,
        result.model,
        result.j_mu,
        result.T_eff,
        result.temperature_label,
        result.residual,
        result.converged,
        result.evaluations,
    ]


FIT_COLUMNS = ["N", "model", "j_mu", "T_eff", "T_label", "residual", "converged", "evaluations"]


def _counting_rows(zs: List[float], N: int, t: Optional[int], tail_tol: Optional[float]):
    spectrum = spectrum_for_pairs(zs, N, tail_tol)
    window = t or max(N, 1)
    dist = counting(spectrum, N, window)
    rows = [[N, window, n, p, dist.mean, dist.variance] for n, p in enumerate(dist.probs)]
    return rows, dist


# === SUBCOMMANDS ===

def run_approx(config: RunConfig) -> int:
    if not config.physical or not config.g:
        raise DomainError("approx needs --gamma or --softening and --g")
    rows = []
    for g in config.g:
        approx = solve_equilibrium(config.interaction(g))
        rows.append([g, approx.x0, approx.mu, approx.valid, z_from_mu(approx.mu), z_from_widths(approx.mu)])
    header = ["g", "x0", "mu", "valid", "zx_curvature", "zx_widths"]
    write_table(_target(config), header, rows, _manifest(config), config.format)
    return 0


def run_spectrum(config: RunConfig) -> int:
    columns, points = _points(config)
    rows = []
    tails = []
    for prefix, zs in points:
        spectrum = build_spectrum(zs, config.tail_tol)
        tails.append(spectrum.tail)
        for index in range(spectrum.J):
            rows.append(prefix + list(spectrum.label(index)) + [spectrum.lambdas[index], spectrum.log_lambdas[index]])
    labels = ["j_" + name for name in _z_columns(len(points[0][1]))]
    header = columns + labels + ["lambda", "log_lambda"]
    write_table(_target(config), header, rows, _manifest(config, tails=tails), config.format)
    return 0


def run_entropy(config: RunConfig) -> int:
    columns, points = _points(config)
    alphas = list(config.alphas)

    def evaluate(point):
        prefix, zs = point
        report = entropies(zs, alphas)
        return prefix + [report.linear, report.von_neumann] + [report.renyi[a] for a in alphas] + [
            report.min_entropy, report.max_entropy, report.schmidt_number,
        ]

    rows = run_sweep(evaluate, points, config.workers)
    header = columns + ["SL", "SvN"] + [f"S_{format(a, 'g')}" for a in alphas] + ["Smin", "Smax", "schmidt_number"]
    write_table(_target(config), header, rows, _manifest(config), config.format)
    return 0


def run_chi(config: RunConfig) -> int:
    columns, points = _points(config)
    N = max(_pairs(config))
    rows = []
    if config.method == "partition":
        for prefix, zs in points:
            source = power_sums(zs)
            for n in range(N + 1):
                result = chi_fermi_partition(source, n)
                rows.append(prefix + [n, result.value, result.leading, result.remainder, result.digits_lost])
        header = columns + ["n", "chi", "leading", "remainder", "digits_lost"]
        write_table(_target(config), header, rows, _manifest(config), config.format)
        return 0

    bounds = []
    for prefix, zs in points:
        if config.method == "newton":
            table = chi_fermi_newton(power_sums(zs), N)
        else:
            spectrum = spectrum_for_pairs(zs, N, config.tail_tol)
            table = chi_fermi_dp(spectrum, N) if config.kind == "fermionic" else chi_bose(spectrum, N)
        tail = table.tail_bound if table.tail_bound is not None else np.zeros(N + 1)
        bounds.append(float(tail[-1]))
        for n in range(N + 1):
            rows.append(prefix + [n, table.logchi[n], table.value(n), tail[n]])
    header = columns + ["n", "logchi", "chi", "tail_bound"]
    write_table(_target(config), header, rows, _manifest(config, tail_bound_max=_max_bound(bounds)), config.format)
    return 0


def run_ratio(config: RunConfig) -> int:
    """
    χ_{N+1}/χ_N with purity bounds and linear entropy

    One spectrum and one table to max(N) + 1 per sweep point; rows follow the
    sweep order, then the N list order.
    """
    columns, points = _points(config)
    Ns = _pairs(config)
    evaluate = partial(_ratio_rows, Ns=Ns, kind=config.kind, method=config.method, tail_tol=config.tail_tol)
    results = run_sweep(lambda point: evaluate(point[1]), points, config.workers)
    rows = [prefix + row for (prefix, _), (block, _) in zip(points, results) for row in block]
    manifest = _manifest(config, tail_bound_max=_max_bound([bound for _, bound in results]))
    header = columns + ["N", "ratio", "lower", "upper", "SL"]
    write_table(_target(config), header, rows, manifest, config.format)
    return 0


def run_populations(config: RunConfig) -> int:
    columns, points = _points(config)
    jobs = [(prefix, zs, N) for prefix, zs in points for N in _pairs(config)]
    results = run_sweep(lambda job: _population_rows(job[1], job[2], config.modes, config.tail_tol), jobs, config.workers)
    rows = [job[0] + row for job, (block, _) in zip(jobs, results) for row in block]
    residual = max(res for _, res in results)
    header = columns + ["N", "mode", "label", "n", "lambda"]
    write_table(_target(config), header, rows, _manifest(config, sum_residual_max=residual), config.format)
    return 0


def run_dos(config: RunConfig) -> int:
    """DOS table plus one fit summary row per (point, N, model)"""
    columns, points = _points(config)
    dos_rows, fit_rows = [], []
    for prefix, zs in points:
        for N in _pairs(config):
            rows, values, g = _dos_table(zs, N, config.degeneracy, config.tail_tol)
            dos_rows.extend(prefix + row for row in rows)
            fit_rows.extend(prefix + _fit_row(model, values, g, N) for model in config.fits)
    manifest = _manifest(config)
    write_table(_target(config), columns + ["N", "j", "energy", "n", "dos"], dos_rows, manifest, config.format)
    write_table(_target(config, "fits"), columns + FIT_COLUMNS, fit_rows, manifest, config.format)
    return 0


def run_fit(config: RunConfig) -> int:
    columns, points = _points(config)
    jobs = [(prefix, zs, N, model) for prefix, zs in points for N in _pairs(config) for model in config.fits]

    def evaluate(job):
        prefix, zs, N, model = job
        _, values, g = _dos_table(zs, N, config.degeneracy, config.tail_tol)
        return prefix + _fit_row(model, values, g, N)

    rows = run_sweep(evaluate, jobs, config.workers)
    write_table(_target(config), columns + FIT_COLUMNS, rows, _manifest(config), config.format)
    return 0


def run_counting(config: RunConfig) -> int:
    columns, points = _points(config)
    jobs = [(prefix, zs, N) for prefix, zs in points for N in _pairs(config)]
    results = run_sweep(lambda job: _counting_rows(job[1], job[2], config.t, config.tail_tol), jobs, config.workers)
    rows = [job[0] + row for job, (block, _) in zip(jobs, results) for row in block]
    header = columns + ["N", "t", "n", "P", "mean", "variance"]
    write_table(_target(config), header, rows, _manifest(config), config.format)
    return 0


def _density_tables(config: RunConfig, strengths: Sequence[float], Ns: Sequence[int]):
    grid = GridSpec(points=config.grid_points or settings.GRID_POINTS, half_width=config.half_width)
    profile_rows, peak_rows = [], []
    for g in strengths:
        for N in Ns:
            result = wigner_profile(
                config.interaction(g), N, grid, config.prominence, config.tail_tol, config.validate_basis,
            )
            density = result.grid
            profile_rows.extend(
                [g, N, x, a, b, total]
                for x, a, b, total in zip(density.x, density.rho_a, density.rho_b, density.rho_total)
            )
            peak_rows.append([
                g, N, result.approx.x0, result.approx.mu, result.basis.width, result.separation,
                result.approx.valid, result.basis.z_implied, result.basis.z_formula,
                result.peaks, result.regime.value, density.norm,
            ])
    profile_header = ["g", "N", "x", "rho_a", "rho_b", "rho_total"]
    peak_header = ["g", "N", "x0", "mu", "width", "x0_over_w", "valid", "z_implied", "z_formula", "peaks", "regime", "norm"]
    return profile_header, profile_rows, peak_header, peak_rows


def run_density(config: RunConfig) -> int:
    if not config.physical or not config.g:
        raise DomainError("density needs --gamma or --softening and --g")
    if config.epsilon:
        raise DomainError("density profiles are one-dimensional; drop --epsilon")
    profile_header, profile_rows, peak_header, peak_rows = _density_tables(config, config.g, _pairs(config))
    manifest = _manifest(config)
    write_table(_target(config), profile_header, profile_rows, manifest, config.format)
    write_table(_target(config, "peaks"), peak_header, peak_rows, manifest, config.format)
    return 0


def run_oracle(config: RunConfig) -> int:
    """Archive the z_x arbitration and the bosonic convention report as JSON"""
    mus = config.mu or [math.sqrt(3.0), 3.0]
    zs = [config.zx[0]] + list(config.zy) if config.zx else [0.3, 0.5]
    N = max(config.N) if config.N else 2
    payload = {
        "parameters": config.parameters(),
        "settings": settings.numerics(),
        "version": settings.API_VERSION,
        "arbitration": [arbitrate_zx(mu).model_dump() for mu in mus],
        "bose_convention": bose_convention_report(zs, N).model_dump(),
    }
    write_json(_target(config), payload)
    return 0


# === FIGURE PRESETS ===

def _figure_config(config: RunConfig, **overrides) -> RunConfig:
    base = {
        "subcommand": "figure",
        "preset": config.preset,
        "tail_tol": config.tail_tol,
        "workers": config.workers,
        "format": "csv",
    }
    base.update(overrides)
    return RunConfig(**base)


def _write_panel(outdir: Path, name: str, header, rows, config: RunConfig, **extra) -> None:
    write_table(outdir / name, header, rows, _manifest(config, panel=name, **extra))


def figure_ratio(outdir: Path, config: RunConfig) -> None:
    """Normalization ratio vs z_x for the N list, with bounds and S_L"""
    zs = parse_sweep(FIG1_SWEEP)
    panel = _figure_config(config, zx=zs, N=FIG1_N)
    evaluate = partial(_ratio_rows, Ns=FIG1_N, kind="fermionic", method="dp", tail_tol=config.tail_tol)
    results = run_sweep(lambda z: evaluate([z]), zs, config.workers)
    rows = [[z] + row for z, (block, _) in zip(zs, results) for row in block]
    bound = _max_bound([b for _, b in results])
    _write_panel(outdir, "fig1_ratio.csv", ["zx", "N", "ratio", "lower", "upper", "SL"], rows, panel, tail_bound_max=bound)


def figure_populations(outdir: Path, config: RunConfig) -> None:
    zs = parse_sweep(FIG2_SWEEP)
    panel = _figure_config(config, zx=zs, N=FIG2_N, modes=FIG2_MODES)
    jobs = [(z, N) for N in FIG2_N for z in zs]
    results = run_sweep(lambda job: _population_rows([job[0]], job[1], FIG2_MODES, config.tail_tol), jobs, config.workers)
    rows = [[z] + row for (z, _), (block, _) in zip(jobs, results) for row in block]
    residual = max(res for _, res in results)
    header = ["zx", "N", "mode", "label", "n", "lambda"]
    _write_panel(outdir, "fig2_populations.csv", header, rows, panel, sum_residual_max=residual)


def figure_dos(outdir: Path, config: RunConfig) -> None:
    """DOS with FD/BE fits at the listed z_x, then (j_μ, T̃) along a z_x sweep"""
    panel = _figure_config(config, zx=FIG3_Z, N=FIG3_N, fits=["fd", "be"])
    dos_rows, fit_rows = [], []
    for N in FIG3_N:
        for z in FIG3_Z:
            rows, values, g = _dos_table([z], N, "1d", config.tail_tol)
            dos_rows.extend([z] + row for row in rows)
            fit_rows.extend([z] + _fit_row(model, values, g, N) for model in ("fd", "be"))
    _write_panel(outdir, "fig3_dos.csv", ["zx", "N", "j", "energy", "n", "dos"], dos_rows, panel)
    _write_panel(outdir, "fig3_fits.csv", ["zx"] + FIT_COLUMNS, fit_rows, panel)

    sweep = parse_sweep(FIG3_SWEEP)
    sweep_panel = _figure_config(config, zx=sweep, N=FIG3_N, fits=["fd"])
    sweep_rows = []
    for N in FIG3_N:
        for z, result in fit_sweep(sweep, N, config.tail_tol):
            sweep_rows.append([z, N, result.j_mu, result.T_eff, result.temperature_label, result.residual, result.converged])
    header = ["zx", "N", "j_mu", "T_eff", "T_label", "residual", "converged"]
    _write_panel(outdir, "fig3_fit_sweep.csv", header, sweep_rows, sweep_panel)


def figure_counting(outdir: Path, config: RunConfig) -> None:
    panel = _figure_config(config, zx=FIG4_Z, N=[FIG4_N], t=FIG4_N)
    rows = []
    for z in FIG4_Z:
        block, _ = _counting_rows([z], FIG4_N, FIG4_N, config.tail_tol)
        rows.extend([z, N, t, n, p] for N, t, n, p, _, _ in block)
    _write_panel(outdir, "fig4_counting.csv", ["zx", "N", "t", "n", "P"], rows, panel)

    sweep = parse_sweep(FIG4_SWEEP)
    sweep_panel = _figure_config(config, zx=sweep, N=[FIG4_N], t=FIG4_N)
    stats = run_sweep(lambda z: _counting_rows([z], FIG4_N, FIG4_N, config.tail_tol)[1], sweep, config.workers)
    rows = [[z, d.mean, d.variance] for z, d in zip(sweep, stats)]
    _write_panel(outdir, "fig4_variance.csv", ["zx", "mean", "variance"], rows, sweep_panel)

    evaluate = partial(_ratio_rows, Ns=[FIG4_N], kind="fermionic", method="dp", tail_tol=config.tail_tol)
    results = run_sweep(lambda z: evaluate([z]), sweep, config.workers)
    rows = [[z] + block[0][1:4] for z, (block, _) in zip(sweep, results)]
    _write_panel(outdir, "fig4_ratio.csv", ["zx", "ratio", "lower", "upper"], rows, sweep_panel)


def figure_density(outdir: Path, config: RunConfig) -> None:
    """Weak (Friedel) and strong (Wigner) profiles for γ = 1, plus ratio vs z_x with the Coulomb markers"""
    strengths = list(FIG5_G.values())
    panel = _figure_config(config, gamma=FIG5_GAMMA, g=strengths, N=FIG5_N)
    profile_header, profile_rows, peak_header, peak_rows = _density_tables(panel, strengths, FIG5_N)
    _write_panel(outdir, "fig5_density.csv", profile_header, profile_rows, panel)
    _write_panel(outdir, "fig5_peaks.csv", peak_header, peak_rows, panel)

    mu = solve_equilibrium(panel.interaction(strengths[-1])).mu
    markers = {"zx_curvature": z_from_mu(mu), "zx_widths": z_from_widths(mu)}
    sweep = parse_sweep(FIG5_SWEEP)
    sweep_panel = _figure_config(config, zx=sweep, N=FIG5_N)
    evaluate = partial(_ratio_rows, Ns=FIG5_N, kind="fermionic", method="dp", tail_tol=config.tail_tol)
    results = run_sweep(lambda z: evaluate([z]), sweep, config.workers)
    rows = [[z] + block_row[:4] for z, (block, _) in zip(sweep, results) for block_row in block]
    _write_panel(outdir, "fig5_ratio.csv", ["zx", "N", "ratio", "lower", "upper"], rows, sweep_panel, markers=markers)


FIGURES = {
    1: figure_ratio,
    2: figure_populations,
    3: figure_dos,
    4: figure_counting,
    5: figure_density,
}


def run_figure(config: RunConfig) -> int:
    if config.preset is None:
        raise DomainError("figure needs --preset 1..5")
    outdir = Path(config.output or "figures")
    outdir.mkdir(parents=True, exist_ok=True)
    logger.info("figure preset %d -> %s", config.preset, outdir)
    FIGURES[config.preset](outdir, config)
    return 0


def run_serve(config: RunConfig) -> int:
    from main import serve

    serve()
    return 0


COMMANDS = {
    "approx": run_approx,
    "spectrum": run_spectrum,
    "entropy": run_entropy,
    "chi": run_chi,
    "ratio": run_ratio,
    "populations": run_populations,
    "dos": run_dos,
    "fit": run_fit,
    "counting": run_counting,
    "density": run_density,
    "figure": run_figure,
    "oracle": run_oracle,
    "serve": run_serve,
}


# === ARGUMENTS ===

def _sweep_arg(text: str) -> List[float]:
    return parse_sweep(text)


def _floats(text: str) -> List[float]:
    return parse_list(text, float)


def _ints(text: str) -> List[int]:
    return parse_list(text, int)


def _alphas(text: str) -> List[float]:
    return [math.inf if item.strip().lower() in ("inf", "infinity") else float(item) for item in text.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="Output file (directory for figure); stdout when omitted")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--workers", type=int, default=settings.WORKERS)
    common.add_argument("--log-level", default=None)
    common.add_argument("--tail-tol", type=float, default=None)

    source = argparse.ArgumentParser(add_help=False)
    physical = source.add_argument_group("physical parameters")
    physical.add_argument("--gamma", type=float, default=None, help="Power-law exponent of g/r^gamma")
    physical.add_argument("--softening", type=float, default=None, help="Soft-Coulomb softening length")
    physical.add_argument("--g", type=_floats, default=[], help="Interaction strengths, comma list")
    physical.add_argument("--epsilon", type=_floats, default=[], help="Transverse anisotropies, comma list")
    direct = source.add_argument_group("direct parameters")
    direct.add_argument("--zx", "--zx-sweep", dest="zx", type=_sweep_arg, default=[], help="start:stop:count or comma list")
    direct.add_argument("--zy", type=_floats, default=[], help="One value per transverse axis")

    pairs = argparse.ArgumentParser(add_help=False)
    pairs.add_argument("--N", type=_ints, default=[], help="Pair counts, comma list (a:b ranges allowed)")

    parser = argparse.ArgumentParser(prog="coboson", description=settings.API_DESCRIPTION)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("approx", parents=[common, source])
    sub.add_parser("spectrum", parents=[common, source])
    entropy = sub.add_parser("entropy", parents=[common, source])
    entropy.add_argument("--alpha", dest="alphas", type=_alphas, default=[2.0])
    chi = sub.add_parser("chi", parents=[common, source, pairs])
    chi.add_argument("--kind", choices=["fermionic", "bosonic"], default="fermionic")
    chi.add_argument("--method", choices=["dp", "newton", "partition"], default="dp")
    ratio_cmd = sub.add_parser("ratio", parents=[common, source, pairs])
    ratio_cmd.add_argument("--kind", choices=["fermionic", "bosonic"], default="fermionic")
    ratio_cmd.add_argument("--method", choices=["dp", "newton"], default="dp")
    pops = sub.add_parser("populations", parents=[common, source, pairs])
    pops.add_argument("--modes", type=_ints, default=[])
    for name in ("dos", "fit"):
        cmd = sub.add_parser(name, parents=[common, source, pairs])
        cmd.add_argument("--fit", dest="fits", type=lambda text: parse_list(text, str), default=["fd"])
        cmd.add_argument("--degeneracy", choices=["1d", "2d"], default="1d")
    count = sub.add_parser("counting", parents=[common, source, pairs])
    count.add_argument("--t", type=int, default=None)
    density = sub.add_parser("density", parents=[common, source, pairs])
    density.add_argument("--points", dest="grid_points", type=int, default=None)
    density.add_argument("--half-width", type=float, default=None)
    density.add_argument("--prominence", type=float, default=None)
    density.add_argument("--no-validate", dest="validate_basis", action="store_false")
    figure = sub.add_parser("figure", parents=[common])
    figure.add_argument("--preset", type=int, choices=sorted(FIGURES), required=True)
    oracle = sub.add_parser("oracle", parents=[common, source, pairs])
    oracle.add_argument("--mu", type=_floats, default=[])
    sub.add_parser("serve")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {key: value for key, value in vars(args).items() if value is not None}
    values.pop("log_level", None)
    values["output"] = values.pop("out", None)
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(getattr(args, "log_level", None))
    try:
        config = _config_from_args(args)
        return COMMANDS[config.subcommand](config)
    except ValidationError as e:
        logger.error("invalid arguments: %s", e)
        return EXIT_ARGUMENTS
    except CobosonError as e:
        logger.error("%s: %s", type(e).__name__, e.message)
        return e.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
