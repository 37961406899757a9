"""
Command-line interface for scatter2d.

Every command reads a JSON run configuration and writes a CSV curve plus a
JSON summary into the output directory:

- ``phase-shifts``: m, delta_quantum, delta_wkb, delta_eikonal
- ``cross-section``: theta, dcs_quantum, dcs_classical, dcs_spa, dcs_airy
- ``deflection``: b, theta_defl, r0 with rainbow and orbiting summaries

Numbers are written with 12 significant digits. An empty cell marks a point
where a method failed or does not apply.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (nothing
written), 4 partial results written.
"""

import csv
import json
import math
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, NoReturn, Optional, Sequence

import click
import numpy as np

from scatter2d.classical import (
    classical_dcs_2d,
    classical_total_2d,
    default_b_grid,
    deflection_curve,
    detect_orbiting,
)
from scatter2d.config import (
    AppendixBSpec,
    RunConfig,
    Settings,
    build_potential,
    load_config,
)
from scatter2d.errors import (
    ConfigError,
    DomainError,
    NoExtremum,
    NumericalError,
    Scatter2DError,
)
from scatter2d.logging_config import get_logger, set_level
from scatter2d.parallel import parallel_map, set_worker_count
from scatter2d.potential import RadialPotential
from scatter2d.quantum import (
    PhaseShiftTable,
    ScatteringSetup,
    default_setup,
    differential_cross_section,
    optical_theorem_cross_section,
    phase_shift_table,
    principal_value,
    radial_phase_shift,
    total_cross_section,
)
from scatter2d.semiclassical import (
    airy_amplitude_dcs,
    eikonal_phase,
    find_rainbow,
    semiclassical_dcs,
    wkb_phase_shift,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4

DEFAULT_THETAS = np.linspace(math.pi / 180.0, math.pi, 180)


def _exit(code: int) -> NoReturn:
    click.get_current_context().exit(code)


def _cell(value: Optional[float]) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return f"{value:.12g}"


def _json_number(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(f"{value:.12g}")


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) if not isinstance(v, str) else v for v in row])


def _write_summary(path: Path, summary: Dict[str, Any]) -> None:
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


class Diagnostics:
    """Per-method failures collected while a command runs."""

    def __init__(self) -> None:
        self.entries: List[Dict[str, Any]] = []

    def record(self, method: str, where: str, error: Exception) -> None:
        logger.warning("%s failed at %s: %s", method, where, error)
        self.entries.append(
            {"method": method, "where": where, "error": type(error).__name__, "message": str(error)}
        )

    def __bool__(self) -> bool:
        return bool(self.entries)


def _guarded(
    diagnostics: Diagnostics, method: str, fn: Callable[[Any], float], items: Sequence[Any], label: str
) -> List[Optional[float]]:
    """Map fn over items; failures become None cells and diagnostics entries."""

    def run(item: Any) -> Any:
        try:
            return fn(item)
        except NumericalError as e:
            return e

    values: List[Optional[float]] = []
    for item, result in zip(items, parallel_map(run, items)):
        if isinstance(result, Exception):
            diagnostics.record(method, f"{label}={item}", result)
            values.append(None)
        else:
            values.append(result)
    return values


def _prepare(config_path: str, threads: Optional[int]) -> tuple[RunConfig, RadialPotential]:
    if threads is not None:
        set_worker_count(threads)
    try:
        config = load_config(config_path)
        return config, build_potential(config)
    except ConfigError as e:
        click.echo(f"Configuration error: {e}", err=True)
        _exit(EXIT_CONFIG)


def _finish(out: Path, stem: str, diagnostics: Diagnostics, summary: Dict[str, Any]) -> int:
    summary["diagnostics"] = diagnostics.entries
    _write_summary(out / f"{stem}.json", summary)
    click.echo(f"\nWrote {out / (stem + '.csv')} and {out / (stem + '.json')}")
    if diagnostics:
        click.echo(f"{len(diagnostics.entries)} point(s) failed; see diagnostics", err=True)
        return EXIT_PARTIAL
    return EXIT_OK


def _all_failed(columns: Sequence[Sequence[Optional[float]]]) -> bool:
    return all(v is None for column in columns for v in column)


def _setup(config: RunConfig, pot: RadialPotential) -> ScatteringSetup:
    try:
        return default_setup(pot, config.k, config.m_max, config.r_match, config.grid_step)
    except DomainError as e:
        click.echo(f"Configuration error: {e}", err=True)
        _exit(EXIT_CONFIG)


def _b_grid(config: RunConfig, pot: RadialPotential) -> np.ndarray:
    return config.b_grid.values() if config.b_grid is not None else default_b_grid(pot)


def _theta_grid(config: RunConfig) -> np.ndarray:
    return config.theta_grid.values() if config.theta_grid is not None else DEFAULT_THETAS


def common_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    fn = click.option(
        "--threads", type=click.IntRange(min=1), default=None, help="Worker threads (overrides SCATTER2D_THREADS)"
    )(fn)
    fn = click.option(
        "--out",
        type=click.Path(file_okay=False, path_type=Path),
        default=Path("."),
        show_default=True,
        help="Output directory",
    )(fn)
    fn = click.option(
        "--config",
        "config_path",
        type=click.Path(dir_okay=False),
        required=True,
        help="JSON run configuration",
    )(fn)
    return fn


@click.group()
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
def cli(log_level: Optional[str]) -> None:
    """scatter2d: quantum, classical and semiclassical scattering in two dimensions."""
    try:
        settings = Settings.from_env()
    except ConfigError as e:
        click.echo(f"Configuration error: {e}", err=True)
        _exit(EXIT_CONFIG)
    set_level(log_level or settings.log_level)
    if settings.threads is not None:
        set_worker_count(settings.threads)


@cli.command("phase-shifts")
@common_options
def phase_shifts(config_path: str, out: Path, threads: Optional[int]) -> None:
    """Quantum, WKB and eikonal phase shifts per partial wave.

    Columns: m, delta_quantum, delta_wkb, delta_eikonal, all reduced to
    (-pi/2, pi/2]. The summary holds sigma_total and the m_max used.
    """
    config, pot = _prepare(config_path, threads)
    setup = _setup(config, pot)
    k = config.k
    ms = list(range(setup.m_max + 1))
    diagnostics = Diagnostics()
    click.echo(f"Phase shifts for {pot.label} at k={k:g}, m_max={setup.m_max}...")

    quantum = _guarded(diagnostics, "quantum", lambda m: radial_phase_shift(pot, setup, m), ms, "m")
    wkb = _guarded(
        diagnostics, "wkb", lambda m: principal_value(wkb_phase_shift(pot, k, m)), ms, "m"
    )
    eikonal = _guarded(
        diagnostics, "eikonal", lambda m: principal_value(eikonal_phase(pot, k, m / k)), ms, "m"
    )
    if _all_failed([quantum, wkb, eikonal]):
        click.echo("All methods failed; nothing written", err=True)
        _exit(EXIT_NUMERICAL)

    out.mkdir(parents=True, exist_ok=True)
    _write_csv(
        out / "phase_shifts.csv",
        ["m", "delta_quantum", "delta_wkb", "delta_eikonal"],
        ([str(m), q, w, e] for m, q, w, e in zip(ms, quantum, wkb, eikonal)),
    )
    summary: Dict[str, Any] = {"command": "phase-shifts", "k": k, "m_max": setup.m_max}
    if all(q is not None for q in quantum):
        table = PhaseShiftTable(k=k, deltas=tuple(quantum))  # type: ignore[arg-type]
        summary["sigma_total"] = _json_number(total_cross_section(table))
        summary["sigma_optical"] = _json_number(optical_theorem_cross_section(table))
        click.echo("=" * 50)
        click.echo(f"sigma_total = {summary['sigma_total']}")
    _exit(_finish(out, "phase_shifts", diagnostics, summary))


@cli.command("cross-section")
@common_options
def cross_section(config_path: str, out: Path, threads: Optional[int]) -> None:
    """Differential cross sections by four methods on the theta grid.

    Columns: theta, dcs_quantum, dcs_classical, dcs_spa, dcs_airy. Classical
    values are 0 on the dark side. SPA cells are empty near caustics, Airy
    cells outside the rainbow window or when there is no rainbow. The summary
    holds the rainbow, sigma_quantum and sigma_classical = 2 b_max.
    """
    config, pot = _prepare(config_path, threads)
    setup = _setup(config, pot)
    k = config.k
    thetas = _theta_grid(config)
    tol = config.tolerances
    diagnostics = Diagnostics()
    n = thetas.size
    click.echo(f"Cross sections for {pot.label} at k={k:g} on {n} angles...")

    quantum: List[Optional[float]] = [None] * n
    sigma_quantum: Optional[float] = None
    try:
        table = phase_shift_table(pot, setup)
        quantum = list(differential_cross_section(table, thetas).values)
        sigma_quantum = total_cross_section(table)
    except NumericalError as e:
        diagnostics.record("quantum", "phase_shift_table", e)

    curve = deflection_curve(pot, k, _b_grid(config, pot))
    for b, msg in curve.failures.items():
        diagnostics.entries.append(
            {"method": "deflection", "where": f"b={b}", "error": "NumericalError", "message": msg}
        )
    classical = _guarded(
        diagnostics, "classical", lambda t: classical_dcs_2d(curve, t).value, list(thetas), "theta"
    )

    spa: List[Optional[float]] = [None] * n
    try:
        spa = list(
            semiclassical_dcs(
                curve, thetas, kappa_max=config.kappa_max, slope_floor=tol.slope_floor
            ).values
        )
    except NumericalError as e:
        diagnostics.record("spa", "sweep", e)

    airy: List[Optional[float]] = [None] * n
    rainbow: Optional[Dict[str, Any]] = None
    try:
        info = find_rainbow(pot, k, (float(curve.bs[0]), float(curve.bs[-1])), samples=81)
        rainbow = {
            "b_r": _json_number(info.b_r),
            "theta_r": _json_number(info.theta_r),
            "theta_dd": _json_number(info.theta_dd),
        }
        for i, theta in enumerate(thetas):
            result = airy_amplitude_dcs(info, k, float(theta), window=tol.airy_window)
            airy[i] = result.value if result.in_window else None
    except NoExtremum:
        logger.info("No rainbow on the impact-parameter grid")
    except NumericalError as e:
        diagnostics.record("airy", "find_rainbow", e)

    columns = [quantum, classical, spa, airy]
    if _all_failed([quantum, classical]) and not any(v is not None for v in spa + airy):
        click.echo("All methods failed; nothing written", err=True)
        _exit(EXIT_NUMERICAL)

    out.mkdir(parents=True, exist_ok=True)
    _write_csv(
        out / "cross_section.csv",
        ["theta", "dcs_quantum", "dcs_classical", "dcs_spa", "dcs_airy"],
        ([float(t), *(col[i] for col in columns)] for i, t in enumerate(thetas)),
    )
    summary: Dict[str, Any] = {
        "command": "cross-section",
        "k": k,
        "m_max": setup.m_max,
        "rainbow": rainbow,
        "sigma_quantum": _json_number(sigma_quantum),
        "sigma_classical": _json_number(
            classical_total_2d(None, config.b_max if config.b_max is not None else pot.outer_radius)
        ),
    }
    _exit(_finish(out, "cross_section", diagnostics, summary))


@cli.command("deflection")
@common_options
def deflection_cmd(config_path: str, out: Path, threads: Optional[int]) -> None:
    """Deflection function Theta(b) with rainbow and orbiting summaries.

    Columns: b, theta_defl, r0. For the appendix_b potential the summary also
    reports E against the rainbow threshold 3A/(2R_c).
    """
    config, pot = _prepare(config_path, threads)
    k = config.k
    bs = _b_grid(config, pot)
    diagnostics = Diagnostics()
    click.echo(f"Deflection function for {pot.label} at k={k:g} on {bs.size} impact parameters...")

    curve = deflection_curve(pot, k, bs)
    for b, msg in curve.failures.items():
        diagnostics.entries.append(
            {"method": "deflection", "where": f"b={b}", "error": "NumericalError", "message": msg}
        )
    if np.all(np.isnan(curve.thetas_defl)):
        click.echo("Deflection failed on every impact parameter; nothing written", err=True)
        _exit(EXIT_NUMERICAL)

    out.mkdir(parents=True, exist_ok=True)
    _write_csv(
        out / "deflection.csv",
        ["b", "theta_defl", "r0"],
        zip(curve.bs.tolist(), curve.thetas_defl.tolist(), curve.turning_points.tolist()),
    )

    summary: Dict[str, Any] = {"command": "deflection", "k": k, "energy": k * k}
    try:
        info = find_rainbow(pot, k, (float(bs[0]), float(bs[-1])), samples=81)
        summary["rainbow_exists"] = True
        summary["rainbow"] = {
            "b_r": _json_number(info.b_r),
            "theta_r": _json_number(info.theta_r),
            "theta_dd": _json_number(info.theta_dd),
        }
    except NoExtremum:
        summary["rainbow_exists"] = False
        summary["rainbow"] = None
    except NumericalError as e:
        diagnostics.record("rainbow", "find_rainbow", e)

    try:
        orbit = detect_orbiting(pot, k)
        summary["orbiting"] = {
            "exists": orbit.exists,
            "b0": _json_number(orbit.b0),
            "r0": _json_number(orbit.r0),
            "log_coeff_above": _json_number(orbit.log_coeff_above),
            "log_coeff_below": _json_number(orbit.log_coeff_below),
        }
    except NumericalError as e:
        diagnostics.record("orbiting", "detect_orbiting", e)

    if isinstance(config.potential, AppendixBSpec):
        threshold = 1.5 * config.potential.A / config.potential.R_c
        summary["appendix_b_threshold"] = {
            "value": _json_number(threshold),
            "energy_above": k * k > threshold,
        }

    click.echo("=" * 50)
    click.echo(f"Rainbow: {'yes' if summary.get('rainbow_exists') else 'no'}")
    _exit(_finish(out, "deflection", diagnostics, summary))


def main() -> None:
    try:
        cli(standalone_mode=True)
    except Scatter2DError as e:
        click.echo(f"Error: {e}", err=True)
        raise SystemExit(EXIT_NUMERICAL)


if __name__ == "__main__":
    main()
