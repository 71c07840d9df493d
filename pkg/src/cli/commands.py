"""
Subcommand implementations.

Each command turns a RunConfig into result tables. Commands do no I/O; the
entry script attaches the config echo and writes the files. A command
reports converged=False when any fixed-point solve hit its iteration cap.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from src.dispersive import (
    DispersiveCoefficients,
    analytic_coefficients,
    chi_zeta_numeric,
    second_order_coefficients,
)
from src.eigenblocks import (
    EigensolverError,
    block_structure_defect,
    dressed_block,
    dressed_energy,
    full_hamiltonian,
    jc_dressed_energy,
)
from src.metrics import SnrConfig, gamma_1_from_t1, rates_vs_power, snr_curve
from src.model import ModelError, ResonanceError, SystemSpec, TwoPhotonResonanceError
from src.response import (
    DriveSpec,
    SweepDirection,
    avalanche_power,
    bistable_window,
    fixed_point_multiplicity,
    frequency_power_map,
    power_sweep,
    power_to_epsilon,
    ratio_window,
    separation_window,
)

from .output import ResultTable
from .runconfig import ConfigError, RunConfig

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    """Tables produced by one subcommand."""

    tables: list[ResultTable] = field(default_factory=list)
    converged: bool = True


def _system(cfg: RunConfig, num_levels: int | None = None, omega_r: float | None = None) -> SystemSpec:
    try:
        return cfg.system.spec(num_levels=num_levels, omega_r=omega_r)
    except ValueError as e:
        raise ConfigError(f"[system]: {e}") from e


def _nan_if_inf(value: float) -> float:
    return value if math.isfinite(value) else math.nan


def _coeffs_row(spec: SystemSpec, fit_photons: tuple[int, ...]) -> tuple:
    reason = None
    chi_a = zeta_a = n_crit = math.nan
    try:
        analytic = analytic_coefficients(spec)
        chi_a, zeta_a, n_crit = analytic.chi_prime, analytic.zeta_prime, analytic.n_crit
    except TwoPhotonResonanceError:
        reason = "two_photon_resonance"
    except ResonanceError:
        reason = "resonance"

    chi_n = zeta_n = residual = math.nan
    try:
        numeric = chi_zeta_numeric(spec, fit_photons)
        chi_n, zeta_n, residual = numeric.chi_prime, numeric.zeta_prime, numeric.residual
        if numeric.ill_conditioned and reason is None:
            reason = "ill_conditioned"
    except EigensolverError:
        reason = reason or "eigensolver"

    return (
        spec.num_levels,
        spec.omega_r,
        chi_a,
        zeta_a,
        chi_n,
        zeta_n,
        chi_a * zeta_a > 0,
        chi_n * zeta_n > 0,
        _nan_if_inf(n_crit),
        residual,
        reason is not None,
        reason,
    )


def cmd_coeffs(cfg: RunConfig, workers: int = 1) -> CommandResult:
    """Analytic and numeric χ′, ζ′ over the ω_r grid for every ladder size.

    Cells where the analytic expansion is singular or the numeric fit is
    ill-conditioned stay in the table with masked = true. With workers > 1
    the grid points are spread over a process pool.
    """
    table = ResultTable(
        name="coeffs",
        columns=(
            "num_levels",
            "omega_r",
            "chi_prime_analytic",
            "zeta_prime_analytic",
            "chi_prime_numeric",
            "zeta_prime_numeric",
            "same_sign_analytic",
            "same_sign_numeric",
            "n_crit",
            "fit_residual",
            "masked",
            "mask_reason",
        ),
    )
    specs = [
        _system(cfg, num_levels=num_levels, omega_r=omega_r)
        for num_levels in cfg.coeffs.ladders
        for omega_r in cfg.coeffs.grid()
    ]
    row = partial(_coeffs_row, fit_photons=cfg.coeffs.fit_photons)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, specs))
    else:
        rows = [row(spec) for spec in specs]
    for values in rows:
        table.add_row(*values)
    logger.info(f"coeffs: {len(table.rows)} grid points, {workers} worker(s)")
    return CommandResult(tables=[table])


@dataclass(frozen=True)
class SnrScenarios:
    """Coefficient sets of the three weak-driving scenarios at a common |χ′|."""

    same_sign: DispersiveCoefficients
    opposite_sign: DispersiveCoefficients
    constant: DispersiveCoefficients
    n_crit: float


def snr_scenarios(cfg: RunConfig) -> SnrScenarios:
    """Normalize the same-sign, opposite-sign and constant-pull sets to |χ′| = target.

    The ratio ζ′/χ′ of each ladder point is kept, so the pull bends with n̄
    exactly as at the chosen resonator frequency.
    """
    target = cfg.snr.chi_prime_target
    same = analytic_coefficients(_system(cfg, omega_r=cfg.snr.omega_r_same))
    opposite = analytic_coefficients(_system(cfg, omega_r=cfg.snr.omega_r_opposite))
    constant = second_order_coefficients(_system(cfg, omega_r=cfg.snr.omega_r_same))
    for name, coeffs in (("same-sign", same), ("opposite-sign", opposite), ("constant", constant)):
        if coeffs.chi_prime == 0:
            raise ModelError(f"{name} scenario has chi' = 0")
    if not same.same_sign:
        logger.warning(f"chi' and zeta' differ in sign at omega_r={cfg.snr.omega_r_same}")
    if opposite.same_sign:
        logger.warning(f"chi' and zeta' share their sign at omega_r={cfg.snr.omega_r_opposite}")
    return SnrScenarios(
        same_sign=same.scaled(target / abs(same.chi_prime)),
        opposite_sign=opposite.scaled(target / abs(opposite.chi_prime)),
        constant=constant.scaled(target / abs(constant.chi_prime)),
        n_crit=min(same.n_crit, opposite.n_crit),
    )


def cmd_snr(cfg: RunConfig) -> CommandResult:
    """Cavity pull and SNR over n̄ for the three scenarios and every κ/2χ′."""
    scenarios = snr_scenarios(cfg)
    n_max = cfg.snr.n_bar_max or scenarios.n_crit
    if not math.isfinite(n_max):
        raise ConfigError("[snr] n_bar_max is required when n_crit is infinite")
    n_bars = [float(n) for n in np.linspace(0.0, n_max, cfg.snr.points + 1)[1:]]
    gamma_1 = gamma_1_from_t1(cfg.snr.t1_us)

    table = ResultTable(
        name="snr",
        columns=(
            "kappa_over_2chi",
            "n_bar",
            "delta_same",
            "delta_opposite",
            "delta_constant",
            "snr_same",
            "snr_opposite",
            "snr_constant",
        ),
    )
    for ratio in cfg.snr.kappa_over_2chi:
        snr_cfg = SnrConfig(eta=cfg.snr.eta, gamma_1=gamma_1, kappa_over_2chi=ratio)
        same = snr_curve(scenarios.same_sign, snr_cfg, n_bars)
        opposite = snr_curve(scenarios.opposite_sign, snr_cfg, n_bars)
        constant = snr_curve(scenarios.constant, snr_cfg, n_bars)
        for s, o, c in zip(same, opposite, constant):
            table.add_row(ratio, s.n_bar, s.delta, o.delta, c.delta, s.snr, o.snr, c.snr)
    return CommandResult(tables=[table])


def cmd_response(cfg: RunConfig) -> CommandResult:
    """Hysteresis power sweeps of ω_ri and n_i per ladder size and level."""
    options = cfg.solver.options()
    powers = cfg.response.powers()
    converged = True

    summary = ResultTable(
        name="response_avalanche",
        columns=("num_levels", "level", "direction", "avalanche_power_db", "max_n", "converged"),
    )
    separation = ResultTable(
        name="response_separation",
        columns=(
            "num_levels",
            "direction",
            "ratio_threshold",
            "low_db",
            "high_db",
            "width_db",
            "peak_db",
            "peak_ratio",
        ),
    )
    threshold = cfg.response.separation_threshold
    tables = []
    for num_levels in cfg.response.ladders:
        spec = _system(cfg, num_levels=num_levels)
        omega_m = cfg.response.omega_m if cfg.response.omega_m is not None else spec.omega_r
        table = ResultTable(
            name=f"response_M{num_levels}",
            columns=(
                "level",
                "direction",
                "power_db",
                "epsilon",
                "n",
                "omega_ri",
                "converged",
                "residual",
                "iterations",
            ),
        )
        curves = {}
        for level in cfg.response.levels:
            if level >= num_levels:
                continue
            for direction in cfg.response.directions:
                grid = powers if direction == SweepDirection.UP else powers[::-1]
                curve = power_sweep(spec, level, omega_m, grid, direction, options)
                curves[level, direction] = curve
                converged = converged and curve.all_converged
                for power, point in zip(curve.powers, curve.points):
                    table.add_row(
                        level,
                        direction,
                        power,
                        power_to_epsilon(power, spec.kappa),
                        point.n,
                        point.omega_ri,
                        point.converged,
                        point.residual,
                        point.iterations,
                    )
                summary.add_row(
                    num_levels,
                    level,
                    direction,
                    avalanche_power(curve),
                    max(curve.photons),
                    curve.all_converged,
                )
        for direction in cfg.response.directions:
            if (0, direction) not in curves or (1, direction) not in curves:
                continue
            window = separation_window(curves[0, direction], curves[1, direction], threshold)
            if window is None:
                separation.add_row(num_levels, direction, threshold, None, None, None, None, None)
            else:
                separation.add_row(
                    num_levels,
                    direction,
                    threshold,
                    window.low_db,
                    window.high_db,
                    window.width_db,
                    window.peak_db,
                    window.peak_ratio,
                )
                logger.info(
                    f"M={num_levels} {direction.value}: n0/n1 ratio >= {threshold:g} over "
                    f"{window.low_db}..{window.high_db} dB, peak {window.peak_ratio:.3g}"
                )
        tables.append(table)
    if separation.rows:
        tables.append(separation)
    return CommandResult(tables=tables + [summary], converged=converged)


def cmd_map(cfg: RunConfig, workers: int = 1) -> CommandResult:
    """Low-branch photon number over power × ω_m, one table per level.

    With levels 0 and 1 both mapped, a separation table reports for every
    ω_m the power where n_1 − n_0 is largest and the power band where the
    photon ratio of the two states stays above [map] separation_threshold.
    """
    spec = _system(cfg)
    options = cfg.solver.options()
    omegas = cfg.map.omegas()
    powers = cfg.map.powers()
    maps = {}
    tables = []
    converged = True
    for level in cfg.map.levels:
        if level >= spec.num_levels:
            raise ConfigError(f"[map] level {level} outside the {spec.num_levels}-level ladder")
        response = frequency_power_map(spec, level, omegas, powers, options, workers=workers)
        maps[level] = response
        converged = converged and bool(response.converged.all())
        table = ResultTable(
            name=f"map_state{level}",
            columns=("power_db", "omega_m", "n", "omega_ri", "converged"),
        )
        for r, power in enumerate(powers):
            for c, omega in enumerate(omegas):
                table.add_row(
                    power,
                    omega,
                    response.photons[r, c],
                    response.ridge[r, c],
                    response.converged[r, c],
                )
        tables.append(table)

    if 0 in maps and 1 in maps:
        diff = maps[1].photons - maps[0].photons
        table = ResultTable(
            name="map_separation",
            columns=(
                "omega_m",
                "power_db_max_separation",
                "n0",
                "n1",
                "max_separation",
                "ratio_low_db",
                "ratio_high_db",
                "peak_ratio",
            ),
        )
        threshold = cfg.map.separation_threshold
        for c, omega in enumerate(omegas):
            r = int(np.argmax(np.abs(diff[:, c])))
            window = ratio_window(powers, maps[0].photons[:, c], maps[1].photons[:, c], threshold)
            band = (window.low_db, window.high_db, window.peak_ratio) if window is not None else (None, None, None)
            table.add_row(omega, powers[r], maps[0].photons[r, c], maps[1].photons[r, c], diff[r, c], *band)
        tables.append(table)
    return CommandResult(tables=tables, converged=converged)


def cmd_rates(cfg: RunConfig, workers: int = 1) -> CommandResult:
    """Purcell, dressed-decay and dressed-dephasing ratios along the up-sweep."""
    spec = _system(cfg)
    omega_m = cfg.rates.omega_m if cfg.rates.omega_m is not None else spec.omega_r
    try:
        rates = rates_vs_power(
            spec,
            omega_m,
            cfg.rates.powers(),
            dispersions=cfg.dephasing.dispersion_table(spec),
            noise=cfg.dephasing.spectrum(),
            options=cfg.solver.options(),
            workers=workers,
        )
    except ModelError as e:
        raise ConfigError(f"[dephasing]/[system]: {e}") from e

    columns = (
        "power_db",
        "n",
        "converged",
        "gamma_kappa",
        "gamma_kappa_leak",
        "gamma_1d",
        "gamma_1d_leak",
        "gamma_d",
        "gamma_d_leak",
    )
    table = ResultTable(name="rates", columns=columns)
    for row in rates.rows:
        table.add_row(
            row.power_db,
            row.n_photons,
            row.converged,
            row.gamma_kappa,
            row.gamma_kappa_leak,
            row.gamma_1d,
            row.gamma_1d_leak,
            row.gamma_d,
            row.gamma_d_leak,
        )
    return CommandResult(tables=[table], converged=rates.all_converged)


def cmd_oracle(cfg: RunConfig) -> CommandResult:
    """Brute-force references: JC spectrum, block structure, fixed-point count."""
    tables = []

    two_level = _system(cfg, num_levels=2)
    jc = ResultTable(
        name="oracle_jc",
        columns=("n", "level", "energy_blocks", "energy_closed_form", "rel_error"),
    )
    for n in cfg.oracle.jc_photons:
        for level in (0, 1):
            exact = dressed_energy(two_level, n, level)
            closed = jc_dressed_energy(two_level, n, level)
            jc.add_row(n, level, exact, closed, abs(exact - closed) / max(abs(closed), 1.0))
    tables.append(jc)

    spec = _system(cfg)
    cutoff = cfg.oracle.photon_cutoff
    ham, labels = full_hamiltonian(spec, cutoff)
    complete = np.array([n + i <= cutoff for n, i in labels])
    dense = np.sort(np.linalg.eigvalsh(ham[np.ix_(complete, complete)]))
    blocks = np.sort(np.concatenate([dressed_block(spec, n).energies for n in range(cutoff + 1)]))
    structure = ResultTable(
        name="oracle_blocks",
        columns=("num_levels", "photon_cutoff", "max_cross_block_element", "max_spectrum_error"),
    )
    structure.add_row(
        spec.num_levels,
        cutoff,
        block_structure_defect(ham, labels),
        float(np.max(np.abs(dense - blocks))),
    )
    tables.append(structure)

    level = cfg.oracle.level
    if level >= spec.num_levels:
        raise ConfigError(f"[oracle] level {level} outside the {spec.num_levels}-level ladder")
    omega_m = cfg.oracle.omega_m if cfg.oracle.omega_m is not None else spec.omega_r
    powers = cfg.oracle.powers()
    options = cfg.solver.options()
    up = power_sweep(spec, level, omega_m, powers, SweepDirection.UP, options)
    down = power_sweep(spec, level, omega_m, powers[::-1], SweepDirection.DOWN, options)
    window = set(bistable_window(up, down))
    multiplicity = ResultTable(
        name="oracle_multiplicity",
        columns=("power_db", "fixed_points", "n_up", "n_down", "bistable"),
    )
    for power, p_up, p_down in zip(up.powers, up.points, down.points):
        drive = DriveSpec(epsilon=power_to_epsilon(power, spec.kappa), omega_m=omega_m)
        scan = fixed_point_multiplicity(spec, level, drive, points=cfg.oracle.scan_points)
        multiplicity.add_row(power, scan.count, p_up.n, p_down.n, power in window)
    tables.append(multiplicity)

    return CommandResult(tables=tables, converged=up.all_converged and down.all_converged)


COMMANDS = {
    "coeffs": cmd_coeffs,
    "snr": cmd_snr,
    "response": cmd_response,
    "map": cmd_map,
    "rates": cmd_rates,
    "oracle": cmd_oracle,
}
