"""
Scenario runners: each one executes a module pipeline and fills a RunReport
with named acceptance metrics and plot tables.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np
import pydantic
import scipy

from src.bohmian.ensemble import (
    bohmian_two_time_expectation,
    equivariance_check,
    ks_distance,
    ks_scaling_check,
    sample_ensemble,
    transport_ensemble,
)
from src.bohmian.trajectories import integrate_ensemble
from src.core.errors import LabError
from src.core.oscillator import (
    EvolvingState,
    HOEigenbasis,
    displaced_ground_state,
    ho_eigenstate,
    propagate_ho,
    superposition,
)
from src.measurement.chain import run_pipeline
from src.quantum.correlations import (
    DensityOperator,
    correlation_from_distribution,
    heisenberg_position_matrix,
    heisenberg_two_time_product,
    joint_two_time_distribution,
)
from src.two_slit.pair_dynamics import (
    PairConfiguration,
    ghose_claim_check,
    integrate_pair_trajectories,
    node_fraction_prescan,
    predicted_sum_velocity,
)

from .config import DEFAULTS_VERSION, ScenarioConfig
from .models import Metric, RunError, RunReport
from .output import Table, distribution_table, emit_plot_data, trajectory_table, write_report

logger = logging.getLogger(__name__)

Tables = dict[str, Table]

GROUND_TRAJECTORY_STARTS = 100
DISPLACEMENT = 2.0
SCALING_SEEDS = 16
KS_BOUND = 0.03
CSV_TRAJECTORY_MEMBERS = 50


def _basis(config: ScenarioConfig) -> HOEigenbasis:
    grid, params = config.grid(), config.oscillator()
    if config.nmax is None:
        return HOEigenbasis.complete(params, grid)
    return HOEigenbasis.build(params, grid, config.nmax)


def _ground_x2(config: ScenarioConfig) -> float:
    """<X^2> of the oscillator ground state, hbar / (2 m omega)."""
    return config.hbar / (2.0 * config.mass * config.omega)


def run_neumaier(config: ScenarioConfig, report: RunReport, tables: Tables) -> None:
    """Quantum vs Bohmian two-time position correlations of the ground state."""
    grid, params = config.grid(), config.oscillator()
    half = 0.5 * config.period
    t1 = config.t1
    psi0 = ho_eigenstate(0, params, grid)
    truncated = _basis(config)
    complete = truncated if truncated.nmax == grid.n - 1 else HOEigenbasis.complete(params, grid)

    x2 = psi0.expectation_x2()
    report.metrics["x2_quadrature"] = Metric.close_to(x2, _ground_x2(config), 1e-6)

    product = heisenberg_two_time_product(psi0, t1, half, truncated)
    report.metrics["quantum_corr_halfT"] = Metric.close_to(product.real, -x2, 1e-6)
    report.metrics["heisenberg_halfT_imag"] = Metric.at_most(abs(product.imag), 1e-8)

    estimate = bohmian_two_time_expectation(
        psi0, t1, half, params, config.samples, config.seed, truncated, config.integrator_tol
    )
    report.metrics["bohmian_corr_halfT"] = Metric.close_to(estimate.value, x2, 1e-6)
    # five standard errors of a Gaussian x^2 mean
    mc_tolerance = 5.0 * math.sqrt(2.0 / config.samples) * x2
    report.metrics["bohmian_corr_halfT_mc"] = Metric.close_to(estimate.monte_carlo, x2, mc_tolerance)
    report.metrics["sign_discrepancy"] = Metric.close_to(estimate.value - product.real, 2.0 * x2, 2e-6)

    identity = heisenberg_position_matrix(truncated, t1 + half) + heisenberg_position_matrix(truncated, t1)
    report.metrics["heisenberg_identity_max_dev"] = Metric.at_most(float(np.max(np.abs(identity))), 1e-8)

    rho = DensityOperator.pure(psi0)
    sequential = joint_two_time_distribution(rho, t1, half, complete)
    report.metrics["sequential_corr_halfT"] = Metric.close_to(
        correlation_from_distribution(sequential), -x2, 1e-5
    )

    at_tau = sequential if config.tau == half else joint_two_time_distribution(rho, t1, config.tau, complete)
    report.metrics["joint_distribution_total"] = Metric.close_to(at_tau.total(), 1.0, 1e-10)
    tables["distribution"] = distribution_table(grid.points, at_tau.p)

    product_tau = heisenberg_two_time_product(psi0, t1, config.tau, truncated)
    report.info["tau"] = config.tau
    report.info["sequential_corr_tau"] = correlation_from_distribution(at_tau)
    report.info["heisenberg_symmetrized_tau"] = product_tau.real
    report.info["heisenberg_imag_tau"] = product_tau.imag

    starts = sample_ensemble(psi0, GROUND_TRAJECTORY_STARTS, config.seed).initial_positions
    times, positions = integrate_ensemble(
        starts, EvolvingState(psi0, truncated), (0.0, config.period), params, config.integrator_tol
    )
    drift = float(np.max(np.abs(positions - starts[:, None])))
    report.metrics["ground_trajectory_max_drift"] = Metric.at_most(drift, 1e-9)
    tables["trajectories"] = trajectory_table(times, positions)


def run_measurement_chain(config: ScenarioConfig, report: RunReport, tables: Tables) -> None:
    """Pointer-state pipeline against the sequential-measurement trace formula."""
    grid, params = config.grid(), config.oscillator()
    basis = _basis(config)
    psi = propagate_ho(ho_eigenstate(0, params, grid), config.t1, basis)
    rho = DensityOperator.pure(psi)
    x2 = psi.expectation_x2()

    labels = {"0": 0.0, "quarterT": 0.25, "halfT": 0.5}
    for label, fraction in labels.items():
        tau = fraction * config.period
        pipeline = run_pipeline(psi, tau, basis)
        trace = joint_two_time_distribution(rho, 0.0, tau, basis)
        deviation = float(np.max(np.abs(pipeline.p - trace.p)))
        report.metrics[f"pipeline_trace_max_abs_dev_tau_{label}"] = Metric.at_most(deviation, 1e-8)
        if label == "halfT":
            report.metrics["pipeline_corr_halfT"] = Metric.close_to(pipeline.correlation(), -x2, 1e-5)
            report.metrics["trace_corr_halfT"] = Metric.close_to(
                correlation_from_distribution(trace), -x2, 1e-5
            )
            report.metrics["pipeline_total"] = Metric.close_to(pipeline.total(), 1.0, 1e-10)

    at_tau = run_pipeline(psi, config.tau, basis)
    report.info["tau"] = config.tau
    report.info["pipeline_corr_tau"] = at_tau.correlation()
    tables["distribution"] = distribution_table(grid.points, at_tau.p)


def run_ghose(config: ScenarioConfig, report: RunReport, tables: Tables) -> None:
    """Sum law of the two-boson double-slit velocities and its trajectories."""
    params = config.slit()
    check = ghose_claim_check(params, config.samples, config.seed)
    scale = check.scale

    report.metrics["sum_identity_max_abs_dev"] = Metric.at_most(check.analytic_max_abs_dev, 1e-12 * scale)
    report.metrics["sum_identity_fd_max_abs_dev"] = Metric.at_most(check.fd_max_abs_dev, 1e-8 * scale)
    report.metrics["nonvanishing_fraction"] = Metric.at_least(check.nonvanishing_fraction, 1.0)
    report.metrics["skipped_node_fraction"] = Metric.at_most(check.skipped_fraction, 0.05)
    report.metrics["exchange_covariance_max_dev"] = Metric.at_most(check.exchange_max_abs_dev, 1e-12 * scale)
    report.info["node_fraction_prescan"] = node_fraction_prescan(params)
    report.info["analytic_median_abs_dev"] = check.analytic_median_abs_dev
    report.info["fd_median_abs_dev"] = check.fd_median_abs_dev
    report.info["scale"] = scale

    tables["velocity_field"] = Table(
        header=("x1", "x2", "v1", "v2", "vsum", "predicted_vsum"),
        columns=(
            check.x1,
            check.x2,
            check.v1,
            check.v2,
            check.vsum,
            predicted_sum_velocity(check.x1, check.x2, params),
        ),
    )

    initial = PairConfiguration(x1=config.pair_x1, x2=config.pair_x2)
    first, second = integrate_pair_trajectories(initial, params, (0.0, config.t_end), config.integrator_tol)
    s0 = initial.x1 + initial.x2
    expected = s0 * np.exp(params.sum_rate * first.times)
    relative = np.abs(first.positions + second.positions - expected) / np.abs(expected)
    report.metrics["sum_trajectory_max_rel_dev"] = Metric.at_most(float(relative.max()), 1e-6)
    tables["trajectories"] = trajectory_table(first.times, np.vstack([first.positions, second.positions]))


def run_equivariance(config: ScenarioConfig, report: RunReport, tables: Tables) -> None:
    """Transport |psi|^2 ensembles and compare with |psi(t)|^2."""
    grid, params = config.grid(), config.oscillator()
    basis = _basis(config)
    period = config.period
    n, seed, tol = config.samples, config.seed, config.integrator_tol

    ground = ho_eigenstate(0, params, grid)
    mixed = superposition(basis, {0: 1.0, 1: 1.0})
    displaced = displaced_ground_state(params, grid, DISPLACEMENT)
    sample_times = np.linspace(0.0, period, 101)

    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        ks_ground = pool.submit(equivariance_check, ground, 0.5 * period, n, seed, basis, tol)
        ks_mixed = pool.submit(equivariance_check, mixed, 0.5 * period, n, seed, basis, tol)
        moved = pool.submit(transport_ensemble, displaced, period, n, seed, basis, tol, sample_times)
        report.metrics["ks_ground"] = Metric.at_most(ks_ground.result(), KS_BOUND)
        report.metrics["ks_superposition"] = Metric.at_most(ks_mixed.result(), KS_BOUND)
        _, times, positions = moved.result()

    target = EvolvingState(displaced, basis).at(period)
    report.metrics["ks_displaced"] = Metric.at_most(ks_distance(positions[:, -1], target), KS_BOUND)

    shift = positions.mean(axis=0) - positions[:, 0].mean()
    classical = DISPLACEMENT * (np.cos(config.omega * times) - 1.0)
    report.metrics["ehrenfest_mean_max_dev"] = Metric.at_most(float(np.max(np.abs(shift - classical))), 1e-3)

    base = max(1000, n // 4)
    ratio = ks_scaling_check(
        ground, 0.5 * period, base, range(seed, seed + SCALING_SEEDS), basis, config.threads
    )
    report.metrics["ks_scaling_ratio"] = Metric.within(ratio, 2.0 / 1.5, 3.0)
    report.info["ks_scaling_base_samples"] = float(base)

    tables["trajectories"] = trajectory_table(times, positions[:CSV_TRAJECTORY_MEMBERS])


RUNNERS: dict[str, Callable[[ScenarioConfig, RunReport, Tables], None]] = {
    "neumaier-correlations": run_neumaier,
    "measurement-chain": run_measurement_chain,
    "ghose-two-slit": run_ghose,
    "equivariance": run_equivariance,
}


def library_versions() -> dict[str, str]:
    return {"numpy": np.__version__, "scipy": scipy.__version__, "pydantic": pydantic.VERSION}


def run_scenario(config: ScenarioConfig) -> RunReport:
    """
    Run one scenario and write report.json plus its CSV tables to
    config.output_dir.

    Numerical failures raised by the modules are caught and recorded on the
    report; no CSV files are written in that case.
    """
    report = RunReport(
        scenario=config.scenario,
        config=config.model_dump(mode="json"),
        defaults_version=DEFAULTS_VERSION,
        versions=library_versions(),
    )
    tables: Tables = {}
    logger.info(f"Running scenario {config.scenario} (seed={config.seed})")
    started = time.perf_counter()
    try:
        RUNNERS[config.scenario](config, report, tables)
    except LabError as e:
        logger.error(f"Scenario {config.scenario} failed: {type(e).__name__}: {e}")
        report.error = RunError(type=type(e).__name__, message=str(e))
    report.wall_time_s = time.perf_counter() - started

    if report.error is None:
        emit_plot_data(report, tables, config.output_path)
    write_report(report, config.output_path)

    for name in report.failed_metrics():
        metric = report.metrics[name]
        logger.warning(f"Metric {name} failed: value={metric.value:.6g} tolerance={metric.tolerance:.3g}")
    logger.info(f"Scenario {config.scenario} finished in {report.wall_time_s:.2f}s, passed={report.passed}")
    return report
