"""
Command dispatch for the simulator: one run config in, one rendered CSV or
JSON artifact and an exit code out.
"""
from __future__ import annotations

import asyncio
import logging
import math
import os
from pathlib import Path
from typing import Any, Awaitable, Callable, NamedTuple, Sequence, TypeVar

import numpy as np
from pydantic import ValidationError

from models.config import (
    CalibrateConfig,
    GateConfig,
    GeometryConfig,
    RunConfig,
    SpectrumConfig,
    SweepConfig,
    T1rhoConfig,
    TwoQubitConfig,
)
from models.geometry import Fluctuator, TripleDotGeometry
from models.noise import QuasistaticNoiseModel
from models.schedule import PulseSchedule, ScheduleDocument
from utils.calibrate import FAMILIES, CalibrationProblem, GateFamily, calibrate_gate, sensitivity_coefficient
from utils.config_hash import config_hash
from utils.csv_output import render_csv, render_json
from utils.dynamics import composite_xpi, gate_x, gate_z
from utils.errors import ConfigError, ExitCode, NonConvergenceError
from utils.geometry import monopole_detunings
from utils.noise import t1rho_pair
from utils.qmath import ComplexMatrix, rotation
from utils.spectrum import spectrum_sweep
from utils.tomography import (
    GATE_NAMES,
    CurvePoint,
    choi_of_unitary,
    gate_infidelity,
    gate_schedule,
    improvement_factors,
    process_fidelity,
    process_leakage,
    process_of_schedule,
    purity,
)
from utils.twoqubit import cnot_protocol, conditional_flip_bound, population_transfer, truth_table_fidelity

logger = logging.getLogger(__name__)

TOOLKIT_VERSION = "0.1.0"
DEFAULT_THREADS = 4
BASIS_LABELS = ("CC", "CE", "EC", "EE")

T = TypeVar("T")


class ArtifactTable(NamedTuple):
    header: tuple[str, ...]
    rows: list[tuple[Any, ...]]
    summary: dict[str, Any]


class RunOutcome(NamedTuple):
    exit_code: ExitCode
    text: str
    table: ArtifactTable


class ExperimentRunner:
    """
    Validates one run config, evaluates it and renders the artifact text.

    Every physics precondition is checked in a preparation step before any
    simulation starts; a failure there raises ConfigError. Independent sweep
    points run concurrently in worker threads, and results are assembled in
    input order.
    """

    def __init__(self, threads: int | None = None):
        if threads is None:
            threads = int(os.getenv("CQSIM_THREADS", str(DEFAULT_THREADS)))
        if threads < 1:
            raise ConfigError(f"CQSIM_THREADS must be >= 1, got {threads}")
        self.threads = threads

    async def run(self, config: RunConfig) -> RunOutcome:
        logger.info(f"Starting '{config.command}' run")
        compute = self._prepare(config)
        table, exit_code = await compute()
        digest = config_hash(config.model_dump(mode="json", exclude={"output_path"}))
        if config.format == "csv":
            annotations = {k: v for k, v in table.summary.items() if not isinstance(v, (list, tuple, dict))}
            text = render_csv(table.header, table.rows, TOOLKIT_VERSION, digest, annotations)
        else:
            report = {
                "command": config.command,
                "columns": list(table.header),
                "rows": [list(row) for row in table.rows],
                **table.summary,
            }
            text = render_json(report, TOOLKIT_VERSION, digest)
        logger.info(f"Finished '{config.command}' run with {len(table.rows)} rows")
        return RunOutcome(exit_code, text, table)

    def _prepare(self, config: RunConfig) -> Callable[[], Awaitable[tuple[ArtifactTable, ExitCode]]]:
        handlers: dict[str, Callable[[Any], Callable[[], Awaitable[tuple[ArtifactTable, ExitCode]]]]] = {
            "spectrum": self._prepare_spectrum,
            "gate": self._prepare_gate,
            "sweep": self._prepare_sweep,
            "t1rho": self._prepare_t1rho,
            "geometry": self._prepare_geometry,
            "calibrate": self._prepare_calibrate,
            "twoqubit": self._prepare_twoqubit,
        }
        try:
            return handlers[config.command](config)
        except (ValueError, ValidationError) as exc:
            raise ConfigError(f"Invalid '{config.command}' configuration: {exc}") from exc

    async def _gather(self, jobs: Sequence[Callable[[], T]]) -> list[T]:
        semaphore = asyncio.Semaphore(self.threads)

        async def bounded(job: Callable[[], T]) -> T:
            async with semaphore:
                return await asyncio.to_thread(job)

        return list(await asyncio.gather(*(bounded(job) for job in jobs)))

    # Command handlers: validate synchronously, return the computation.

    def _prepare_spectrum(self, config: SpectrumConfig):
        eps_q_values = np.linspace(config.eps_q_min_ghz, config.eps_q_max_ghz, config.n_points).tolist()

        async def compute() -> tuple[ArtifactTable, ExitCode]:
            rows = spectrum_sweep(config.t_a_ghz, config.t_b_ghz, config.eps_d_ghz, eps_q_values)
            return ArtifactTable(
                ("eps_q_ghz", "e_low_ghz", "e_mid_ghz", "e_high_ghz"),
                [tuple(row) for row in rows],
                {},
            ), ExitCode.SUCCESS

        return compute

    def _gate_setup(self, config: GateConfig) -> tuple[PulseSchedule, ComplexMatrix]:
        if config.gate == "bare_x":
            segment = gate_x(config.angle_rad, config.t_x_ghz, config.kind)
            return PulseSchedule(kind=config.kind, segments=(segment,)), rotation("x", config.angle_rad)
        if config.gate == "composite_xpi":
            return composite_xpi(config.eps_z_ghz), rotation("x", math.pi)
        if config.gate == "z":
            segment = gate_z(config.angle_rad, config.eps_z_ghz, config.kind)
            return PulseSchedule(kind=config.kind, segments=(segment,)), rotation("z", config.angle_rad)
        document = ScheduleDocument.model_validate_json(Path(str(config.schedule_path)).read_text(encoding="utf-8"))
        return document.to_schedule(), rotation(config.target_axis, config.angle_rad)

    def _prepare_gate(self, config: GateConfig):
        schedule, target = self._gate_setup(config)
        noise_model = config.noise.to_model()
        ideal = choi_of_unitary(target, schedule.kind)

        async def compute() -> tuple[ArtifactTable, ExitCode]:
            process, c2 = await asyncio.gather(
                asyncio.to_thread(process_of_schedule, schedule, noise_model),
                asyncio.to_thread(_gate_sensitivity, schedule),
            )
            fidelity = process_fidelity(ideal, process)
            summary = {
                "gate": config.gate,
                "kind": schedule.kind,
                "fidelity": fidelity,
                "infidelity": 1.0 - fidelity,
                "purity": purity(process),
                "leakage": process_leakage(process),
                "duration_ns": schedule.total_duration_ns,
                "sensitivity_c2": c2,
            }
            header = tuple(summary)
            return ArtifactTable(header, [tuple(summary[key] for key in header)], summary), (
                ExitCode.SUCCESS if math.isfinite(c2) else ExitCode.NON_CONVERGENCE
            )

        return compute

    def _prepare_sweep(self, config: SweepConfig):
        template = QuasistaticNoiseModel(
            kappa=config.kappa,
            grid_n=config.grid_n,
            range_sigmas=config.range_sigmas,
            correlated=config.correlated,
        )
        schedules = {gate: gate_schedule(gate, config.coupling_ghz) for gate in GATE_NAMES}
        sigmas = [float(sigma) for sigma in config.sigma_eps_ghz]

        def job(gate: str, sigma: float) -> Callable[[], float]:
            return lambda: gate_infidelity(schedules[gate], template.with_sigma(sigma))

        async def compute() -> tuple[ArtifactTable, ExitCode]:
            jobs = [job(gate, sigma) for gate in GATE_NAMES for sigma in sigmas]
            values = await self._gather(jobs)
            curves = {
                gate: [CurvePoint(sigma, values[g * len(sigmas) + i]) for i, sigma in enumerate(sigmas)]
                for g, gate in enumerate(GATE_NAMES)
            }
            rows = [
                (sigma, *(curves[gate][i].infidelity for gate in GATE_NAMES))
                for i, sigma in enumerate(sigmas)
            ]
            summary = {
                "coupling_ghz": config.coupling_ghz,
                "kappa": config.kappa,
                "improvement_factors": improvement_factors(curves["cq_bare"], curves["cq_composite"]),
            }
            header = ("sigma_eps_ghz", *(f"infidelity_{gate}" for gate in GATE_NAMES))
            return ArtifactTable(header, rows, summary), ExitCode.SUCCESS

        return compute

    def _prepare_t1rho(self, config: T1rhoConfig):
        async def compute() -> tuple[ArtifactTable, ExitCode]:
            rows = []
            for eps_ac in config.eps_ac_ghz:
                pair = t1rho_pair(
                    eps_ac,
                    config.t_logical_ghz,
                    config.spectral_amplitude,
                    config.kappa,
                    config.p,
                    config.omega_min,
                )
                rows.append((float(eps_ac), pair.rate_cd, pair.rate_cq, pair.ratio))
            summary = {"t_logical_ghz": config.t_logical_ghz, "kappa": config.kappa, "p": config.p}
            return ArtifactTable(("eps_ac_ghz", "rate_cd_per_ns", "rate_cq_per_ns", "ratio"), rows, summary), ExitCode.SUCCESS

        return compute

    def _prepare_geometry(self, config: GeometryConfig):
        geometry = TripleDotGeometry(positions=config.dots_nm)
        fluctuators = [Fluctuator(position=p, relative_permittivity=config.epsilon_r) for p in config.fluctuators_nm]
        for fluctuator in fluctuators:
            if fluctuator.position in geometry.positions:
                raise ValueError(f"Fluctuator at {fluctuator.position} coincides with a dot")

        async def compute() -> tuple[ArtifactTable, ExitCode]:
            shifts = await self._gather([lambda f=f: monopole_detunings(geometry, f) for f in fluctuators])
            rows = [
                (f.position[0], f.position[1], shift.d_eps_d, shift.d_eps_q, shift.ratio)
                for f, shift in zip(fluctuators, shifts)
            ]
            summary = {"spacing_nm": geometry.spacing, "epsilon_r": config.epsilon_r}
            return ArtifactTable(("x_nm", "y_nm", "d_eps_d_ghz", "d_eps_q_ghz", "ratio"), rows, summary), ExitCode.SUCCESS

        return compute

    @staticmethod
    def _family(config: CalibrateConfig) -> GateFamily:
        factory = FAMILIES[config.family]
        if config.family == "x_duration":
            return factory(config.t_x_ghz, config.kind)
        if config.family == "z_duration":
            return factory(config.eps_z_ghz, config.kind)
        if config.family == "x_coupling_duration":
            return factory(config.kind)
        return factory()

    def _prepare_calibrate(self, config: CalibrateConfig):
        problem = CalibrationProblem(
            target=rotation(config.target_axis, config.target_angle_rad),
            bounds=tuple(config.bounds),
            initial=tuple(config.initial) if config.initial is not None else None,
            tolerance=config.tolerance,
            kind=config.kind,
        )
        family = self._family(config)
        family(problem.start)

        async def compute() -> tuple[ArtifactTable, ExitCode]:
            result = await asyncio.to_thread(calibrate_gate, problem, family)
            summary = {
                "family": config.family,
                "parameters": list(result.parameters),
                "objective": result.objective,
                "iterations": result.iterations,
                "converged": result.converged,
                "duration_ns": result.duration_ns,
            }
            header = tuple(f"p{i}" for i in range(len(result.parameters))) + (
                "objective", "iterations", "converged", "duration_ns",
            )
            row = (*result.parameters, result.objective, result.iterations, result.converged, result.duration_ns)
            exit_code = ExitCode.SUCCESS if result.converged else ExitCode.NON_CONVERGENCE
            if not result.converged:
                logger.warning(f"Calibration stopped at objective {result.objective:.3e} above {config.tolerance:.3e}")
            return ArtifactTable(header, [row], summary), exit_code

        return compute

    def _prepare_twoqubit(self, config: TwoQubitConfig):
        schedule = cnot_protocol(config.t2_ghz, config.j_ghz, config.far_detuning_ghz, config.idle_ns)

        async def compute() -> tuple[ArtifactTable, ExitCode]:
            transfer = population_transfer(schedule)
            rows = [(BASIS_LABELS[out], *(float(v) for v in transfer[out])) for out in range(4)]
            summary = {
                "truth_table_fidelity": truth_table_fidelity(schedule),
                "conditional_flip_bound": conditional_flip_bound(config.t2_ghz, config.j_ghz),
            }
            header = ("output", *(f"in_{label}" for label in BASIS_LABELS))
            return ArtifactTable(header, rows, summary), ExitCode.SUCCESS

        return compute


def _gate_sensitivity(schedule: PulseSchedule) -> float:
    """c2 of the gate report; nan when the difference quotients disagree."""
    try:
        return sensitivity_coefficient(schedule, 2)
    except NonConvergenceError as exc:
        logger.warning(f"Gate sensitivity unavailable: {exc}")
        return math.nan
