"""
Charge-qubit simulator - command-line entry point

Runs one experiment described by a JSON config document and writes its
artifact (CSV or JSON) to the configured output path, or to stdout.

Commands (the config's "command" field):
- spectrum: CQ eigenvalues against eps_q
- gate: one gate under quasistatic noise (fidelity, purity, leakage)
- sweep: infidelity against sigma for CD bare, CQ bare and CQ composite X_pi
- t1rho: driven relaxation rates of CD and CQ qubits
- geometry: detuning fluctuations from monopole charge traps
- calibrate: gate-parameter search against a target unitary
- twoqubit: pulsed CNOT population transfer

Exit codes: 0 success, 1 config error, 2 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from typing import Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

load_dotenv()

from models.config import load_run_config
from runners.experiment_runner import TOOLKIT_VERSION, ExperimentRunner
from utils.csv_output import write_text
from utils.errors import ConfigError, ExitCode, NonConvergenceError, create_error_report
from utils.logging_config import configure_logging

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqsim", description="Charge dipole / charge quadrupole qubit simulator")
    parser.add_argument("config", help="Path to the JSON run config")
    parser.add_argument("--output", "-o", default=None, help="Override the config's output_path ('-' for stdout)")
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOLKIT_VERSION}")
    return parser


def _fail(code: ExitCode, message: str, data: dict | None = None) -> int:
    print(json.dumps(create_error_report(code, message, data)), file=sys.stderr)
    return code.value


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        config = load_run_config(args.config)
    except FileNotFoundError as exc:
        return _fail(ExitCode.CONFIG_ERROR, "Config file not found", {"details": str(exc)})
    except json.JSONDecodeError as exc:
        return _fail(ExitCode.CONFIG_ERROR, "Config is not valid JSON", {"details": str(exc)})
    except (ValidationError, ValueError) as exc:
        return _fail(ExitCode.CONFIG_ERROR, "Invalid config", {"details": str(exc)})

    output_path = args.output if args.output is not None else config.output_path

    try:
        runner = ExperimentRunner()
        outcome = asyncio.run(runner.run(config))
    except ConfigError as exc:
        return _fail(ExitCode.CONFIG_ERROR, str(exc))
    except NonConvergenceError as exc:
        return _fail(ExitCode.NON_CONVERGENCE, str(exc))
    except ValueError as exc:
        # preconditions that only surface mid-computation
        logger.error(f"Run aborted: {exc}", exc_info=True)
        return _fail(ExitCode.CONFIG_ERROR, str(exc))

    if output_path is None or output_path == "-":
        sys.stdout.write(outcome.text)
    else:
        write_text(output_path, outcome.text)
        logger.info(f"Wrote {output_path}")
    return outcome.exit_code.value


if __name__ == "__main__":
    sys.exit(main())
