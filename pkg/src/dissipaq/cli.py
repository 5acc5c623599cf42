"""Command-line front end: experiment orchestration and deterministic CSV emission.

    dissipaq <command> [--config FILE] [--key value ...] --out DIR

Commands: classical, spectrum, evolve, tunnel, instanton, compare.  Each
command writes one CSV per result kind into the output directory; identical
configs produce byte-identical files.  Sweep entries run concurrently up to
the worker count (overridable via the DISSIPAQ_WORKERS environment variable).
Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .classical import energy_series, integrate
from .config import COMMANDS, SCHEMA, RunConfig, build_config, parse_config_file
from .errors import ConfigError, DissipaqError, NumericalFailureError
from .fields import CubicBarrier, Quadratic
from .instanton import OhmicKernel, PathGrid, bump_profile, relax_instanton
from .phase import PhaseState, SystemSpec
from .quantum import (
    Grid,
    WaveFunction,
    build_dsho_hamiltonian,
    build_general_hamiltonian,
    choose_c,
    evolve,
    snapshot_times,
    spectrum,
)
from .tables import ResultTable, write_csv
from .wkb import BarrierSpec, closed_form_exponent, tunneling_probability


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="dissipaq", description=__doc__, add_help=True)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", metavar="FILE", default=None)
    parser.add_argument("--out", metavar="DIR", default=None)
    for key in SCHEMA:
        if key == "out":
            continue
        parser.add_argument(f"--{key}", metavar="VALUE", default=None)
    return parser


def _potential_field(config: RunConfig):
    if config.potential == "harmonic":
        return Quadratic.harmonic(config.omega, dim=1)
    return CubicBarrier(config.omega, config.a)


def _build_operator(config: RunConfig, gamma: float):
    grid = Grid(config.x_min, config.x_max, config.n)
    if config.potential == "harmonic" and config.omega2 is None and config.c is None:
        return build_dsho_hamiltonian(config.omega, gamma, config.hbar, grid)
    sys_spec = SystemSpec(1, _potential_field(config), gamma, config.hbar)
    omega2 = config.omega2
    if omega2 is None:
        omega2 = float(np.sqrt(config.omega**2 - gamma**2))
    c = config.c
    if c is None:
        bare = build_general_hamiltonian(sys_spec, omega2, 0.0, grid)
        c = choose_c(bare, gamma, omega2)
    return build_general_hamiltonian(sys_spec, omega2, c, grid)


def _run_classical(config: RunConfig, gamma: float) -> ResultTable:
    sys_spec = SystemSpec(1, _potential_field(config), gamma, config.hbar)
    traj = integrate(
        sys_spec,
        PhaseState(x=[config.x0], p=[config.p0]),
        config.step,
        config.horizon,
        config.method,
    )
    energies = energy_series(traj, sys_spec)
    rows = [
        (float(traj.times[i]), float(traj.positions[i, 0]), float(traj.momenta[i, 0]), float(energies.values[i]))
        for i in range(len(traj))
    ]
    return ResultTable(columns=("t", "x", "p", "H"), rows=rows)


def _run_spectrum(config: RunConfig, gamma: float) -> ResultTable:
    op = _build_operator(config, gamma)
    spec = spectrum(op, config.k)
    residuals = np.linalg.norm(
        op.matrix @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues, axis=0
    )
    rows = [
        (i, float(spec.eigenvalues[i].real), float(spec.eigenvalues[i].imag), float(residuals[i]))
        for i in range(spec.eigenvalues.size)
    ]
    return ResultTable(columns=("index", "re_lambda", "im_lambda", "residual"), rows=rows)


def _run_evolve(config: RunConfig, gamma: float) -> ResultTable:
    op = _build_operator(config, gamma)
    spec = spectrum(op, config.k)
    vecs = spec.eigenvectors
    psi0 = (vecs[:, 0] + vecs[:, 1]) / np.sqrt(2.0) if config.k >= 2 else vecs[:, 0]
    snapshots = evolve(
        op,
        WaveFunction(values=psi0, grid=op.grid).normalized(),
        config.step,
        config.horizon,
        stride=config.stride,
    )
    times = snapshot_times(config.step, config.horizon, config.stride)
    columns = ["t", "norm", "overlap_ground"] + [f"overlap_{j}" for j in range(1, config.k)]
    rows = []
    for t, snap in zip(times, snapshots):
        overlaps = [float(abs(np.vdot(vecs[:, j], snap.values))) for j in range(config.k)]
        rows.append((float(t), float(snap.norm()), *overlaps))
    return ResultTable(columns=tuple(columns), rows=rows)


def _run_instanton(config: RunConfig, gamma: float) -> ResultTable:
    grid = PathGrid(config.T, config.m)
    kernel = OhmicKernel(gamma=gamma, grid=grid)
    potential = _potential_field(config)
    init = bump_profile(grid, config.omega, config.a)
    path, action = relax_instanton(potential, kernel, init, tol=config.tol)
    rows = [(float(t), float(v)) for t, v in zip(grid.tau, path.values)]
    return ResultTable(columns=("tau", "x"), rows=rows, meta={"action": action})


def _tunnel_row(config: RunConfig, gamma: float):
    barrier = BarrierSpec(config.omega, config.a, gamma, config.hbar)
    result = tunneling_probability(barrier, omega2=config.omega2, convention=config.convention)
    return (
        float(gamma),
        float(result.exponent / config.hbar),
        float(closed_form_exponent(barrier)),
        config.convention,
    )


def _compare_row(config: RunConfig, gamma: float):
    grid = PathGrid(config.T, config.m)
    kernel = OhmicKernel(gamma=gamma, grid=grid)
    potential = CubicBarrier(config.omega, config.a)
    init = bump_profile(grid, config.omega, config.a)
    _, cl_action = relax_instanton(potential, kernel, init, tol=config.tol)
    barrier = BarrierSpec(config.omega, config.a, gamma, config.hbar)
    return (float(gamma), float(cl_action), float(closed_form_exponent(barrier)))


_PER_GAMMA_TABLES = {
    "classical": ("trajectory", _run_classical),
    "spectrum": ("spectrum", _run_spectrum),
    "evolve": ("evolution", _run_evolve),
    "instanton": ("instanton", _run_instanton),
}

_AGGREGATED = {
    "tunnel": ("tunneling", ("gamma", "exponent_quadrature", "exponent_closed_form", "convention"), _tunnel_row),
    "compare": ("actions", ("gamma", "cl_action", "ch_exponent"), _compare_row),
}


def _worker_count(n_entries: int) -> int:
    raw = os.environ.get("DISSIPAQ_WORKERS")
    if raw is None:
        return max(1, min(4, n_entries))
    try:
        count = int(raw)
    except ValueError as exc:
        raise ConfigError(f"DISSIPAQ_WORKERS must be an integer, got {raw!r}") from exc
    if count < 1:
        raise ConfigError("DISSIPAQ_WORKERS must be at least 1")
    return count


def _map_entries(func, entries, workers: int):
    if workers == 1 or len(entries) == 1:
        return [func(e) for e in entries]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, entries))


def run(config: RunConfig) -> list[str]:
    """Execute one command and write its CSV outputs; returns the paths."""
    if config.out is None:
        raise ConfigError("an output directory is required (--out DIR)")
    os.makedirs(config.out, exist_ok=True)
    provenance = config.provenance(__version__)
    gammas = config.gammas()
    workers = _worker_count(len(gammas))
    written = []

    if config.command in _AGGREGATED:
        stem, columns, row_func = _AGGREGATED[config.command]
        rows = _map_entries(lambda g: row_func(config, g), gammas, workers)
        table = ResultTable(columns=columns, rows=rows, provenance=provenance)
        written.append(write_csv(table, os.path.join(config.out, f"{stem}.csv")))
        return written

    stem, table_func = _PER_GAMMA_TABLES[config.command]

    def emit(gamma: float) -> str:
        table = table_func(config, gamma)
        suffix = f"_gamma={gamma!r}" if config.sweep is not None else ""
        extra = "".join(f" {k}={v}" for k, v in sorted(table.meta.items()))
        named = ResultTable(
            columns=table.columns, rows=table.rows, provenance=provenance + extra
        )
        return write_csv(named, os.path.join(config.out, f"{stem}{suffix}.csv"))

    written.extend(_map_entries(emit, gammas, workers))
    return written


def parse_config(argv) -> RunConfig:
    """Parse argv into a validated RunConfig (defaults < config file < flags)."""
    parser = _build_parser()
    namespace = parser.parse_args(argv)
    file_values = parse_config_file(namespace.config) if namespace.config else {}
    flag_values = {}
    for key in SCHEMA:
        if key == "out":
            continue
        raw = getattr(namespace, key, None)
        if raw is not None:
            flag_values[key] = raw
    if namespace.out is not None:
        flag_values["out"] = namespace.out
    return build_config(namespace.command, file_values, flag_values)


def main(argv=None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
        run(config)
    except ConfigError as exc:
        print(f"dissipaq-error: kind=config detail={exc}", file=sys.stderr)
        return 2
    except NumericalFailureError as exc:
        print(f"dissipaq-error: kind=numerical-failure detail={exc}", file=sys.stderr)
        return 3
    except DissipaqError as exc:
        print(f"dissipaq-error: kind={type(exc).__name__} detail={exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
