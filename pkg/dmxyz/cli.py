import contextlib
from pathlib import Path
from typing import Iterable, Optional

import structlog
import typer
from rich.console import Console
from rich.table import Table

from dmxyz.analysis import (DEFAULT_DM_BRACKET, DEFAULT_STEPS, DEFAULT_TEMPERATURE_BRACKET,
                            DEFAULT_TOLERANCE, CriticalKind, SweepSpec, SweepVariable,
                            critical_dm, critical_temperature, figure_regression, sweep,
                            verify_closed_form)
from dmxyz.config import load_flat_config
from dmxyz.entanglement import ConcurrencePath, concurrence_closed_form, concurrence_oracle
from dmxyz.errors import BranchMismatch, InvalidParameter, LinalgError, ThermalOverflow
from dmxyz.log import configure_logging
from dmxyz.model import CouplingParams, DmAxis, ModelSpec
from dmxyz.thermal import gibbs_state

app = typer.Typer(
    name="dmxyz",
    help="Thermal concurrence of the two-qubit Heisenberg XYZ model with a DM interaction",
    add_completion=False,
)

logger = structlog.get_logger(__name__)
console = Console(highlight=False)
err_console = Console(stderr=True, highlight=False)

EXIT_OVERFLOW = 3
EXIT_NOT_CONVERGED = 4
EXIT_FAILED = 5

VERIFY_TOLERANCE = 1e-9

EVAL_COLUMNS = ('axis', 'jx', 'jy', 'jz', 'd', 't', 'concurrence', 'l1', 'l2', 'l3', 'l4', 'path')
SWEEP_COLUMNS = ('variable', 'value', 'concurrence', 'l1', 'l2', 'l3', 'l4')
CRITICAL_COLUMNS = ('kind', 'value', 'lo', 'hi', 'status')

# config file keys that differ from the parameter names
CONFIG_ALIASES = {'from': 'start', 'to': 'stop', 'variable': 'var'}
# library parameter names that differ from the flags
FLAG_NAMES = {'temperature': '--t', 'strength': '--d', 'range': '--from', 'temperature bracket': '--lo',
              'DM bracket': '--lo'}


def _num(x) -> str:
    return format(float(x), '.17g')


def _csv(fields: Iterable) -> str:
    return ",".join(fields) + "\n"


def _emit(text: str):
    typer.echo(text, nl=False)


def _write(path: Path, text: str):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)


def _load_config(ctx: typer.Context, path: Optional[Path]):
    if path is None:
        return path
    try:
        values = load_flat_config(path, CONFIG_ALIASES)
    except InvalidParameter as e:
        raise typer.BadParameter(str(e), param_hint="'--config'")
    ctx.default_map = {**(ctx.default_map or {}), **values}
    return path


def _config_option():
    return typer.Option(None, "--config", help="Flat key = value file; explicit flags override it",
                        callback=_load_config, is_eager=True, dir_okay=False)


def _threads_option():
    return typer.Option(0, "--threads", envvar="DMXYZ_THREADS", min=0,
                        help="Worker threads, 0 evaluates serially")


def _positive(value: Optional[float]):
    if value is not None and not value > 0:
        raise typer.BadParameter(f"must be > 0, got {value}")
    return value


def _require(value, flag: str, reason: str):
    if value is None:
        raise typer.BadParameter(f"{flag} is required {reason}", param_hint=f"'{flag}'")
    return value


@contextlib.contextmanager
def _exit_codes():
    '''
    Maps library failures onto the documented exit codes
    '''
    try:
        yield
    except InvalidParameter as e:
        flag = FLAG_NAMES.get(e.name, f"--{e.name}")
        raise typer.BadParameter(str(e), param_hint=f"'{flag}'")
    except ThermalOverflow as e:
        err_console.print(f"overflow: {e}")
        raise typer.Exit(EXIT_OVERFLOW)
    except LinalgError as e:
        err_console.print(f"numeric failure: {e}")
        raise typer.Exit(EXIT_NOT_CONVERGED)
    except BranchMismatch as e:
        logger.warning("closed-form branch disagrees with the generic formula", error=str(e))
        err_console.print(str(e))
        raise typer.Exit(EXIT_FAILED)


@app.callback()
def main(verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v for info, -vv for debug logs")):
    configure_logging(verbose)


@app.command("eval")
def eval_point(
        jx: float = typer.Option(..., "--jx", help="Coupling along x"),
        jy: float = typer.Option(..., "--jy", help="Coupling along y"),
        jz: float = typer.Option(..., "--jz", help="Coupling along z"),
        axis: DmAxis = typer.Option(..., "--axis", case_sensitive=False, help="DM axis"),
        d: float = typer.Option(..., "--d", help="DM strength"),
        t: float = typer.Option(..., "--t", callback=_positive, help="Temperature (k_B = 1)"),
        path: ConcurrencePath = typer.Option(ConcurrencePath.CLOSED_FORM, "--path", case_sensitive=False,
                                             help="Closed-form expressions or numeric oracle"),
        header: bool = typer.Option(False, "--header", help="Print the column names first"),
        config: Optional[Path] = _config_option(),
):
    '''
    Concurrence at a single point, as one CSV record
    '''
    with _exit_codes():
        spec = ModelSpec.of(jx, jy, jz, axis, d)
        if path is ConcurrencePath.ORACLE:
            result = concurrence_oracle(gibbs_state(spec, t))
        else:
            result = concurrence_closed_form(spec, t)

    out = _csv(EVAL_COLUMNS) if header else ""
    out += _csv([axis.value, _num(jx), _num(jy), _num(jz), _num(d), _num(t), _num(result.value),
                 *(_num(x) for x in result.lambdas), result.path.value])
    _emit(out)


@app.command("sweep")
def sweep_command(
        var: SweepVariable = typer.Option(..., "--var", case_sensitive=False, help="Swept variable"),
        start: float = typer.Option(..., "--from", help="First grid value"),
        stop: float = typer.Option(..., "--to", help="Last grid value"),
        steps: int = typer.Option(DEFAULT_STEPS, "--steps", min=2, help="Grid points, endpoints included"),
        jx: float = typer.Option(..., "--jx"),
        jy: float = typer.Option(..., "--jy"),
        jz: float = typer.Option(..., "--jz"),
        axis: DmAxis = typer.Option(..., "--axis", case_sensitive=False),
        d: Optional[float] = typer.Option(None, "--d", help="DM strength, required for --var t"),
        t: Optional[float] = typer.Option(None, "--t", callback=_positive, help="Temperature, required for --var d"),
        out: Optional[Path] = typer.Option(None, "--out", dir_okay=False, help="Write the CSV here instead of stdout"),
        threads: int = _threads_option(),
        config: Optional[Path] = _config_option(),
):
    '''
    Concurrence over a uniform grid of D or T, as CSV
    '''
    if var is SweepVariable.DM_STRENGTH:
        fixed = _require(t, "--t", "when sweeping d")
    else:
        fixed = _require(d, "--d", "when sweeping t")
        if start <= 0:
            raise typer.BadParameter(f"temperatures must be > 0, got {start}", param_hint="'--from'")
    if not start < stop:
        raise typer.BadParameter(f"expected --from < --to, got {start} and {stop}", param_hint="'--from'")

    with _exit_codes():
        spec = SweepSpec(ModelSpec.of(jx, jy, jz, axis, 0.0 if d is None else d), var, start, stop,
                         steps=steps, fixed=fixed)
        rows = sweep(spec, threads=threads)

    lines = [_csv(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(_csv([var.value, _num(row.variable_value), _num(row.concurrence),
                           *(_num(x) for x in row.lambdas)]))
    text = "".join(lines)
    if out is None:
        _emit(text)
    else:
        _write(out, text)
        logger.info("sweep written", path=str(out), rows=len(rows))


@app.command("critical")
def critical_command(
        kind: CriticalKind = typer.Option(..., "--kind", case_sensitive=False, help="temp or dm"),
        jx: float = typer.Option(..., "--jx"),
        jy: float = typer.Option(..., "--jy"),
        jz: float = typer.Option(..., "--jz"),
        axis: DmAxis = typer.Option(..., "--axis", case_sensitive=False),
        d: Optional[float] = typer.Option(None, "--d", help="DM strength, required for --kind temp"),
        t: Optional[float] = typer.Option(None, "--t", callback=_positive, help="Temperature, required for --kind dm"),
        lo: Optional[float] = typer.Option(None, "--lo", help="Lower end of the bracket"),
        hi: Optional[float] = typer.Option(None, "--hi", help="Upper end of the bracket"),
        tol: float = typer.Option(DEFAULT_TOLERANCE, "--tol", callback=_positive, help="Final bracket width"),
        header: bool = typer.Option(False, "--header", help="Print the column names first"),
        config: Optional[Path] = _config_option(),
):
    '''
    Critical temperature or critical DM strength by bisection
    '''
    if kind is CriticalKind.TEMPERATURE:
        _require(d, "--d", "for --kind temp")
        lo_default, hi_default = DEFAULT_TEMPERATURE_BRACKET
    else:
        _require(t, "--t", "for --kind dm")
        lo_default, hi_default = DEFAULT_DM_BRACKET
    lo = lo_default if lo is None else lo
    hi = hi_default if hi is None else hi

    with _exit_codes():
        if kind is CriticalKind.TEMPERATURE:
            result = critical_temperature(ModelSpec.of(jx, jy, jz, axis, d), lo, hi, tol)
        else:
            result = critical_dm(CouplingParams(jx, jy, jz), axis, t, lo, hi, tol)

    value = "" if result.value is None else _num(result.value)
    out = _csv(CRITICAL_COLUMNS) if header else ""
    out += _csv([kind.value, value, _num(result.bracket[0]), _num(result.bracket[1]), result.status.value])
    _emit(out)
    if not result.converged:
        raise typer.Exit(EXIT_NOT_CONVERGED)


@app.command("figure")
def figure_command(
        figure: int = typer.Option(..., "--figure", min=1, max=6, help="Figure preset 1..6"),
        out: Path = typer.Option(Path("."), "--out", file_okay=False, help="Directory for the CSV files"),
        steps: int = typer.Option(DEFAULT_STEPS, "--steps", min=2, help="Grid points per panel"),
        threads: int = _threads_option(),
        config: Optional[Path] = _config_option(),
):
    '''
    Writes fig<k>a.csv (C versus D) and fig<k>b.csv (C versus T) and checks the axis ordering
    '''
    with _exit_codes():
        verdict = figure_regression(figure, steps=steps, threads=threads)

    out.mkdir(parents=True, exist_ok=True)
    for panel in verdict.panels:
        axes = list(panel.concurrence)
        lines = [_csv([panel.variable.value, *(f"concurrence_{axis.value}" for axis in axes)])]
        for k, value in enumerate(panel.values):
            lines.append(_csv([_num(value), *(_num(panel.concurrence[axis][k]) for axis in axes)]))
        target = out / f"fig{figure}{panel.name}.csv"
        _write(target, "".join(lines))
        logger.info("figure panel written", path=str(target))

    table = Table(title=f"Figure {figure}: J = {verdict.preset.coupling.as_tuple()}")
    table.add_column("axis")
    table.add_column("critical D (T = 3)", justify="right")
    table.add_column("critical T (D = 3)", justify="right")
    for summary in verdict.summaries:
        table.add_row(
            summary.axis.label,
            _critical_cell(summary.critical_dm),
            _critical_cell(summary.critical_temperature),
        )
    console.print(table)
    console.print(f"verdict: {verdict.label}")
    if not verdict.passed:
        raise typer.Exit(EXIT_FAILED)


def _critical_cell(result) -> str:
    return f"{result.value:.10f}" if result.converged else result.status.value


@app.command("verify")
def verify_command(
        samples: int = typer.Option(1000, "--samples", min=1, help="Random points per axis"),
        seed: int = typer.Option(42, "--seed", help="Random seed"),
        threads: int = _threads_option(),
        config: Optional[Path] = _config_option(),
):
    '''
    Compares the closed-form concurrence against the numeric oracle on seeded random points
    '''
    with _exit_codes():
        reports = verify_closed_form(samples=samples, seed=seed, threads=threads)

    table = Table(title=f"closed form vs oracle ({samples} samples per axis, seed {seed})")
    table.add_column("axis")
    table.add_column("max |difference|", justify="right")
    table.add_column("status")
    failed = False
    for axis, report in reports.items():
        ok = report.max_error <= VERIFY_TOLERANCE
        failed = failed or not ok
        table.add_row(axis.label, f"{report.max_error:.3e}", "ok" if ok else "FAILED")
    console.print(table)
    if failed:
        raise typer.Exit(EXIT_FAILED)


if __name__ == '__main__':
    app()
