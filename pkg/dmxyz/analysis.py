'''
Parameter sweeps, critical-point search, figure presets and axis comparisons.
'''
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from dmxyz.entanglement import (ConcurrencePath, concurrence_closed_form, concurrence_oracle)
from dmxyz.errors import InvalidParameter, SweepPointOverflow, ThermalOverflow, UnknownFigure
from dmxyz.model import CouplingParams, DmAxis, DmCoupling, ModelSpec
from dmxyz.thermal import Temperature, gibbs_state

__all__ = [
    'DEFAULT_STEPS',
    'DEFAULT_DM_BRACKET',
    'DEFAULT_TEMPERATURE_BRACKET',
    'DEFAULT_TOLERANCE',
    'INDICATOR_EPSILON',
    'SweepVariable',
    'SweepSpec',
    'SweepRow',
    'CriticalKind',
    'CriticalStatus',
    'CriticalResult',
    'FigurePreset',
    'FigurePanel',
    'AxisFigureSummary',
    'FigureVerdict',
    'AxisDominance',
    'DominanceReport',
    'OracleReport',
    'sweep',
    'critical_temperature',
    'critical_dm',
    'figure_preset',
    'figure_sweeps',
    'figure_regression',
    'largest_coupling_axis',
    'dominance_report',
    'verify_closed_form',
]

logger = structlog.get_logger(__name__)

DEFAULT_STEPS = 201
DEFAULT_DM_BRACKET = (0.0, 10.0)
DEFAULT_TEMPERATURE_BRACKET = (0.05, 50.0)
DEFAULT_TOLERANCE = 1e-8
INDICATOR_EPSILON = 1e-12
MAX_BISECTIONS = 200

FIGURE_TEMPERATURE = 3.0
FIGURE_DM = 3.0
FIGURE_DM_RANGE = (0.0, 6.0)
FIGURE_TEMPERATURE_RANGE = (0.1, 10.0)
ORDERING_MARGIN = 1e-6
POINTWISE_SLACK = 1e-12

# figure id -> (couplings, compared axes)
FIGURE_COUPLINGS = {
    1: ((0.2, -1.0, -0.5), (DmAxis.X, DmAxis.Y)),
    2: ((-1.0, 0.2, -0.5), (DmAxis.X, DmAxis.Y)),
    3: ((-0.5, 1.0, 0.2), (DmAxis.Y, DmAxis.Z)),
    4: ((-0.5, 0.2, 1.0), (DmAxis.Y, DmAxis.Z)),
    5: ((-0.2, 0.3, -1.0), (DmAxis.X, DmAxis.Z)),
    6: ((-1.0, 0.3, -0.2), (DmAxis.X, DmAxis.Z)),
}

VERIFY_COUPLING_RANGE = (-3.0, 3.0)
VERIFY_DM_RANGE = (-3.0, 3.0)
VERIFY_TEMPERATURE_RANGE = (0.1, 20.0)


def _map_ordered(fn: Callable, items: Sequence, threads: int = 0) -> list:
    '''
    Maps fn over items, on a thread pool when threads > 1; results keep the order of items
    '''
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


class SweepVariable(enum.Enum):
    DM_STRENGTH = 'd'
    TEMPERATURE = 't'


@dataclass(frozen=True)
class SweepSpec:
    '''
    Uniform grid over one variable; `fixed` holds the other one
    (the temperature of a DM sweep, or the DM strength of a temperature sweep)
    '''
    base: ModelSpec
    variable: SweepVariable
    start: float
    stop: float
    steps: int = DEFAULT_STEPS
    fixed: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or self.start >= self.stop:
            raise InvalidParameter("range", (self.start, self.stop), "start must be < stop")
        if int(self.steps) != self.steps or self.steps < 2:
            raise InvalidParameter("steps", self.steps, "must be an integer >= 2")
        if self.variable is SweepVariable.TEMPERATURE:
            Temperature(self.start)
        else:
            Temperature(self.fixed)

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.steps))

    def point(self, value: float) -> Tuple[ModelSpec, float]:
        if self.variable is SweepVariable.DM_STRENGTH:
            return self.base.with_strength(value), self.fixed
        return self.base.with_strength(self.fixed), value

    def for_axis(self, axis) -> 'SweepSpec':
        return replace(self, base=self.base.with_axis(axis))


@dataclass(frozen=True)
class SweepRow:
    variable_value: float
    concurrence: float
    lambdas: Tuple[float, float, float, float]
    path: ConcurrencePath


def sweep(spec: SweepSpec, threads: int = 0) -> List[SweepRow]:
    '''
    Evaluates the closed-form concurrence over the sweep grid
    INPUT
        spec; sweep specification
        threads; worker threads, 0 or 1 evaluates serially
    RETURNS
        one SweepRow per grid point, in grid order
    '''
    def evaluate(value):
        model, t = spec.point(float(value))
        try:
            result = concurrence_closed_form(model, t)
        except ThermalOverflow as e:
            raise SweepPointOverflow(spec.variable.value, float(value), e) from e
        return SweepRow(float(value), result.value, result.lambdas, result.path)

    rows = _map_ordered(evaluate, list(spec.grid()), threads)
    logger.info("sweep evaluated", axis=spec.base.axis.value, variable=spec.variable.value,
                steps=len(rows), fixed=spec.fixed)
    return rows


class CriticalKind(enum.Enum):
    TEMPERATURE = 'temp'
    DM = 'dm'


class CriticalStatus(enum.Enum):
    CONVERGED = 'Converged'
    NO_SIGN_CHANGE = 'NoSignChange'
    ALWAYS_ZERO = 'AlwaysZero'
    ALWAYS_POSITIVE = 'AlwaysPositive'


@dataclass(frozen=True)
class CriticalResult:
    kind: CriticalKind
    value: Optional[float]
    bracket: Tuple[float, float]
    residual_width: float
    status: CriticalStatus

    @property
    def converged(self) -> bool:
        return self.status is CriticalStatus.CONVERGED


def _entangled(spec: ModelSpec, t: float) -> bool:
    return concurrence_closed_form(spec, t).value > INDICATOR_EPSILON


def _check_bracket(name, lo, hi, tol, lower_bound, strict):
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise InvalidParameter(name, (lo, hi), "expected lo < hi")
    if lo < lower_bound or (strict and lo == lower_bound):
        raise InvalidParameter(name, (lo, hi), f"lower end must be {'>' if strict else '>='} {lower_bound}")
    if not tol > 4 * math.ulp(max(abs(lo), abs(hi))):
        raise InvalidParameter("tol", tol, "must be positive and above the float resolution of the bracket")


def _bisect(indicator: Callable[[float], bool], lo: float, hi: float, tol: float) -> Tuple[float, float]:
    '''
    Shrinks [lo, hi] around the point where the boolean indicator changes
    Assumes indicator(lo) != indicator(hi)
    '''
    at_lo = indicator(lo)
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if indicator(mid) == at_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _classify(kind, lo, hi, positive_lo, positive_hi, expect_positive_lo, indicator, tol):
    if positive_lo == expect_positive_lo and positive_hi != expect_positive_lo:
        a, b = _bisect(indicator, lo, hi, tol)
        result = CriticalResult(kind, 0.5 * (a + b), (a, b), b - a, CriticalStatus.CONVERGED)
    else:
        if positive_lo and positive_hi:
            status = CriticalStatus.ALWAYS_POSITIVE
        elif not positive_lo and not positive_hi:
            status = CriticalStatus.ALWAYS_ZERO
        else:
            status = CriticalStatus.NO_SIGN_CHANGE
        result = CriticalResult(kind, None, (lo, hi), hi - lo, status)
    logger.info("critical point search", kind=kind.value, status=result.status.value, value=result.value)
    return result


def critical_temperature(spec: ModelSpec, t_lo: float = DEFAULT_TEMPERATURE_BRACKET[0],
                         t_hi: float = DEFAULT_TEMPERATURE_BRACKET[1],
                         tol: float = DEFAULT_TOLERANCE) -> CriticalResult:
    '''
    Temperature above which the concurrence vanishes, by bisection on C(T) > epsilon
    INPUT
        spec; model specification (the DM strength is held fixed)
        t_lo, t_hi; bracket with C(t_lo) > 0 and C(t_hi) = 0
        tol; width of the returned bracket
    RETURNS
        CriticalResult; the bracket is entangled at its low end and separable at its high end
    '''
    _check_bracket("temperature bracket", t_lo, t_hi, tol, 0.0, strict=True)
    indicator = lambda t: _entangled(spec, t)
    return _classify(CriticalKind.TEMPERATURE, t_lo, t_hi, indicator(t_lo), indicator(t_hi),
                     True, indicator, tol)


def critical_dm(coupling: CouplingParams, axis, t, d_lo: float = DEFAULT_DM_BRACKET[0],
                d_hi: float = DEFAULT_DM_BRACKET[1], tol: float = DEFAULT_TOLERANCE) -> CriticalResult:
    '''
    DM strength below which the concurrence vanishes at fixed temperature, by bisection on C(D) > epsilon
    INPUT
        coupling; coupling constants
        axis; DM axis
        t; temperature
        d_lo, d_hi; bracket with C(d_lo) = 0 and C(d_hi) > 0
        tol; width of the returned bracket
    RETURNS
        CriticalResult; the bracket is separable at its low end and entangled at its high end
    '''
    _check_bracket("DM bracket", d_lo, d_hi, tol, 0.0, strict=False)
    temperature = Temperature.of(t)
    base = ModelSpec(coupling, DmCoupling(DmAxis.parse(axis), 0.0))
    indicator = lambda d: _entangled(base.with_strength(d), temperature)
    return _classify(CriticalKind.DM, d_lo, d_hi, indicator(d_lo), indicator(d_hi),
                     False, indicator, tol)


def largest_coupling_axis(coupling: CouplingParams, axes: Sequence[DmAxis] = tuple(DmAxis)) -> Optional[DmAxis]:
    '''
    RETURNS the axis among `axes` with the strictly largest coupling, or None on a tie
    '''
    ranked = sorted(axes, key=coupling.along, reverse=True)
    if len(ranked) > 1 and coupling.along(ranked[0]) == coupling.along(ranked[1]):
        return None
    return ranked[0]


@dataclass(frozen=True)
class FigurePreset:
    figure_id: int
    coupling: CouplingParams
    axes: Tuple[DmAxis, DmAxis]
    panel_a: SweepSpec      # concurrence versus D at T = 3
    panel_b: SweepSpec      # concurrence versus T at D = 3

    @property
    def panels(self) -> Tuple[SweepSpec, SweepSpec]:
        return (self.panel_a, self.panel_b)

    @property
    def favored_axis(self) -> Optional[DmAxis]:
        return largest_coupling_axis(self.coupling, self.axes)


def figure_preset(figure_id: int, steps: int = DEFAULT_STEPS) -> FigurePreset:
    '''
    Parameters of one of the six comparison figures
    INPUT
        figure_id; 1..6
        steps; grid points per panel
    RETURNS
        FigurePreset with the preset couplings, the compared axes and both panel sweeps
        (sweeps are built on the first compared axis; use SweepSpec.for_axis for the other)
    '''
    if figure_id not in FIGURE_COUPLINGS:
        raise UnknownFigure(figure_id)
    couplings, axes = FIGURE_COUPLINGS[figure_id]
    coupling = CouplingParams(*couplings)
    base = ModelSpec(coupling, DmCoupling(axes[0], FIGURE_DM))
    panel_a = SweepSpec(base, SweepVariable.DM_STRENGTH, *FIGURE_DM_RANGE, steps=steps,
                        fixed=FIGURE_TEMPERATURE)
    panel_b = SweepSpec(base, SweepVariable.TEMPERATURE, *FIGURE_TEMPERATURE_RANGE, steps=steps,
                        fixed=FIGURE_DM)
    return FigurePreset(figure_id, coupling, axes, panel_a, panel_b)


@dataclass(frozen=True)
class FigurePanel:
    name: str
    variable: SweepVariable
    values: Tuple[float, ...]
    concurrence: Dict[DmAxis, Tuple[float, ...]]


def figure_sweeps(preset: FigurePreset, threads: int = 0) -> Tuple[FigurePanel, FigurePanel]:
    panels = []
    for name, spec in zip(('a', 'b'), preset.panels):
        columns = {}
        for axis in preset.axes:
            rows = sweep(spec.for_axis(axis), threads=threads)
            columns[axis] = tuple(row.concurrence for row in rows)
        values = tuple(float(x) for x in spec.grid())
        panels.append(FigurePanel(name, spec.variable, values, columns))
    return tuple(panels)


@dataclass(frozen=True)
class AxisFigureSummary:
    axis: DmAxis
    critical_dm: CriticalResult
    critical_temperature: CriticalResult


@dataclass(frozen=True)
class FigureVerdict:
    preset: FigurePreset
    favored: DmAxis
    summaries: Tuple[AxisFigureSummary, AxisFigureSummary]
    checks: Dict[str, bool]
    panels: Tuple[FigurePanel, FigurePanel]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def label(self) -> str:
        if self.passed:
            return f"{self.favored.label} dominates"
        failed = ", ".join(name for name, ok in self.checks.items() if not ok)
        return f"{self.favored.label} expected to dominate; failed: {failed}"


def _ordered(favored: Optional[float], other: Optional[float], smaller: bool) -> bool:
    if favored is None:
        return False
    if other is None:
        return True
    if smaller:
        return favored < other - ORDERING_MARGIN
    return favored > other + ORDERING_MARGIN


def figure_regression(figure_id: int, steps: int = DEFAULT_STEPS, threads: int = 0,
                      tol: float = DEFAULT_TOLERANCE) -> FigureVerdict:
    '''
    Checks the ordering stated for a comparison figure: the axis with the larger coupling
    has the smaller critical D at T = 3, the higher critical temperature at D = 3 and at
    least as much entanglement wherever both curves of panel (a) are positive
    INPUT
        figure_id; 1..6
        steps; grid points per panel
        threads; worker threads for the sweeps
        tol; bisection tolerance
    RETURNS
        FigureVerdict
    '''
    preset = figure_preset(figure_id, steps=steps)
    favored = preset.favored_axis
    other = next(axis for axis in preset.axes if axis is not favored)
    summaries = {}
    for axis in preset.axes:
        summaries[axis] = AxisFigureSummary(
            axis,
            critical_dm(preset.coupling, axis, FIGURE_TEMPERATURE, *DEFAULT_DM_BRACKET, tol=tol),
            critical_temperature(ModelSpec(preset.coupling, DmCoupling(axis, FIGURE_DM)),
                                 *DEFAULT_TEMPERATURE_BRACKET, tol=tol),
        )
    panels = figure_sweeps(preset, threads=threads)

    panel_a = panels[0]
    more_entanglement = all(
        fav >= oth - POINTWISE_SLACK
        for fav, oth in zip(panel_a.concurrence[favored], panel_a.concurrence[other])
        if fav > INDICATOR_EPSILON and oth > INDICATOR_EPSILON
    )
    checks = {
        "smaller critical D": _ordered(summaries[favored].critical_dm.value,
                                       summaries[other].critical_dm.value, smaller=True),
        "higher critical temperature": _ordered(summaries[favored].critical_temperature.value,
                                                summaries[other].critical_temperature.value, smaller=False),
        "more entanglement": more_entanglement,
    }
    verdict = FigureVerdict(preset, favored, (summaries[preset.axes[0]], summaries[preset.axes[1]]),
                            checks, panels)
    if verdict.passed:
        logger.info("figure regression", figure=figure_id, verdict=verdict.label)
    else:
        logger.warning("figure regression failed", figure=figure_id, checks=checks)
    return verdict


@dataclass(frozen=True)
class AxisDominance:
    axis: DmAxis
    concurrence: float
    critical_dm: CriticalResult
    critical_temperature: CriticalResult


@dataclass(frozen=True)
class DominanceReport:
    coupling: CouplingParams
    temperature: float
    strength: float
    ranking: Tuple[AxisDominance, AxisDominance, AxisDominance]
    expected_leader: Optional[DmAxis]
    rule_holds: Optional[bool]
    smallest_critical_dm: Optional[bool]
    highest_critical_temperature: Optional[bool]

    @property
    def leader(self) -> DmAxis:
        return self.ranking[0].axis

    def entry(self, axis: DmAxis) -> AxisDominance:
        return next(item for item in self.ranking if item.axis is axis)


def _extreme_is(entries: Sequence[AxisDominance], expected: DmAxis,
                pick: Callable[[AxisDominance], CriticalResult], smaller: bool) -> Optional[bool]:
    results = [pick(entry) for entry in entries]
    if not all(result.converged for result in results):
        return None
    best = (min if smaller else max)(entries, key=lambda entry: pick(entry).value)
    return best.axis is expected


def dominance_report(coupling: CouplingParams, t, d: float,
                     dm_bracket: Tuple[float, float] = DEFAULT_DM_BRACKET,
                     temperature_bracket: Tuple[float, float] = DEFAULT_TEMPERATURE_BRACKET,
                     tol: float = DEFAULT_TOLERANCE) -> DominanceReport:
    '''
    Ranks the three DM axes by concurrence at (coupling, D = d, T = t) and checks whether the
    axis of the largest coupling also has the smallest critical D and the highest critical temperature
    INPUT
        coupling; coupling constants
        t; temperature
        d; DM strength
        dm_bracket, temperature_bracket, tol; bisection settings
    RETURNS
        DominanceReport; rule fields are None when they do not apply (tied couplings or
        a critical search that did not converge)
    '''
    temperature = Temperature.of(t)
    entries = []
    for axis in DmAxis:
        spec = ModelSpec(coupling, DmCoupling(axis, d))
        entries.append(AxisDominance(
            axis,
            concurrence_closed_form(spec, temperature).value,
            critical_dm(coupling, axis, temperature, *dm_bracket, tol=tol),
            critical_temperature(spec, *temperature_bracket, tol=tol),
        ))
    ranking = tuple(sorted(entries, key=lambda entry: -entry.concurrence))
    expected = largest_coupling_axis(coupling)

    rule_holds = smallest_dm = highest_t = None
    if expected is not None:
        rule_holds = ranking[0].axis is expected
        smallest_dm = _extreme_is(entries, expected, lambda entry: entry.critical_dm, smaller=True)
        highest_t = _extreme_is(entries, expected, lambda entry: entry.critical_temperature, smaller=False)
        if False in (rule_holds, smallest_dm, highest_t):
            logger.warning("largest-coupling rule violated", coupling=coupling.as_tuple(),
                           t=temperature.t, d=d, leader=ranking[0].axis.value, expected=expected.value)

    return DominanceReport(coupling, temperature.t, d, ranking, expected, rule_holds,
                           smallest_dm, highest_t)


@dataclass(frozen=True)
class OracleReport:
    axis: DmAxis
    samples: int
    max_error: float
    worst_spec: Optional[ModelSpec]
    worst_temperature: Optional[float]


def verify_closed_form(samples: int = 1000, seed: int = 42, threads: int = 0) -> Dict[DmAxis, OracleReport]:
    '''
    Compares closed-form and oracle concurrence on seeded random points
    (J uniform in [-3, 3]^3, D in [-3, 3], T in [0.1, 20]) for every axis
    INPUT
        samples; points per axis
        seed; random seed
        threads; worker threads
    RETURNS
        dictionary mapping each axis to its OracleReport
    '''
    if int(samples) != samples or samples < 1:
        raise InvalidParameter("samples", samples, "must be a positive integer")
    rng = np.random.default_rng(seed)
    reports = {}
    for axis in DmAxis:
        couplings = rng.uniform(*VERIFY_COUPLING_RANGE, size=(samples, 3))
        strengths = rng.uniform(*VERIFY_DM_RANGE, size=samples)
        temperatures = rng.uniform(*VERIFY_TEMPERATURE_RANGE, size=samples)
        points = [(ModelSpec.of(*j, axis, d), float(t)) for j, d, t in zip(couplings, strengths, temperatures)]

        def discrepancy(point):
            spec, t = point
            try:
                closed = concurrence_closed_form(spec, t).value
                oracle = concurrence_oracle(gibbs_state(spec, t)).value
            except ThermalOverflow:
                logger.error("overflow at sampled point", coupling=spec.coupling.as_tuple(),
                             axis=spec.axis.value, d=spec.dm.strength, t=t)
                raise
            return abs(closed - oracle)

        errors = _map_ordered(discrepancy, points, threads)
        worst = int(np.argmax(errors))
        reports[axis] = OracleReport(axis, samples, float(errors[worst]), *points[worst])
        logger.info("oracle comparison", axis=axis.value, samples=samples, max_error=float(errors[worst]))
    return reports
