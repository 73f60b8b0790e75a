from __future__ import annotations

import numpy as np
import pytest

from dmxyz.analysis import (CriticalKind, CriticalStatus, SweepSpec, SweepVariable, critical_dm,
                            critical_temperature, dominance_report, figure_preset, figure_regression,
                            figure_sweeps, largest_coupling_axis, sweep, verify_closed_form)
from dmxyz.errors import InvalidParameter, SweepPointOverflow, ThermalOverflow, UnknownFigure
from dmxyz.model import CouplingParams, DmAxis, ModelSpec
from tests.helpers import XXX_CRITICAL_TEMPERATURE, xxx_concurrence

XXX = ModelSpec.of(1, 1, 1, DmAxis.X, 0)
FAVORED = {1: DmAxis.X, 2: DmAxis.Y, 3: DmAxis.Y, 4: DmAxis.Z, 5: DmAxis.X, 6: DmAxis.Z}


class TestSweep:

    def test_two_steps_are_the_endpoints(self) -> None:
        rows = sweep(SweepSpec(XXX, SweepVariable.TEMPERATURE, 0.5, 3.0, steps=2, fixed=0.0))
        assert [row.variable_value for row in rows] == [0.5, 3.0]
        assert rows[0].concurrence == pytest.approx(xxx_concurrence(0.5), abs=1e-12)

    def test_temperature_sweep_crosses_at_critical_temperature(self) -> None:
        rows = sweep(SweepSpec(XXX, SweepVariable.TEMPERATURE, 0.1, 10.0, fixed=0.0))
        assert len(rows) == 201
        positive = [row.variable_value for row in rows if row.concurrence > 0]
        assert max(positive) < XXX_CRITICAL_TEMPERATURE
        assert all(row.concurrence == 0 for row in rows if row.variable_value > XXX_CRITICAL_TEMPERATURE)

    def test_dm_sweep_holds_temperature(self) -> None:
        spec = SweepSpec(ModelSpec.of(0.2, -1, -0.5, DmAxis.X, 0), SweepVariable.DM_STRENGTH, 0, 6, fixed=3.0)
        rows = sweep(spec)
        assert rows[0].concurrence == 0.0
        assert rows[-1].concurrence > 0.0
        assert all(sum(row.lambdas) == pytest.approx(1.0) for row in rows)

    def test_threads_keep_order(self) -> None:
        spec = SweepSpec(ModelSpec.of(-0.5, 1, 0.2, DmAxis.Y, 0), SweepVariable.DM_STRENGTH, 0, 6,
                         steps=51, fixed=3.0)
        assert sweep(spec, threads=4) == sweep(spec)

    def test_for_axis(self) -> None:
        spec = SweepSpec(XXX, SweepVariable.DM_STRENGTH, 0, 1, fixed=1.0)
        assert spec.for_axis("z").base.axis is DmAxis.Z
        assert spec.for_axis("z").fixed == 1.0

    @pytest.mark.parametrize("kwargs", [
        dict(variable=SweepVariable.DM_STRENGTH, start=1.0, stop=1.0, fixed=1.0),
        dict(variable=SweepVariable.DM_STRENGTH, start=0.0, stop=1.0, steps=1, fixed=1.0),
        dict(variable=SweepVariable.DM_STRENGTH, start=0.0, stop=1.0, fixed=0.0),
        dict(variable=SweepVariable.TEMPERATURE, start=0.0, stop=1.0, fixed=0.0),
    ])
    def test_rejects_bad_specs(self, kwargs) -> None:
        with pytest.raises(InvalidParameter):
            SweepSpec(XXX, **kwargs)

    def test_overflow_names_the_point(self) -> None:
        spec = SweepSpec(ModelSpec.of(0, 0, 1e10, DmAxis.X, 0), SweepVariable.TEMPERATURE, 1e-300, 2e-300,
                         steps=2, fixed=0.0)
        with pytest.raises(SweepPointOverflow) as info:
            sweep(spec)
        assert info.value.variable == "t"
        assert info.value.value == 1e-300
        assert isinstance(info.value, ThermalOverflow)


class TestCritical:

    def test_xxx_critical_temperature(self) -> None:
        result = critical_temperature(XXX, 0.5, 10, tol=1e-8)
        assert result.status is CriticalStatus.CONVERGED
        assert result.kind is CriticalKind.TEMPERATURE
        assert result.value == pytest.approx(XXX_CRITICAL_TEMPERATURE, abs=1e-7)
        assert result.residual_width <= 1e-8
        lo, hi = result.bracket
        assert lo - 1e-9 < XXX_CRITICAL_TEMPERATURE < hi + 1e-9

    @pytest.mark.parametrize("lo, hi, status", [
        (5.0, 10.0, CriticalStatus.ALWAYS_ZERO),
        (0.5, 1.0, CriticalStatus.ALWAYS_POSITIVE),
    ])
    def test_temperature_without_transition(self, lo, hi, status) -> None:
        result = critical_temperature(XXX, lo, hi)
        assert result.status is status
        assert result.value is None
        assert not result.converged
        assert result.bracket == (lo, hi)

    def test_dm_without_transition(self) -> None:
        assert critical_dm(CouplingParams(1, 1, 1), DmAxis.X, 10.0, 0.0, 0.1).status is CriticalStatus.ALWAYS_ZERO

    def test_dm_reversed_transition(self) -> None:
        # already entangled at D = 0
        result = critical_dm(CouplingParams(1, 1, 1), DmAxis.X, 1.0, 0.0, 10.0)
        assert result.status is CriticalStatus.ALWAYS_POSITIVE

    def test_dm_ordering_figure_one(self) -> None:
        coupling = CouplingParams(0.2, -1, -0.5)
        x = critical_dm(coupling, DmAxis.X, 3.0, 0, 6)
        y = critical_dm(coupling, "y", 3.0, 0, 6)
        assert x.converged and y.converged
        assert x.value < y.value
        assert x.residual_width <= 1e-8

    @pytest.mark.parametrize("bracket", [(1.0, 0.5), (0.0, 1.0), (-1.0, 1.0)])
    def test_rejects_bad_temperature_bracket(self, bracket) -> None:
        with pytest.raises(InvalidParameter):
            critical_temperature(XXX, *bracket)

    def test_rejects_bad_tolerance(self) -> None:
        with pytest.raises(InvalidParameter):
            critical_temperature(XXX, 0.5, 10, tol=0.0)
        with pytest.raises(InvalidParameter):
            critical_dm(CouplingParams(1, 1, 1), DmAxis.X, 1.0, -1.0, 1.0)


class TestFigures:

    def test_preset_one(self) -> None:
        preset = figure_preset(1)
        assert preset.coupling == CouplingParams(0.2, -1, -0.5)
        assert preset.axes == (DmAxis.X, DmAxis.Y)
        assert preset.panel_a.variable is SweepVariable.DM_STRENGTH
        assert (preset.panel_a.start, preset.panel_a.stop, preset.panel_a.fixed) == (0.0, 6.0, 3.0)
        assert preset.panel_b.variable is SweepVariable.TEMPERATURE
        assert (preset.panel_b.start, preset.panel_b.stop, preset.panel_b.fixed) == (0.1, 10.0, 3.0)

    @pytest.mark.parametrize("figure_id", [0, 7])
    def test_unknown_figure(self, figure_id) -> None:
        with pytest.raises(UnknownFigure):
            figure_preset(figure_id)

    @pytest.mark.parametrize("figure_id, axis", sorted(FAVORED.items()))
    def test_favored_axis(self, figure_id, axis) -> None:
        assert figure_preset(figure_id).favored_axis is axis

    def test_sweeps_share_the_grid(self) -> None:
        panel_a, panel_b = figure_sweeps(figure_preset(3, steps=11))
        assert len(panel_a.values) == 11
        assert set(panel_a.concurrence) == {DmAxis.Y, DmAxis.Z}
        assert all(len(column) == 11 for column in panel_b.concurrence.values())
        assert panel_b.values[0] == 0.1

    @pytest.mark.parametrize("figure_id", sorted(FAVORED))
    def test_panel_a_nondecreasing_in_dm(self, figure_id) -> None:
        panel_a, _ = figure_sweeps(figure_preset(figure_id))
        for axis, column in panel_a.concurrence.items():
            assert min(np.diff(column)) >= -1e-12, axis

    @pytest.mark.parametrize("figure_id", sorted(FAVORED))
    def test_regression(self, figure_id) -> None:
        verdict = figure_regression(figure_id, steps=61)
        assert verdict.favored is FAVORED[figure_id]
        assert verdict.passed, verdict.checks
        assert verdict.label == f"{FAVORED[figure_id].label} dominates"
        for summary in verdict.summaries:
            assert summary.critical_dm.converged
            assert summary.critical_temperature.converged


class TestDominance:

    @pytest.mark.parametrize("coupling, axis", [
        ((1, 2, 3), DmAxis.Z),
        ((0.2, -1, -0.5), DmAxis.X),
        ((1, 1, 0), None),
    ])
    def test_largest_coupling_axis(self, coupling, axis) -> None:
        assert largest_coupling_axis(CouplingParams(*coupling)) is axis

    @pytest.mark.parametrize("figure_id", sorted(FAVORED))
    @pytest.mark.parametrize("t, d", [(1.0, 3.0), (3.0, 3.0), (1.0, 5.0), (3.0, 5.0)])
    def test_largest_coupling_leads(self, figure_id, t, d) -> None:
        coupling = figure_preset(figure_id).coupling
        report = dominance_report(coupling, t, d)
        expected = largest_coupling_axis(coupling)
        assert report.expected_leader is expected
        assert report.leader is expected
        assert report.rule_holds is True
        concurrences = [entry.concurrence for entry in report.ranking]
        assert concurrences == sorted(concurrences, reverse=True)

    def test_tied_couplings(self) -> None:
        report = dominance_report(CouplingParams(1, 1, 1), 1.0, 1.0)
        assert report.expected_leader is None
        assert report.rule_holds is None
        values = [report.entry(axis).concurrence for axis in DmAxis]
        assert max(values) - min(values) <= 1e-12


class TestVerify:

    def test_closed_form_matches_oracle(self) -> None:
        reports = verify_closed_form(samples=30, seed=7)
        assert set(reports) == set(DmAxis)
        for report in reports.values():
            assert report.samples == 30
            assert report.max_error <= 1e-9
            assert report.worst_spec.axis is report.axis

    def test_seeded(self) -> None:
        assert verify_closed_form(samples=5, seed=3) == verify_closed_form(samples=5, seed=3, threads=2)

    def test_rejects_zero_samples(self) -> None:
        with pytest.raises(InvalidParameter):
            verify_closed_form(samples=0)
