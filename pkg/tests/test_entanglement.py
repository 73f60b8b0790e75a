from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from numpy.random import Generator

from dmxyz.entanglement import (ConcurrencePath, branch_concurrence, concurrence_closed_form,
                                concurrence_oracle, generic_concurrence, lambda_closed_form)
from dmxyz.errors import InvalidDensityMatrix
from dmxyz.linalg4 import hermitian_eigensystem
from dmxyz.model import CouplingParams, DmAxis, ModelSpec
from dmxyz.thermal import gibbs_state
from tests.helpers import axes, couplings, random_spec, strengths, temperatures, xxx_concurrence


def projector(*amplitudes) -> np.ndarray:
    psi = np.array(amplitudes, dtype=complex)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


class TestOracle:

    @pytest.mark.parametrize("state", [
        (1, 0, 0, 1),
        (1, 0, 0, -1),
        (0, 1, 1, 0),
        (0, 1, -1, 0),
        (0, 1, 1j, 0),
    ])
    def test_bell_states(self, state) -> None:
        assert concurrence_oracle(projector(*state)).value == pytest.approx(1.0, abs=1e-12)

    def test_product_state(self) -> None:
        assert concurrence_oracle(projector(1, 0, 0, 0)).value == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self) -> None:
        result = concurrence_oracle(np.eye(4) / 4)
        assert result.value == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(result.lambdas, [0.25] * 4, atol=1e-14)

    @pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
    def test_werner_state(self, p) -> None:
        rho = p * projector(0, 1, -1, 0) + (1 - p) * np.eye(4) / 4
        expected = max(0.0, (3 * p - 1) / 2)
        assert concurrence_oracle(rho).value == pytest.approx(expected, abs=1e-12)

    def test_pure_state_formula(self, fx_rng: Generator) -> None:
        for _ in range(20):
            a, b, c, d = fx_rng.normal(size=4) + 1j * fx_rng.normal(size=4)
            norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2)
            expected = 2 * abs(a * d - b * c) / norm ** 2
            assert concurrence_oracle(projector(a, b, c, d)).value == pytest.approx(expected, abs=1e-10)

    def test_lambdas_descending(self, fx_rng: Generator) -> None:
        result = concurrence_oracle(gibbs_state(random_spec(fx_rng, DmAxis.Z), 1.3))
        assert list(result.lambdas) == sorted(result.lambdas, reverse=True)
        assert result.path is ConcurrencePath.ORACLE

    def test_rejects_invalid_input(self) -> None:
        with pytest.raises(InvalidDensityMatrix):
            concurrence_oracle(np.eye(4))
        with pytest.raises(InvalidDensityMatrix):
            concurrence_oracle(np.diag([1.5, -0.5, 0, 0]))


class TestClosedForm:

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 3.0])
    def test_xxx_anchor(self, t) -> None:
        result = concurrence_closed_form(ModelSpec.of(1, 1, 1, DmAxis.X, 0), t)
        assert result.value == pytest.approx(xxx_concurrence(t), abs=1e-10)
        assert result.path is ConcurrencePath.CLOSED_FORM

    def test_xxx_separable_above_critical_temperature(self) -> None:
        assert concurrence_closed_form(ModelSpec.of(1, 1, 1, DmAxis.X, 0), 4.0).value == 0.0

    @pytest.mark.parametrize("axis", list(DmAxis))
    def test_matches_oracle(self, axis, fx_rng: Generator) -> None:
        for _ in range(40):
            spec = random_spec(fx_rng, axis)
            t = fx_rng.uniform(0.1, 20)
            closed = concurrence_closed_form(spec, t)
            oracle = concurrence_oracle(gibbs_state(spec, t))
            assert abs(closed.value - oracle.value) <= 1e-9
            np.testing.assert_allclose(closed.lambdas, oracle.lambdas, atol=1e-10)

    def test_matches_oracle_near_pure_state(self) -> None:
        # populations span more than twenty orders of magnitude
        spec = ModelSpec.of(-1.4073, 2.3526, 2.4287, DmAxis.X, -2.8575)
        closed = concurrence_closed_form(spec, 0.2933)
        oracle = concurrence_oracle(gibbs_state(spec, 0.2933))
        assert abs(closed.value - oracle.value) <= 1e-12
        np.testing.assert_allclose(closed.lambdas, oracle.lambdas, atol=1e-13)

    def test_oracle_reuses_the_gibbs_spectrum(self, monkeypatch) -> None:
        state = gibbs_state(ModelSpec.of(0.3, -0.7, 1.1, DmAxis.Z, 0.4), 0.8)
        calls = []

        def counting(a):
            calls.append(a)
            return hermitian_eigensystem(a)

        monkeypatch.setattr("dmxyz.entanglement.hermitian_eigensystem", counting)
        monkeypatch.setattr("dmxyz.thermal.hermitian_eigensystem", counting)
        concurrence_oracle(state)
        assert len(calls) == 1

    @settings(deadline=None, max_examples=80)
    @given(couplings, couplings, couplings, axes, strengths, temperatures)
    def test_lambdas_are_probabilities(self, jx, jy, jz, axis, d, t) -> None:
        lambdas = lambda_closed_form(ModelSpec.of(jx, jy, jz, axis, d), t)
        assert all(0 <= x <= 1 for x in lambdas)
        assert math.fsum(lambdas) == pytest.approx(1.0, abs=1e-12)

    @settings(deadline=None, max_examples=80)
    @given(couplings, couplings, couplings, axes, strengths, temperatures)
    def test_range(self, jx, jy, jz, axis, d, t) -> None:
        assert 0.0 <= concurrence_closed_form(ModelSpec.of(jx, jy, jz, axis, d), t).value <= 1.0

    @settings(deadline=None, max_examples=80)
    @given(couplings, couplings, couplings, axes, strengths, temperatures)
    def test_dm_sign_invariance(self, jx, jy, jz, axis, d, t) -> None:
        plus = concurrence_closed_form(ModelSpec.of(jx, jy, jz, axis, d), t).value
        minus = concurrence_closed_form(ModelSpec.of(jx, jy, jz, axis, -d), t).value
        assert abs(plus - minus) <= 1e-12

    @settings(deadline=None, max_examples=80)
    @given(couplings, couplings, couplings, axes, strengths, temperatures)
    def test_branch_agrees_with_generic(self, jx, jy, jz, axis, d, t) -> None:
        spec = ModelSpec.of(jx, jy, jz, axis, d)
        lambdas = lambda_closed_form(spec, t)
        assert branch_concurrence(axis, spec.coupling, lambdas) == pytest.approx(
            generic_concurrence(lambdas), abs=1e-12)


@pytest.mark.parametrize("axis, expected", [
    # jy > jz: |l1 - l3| - l2 - l4
    (DmAxis.X, 0.5),
    # jx <= jz: |l2 - l3| - l1 - l4
    (DmAxis.Y, 0.5),
    # jx <= jy: |l1 - l4| - l2 - l3
    (DmAxis.Z, 0.0),
])
def test_branch_selection(axis, expected) -> None:
    lambdas = (0.05, 0.1, 0.75, 0.1)
    assert branch_concurrence(axis, CouplingParams(0.0, 1.0, 0.5), lambdas) == pytest.approx(expected)


def test_generic_concurrence() -> None:
    assert generic_concurrence([0.25] * 4) == 0.0
    assert generic_concurrence([1.0, 0.0, 0.0, 0.0]) == 1.0
    assert generic_concurrence([0.6, 0.2, 0.1, 0.1]) == pytest.approx(0.2)


def boundary_spec(axis: DmAxis, j: float, other: float, d: float) -> ModelSpec:
    # the two couplings compared by the branch predicate are equal
    if axis is DmAxis.X:
        return ModelSpec.of(other, j, j, axis, d)
    if axis is DmAxis.Y:
        return ModelSpec.of(j, other, j, axis, d)
    return ModelSpec.of(j, j, other, axis, d)


@settings(deadline=None, max_examples=80)
@given(axes, couplings, couplings, strengths, temperatures)
def test_both_branches_agree_on_the_boundary(axis, j, other, d, t) -> None:
    spec = boundary_spec(axis, j, other, d)
    l1, l2, l3, l4 = lambda_closed_form(spec, t)
    upper = abs(l1 - l3) - l2 - l4
    lower = abs(l2 - l3) - l1 - l4 if axis is DmAxis.Y else abs(l1 - l4) - l2 - l3
    generic = generic_concurrence((l1, l2, l3, l4))
    assert max(upper, 0.0) == pytest.approx(generic, abs=1e-12)
    assert max(lower, 0.0) == pytest.approx(generic, abs=1e-12)
    assert concurrence_closed_form(spec, t).value == pytest.approx(generic, abs=1e-12)
