'''
Wootters concurrence, through the general spin-flip construction and through the
closed-form lambda spectrum with its case-split expressions.
'''
import enum
import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from dmxyz.errors import BranchMismatch
from dmxyz.linalg4 import HermitianEigenSystem, hermitian_eigensystem
from dmxyz.model import SPIN_FLIP, CouplingParams, DmAxis, ModelSpec, analytic_spectrum
from dmxyz.thermal import Temperature, ThermalState, boltzmann_weights, density_spectrum

__all__ = [
    'BRANCH_TOL',
    'ConcurrencePath',
    'ConcurrenceResult',
    'generic_concurrence',
    'branch_concurrence',
    'concurrence_oracle',
    'lambda_closed_form',
    'concurrence_closed_form',
]

BRANCH_TOL = 1e-12
ORACLE_TRACE_TOL = 1e-10


class ConcurrencePath(enum.Enum):
    CLOSED_FORM = 'closed-form'
    ORACLE = 'oracle'


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    lambdas: Tuple[float, float, float, float]     # descending
    path: ConcurrencePath


def generic_concurrence(lambdas: Sequence[float]) -> float:
    '''
    C = max{2 lambda_max - sum(lambda), 0}, clipped into [0, 1]
    '''
    values = [float(x) for x in lambdas]
    return min(max(2.0 * max(values) - sum(values), 0.0), 1.0)


def branch_concurrence(axis: DmAxis, coupling: CouplingParams, lambdas: Sequence[float]) -> float:
    '''
    Case-split concurrence for the closed-form lambdas in analytic index order
    INPUT
        axis; DM axis
        coupling; coupling constants (selects the branch)
        lambdas; (lambda_1, .., lambda_4) as returned by lambda_closed_form
    RETURNS
        concurrence from the branch expression
    '''
    l1, l2, l3, l4 = (float(x) for x in lambdas)
    if axis is DmAxis.X:
        upper = coupling.jy > coupling.jz
    else:
        upper = coupling.jx > (coupling.jz if axis is DmAxis.Y else coupling.jy)

    if upper:
        value = abs(l1 - l3) - l2 - l4
    elif axis is DmAxis.Y:
        value = abs(l2 - l3) - l1 - l4
    else:
        value = abs(l1 - l4) - l2 - l3
    return min(max(value, 0.0), 1.0)


def _density_system(rho: Union[ThermalState, np.ndarray]) -> HermitianEigenSystem:
    if isinstance(rho, ThermalState):
        if rho.spectrum is not None:
            return rho.spectrum
        rho = rho.rho
    return density_spectrum(rho, tol=ORACLE_TRACE_TOL)


def concurrence_oracle(rho: Union[ThermalState, np.ndarray]) -> ConcurrenceResult:
    '''
    Concurrence of an arbitrary two-qubit density matrix.
    The lambdas are the square roots of the eigenvalues of the Hermitian sandwich
    sqrt(rho) (sy x sy) rho* (sy x sy) sqrt(rho) = X X^H with X = sqrt(rho) (sy x sy) sqrt(rho)* (sy x sy).
    With rho = V S^2 V^H, X = V (S W S) V^T (sy x sy) for the unitary W = V^H (sy x sy) V*, so the lambdas
    are the singular values of S W S, read off as |M^H u_k| for the eigenvectors u_k of M M^H.
    INPUT
        rho; ThermalState or raw 4x4 density matrix
    RETURNS
        ConcurrenceResult on the oracle path
    '''
    system = _density_system(rho)
    roots = np.sqrt(np.clip(system.eigenvalues, 0.0, None))
    v = system.eigenvectors

    spin_flip = v.conj().T @ SPIN_FLIP @ v.conj()
    m = roots[:, None] * spin_flip * roots[None, :]
    gram = m @ m.conj().T
    sandwich = hermitian_eigensystem((gram + gram.conj().T) / 2)
    lambdas = np.linalg.norm(m.conj().T @ sandwich.eigenvectors, axis=0)
    lambdas = tuple(sorted((float(x) for x in lambdas), reverse=True))
    return ConcurrenceResult(generic_concurrence(lambdas), lambdas, ConcurrencePath.ORACLE)


def _lambda_exponents(spec: ModelSpec, w: float) -> Tuple[float, float, float, float]:
    jx, jy, jz = spec.coupling.as_tuple()
    if spec.axis is DmAxis.X:
        return (jx + w, jx - w, -jx + jy - jz, -jx - jy + jz)
    if spec.axis is DmAxis.Y:
        return (-jy + jx - jz, -jy - jx + jz, jy + w, jy - w)
    return (jz + w, jz - w, -jz + jx - jy, -jz - jx + jy)


def lambda_closed_form(spec: ModelSpec, t: Union[Temperature, float]) -> Tuple[float, float, float, float]:
    '''
    Closed-form square roots of the eigenvalues of R in analytic index order
        axis X: exp((Jx +- w)/T)/Z, exp((-Jx +- Jy -+ Jz)/T)/Z
        axis Y: exp((-Jy +- Jx -+ Jz)/T)/Z, exp((Jy +- w')/T)/Z
        axis Z: exp((Jz +- w'')/T)/Z, exp((-Jz +- Jx -+ Jy)/T)/Z
    '''
    w = analytic_spectrum(spec).w
    # boltzmann_weights takes energies, the exponents above are -E
    weights = boltzmann_weights([-x for x in _lambda_exponents(spec, w)], t)
    return tuple(float(x) for x in weights)


def concurrence_closed_form(spec: ModelSpec, t: Union[Temperature, float]) -> ConcurrenceResult:
    '''
    Closed-form concurrence; evaluates the case-split expression and the generic formula
    and requires them to agree
    INPUT
        spec; model specification
        t; temperature
    RETURNS
        ConcurrenceResult on the closed-form path (lambdas sorted descending)
    '''
    lambdas = lambda_closed_form(spec, t)
    generic = generic_concurrence(lambdas)
    branch = branch_concurrence(spec.axis, spec.coupling, lambdas)
    if not math.isclose(branch, generic, rel_tol=0.0, abs_tol=BRANCH_TOL):
        raise BranchMismatch(spec.axis.value, branch, generic)
    return ConcurrenceResult(branch, tuple(sorted(lambdas, reverse=True)), ConcurrencePath.CLOSED_FORM)
