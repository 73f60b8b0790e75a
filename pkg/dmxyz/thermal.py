'''
Gibbs states and partition functions, through the closed-form spectrum and through
the numeric matrix exponential of the Hamiltonian. Boltzmann constant k_B = 1.
'''
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from dmxyz.errors import InvalidDensityMatrix, InvalidParameter, ThermalOverflow, UnsupportedAxis
from dmxyz.linalg4 import (HERMITIAN_TOL, PSD_FLOOR, HermitianEigenSystem, as_matrix4, hermitian_eigensystem,
                           hermiticity_error)
from dmxyz.model import DmAxis, ModelSpec, analytic_spectrum, build_hamiltonian

__all__ = [
    'EXPONENT_BUDGET',
    'Temperature',
    'ThermalState',
    'boltzmann_weights',
    'log_partition_function',
    'partition_function',
    'gibbs_state',
    'closed_form_density',
    'density_spectrum',
    'validate_density_matrix',
]

EXPONENT_BUDGET = 700.0
TRACE_TOL = 1e-12


@dataclass(frozen=True)
class Temperature:
    t: float

    def __post_init__(self):
        t = float(self.t)
        if not math.isfinite(t) or t <= 0:
            raise InvalidParameter("temperature", self.t, "must be finite and > 0")
        object.__setattr__(self, 't', t)

    @classmethod
    def of(cls, value: Union['Temperature', float]) -> 'Temperature':
        return value if isinstance(value, Temperature) else cls(value)

    def __float__(self):
        return self.t


def _check_trace_and_hermiticity(rho, tol: float) -> np.ndarray:
    try:
        m = as_matrix4(rho)
    except (ValueError, ArithmeticError) as e:
        raise InvalidDensityMatrix(str(e)) from e
    trace = np.trace(m)
    if abs(trace - 1.0) > tol:
        raise InvalidDensityMatrix(f"trace {trace:.15g} differs from 1 by more than {tol:.0e}")
    deviation = hermiticity_error(m)
    if deviation > max(tol, HERMITIAN_TOL):
        raise InvalidDensityMatrix(f"not Hermitian (deviation {deviation:.3e})")
    return (m + m.conj().T) / 2


def _check_positive(system: HermitianEigenSystem):
    smallest = float(system.eigenvalues[0])
    if smallest < PSD_FLOOR:
        raise InvalidDensityMatrix(f"negative eigenvalue {smallest:.3e}")


def density_spectrum(rho, tol: float = TRACE_TOL) -> HermitianEigenSystem:
    '''
    Validates a two-qubit density matrix and returns its eigendecomposition
    INPUT
        rho; candidate 4x4 matrix
        tol; tolerance on the trace and on Hermiticity
    RETURNS
        HermitianEigenSystem of the symmetrized matrix
    '''
    system = hermitian_eigensystem(_check_trace_and_hermiticity(rho, tol))
    _check_positive(system)
    return system


def validate_density_matrix(rho, tol: float = TRACE_TOL) -> np.ndarray:
    '''
    Checks unit trace, Hermiticity and positivity of a two-qubit density matrix
    INPUT
        rho; candidate 4x4 matrix
        tol; tolerance on the trace and on Hermiticity
    RETURNS
        rho as a complex 4x4 array
    '''
    m = _check_trace_and_hermiticity(rho, tol)
    _check_positive(hermitian_eigensystem(m))
    return m


@dataclass(frozen=True)
class ThermalState:
    rho: np.ndarray
    log_z: float
    spec: ModelSpec
    temperature: Temperature
    # eigendecomposition of rho when it was built from one
    spectrum: Optional[HermitianEigenSystem] = None

    def __post_init__(self):
        if self.spectrum is None:
            rho = validate_density_matrix(self.rho)
        else:
            rho = _check_trace_and_hermiticity(self.rho, TRACE_TOL)
            _check_positive(self.spectrum)
        object.__setattr__(self, 'rho', rho)

    @property
    def z(self) -> float:
        '''
        Partition function; raises ThermalOverflow when it is not representable
        '''
        if self.log_z > EXPONENT_BUDGET:
            raise ThermalOverflow(self.log_z, EXPONENT_BUDGET)
        return math.exp(self.log_z)


def _scaled_exponents(energies: Sequence[float], t: Temperature) -> np.ndarray:
    with np.errstate(over='ignore', invalid='ignore'):
        exponents = -np.asarray(energies, dtype=np.float64) / t.t
    if not np.all(np.isfinite(exponents)):
        bad = next(float(x) for x in exponents if not math.isfinite(x))
        raise ThermalOverflow(bad, EXPONENT_BUDGET)
    return exponents


def boltzmann_weights(energies: Sequence[float], t: Union[Temperature, float]) -> np.ndarray:
    '''
    Normalized Boltzmann weights exp(-E_k/T)/Z computed with the largest exponent shifted to 0
    INPUT
        energies; sequence of energies
        t; temperature
    RETURNS
        array of probabilities in the order of energies
    '''
    exponents = _scaled_exponents(energies, Temperature.of(t))
    shifted = np.exp(exponents - exponents.max())
    return shifted / shifted.sum()


def _log_sum_exp(exponents: np.ndarray) -> float:
    top = float(exponents.max())
    return top + math.log(float(np.sum(np.exp(exponents - top))))


def log_partition_function(spec: ModelSpec, t: Union[Temperature, float]) -> float:
    exponents = _scaled_exponents(analytic_spectrum(spec).energies, Temperature.of(t))
    return _log_sum_exp(exponents)


def partition_function(spec: ModelSpec, t: Union[Temperature, float]) -> float:
    '''
    Closed-form partition function
        Z = 2 exp(-J_a/T) cosh((J_b - J_c)/T) + 2 exp(J_a/T) cosh(w/T)
    for DM axis a, evaluated as a shifted sum over the four analytic energies
    INPUT
        spec; model specification
        t; temperature
    RETURNS
        Z as a float
    '''
    log_z = log_partition_function(spec, t)
    if log_z > EXPONENT_BUDGET:
        raise ThermalOverflow(log_z, EXPONENT_BUDGET)
    return math.exp(log_z)


def gibbs_state(spec: ModelSpec, t: Union[Temperature, float]) -> ThermalState:
    '''
    Thermal state exp(-H/T)/Z from one Jacobi eigendecomposition of the numeric Hamiltonian.
    The populations come from the energies directly, so tiny weights keep their relative accuracy.
    INPUT
        spec; model specification
        t; temperature
    RETURNS
        validated ThermalState carrying the eigendecomposition of rho
    '''
    temperature = Temperature.of(t)
    system = hermitian_eigensystem(build_hamiltonian(spec))
    exponents = _scaled_exponents(system.eigenvalues, temperature)
    populations = boltzmann_weights(system.eigenvalues, temperature)

    rho = HermitianEigenSystem(populations, system.eigenvectors).reconstruct()
    # energies ascend, so the populations descend
    spectrum = HermitianEigenSystem(populations[::-1].copy(), system.eigenvectors[:, ::-1].copy())
    return ThermalState(
        rho=(rho + rho.conj().T) / 2,
        log_z=_log_sum_exp(exponents),
        spec=spec,
        temperature=temperature,
        spectrum=spectrum,
    )


def closed_form_density(spec: ModelSpec, t: Union[Temperature, float]) -> np.ndarray:
    '''
    Density matrix from the printed entry pattern of the x- and y-axis models.
    The z-axis model has no printed form; use gibbs_state instead.
    INPUT
        spec; model specification with DM axis X or Y
        t; temperature
    RETURNS
        4x4 complex density matrix
    '''
    if spec.axis is DmAxis.Z:
        raise UnsupportedAxis(spec.axis.value, "closed_form_density")
    spectrum = analytic_spectrum(spec)
    p1, p2, p3, p4 = boltzmann_weights(spectrum.energies, t)
    a1, a2 = spectrum.angles
    s1, c1 = math.sin(a1), math.cos(a1)
    s2, c2 = math.sin(a2), math.cos(a2)

    n1 = (p1 + p3 * c1 ** 2 + p4 * c2 ** 2) / 2
    n2 = (p1 - p3 * c1 ** 2 - p4 * c2 ** 2) / 2

    if spec.axis is DmAxis.X:
        m1 = (p2 + p3 * s1 ** 2 + p4 * s2 ** 2) / 2
        m2 = (p2 - p3 * s1 ** 2 - p4 * s2 ** 2) / 2
        q = 0.5j * (p3 * s1 * c1 - p4 * s2 * c2)
        qc = q.conjugate()
        rows = [
            [m1, q, qc, m2],
            [qc, n1, n2, q],
            [q, n2, n1, qc],
            [m2, qc, q, m1],
        ]
    else:
        m1 = (p2 + p3 * s1 ** 2 + p4 * s2 ** 2) / 2
        m2 = (-p2 + p3 * s1 ** 2 + p4 * s2 ** 2) / 2
        q = (p3 * s1 * c1 + p4 * s2 * c2) / 2
        rows = [
            [m1, -q, q, m2],
            [-q, n1, n2, -q],
            [q, n2, n1, q],
            [m2, -q, q, m1],
        ]
    return np.array(rows, dtype=np.complex128)
