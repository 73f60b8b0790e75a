'''
Dense complex linear algebra for 4x4 Hermitian matrices.

Rows and columns are indexed in the two-qubit basis order |00>, |01>, |10>, |11>.
'''
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from dmxyz.errors import NoConvergence, NonFiniteMatrix, NotHermitian, NotPositiveSemidefinite

__all__ = [
    'DIM',
    'HERMITIAN_TOL',
    'PSD_FLOOR',
    'HermitianEigenSystem',
    'as_matrix4',
    'hermiticity_error',
    'max_norm',
    'commutator',
    'hermitian_eigensystem',
    'matrix_function_hermitian',
    'hermitian_sqrt',
]

DIM = 4
HERMITIAN_TOL = 1e-12
PSD_FLOOR = -1e-12
OFF_DIAGONAL_TOL = 1e-14
MAX_SWEEPS = 60
PHASE_TOL = 1e-12


@dataclass(frozen=True)
class HermitianEigenSystem:
    eigenvalues: np.ndarray     # shape (4,), ascending
    eigenvectors: np.ndarray    # shape (4, 4), column k pairs with eigenvalues[k]

    def reconstruct(self) -> np.ndarray:
        '''
        RETURNS
            V diag(eigenvalues) V^H
        '''
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix4(a) -> np.ndarray:
    '''
    Coerces the input into a finite complex 4x4 array
    INPUT
        a; anything numpy can turn into a (4, 4) array
    RETURNS
        a new complex128 array
    '''
    m = np.array(a, dtype=np.complex128)
    if m.shape != (DIM, DIM):
        raise ValueError(f"Expected a {DIM}x{DIM} matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteMatrix("matrix entries")
    return m


def hermiticity_error(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


def max_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a)))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _check_hermitian(a: np.ndarray) -> np.ndarray:
    m = as_matrix4(a)
    deviation = hermiticity_error(m)
    if deviation > HERMITIAN_TOL:
        raise NotHermitian(deviation, HERMITIAN_TOL)
    return (m + m.conj().T) / 2


def _off_norm(a: list) -> float:
    return math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(DIM) for j in range(DIM) if i != j))


def _rotate(a: list, v: list, p: int, q: int):
    '''
    Applies one complex Jacobi rotation that annihilates a[p][q]
    Mutates a (into G^H a G) and v (into v G); both are lists of rows of Python complex
    '''
    apq = a[p][q]
    r = abs(apq)
    if r == 0.0:
        return
    phase = apq.conjugate() / r     # e^{-i arg a_pq}; makes the pivot real
    app = a[p][p].real
    aqq = a[q][q].real

    # Real symmetric rotation on the phase-corrected pivot block
    diff = aqq - app
    if r < abs(diff) * 1.0e-36:
        t = r / diff
    else:
        theta = diff / (2.0 * r)
        t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
        if theta < 0.0:
            t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    # G = [[c, s], [-s phase, c phase]] on columns p, q
    sp = s * phase
    cp = c * phase
    for row in a:
        x, y = row[p], row[q]
        row[p] = c * x - sp * y
        row[q] = s * x + cp * y
    rp, rq = a[p], a[q]
    sp_bar, cp_bar = sp.conjugate(), cp.conjugate()
    for k in range(DIM):
        x, y = rp[k], rq[k]
        rp[k] = c * x - sp_bar * y
        rq[k] = s * x + cp_bar * y
    for row in v:
        x, y = row[p], row[q]
        row[p] = c * x - sp * y
        row[q] = s * x + cp * y

    rp[q] = rq[p] = 0j
    rp[p] = complex(app - t * r)
    rq[q] = complex(aqq + t * r)


def _fix_phases(v: np.ndarray) -> np.ndarray:
    '''
    Makes the first component of each column with modulus above PHASE_TOL real and nonnegative
    '''
    fixed = v.copy()
    for k in range(fixed.shape[1]):
        column = fixed[:, k]
        for component in column:
            modulus = abs(component)
            if modulus > PHASE_TOL:
                fixed[:, k] = column * (component.conjugate() / modulus)
                break
    return fixed


def hermitian_eigensystem(a) -> HermitianEigenSystem:
    '''
    Diagonalizes a Hermitian 4x4 matrix with cyclic complex Jacobi rotations.
    The matrix is first scaled by a power of two so its largest entry lies in [0.5, 1);
    the scaling is exact and keeps the norms finite for entries near the float range.
    INPUT
        a; Hermitian matrix (max |a - a^H| <= 1e-12)
    RETURNS
        HermitianEigenSystem with ascending eigenvalues (ties keep their original order)
        and orthonormal eigenvectors as columns
    '''
    work = _check_hermitian(a)
    largest = max_norm(work)
    if largest == 0.0:
        return HermitianEigenSystem(np.zeros(DIM), np.eye(DIM, dtype=np.complex128))
    exponent = math.frexp(largest)[1]
    rows = (np.ldexp(work.real, -exponent) + 1j * np.ldexp(work.imag, -exponent)).tolist()
    vectors = np.eye(DIM, dtype=np.complex128).tolist()
    frobenius = math.sqrt(sum(abs(x) ** 2 for row in rows for x in row))

    off = _off_norm(rows)
    sweeps = 0
    while off > OFF_DIAGONAL_TOL * frobenius:
        if sweeps >= MAX_SWEEPS:
            raise NoConvergence(sweeps, float(np.ldexp(off, exponent)))
        for p in range(DIM - 1):
            for q in range(p + 1, DIM):
                _rotate(rows, vectors, p, q)
        sweeps += 1
        off = _off_norm(rows)

    with np.errstate(over='ignore'):
        eigenvalues = np.ldexp(np.array([rows[k][k].real for k in range(DIM)]), exponent)
    if not np.all(np.isfinite(eigenvalues)):
        raise NonFiniteMatrix("eigenvalues")
    order = np.argsort(eigenvalues, kind='stable')
    return HermitianEigenSystem(
        eigenvalues=eigenvalues[order],
        eigenvectors=_fix_phases(np.array(vectors, dtype=np.complex128)[:, order]),
    )


def matrix_function_hermitian(a, f: Callable[[float], float]) -> np.ndarray:
    '''
    Applies a real function to a Hermitian matrix through its eigendecomposition
    INPUT
        a; Hermitian matrix
        f; real function, finite on the spectrum of a
    RETURNS
        V diag(f(lambda_k)) V^H, symmetrized to be exactly Hermitian
    '''
    system = hermitian_eigensystem(a)
    values = np.array([f(float(x)) for x in system.eigenvalues], dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NonFiniteMatrix("matrix function values")
    result = HermitianEigenSystem(values, system.eigenvectors).reconstruct()
    return (result + result.conj().T) / 2


def hermitian_sqrt(a) -> np.ndarray:
    '''
    Principal square root of a positive semidefinite Hermitian matrix
    Eigenvalues in [PSD_FLOOR, 0) are clamped to zero
    '''
    system = hermitian_eigensystem(a)
    smallest = float(system.eigenvalues[0])
    if smallest < PSD_FLOOR:
        raise NotPositiveSemidefinite(smallest, PSD_FLOOR)
    roots = np.sqrt(np.clip(system.eigenvalues, 0.0, None))
    result = HermitianEigenSystem(roots, system.eigenvectors).reconstruct()
    return (result + result.conj().T) / 2
