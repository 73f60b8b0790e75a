'''
Two-qubit Heisenberg XYZ Hamiltonians with a single-component DM interaction,
and their closed-form spectra and eigenstates.
'''
import enum
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from dmxyz.errors import InvalidParameter

__all__ = [
    'PAULI_X',
    'PAULI_Y',
    'PAULI_Z',
    'SPIN_FLIP',
    'DmAxis',
    'CouplingParams',
    'DmCoupling',
    'ModelSpec',
    'AnalyticSpectrum',
    'build_hamiltonian',
    'pauli_hamiltonian',
    'analytic_spectrum',
    'analytic_eigenstates',
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SPIN_FLIP = np.kron(PAULI_Y, PAULI_Y)

_SQRT_HALF = 1.0 / math.sqrt(2.0)


class DmAxis(enum.Enum):
    X = 'x'
    Y = 'y'
    Z = 'z'

    @classmethod
    def parse(cls, value):
        if isinstance(value, DmAxis):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise InvalidParameter("axis", value, "expected one of x, y, z") from None

    @property
    def label(self):
        return f"D{self.value}"

    @property
    def cross_pair(self):
        '''
        The ordered pair (j, k) in D (sigma_j (x) sigma_k - sigma_k (x) sigma_j)
        '''
        return {
            DmAxis.X: (DmAxis.Y, DmAxis.Z),
            DmAxis.Y: (DmAxis.Z, DmAxis.X),
            DmAxis.Z: (DmAxis.X, DmAxis.Y),
        }[self]


def _require_finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameter(name, value, "must be finite")
    return value


@dataclass(frozen=True)
class CouplingParams:
    jx: float
    jy: float
    jz: float

    def __post_init__(self):
        for name in ('jx', 'jy', 'jz'):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))

    def along(self, axis: DmAxis) -> float:
        return {DmAxis.X: self.jx, DmAxis.Y: self.jy, DmAxis.Z: self.jz}[axis]

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.jx, self.jy, self.jz)


@dataclass(frozen=True)
class DmCoupling:
    axis: DmAxis
    strength: float

    def __post_init__(self):
        object.__setattr__(self, 'axis', DmAxis.parse(self.axis))
        object.__setattr__(self, 'strength', _require_finite('strength', self.strength))


@dataclass(frozen=True)
class ModelSpec:
    coupling: CouplingParams
    dm: DmCoupling

    @classmethod
    def of(cls, jx, jy, jz, axis, d):
        return cls(CouplingParams(jx, jy, jz), DmCoupling(DmAxis.parse(axis), d))

    @property
    def axis(self) -> DmAxis:
        return self.dm.axis

    def with_strength(self, d: float) -> 'ModelSpec':
        return replace(self, dm=DmCoupling(self.dm.axis, d))

    def with_axis(self, axis) -> 'ModelSpec':
        return replace(self, dm=DmCoupling(DmAxis.parse(axis), self.dm.strength))


@dataclass(frozen=True)
class AnalyticSpectrum:
    axis: DmAxis
    e1: float
    e2: float
    e3: float
    e4: float
    w: float
    angles: Optional[Tuple[float, float]] = None   # theta (axis X) or phi (axis Y)
    chi: Optional[complex] = None                  # axis Z only

    @property
    def energies(self) -> Tuple[float, float, float, float]:
        return (self.e1, self.e2, self.e3, self.e4)


def build_hamiltonian(spec: ModelSpec) -> np.ndarray:
    '''
    Builds the Hamiltonian matrix in the standard basis |00>, |01>, |10>, |11>
    INPUT
        spec; coupling constants plus the DM axis and strength
    RETURNS
        4x4 complex Hermitian matrix
    '''
    jx, jy, jz = spec.coupling.as_tuple()
    d = spec.dm.strength
    plus = jx + jy
    minus = jx - jy

    if spec.axis is DmAxis.X:
        rows = [
            [jz, 1j * d, -1j * d, minus],
            [-1j * d, -jz, plus, 1j * d],
            [1j * d, plus, -jz, -1j * d],
            [minus, -1j * d, 1j * d, jz],
        ]
    elif spec.axis is DmAxis.Y:
        rows = [
            [jz, d, -d, minus],
            [d, -jz, plus, d],
            [-d, plus, -jz, -d],
            [minus, d, -d, jz],
        ]
    else:
        rows = [
            [jz, 0, 0, minus],
            [0, -jz, plus + 2j * d, 0],
            [0, plus - 2j * d, -jz, 0],
            [minus, 0, 0, jz],
        ]
    return np.array(rows, dtype=np.complex128)


def pauli_hamiltonian(spec: ModelSpec) -> np.ndarray:
    '''
    Assembles sum_i J_i sigma_i (x) sigma_i + D (sigma_j (x) sigma_k - sigma_k (x) sigma_j)
    from explicit Kronecker products
    '''
    paulis = {DmAxis.X: PAULI_X, DmAxis.Y: PAULI_Y, DmAxis.Z: PAULI_Z}
    h = sum(spec.coupling.along(axis) * np.kron(paulis[axis], paulis[axis]) for axis in DmAxis)
    j, k = spec.axis.cross_pair
    h = h + spec.dm.strength * (np.kron(paulis[j], paulis[k]) - np.kron(paulis[k], paulis[j]))
    return np.asarray(h, dtype=np.complex128)


def _folded_angle(sin_part: float, cos_part: float, degenerate: float) -> float:
    '''
    Angle of an unnormalized (sin, cos) pair folded into (-pi/2, pi/2]
    INPUT
        sin_part, cos_part; components proportional to (sin(angle), cos(angle))
        degenerate; angle used when both components vanish
    '''
    if sin_part == 0.0 and cos_part == 0.0:
        return degenerate
    angle = math.atan2(sin_part, cos_part)
    if angle > math.pi / 2:
        angle -= math.pi
    elif angle <= -math.pi / 2:
        angle += math.pi
    return angle


def _x_angles(jy, jz, d, w):
    # (sin, cos) of theta_1 is proportional to (2D, w - s) and to (w + s, 2D); likewise
    # theta_2 to (2D, w + s) and (w - s, 2D). Pick the form that avoids cancellation.
    s = jy + jz
    top = (2 * d, w - s) if s <= 0 else (w + s, 2 * d)
    bottom = (2 * d, w + s) if s >= 0 else (w - s, 2 * d)
    return _folded_angle(*top, math.pi / 2), _folded_angle(*bottom, 0.0)


def _y_angles(jx, jz, d, w):
    # phi_1: (2D, p - w) ~ (w + p, -2D); phi_2: (2D, p + w) ~ (w - p, 2D)
    p = jx + jz
    top = (2 * d, p - w) if p <= 0 else (w + p, -2 * d)
    bottom = (2 * d, p + w) if p >= 0 else (w - p, 2 * d)
    return _folded_angle(*top, math.pi / 2), _folded_angle(*bottom, 0.0)


def analytic_spectrum(spec: ModelSpec) -> AnalyticSpectrum:
    '''
    Closed-form energies in the analytic index order (E1, E2 are the DM-independent
    Bell states, E3 and E4 the DM-mixed pair)
    INPUT
        spec; model specification
    RETURNS
        AnalyticSpectrum with energies, the mixing frequency w and the mixing angles or chi
    '''
    jx, jy, jz = spec.coupling.as_tuple()
    d = spec.dm.strength
    axis = spec.axis

    if axis is DmAxis.X:
        w = math.hypot(2 * d, jy + jz)
        return AnalyticSpectrum(axis, jx + jy - jz, jx - jy + jz, -jx + w, -jx - w, w,
                                angles=_x_angles(jy, jz, d, w))
    if axis is DmAxis.Y:
        w = math.hypot(2 * d, jx + jz)
        return AnalyticSpectrum(axis, jy + jx - jz, jy - jx + jz, -jy + w, -jy - w, w,
                                angles=_y_angles(jx, jz, d, w))
    w = math.hypot(2 * d, jx + jy)
    chi = complex(jx + jy, -2 * d) / w if w > 0 else 1.0 + 0.0j
    return AnalyticSpectrum(axis, jz + jx - jy, jz - jx + jy, -jz + w, -jz - w, w, chi=chi)


def analytic_eigenstates(spec: ModelSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    '''
    Closed-form eigenstates paired with the energies of analytic_spectrum
    RETURNS
        four normalized complex 4-vectors (Psi_1 .. Psi_4)
    '''
    spectrum = analytic_spectrum(spec)

    if spec.axis is DmAxis.Z:
        chi = spectrum.chi
        states = [
            [1, 0, 0, 1],
            [1, 0, 0, -1],
            [0, 1, chi, 0],
            [0, 1, -chi, 0],
        ]
    else:
        a1, a2 = spectrum.angles
        s1, c1 = math.sin(a1), math.cos(a1)
        s2, c2 = math.sin(a2), math.cos(a2)
        if spec.axis is DmAxis.X:
            states = [
                [0, 1, 1, 0],
                [1, 0, 0, 1],
                [s1, -1j * c1, 1j * c1, -s1],
                [s2, 1j * c2, -1j * c2, -s2],
            ]
        else:
            states = [
                [0, 1, 1, 0],
                [1, 0, 0, -1],
                [s1, -c1, c1, s1],
                [s2, -c2, c2, s2],
            ]
    return tuple(_SQRT_HALF * np.array(state, dtype=np.complex128) for state in states)
