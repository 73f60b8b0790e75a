from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st
from numpy.random import Generator

from dmxyz.model import DmAxis, ModelSpec

couplings = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
strengths = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
temperatures = st.floats(min_value=0.1, max_value=20, allow_nan=False, allow_infinity=False)
axes = st.sampled_from(list(DmAxis))

XXX_CRITICAL_TEMPERATURE = 4 / math.log(3)


def xxx_concurrence(t: float) -> float:
    x = math.exp(4 / t)
    return (x - 3) / (x + 3)


def random_hermitian(rng: Generator, scale: float = 1.0) -> np.ndarray:
    x = rng.uniform(-scale, scale, size=(4, 4)) + 1j * rng.uniform(-scale, scale, size=(4, 4))
    return (x + x.conj().T) / 2


def random_spec(rng: Generator, axis: DmAxis) -> ModelSpec:
    jx, jy, jz = rng.uniform(-3, 3, size=3)
    return ModelSpec.of(jx, jy, jz, axis, rng.uniform(-3, 3))
