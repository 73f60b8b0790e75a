__all__ = [
    'DmxyzError',
    'InvalidParameter',
    'UnknownFigure',
    'LinalgError',
    'NotHermitian',
    'NotPositiveSemidefinite',
    'NoConvergence',
    'NonFiniteMatrix',
    'ThermalOverflow',
    'SweepPointOverflow',
    'UnsupportedAxis',
    'InvalidDensityMatrix',
    'BranchMismatch',
]


class DmxyzError(Exception):
    pass


class InvalidParameter(DmxyzError, ValueError):
    def __init__(self, name, value, reason):
        self.name = name
        self.value = value
        self.reason = reason

    def __str__(self):
        return f"Invalid {self.name}={self.value!r}: {self.reason}"


class UnknownFigure(InvalidParameter):
    def __init__(self, figure_id):
        super().__init__("figure", figure_id, "expected a figure id between 1 and 6")


class LinalgError(DmxyzError, ArithmeticError):
    pass


class NotHermitian(LinalgError):
    def __init__(self, deviation, tolerance):
        self.deviation = deviation
        self.tolerance = tolerance

    def __str__(self):
        return f"Matrix is not Hermitian (max |a - a^H| = {self.deviation:.3e} > {self.tolerance:.0e})"


class NotPositiveSemidefinite(LinalgError):
    def __init__(self, eigenvalue, floor):
        self.eigenvalue = eigenvalue
        self.floor = floor

    def __str__(self):
        return f"Matrix is not positive semidefinite (eigenvalue {self.eigenvalue:.3e} < {self.floor:.0e})"


class NoConvergence(LinalgError):
    def __init__(self, sweeps, off_norm):
        self.sweeps = sweeps
        self.off_norm = off_norm

    def __str__(self):
        return f"Jacobi iteration did not converge after {self.sweeps} sweeps (off-diagonal norm {self.off_norm:.3e})"


class NonFiniteMatrix(LinalgError):
    def __init__(self, what):
        self.what = what

    def __str__(self):
        return f"Non-finite values in {self.what}"


class ThermalOverflow(DmxyzError, OverflowError):
    def __init__(self, exponent, budget):
        self.exponent = exponent
        self.budget = budget

    def __str__(self):
        return f"Boltzmann exponent {self.exponent!r} exceeds the budget of {self.budget}"


class SweepPointOverflow(ThermalOverflow):
    def __init__(self, variable, value, cause):
        super().__init__(cause.exponent, cause.budget)
        self.variable = variable
        self.value = value

    def __str__(self):
        return f"Overflow at sweep point {self.variable}={self.value!r}: {super().__str__()}"


class UnsupportedAxis(DmxyzError):
    def __init__(self, axis, operation):
        self.axis = axis
        self.operation = operation

    def __str__(self):
        return f"{self.operation} has no closed form for DM axis {self.axis}"


class InvalidDensityMatrix(DmxyzError, ValueError):
    def __init__(self, reason):
        self.reason = reason

    def __str__(self):
        return f"Invalid density matrix: {self.reason}"


class BranchMismatch(DmxyzError, ArithmeticError):
    def __init__(self, axis, branch_value, generic_value):
        self.axis = axis
        self.branch_value = branch_value
        self.generic_value = generic_value

    def __str__(self):
        return (f"Case-split concurrence {self.branch_value!r} disagrees with the generic "
                f"formula {self.generic_value!r} for axis {self.axis}")
