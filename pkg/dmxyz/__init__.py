from dmxyz.analysis import (CriticalResult, CriticalStatus, DominanceReport, FigurePreset, FigureVerdict,
                            OracleReport, SweepRow, SweepSpec, SweepVariable, critical_dm,
                            critical_temperature, dominance_report, figure_preset, figure_regression,
                            figure_sweeps, sweep, verify_closed_form)
from dmxyz.entanglement import (ConcurrencePath, ConcurrenceResult, concurrence_closed_form,
                                concurrence_oracle, lambda_closed_form)
from dmxyz.errors import DmxyzError
from dmxyz.linalg4 import HermitianEigenSystem, hermitian_eigensystem, hermitian_sqrt, matrix_function_hermitian
from dmxyz.model import (AnalyticSpectrum, CouplingParams, DmAxis, DmCoupling, ModelSpec, analytic_eigenstates,
                         analytic_spectrum, build_hamiltonian)
from dmxyz.thermal import Temperature, ThermalState, closed_form_density, gibbs_state, partition_function

__version__ = '0.1.0'
