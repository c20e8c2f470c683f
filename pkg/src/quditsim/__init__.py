"""Weak simulation of odd-prime qudit Clifford+T circuits via approximate stabilizer rank."""

from .approx import (ApproxStateCert, InfeasiblePrecision, LinearCode, NoCodeFound, NonRealZ,
                     Z_of_code, build_approx_state, choose_k, find_code, sample_code)
from .circuit import Circuit, Gate, GadgetizedCircuit, gadgetize, parse, parse_file
from .field import NonPrimeDimension, Phase, ZeroInverse, gauss_sum, inverse, legendre, quadratic_gauss_sum
from .inner import inner, inner_exact
from .magic import alpha, beta_closed, build_C, build_M, kappa, optimal_p, orbit
from .stabilizer import StabilizerState, basis_state, dense_vector, plus_state
from .weaksim import SampleRecord, SimConfig, WeakSimulator, simulate

__version__ = "0.1.0"
