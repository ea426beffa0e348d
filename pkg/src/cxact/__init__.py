"""Complex-argument generalizations of partitioned real activations."""

from .builtins import BUILTINS, make_activation
from .calculus import GridSpec, check_coincidence, check_phase, cr_residual, wirtinger_fd
from .core import ErfOverflowError, arg_principal, complex_erf, erf_sigmoid
from .generalize import Absolute, ComplexActivation, Cosine, ErfSigmoid, Exponential, generalize
from .partition import GeneralExpr, Linear, PartitionedActivation, PartitionError, ScaledShiftedExp, elu, lrelu, selu

__version__ = "0.1.0"

__all__ = [
    "BUILTINS",
    "make_activation",
    "GridSpec",
    "check_coincidence",
    "check_phase",
    "cr_residual",
    "wirtinger_fd",
    "ErfOverflowError",
    "arg_principal",
    "complex_erf",
    "erf_sigmoid",
    "Absolute",
    "ComplexActivation",
    "Cosine",
    "ErfSigmoid",
    "Exponential",
    "generalize",
    "GeneralExpr",
    "Linear",
    "PartitionedActivation",
    "PartitionError",
    "ScaledShiftedExp",
    "elu",
    "lrelu",
    "selu",
]
