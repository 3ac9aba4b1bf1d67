"""Gaussian-RBF Kolmogorov-Arnold networks and DeepOKAN operator models.

Core layers live at the top level; data generation sits in
``deepokan.datagen`` and the experiment/CLI layer in ``deepokan.cli``.
The RBF kernels run through numba when available; set DEEPOKAN_NUMBA=0
to force the pure-numpy reference backend.
"""

from .errors import FormatError, NumericalError, VersionError
from .kan import KanLayer, KanNetwork, RbfGrid, kan_param_count, rbf_features
from .metrics import ErrorSummary, histogram, l2_error, summarize_errors
from .mlp import DenseLayer, MlpNetwork, mlp_param_count
from .operator import MinMaxNormalizer, OperatorModel, operator_param_count
from .optim import TrainConfig, adam_step, lbfgs_step, rmsd_loss, scheduled_lr, train
from .report import RunReport
from .rng import make_rng

__version__ = "0.1.0"

__all__ = [
    "FormatError",
    "NumericalError",
    "VersionError",
    "KanLayer",
    "KanNetwork",
    "RbfGrid",
    "kan_param_count",
    "rbf_features",
    "ErrorSummary",
    "histogram",
    "l2_error",
    "summarize_errors",
    "DenseLayer",
    "MlpNetwork",
    "mlp_param_count",
    "MinMaxNormalizer",
    "OperatorModel",
    "operator_param_count",
    "TrainConfig",
    "adam_step",
    "lbfgs_step",
    "rmsd_loss",
    "scheduled_lr",
    "train",
    "RunReport",
    "make_rng",
    "__version__",
]
