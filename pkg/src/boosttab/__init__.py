"""boosttab: boosting weights from truth-table counts, and the exact
exponential-risk minimizer they differ from.

The pipeline: generate or load a labeled dataset, boost decision stumps over
it, condense the classifiers' joint behavior into a configuration-count
tree, recover the ensemble weights in closed form from those counts alone,
and compare them against the true minimizer of the convexified risk.
"""

__version__ = "0.1.0"

from .analytic import AnalyticWeights, analytic_betas, analytic_weights, closed_form_p3
from .boosting import (
    BoostModel,
    decision_function,
    load_model,
    model_from_dict,
    model_to_dict,
    predict,
    save_model,
    train_adaboost,
)
from .data import (
    GENERATOR_NAME,
    GaussianSpec,
    LabeledDataset,
    generate_gaussian,
    outcome_matrix,
    read_dataset,
    read_outcomes,
    write_dataset,
    write_outcomes,
)
from .errors import (
    BoosttabError,
    CoercivityError,
    DegenerateDataError,
    InfiniteWeightError,
    NonConvergenceError,
    NumericalError,
    ParseError,
    ValidationError,
)
from .risk import (
    CombinedClassifier,
    PacketReduction,
    RiskReport,
    WeightVector,
    euler_residual_p3,
    minimize_risk,
    packet_reduce,
    risk_bruteforce,
    risk_from_tree,
    risk_gradient,
    risk_hessian,
)
from .stumps import DecisionStump, fit_stump, stump_predict, weighted_error
from .tree import (
    LeafTableP3,
    OutcomeTree,
    build_tree,
    genealogy,
    leaf_table_p3,
    level_sign_matrix,
    load_tree,
    node_from_genealogy,
    save_tree,
    tree_from_dict,
    tree_from_leaf_table_p3,
    tree_to_dict,
    truth_table_csv_p3,
)

__all__ = [
    "__version__",
    "AnalyticWeights",
    "BoostModel",
    "BoosttabError",
    "CoercivityError",
    "CombinedClassifier",
    "DecisionStump",
    "DegenerateDataError",
    "GENERATOR_NAME",
    "GaussianSpec",
    "InfiniteWeightError",
    "LabeledDataset",
    "LeafTableP3",
    "NonConvergenceError",
    "NumericalError",
    "OutcomeTree",
    "PacketReduction",
    "ParseError",
    "RiskReport",
    "ValidationError",
    "WeightVector",
    "analytic_betas",
    "analytic_weights",
    "build_tree",
    "closed_form_p3",
    "decision_function",
    "euler_residual_p3",
    "fit_stump",
    "genealogy",
    "generate_gaussian",
    "leaf_table_p3",
    "level_sign_matrix",
    "load_model",
    "load_tree",
    "minimize_risk",
    "model_from_dict",
    "model_to_dict",
    "node_from_genealogy",
    "outcome_matrix",
    "packet_reduce",
    "predict",
    "read_dataset",
    "read_outcomes",
    "risk_bruteforce",
    "risk_from_tree",
    "risk_gradient",
    "risk_hessian",
    "save_model",
    "save_tree",
    "stump_predict",
    "train_adaboost",
    "tree_from_dict",
    "tree_from_leaf_table_p3",
    "tree_to_dict",
    "truth_table_csv_p3",
    "weighted_error",
    "write_dataset",
    "write_outcomes",
]
