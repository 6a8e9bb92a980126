"""Estimation, prediction and I/O services for Joint Mixreg."""

from .baselines import fit_gmm_covariate, fit_mbc, fit_ols
from .density import component_joint_logdensity, component_log_densities, loglik, sample
from .em_estimator import canonical_order, canonicalize, estep, fit, mstep, run_em
from .functional import (
    antiderivative_slope,
    assemble_design,
    differentiate,
    evaluate_curves,
    fpca,
    project_scores,
    reconstruct_slope,
    smooth_curves,
    subset_curves,
)
from .model_selection import bic_score, param_count, select_k
from .mspe import (
    dominance_quadratic_form,
    mspe_adaptive,
    mspe_biased,
    mspe_fixed,
    mspe_report,
    verify_dominance,
)
from .prediction import (
    assign_cluster,
    assign_clusters,
    posterior_matrix,
    posterior_weights,
    predict,
    predict_many,
    threshold_filter,
)
from .scenarios import make_scenario, scenario_model

__all__ = [
    "loglik",
    "sample",
    "component_joint_logdensity",
    "component_log_densities",
    "estep",
    "mstep",
    "run_em",
    "fit",
    "canonical_order",
    "canonicalize",
    "param_count",
    "bic_score",
    "select_k",
    "fit_ols",
    "fit_gmm_covariate",
    "fit_mbc",
    "posterior_weights",
    "posterior_matrix",
    "predict",
    "predict_many",
    "assign_cluster",
    "assign_clusters",
    "threshold_filter",
    "smooth_curves",
    "differentiate",
    "evaluate_curves",
    "subset_curves",
    "fpca",
    "project_scores",
    "reconstruct_slope",
    "antiderivative_slope",
    "assemble_design",
    "mspe_adaptive",
    "mspe_fixed",
    "mspe_biased",
    "dominance_quadratic_form",
    "mspe_report",
    "verify_dominance",
    "scenario_model",
    "make_scenario",
]
