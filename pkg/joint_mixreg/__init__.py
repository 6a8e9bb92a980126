"""
Joint Mixture Regression - estimation toolkit

Fits mixture regressions where the joint law of the response and the covariate is a
finite Gaussian mixture, predicts with posterior-weighted component regressions, handles
functional covariates through FPCA scores, and reproduces simulation and cross-validation
comparisons against ordinary mixture regression, least squares and model-based clustering.
"""

__version__ = "0.3.0"
__author__ = "Joint Mixreg Contributors"
