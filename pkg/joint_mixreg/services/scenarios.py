"""Simulation scenarios: two-component, two-covariate JMR models with fixed truth."""

import logging

import numpy as np

from joint_mixreg.exceptions import ValidationError
from joint_mixreg.models import Component, Dataset, MixtureModel, ModelKind
from joint_mixreg.utils.seeding import derive_seed

from .density import sample

logger = logging.getLogger(__name__)

SCENARIO_IDS = (1, 2, 3, 4)
MIXING = (0.6, 0.4)
ERROR_VARIANCE = 0.09  # 0.3 squared
DEFAULT_TEST_N = 500
DEFAULT_TRAIN_NS = (100, 300)

# Per scenario: (mu1, mu2, cov1, cov2, beta1, beta2, alpha)
_IDENTITY = ((1.0, 0.0), (0.0, 1.0))
_STRETCHED = ((4.0, 0.0), (0.0, 0.25))
_PARAMETERS = {
    # X and Y well separated by group
    1: ((-2.0, -2.0), (2.0, 2.0), _IDENTITY, _IDENTITY, (1.0, 1.0), (1.0, 2.0), (0.0, 0.0)),
    # Common covariate means, different covariances
    2: ((0.0, 0.0), (0.0, 0.0), _IDENTITY, _STRETCHED, (1.0, -1.0), (1.0, 2.0), (-3.0, 3.0)),
    # X separated, group response means coincide at 0
    3: ((-2.0, -2.0), (2.0, 2.0), _IDENTITY, _IDENTITY, (1.0, -2.0), (-1.0, 1.0), (-2.0, 0.0)),
    # X has a common distribution in both groups
    4: ((0.0, 0.0), (0.0, 0.0), _IDENTITY, _IDENTITY, (1.0, -2.0), (-1.0, 1.0), (-3.0, 3.0)),
}


def scenario_model(scenario_id: int) -> MixtureModel:
    """True model of a scenario.

    Raises:
        ValidationError: If scenario_id is not 1-4
    """
    if scenario_id not in _PARAMETERS:
        raise ValidationError(f"Unknown scenario {scenario_id}; expected one of {SCENARIO_IDS}")
    mu1, mu2, cov1, cov2, beta1, beta2, alpha = _PARAMETERS[scenario_id]
    components = tuple(
        Component(
            alpha=a, beta=np.array(b), sigma2=ERROR_VARIANCE, mu=np.array(mu), cov=np.array(cov)
        )
        for a, b, mu, cov in ((alpha[0], beta1, mu1, cov1), (alpha[1], beta2, mu2, cov2))
    )
    return MixtureModel(pi=np.array(MIXING), components=components, kind=ModelKind.JMR)


def make_scenario(
    scenario_id: int,
    train_n: int,
    seed: int,
    test_n: int = DEFAULT_TEST_N,
) -> tuple[Dataset, Dataset]:
    """Independent training and test samples (with truth labels) from a scenario.

    The two samples use seeds derived from (seed, 0) and (seed, 1).
    """
    model = scenario_model(scenario_id)
    if train_n < 0 or test_n < 0:
        raise ValidationError("Sample sizes must be non-negative")
    train = sample(model, train_n, derive_seed(seed, 0))
    test = sample(model, test_n, derive_seed(seed, 1))
    logger.debug(f"Scenario {scenario_id}: drew train n={train_n}, test n={test_n}, seed={seed}")
    return train, test
