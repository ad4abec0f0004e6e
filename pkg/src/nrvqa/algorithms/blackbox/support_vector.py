# Copyright 2025 - Pruna AI GmbH. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
from ConfigSpace import UniformFloatHyperparameter, UniformIntegerHyperparameter
from scipy.spatial.distance import cdist
from sklearn.svm import SVR

from nrvqa.algorithms.blackbox import BlackBoxLearner
from nrvqa.algorithms.learner_base import Payload
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.errors import TrainingError
from nrvqa.logging.logger import nrvqa_logger


def rbf_gamma(X: np.ndarray, factor: float) -> float:  # noqa: N803
    """
    Kernel width ``1 / (factor * mean input variance)``.

    Parameters
    ----------
    X : np.ndarray
        Training inputs.
    factor : float
        Multiplier of the mean variance.

    Returns
    -------
    float
        The RBF gamma.
    """
    mean_variance = float(X.var(axis=0).mean())
    if mean_variance <= 0.0:
        nrvqa_logger.error("All SVR training inputs are identical.")
        raise TrainingError("SVR: training inputs have zero variance.")
    return 1.0 / (factor * mean_variance)


class SupportVectorLearner(BlackBoxLearner):
    """
    Epsilon-insensitive support-vector regression with a radial-basis kernel, solved by SMO (libsvm).

    Prediction evaluates the kernel expansion over the stored support vectors.
    """

    algorithm_name = "SVR"
    references = {"Docs": "https://scikit-learn.org/stable/modules/svm.html#regression"}

    def get_hyperparameters(self) -> list:
        """
        Configure all learner-specific hyperparameters with ConfigSpace.

        Returns
        -------
        list
            The hyperparameters.
        """
        return [
            UniformFloatHyperparameter(
                "C", lower=1e-3, upper=1e4, log=True, default_value=20.0, meta=dict(desc="Box constraint.")
            ),
            UniformFloatHyperparameter(
                "epsilon", lower=0.0, upper=1.0, default_value=0.1, meta=dict(desc="Width of the insensitive tube.")
            ),
            UniformFloatHyperparameter(
                "gamma_factor",
                lower=1e-3,
                upper=1e3,
                log=True,
                default_value=10.0,
                meta=dict(desc="Gamma is one over this factor times the mean input variance."),
            ),
            UniformFloatHyperparameter(
                "tol", lower=1e-8, upper=1e-1, log=True, default_value=1e-3, meta=dict(desc="KKT tolerance.")
            ),
            UniformIntegerHyperparameter(
                "max_iter",
                lower=1,
                upper=10_000_000,
                default_value=100_000,
                meta=dict(desc="Maximum number of solver iterations."),
            ),
        ]

    def _fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int) -> Payload:  # noqa: N803
        gamma = rbf_gamma(X, spec["gamma_factor"])
        model = SVR(
            kernel="rbf",
            C=spec["C"],
            epsilon=spec["epsilon"],
            gamma=gamma,
            tol=spec["tol"],
            max_iter=spec["max_iter"],
        )
        model.fit(X, y)
        support_vectors = np.asarray(model.support_vectors_, dtype=np.float64)
        if support_vectors.shape[0] == 0:
            nrvqa_logger.debug("SVR fit every target inside the tube, predicting the intercept.")
        return {
            "support_vectors": support_vectors.copy(),
            "dual_coef": np.asarray(model.dual_coef_[0], dtype=np.float64).copy(),
            "intercept": float(model.intercept_[0]),
            "gamma": gamma,
            "C": float(spec["C"]),
        }

    def _predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        if payload["support_vectors"].shape[0] == 0:
            return np.full(X.shape[0], payload["intercept"])
        kernel = np.exp(-payload["gamma"] * cdist(X, payload["support_vectors"], "sqeuclidean"))
        return kernel @ payload["dual_coef"] + payload["intercept"]
