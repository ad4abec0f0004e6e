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

from nrvqa.algorithms.learner_base import Payload
from nrvqa.algorithms.whitebox import WhiteBoxLearner
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.errors import TrainingError
from nrvqa.logging.logger import nrvqa_logger


class LinearRegressionLearner(WhiteBoxLearner):
    """
    Ordinary least squares on the inputs extended by a column of ones.

    The system is solved by SVD, so rank-deficient inputs get the minimum-norm solution.
    """

    algorithm_name = "LR"
    references = {"Docs": "https://numpy.org/doc/stable/reference/generated/numpy.linalg.lstsq.html"}

    def get_hyperparameters(self) -> list:
        """
        Configure all learner-specific hyperparameters with ConfigSpace.

        Returns
        -------
        list
            The hyperparameters.
        """
        return []

    def _fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int) -> Payload:  # noqa: N803
        design = np.hstack([X, np.ones((X.shape[0], 1))])
        solution, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
        if not np.all(np.isfinite(solution)):
            nrvqa_logger.error("Least-squares solution is not finite.")
            raise TrainingError("LR: least-squares solution is not finite.")
        if rank < design.shape[1]:
            nrvqa_logger.debug(f"LR design matrix has rank {rank} of {design.shape[1]}, using the minimum-norm fit.")
        return {"weights": solution[:-1].copy(), "bias": float(solution[-1]), "rank": int(rank)}

    def _predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        return X @ payload["weights"] + payload["bias"]
