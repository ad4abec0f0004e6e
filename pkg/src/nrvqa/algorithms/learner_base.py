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

from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np

from nrvqa.config.learner_space import LEARNER_SPACE
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.errors import DataError, TrainingError
from nrvqa.features.normalizer import FEATURE_COUNT
from nrvqa.logging.logger import nrvqa_logger

MIN_TRAINING_SAMPLES = 10

Payload = Dict[str, Any]


class NrvqaLearnerBase(ABC):
    """Base class for nrvqa learners."""

    def __init__(self) -> None:
        self.hyperparameters = self.get_hyperparameters()
        # register the learner and its hyperparameters
        LEARNER_SPACE.register_learner(self.algorithm_name, self.hyperparameters, self.algorithm_group)

    @property
    @abstractmethod
    def algorithm_name(self) -> str:
        """Subclasses need to provide a name for the learner."""
        pass

    @property
    @abstractmethod
    def references(self) -> None | dict[str, str]:
        """References like papers or GitHub repositories for the learner."""
        pass

    @property
    @abstractmethod
    def algorithm_group(self) -> str:
        """Return the group (i.e. "whitebox" or "blackbox") of the learner."""
        pass

    @abstractmethod
    def get_hyperparameters(self) -> list:
        """Configure all learner-specific hyperparameters with ConfigSpace."""
        pass

    @abstractmethod
    def _fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int) -> Payload:  # noqa: N803
        """
        Fit the learner.

        Parameters
        ----------
        X : np.ndarray
            Normalized inputs, shape (n, 10).
        y : np.ndarray
            Quality targets in [0, 1].
        spec : LearnerSpec
            Validated hyperparameters.
        seed : int
            Seed of every random choice made while fitting.

        Returns
        -------
        Payload
            Trained parameters as plain Python values and numpy arrays.
        """
        pass

    @abstractmethod
    def _predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        """
        Predict from trained parameters.

        Parameters
        ----------
        payload : Payload
            The output of ``_fit``.
        X : np.ndarray
            Normalized inputs, shape (n, 10).

        Returns
        -------
        np.ndarray
            Unclamped predictions, shape (n,).
        """
        pass

    def fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int = 0) -> Payload:  # noqa: N803
        """
        Check the training data and fit the learner.

        Parameters
        ----------
        X : np.ndarray
            Normalized inputs, shape (n, 10).
        y : np.ndarray
            Quality targets in [0, 1].
        spec : LearnerSpec
            Hyperparameters, for this learner.
        seed : int
            Training seed.

        Returns
        -------
        Payload
            Trained parameters.
        """
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if spec.algo != self.algorithm_name:
            raise TrainingError(f"A {spec.algo} spec cannot train a {self.algorithm_name} learner.")
        if X.ndim != 2 or X.shape[1] != FEATURE_COUNT or y.shape != (X.shape[0],):
            nrvqa_logger.error(f"Training data has shapes {X.shape} and {y.shape}.")
            raise DataError(f"Training data must be (n, {FEATURE_COUNT}) inputs with n targets.")
        required = max(MIN_TRAINING_SAMPLES, X.shape[1] + 1)
        if X.shape[0] < required:
            nrvqa_logger.error(f"{self.algorithm_name} got {X.shape[0]} samples, needs {required}.")
            raise TrainingError(f"At least {required} training samples are needed, got {X.shape[0]}.")
        if not np.all(np.isfinite(X)) or np.any((y < 0.0) | (y > 1.0)) or not np.all(np.isfinite(y)):
            raise DataError("Training inputs must be finite and targets must lie in [0, 1].")
        return self._fit(X, y, spec, seed)

    def predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        """
        Predict for a batch of normalized inputs, without clamping.

        Parameters
        ----------
        payload : Payload
            Trained parameters.
        X : np.ndarray
            Normalized inputs, shape (n, 10).

        Returns
        -------
        np.ndarray
            Predictions, shape (n,).
        """
        return np.asarray(self._predict(payload, np.asarray(X, dtype=np.float64)), dtype=np.float64)
