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

from nrvqa.algorithms.learner_base import Payload
from nrvqa.algorithms.tree_utils import apply_trees, regression_leaf_values, stack_trees
from nrvqa.algorithms.whitebox import WhiteBoxLearner
from nrvqa.algorithms.whitebox.regression_tree import grow_regression_tree, min_samples_split_hyperparameter
from nrvqa.config.learner_spec import LearnerSpec


class BoostedTreesLearner(WhiteBoxLearner):
    """
    Least-squares gradient boosting of regression trees.

    Starting from the target mean, every stage fits a tree to the current residuals and adds it, shrunk by the
    learning rate. Each leaf equals the mean residual of its samples, so the training error never increases.
    """

    algorithm_name = "ERT-LSB"
    references = {"Paper": "https://doi.org/10.1214/aos/1013203451"}

    def get_hyperparameters(self) -> list:
        """
        Configure all learner-specific hyperparameters with ConfigSpace.

        Returns
        -------
        list
            The hyperparameters.
        """
        return [
            UniformIntegerHyperparameter(
                "n_estimators",
                lower=1,
                upper=5000,
                default_value=500,
                meta=dict(desc="Number of boosting stages."),
            ),
            UniformFloatHyperparameter(
                "learning_rate",
                lower=1e-4,
                upper=1.0,
                log=True,
                default_value=0.01,
                meta=dict(desc="Shrinkage applied to every stage."),
            ),
            min_samples_split_hyperparameter(),
        ]

    def _fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int) -> Payload:  # noqa: N803
        learning_rate = spec["learning_rate"]
        initial = float(y.mean())
        fitted = np.full_like(y, initial)
        trees, leaves = [], []
        for _ in range(spec["n_estimators"]):
            tree = grow_regression_tree(X, y - fitted, spec["min_samples_split"], seed)
            fitted = fitted + learning_rate * tree.predict(X)
            trees.append(tree)
            leaves.append(regression_leaf_values(tree))
        return {"trees": stack_trees(trees, leaves), "initial": initial, "learning_rate": learning_rate}

    def _predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        return payload["initial"] + payload["learning_rate"] * apply_trees(payload["trees"], X).sum(axis=0)

    def staged_predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        """
        Predictions after every boosting stage.

        Parameters
        ----------
        payload : Payload
            Trained parameters.
        X : np.ndarray
            Inputs, shape (n, 10).

        Returns
        -------
        np.ndarray
            Shape (stages, n), row m holding the prediction of the first m + 1 stages.
        """
        steps = payload["learning_rate"] * apply_trees(payload["trees"], np.asarray(X, dtype=np.float64))
        return payload["initial"] + np.cumsum(steps, axis=0)
