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
from ConfigSpace import UniformIntegerHyperparameter

from nrvqa.algorithms.learner_base import Payload
from nrvqa.algorithms.tree_utils import apply_trees, regression_leaf_values, stack_trees
from nrvqa.algorithms.whitebox import WhiteBoxLearner
from nrvqa.algorithms.whitebox.regression_tree import grow_regression_tree, min_samples_split_hyperparameter
from nrvqa.config.learner_space import Boolean
from nrvqa.config.learner_spec import LearnerSpec


class BaggedTreesLearner(WhiteBoxLearner):
    """Bootstrap aggregation of regression trees, every tree voting with equal weight."""

    algorithm_name = "ERT-BR"
    references = {"Paper": "https://doi.org/10.1007/BF00058655"}

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
                meta=dict(desc="Number of bagged trees."),
            ),
            Boolean("bootstrap", default=True, meta=dict(desc="Whether each tree sees a bootstrap resample.")),
            min_samples_split_hyperparameter(),
        ]

    def _fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int) -> Payload:  # noqa: N803
        rng = np.random.default_rng(seed)
        n = X.shape[0]
        trees, leaves = [], []
        for _ in range(spec["n_estimators"]):
            rows = rng.integers(0, n, size=n) if spec["bootstrap"] else np.arange(n)
            tree = grow_regression_tree(X[rows], y[rows], spec["min_samples_split"], seed)
            trees.append(tree)
            leaves.append(regression_leaf_values(tree))
        return {"trees": stack_trees(trees, leaves)}

    def _predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        return apply_trees(payload["trees"], X).mean(axis=0)
