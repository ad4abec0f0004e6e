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
from sklearn.tree import DecisionTreeRegressor

from nrvqa.algorithms.learner_base import Payload
from nrvqa.algorithms.tree_utils import apply_trees, regression_leaf_values, stack_trees
from nrvqa.algorithms.whitebox import WhiteBoxLearner
from nrvqa.config.learner_spec import LearnerSpec

# a node splits only when it holds more than 15 samples
DEFAULT_MIN_SAMPLES_SPLIT = 16


def min_samples_split_hyperparameter(default: int = DEFAULT_MIN_SAMPLES_SPLIT) -> UniformIntegerHyperparameter:
    """
    The minimum node size at which a tree attempts a split.

    Parameters
    ----------
    default : int
        Default node size.

    Returns
    -------
    UniformIntegerHyperparameter
        The hyperparameter.
    """
    return UniformIntegerHyperparameter(
        "min_samples_split",
        lower=2,
        upper=1000,
        default_value=default,
        meta=dict(desc="Minimum number of samples in a node to attempt a split."),
    )


def grow_regression_tree(
    X: np.ndarray, y: np.ndarray, min_samples_split: int, seed: int  # noqa: N803
) -> DecisionTreeRegressor:
    """
    Grow a variance-reduction tree with splits at sample midpoints.

    Parameters
    ----------
    X : np.ndarray
        Inputs.
    y : np.ndarray
        Targets.
    min_samples_split : int
        Minimum node size to attempt a split.
    seed : int
        Seed breaking ties between equally good splits.

    Returns
    -------
    DecisionTreeRegressor
        The fitted tree.
    """
    tree = DecisionTreeRegressor(criterion="squared_error", min_samples_split=min_samples_split, random_state=seed)
    return tree.fit(X, y)


class RegressionTreeLearner(WhiteBoxLearner):
    """Binary regression tree, leaves predicting the mean target."""

    algorithm_name = "RT"
    references = {"Docs": "https://scikit-learn.org/stable/modules/tree.html#regression"}

    def get_hyperparameters(self) -> list:
        """
        Configure all learner-specific hyperparameters with ConfigSpace.

        Returns
        -------
        list
            The hyperparameters.
        """
        return [min_samples_split_hyperparameter()]

    def _fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int) -> Payload:  # noqa: N803
        tree = grow_regression_tree(X, y, spec["min_samples_split"], seed)
        return {"trees": stack_trees([tree], [regression_leaf_values(tree)])}

    def _predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        return apply_trees(payload["trees"], X)[0]
