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

import math

import numpy as np
from ConfigSpace import UniformFloatHyperparameter, UniformIntegerHyperparameter
from sklearn.tree import DecisionTreeClassifier

from nrvqa.algorithms.learner_base import Payload
from nrvqa.algorithms.tree_utils import apply_trees, classification_leaf_values, stack_trees
from nrvqa.algorithms.whitebox import WhiteBoxLearner
from nrvqa.algorithms.whitebox.regression_tree import min_samples_split_hyperparameter
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.errors import TrainingError
from nrvqa.logging.logger import nrvqa_logger


def quality_classes(y: np.ndarray, n_classes: int) -> np.ndarray:
    """
    Discretize quality indices into ``n_classes`` steps of ``1 / n_classes``.

    Parameters
    ----------
    y : np.ndarray
        Quality indices in [0, 1].
    n_classes : int
        Number of classes.

    Returns
    -------
    np.ndarray
        Class labels in 0..n_classes - 1; the top class also absorbs q = 1.
    """
    return np.clip(np.rint(y * n_classes), 0, n_classes - 1).astype(np.int64)


class AdaBoostTreesLearner(WhiteBoxLearner):
    """
    Multiclass AdaBoost (SAMME) of decision-tree classifiers over discretized quality.

    The prediction is the quality value of the class with the largest weighted vote.
    """

    algorithm_name = "EDT-AB"
    references = {"Paper": "https://doi.org/10.4310/SII.2009.v2.n3.a8"}

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
                default_value=200,
                meta=dict(desc="Maximum number of boosting stages."),
            ),
            UniformFloatHyperparameter(
                "learning_rate",
                lower=1e-4,
                upper=2.0,
                default_value=0.2,
                meta=dict(desc="Multiplier of every stage weight."),
            ),
            UniformIntegerHyperparameter(
                "n_classes",
                lower=2,
                upper=1000,
                default_value=100,
                meta=dict(desc="Number of quality classes, each 1/n_classes wide."),
            ),
            min_samples_split_hyperparameter(default=11),
        ]

    def _fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int) -> Payload:  # noqa: N803
        n_classes = spec["n_classes"]
        labels = quality_classes(y, n_classes)
        weights = np.full(X.shape[0], 1.0 / X.shape[0])
        chance_error = 1.0 - 1.0 / n_classes

        trees, leaves, alphas = [], [], []
        for stage in range(spec["n_estimators"]):
            tree = DecisionTreeClassifier(min_samples_split=spec["min_samples_split"], random_state=seed)
            tree.fit(X, labels, sample_weight=weights)
            incorrect = tree.predict(X) != labels
            error = float(weights[incorrect].sum() / weights.sum())

            if error >= chance_error:
                nrvqa_logger.debug(f"EDT-AB stage {stage} is no better than chance (error {error:.4f}), stopping.")
                break
            if error <= 0.0:
                trees.append(tree)
                alphas.append(1.0)
                break
            alpha = spec["learning_rate"] * (math.log((1.0 - error) / error) + math.log(n_classes - 1))
            trees.append(tree)
            alphas.append(alpha)
            weights = weights * np.exp(alpha * incorrect)
            weights = weights / weights.sum()

        if not trees:
            nrvqa_logger.error("The first AdaBoost stage is no better than chance.")
            raise TrainingError("EDT-AB: the first weak learner is no better than chance.")
        for tree in trees:
            leaves.append(classification_leaf_values(tree))
        return {
            "trees": stack_trees(trees, leaves),
            "alphas": np.array(alphas, dtype=np.float64),
            "n_classes": n_classes,
        }

    def _predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        votes_for = apply_trees(payload["trees"], X).astype(np.int64)
        n_trees, n_samples = votes_for.shape
        votes = np.zeros((n_samples, payload["n_classes"]))
        samples = np.broadcast_to(np.arange(n_samples), (n_trees, n_samples))
        stage_weights = np.broadcast_to(payload["alphas"][:, None], (n_trees, n_samples))
        np.add.at(votes, (samples, votes_for), stage_weights)
        return np.argmax(votes, axis=1) / payload["n_classes"]
