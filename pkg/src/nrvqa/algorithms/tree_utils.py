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

from typing import Any, Sequence

import numpy as np

# sklearn marks leaves with -1 children
TREE_LEAF = -1


def stack_trees(trees: Sequence[Any], leaf_values: Sequence[np.ndarray]) -> dict[str, np.ndarray]:
    """
    Flatten fitted scikit-learn trees into padded arrays for vectorized traversal.

    Leaves and padding nodes point to themselves, so a fixed number of descent steps lands every sample on its leaf.

    Parameters
    ----------
    trees : Sequence[Any]
        Fitted ``DecisionTreeRegressor`` or ``DecisionTreeClassifier`` objects.
    leaf_values : Sequence[np.ndarray]
        Output per node of each tree, only read at leaves.

    Returns
    -------
    dict[str, np.ndarray]
        ``feature``, ``threshold``, ``left``, ``right`` and ``value`` of shape (trees, nodes), and ``depth``.
    """
    n_trees = len(trees)
    n_nodes = max(tree.tree_.node_count for tree in trees)
    own = np.broadcast_to(np.arange(n_nodes), (n_trees, n_nodes))
    feature = np.zeros((n_trees, n_nodes), dtype=np.int64)
    threshold = np.full((n_trees, n_nodes), np.inf)
    left = own.copy()
    right = own.copy()
    value = np.zeros((n_trees, n_nodes), dtype=np.float64)
    depth = 0

    for t, (tree, values) in enumerate(zip(trees, leaf_values)):
        structure = tree.tree_
        count = structure.node_count
        internal = structure.children_left != TREE_LEAF
        feature[t, :count] = np.where(internal, structure.feature, 0)
        threshold[t, :count] = np.where(internal, structure.threshold, np.inf)
        left[t, :count] = np.where(internal, structure.children_left, np.arange(count))
        right[t, :count] = np.where(internal, structure.children_right, np.arange(count))
        value[t, :count] = values
        depth = max(depth, int(structure.max_depth))

    return {
        "feature": feature,
        "threshold": threshold,
        "left": left,
        "right": right,
        "value": value,
        "depth": np.array(depth, dtype=np.int64),
    }


def regression_leaf_values(tree: Any) -> np.ndarray:
    """Mean target of every node of a fitted regression tree."""
    return np.asarray(tree.tree_.value[:, 0, 0], dtype=np.float64)


def classification_leaf_values(tree: Any) -> np.ndarray:
    """Winning class label of every node of a fitted classification tree."""
    return np.asarray(tree.classes_[np.argmax(tree.tree_.value[:, 0, :], axis=1)], dtype=np.float64)


def apply_trees(arrays: dict[str, np.ndarray], X: np.ndarray) -> np.ndarray:  # noqa: N803
    """
    Evaluate every stacked tree on every sample.

    Inputs are rounded to float32 first, as the trees were grown on float32 copies of the data.

    Parameters
    ----------
    arrays : dict[str, np.ndarray]
        Output of ``stack_trees``.
    X : np.ndarray
        Inputs, shape (n, d).

    Returns
    -------
    np.ndarray
        Leaf values, shape (trees, n).
    """
    X = np.asarray(X, dtype=np.float32).astype(np.float64)
    n_trees = arrays["feature"].shape[0]
    rows = np.arange(n_trees)[:, None]
    samples = np.arange(X.shape[0])[None, :]
    node = np.zeros((n_trees, X.shape[0]), dtype=np.int64)
    for _ in range(int(arrays["depth"])):
        goes_left = X[samples, arrays["feature"][rows, node]] <= arrays["threshold"][rows, node]
        node = np.where(goes_left, arrays["left"][rows, node], arrays["right"][rows, node])
    return arrays["value"][rows, node]
