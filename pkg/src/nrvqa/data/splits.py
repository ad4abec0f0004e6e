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
from dataclasses import dataclass
from enum import Enum

import numpy as np

from nrvqa.data.dataset import Dataset
from nrvqa.errors import BadSplit, UnknownClass
from nrvqa.logging.logger import nrvqa_logger

Split = tuple[np.ndarray, np.ndarray]
TRAIN_FRACTIONS: tuple[float, ...] = (0.8, 0.6, 0.4, 0.2)


class SplitKind(str, Enum):
    """Ways of partitioning a dataset into training and test samples."""

    KFOLD = "kfold"
    LEAVE_CLASS_OUT = "leave-class-out"
    FRACTION = "fraction"


def split_kfold(ds: Dataset, k: int, seed: int = 0) -> list[Split]:
    """
    Seeded shuffle followed by contiguous chunking into ``k`` test folds.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    k : int
        Number of folds, between 2 and the number of samples.
    seed : int
        Seed of the shuffle.

    Returns
    -------
    list[Split]
        One (train, test) pair of sorted index arrays per fold.
    """
    n = len(ds)
    if not 2 <= k <= n:
        nrvqa_logger.error(f"Cannot split {n} samples into {k} folds.")
        raise BadSplit(f"k must lie in [2, {n}], got {k}.")
    order = np.random.default_rng(seed).permutation(n)
    folds = []
    for test in np.array_split(order, k):
        mask = np.ones(n, dtype=bool)
        mask[test] = False
        folds.append((np.flatnonzero(mask), np.sort(test)))
    return folds


def split_leave_class_out(ds: Dataset, class_id: str) -> Split:
    """
    Hold out every sample of one video class.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    class_id : str
        The class to test on.

    Returns
    -------
    Split
        Sorted train and test index arrays.
    """
    held = ds.class_ids == class_id
    if not held.any():
        nrvqa_logger.error(f"Class '{class_id}' is not in the dataset, available: {ds.classes}.")
        raise UnknownClass(f"Unknown video class '{class_id}'.")
    return np.flatnonzero(~held), np.flatnonzero(held)


def subsample_fraction(ds: Dataset, train_fraction: float, seed: int = 0) -> Split:
    """
    Seeded shuffle; the first ``floor(train_fraction * n)`` samples train, the rest test.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    train_fraction : float
        Share of training samples, in (0, 1).
    seed : int
        Seed of the shuffle.

    Returns
    -------
    Split
        Train and test index arrays in shuffled order.
    """
    n = len(ds)
    if not 0.0 < train_fraction < 1.0:
        raise BadSplit(f"Training fraction must lie in (0, 1), got {train_fraction}.")
    n_train = math.floor(train_fraction * n + 1e-9)
    if not 0 < n_train < n:
        nrvqa_logger.error(f"A fraction of {train_fraction} leaves an empty side on {n} samples.")
        raise BadSplit(f"Training fraction {train_fraction} leaves an empty training or test set.")
    order = np.random.default_rng(seed).permutation(n)
    return order[:n_train], order[n_train:]


@dataclass(frozen=True)
class SplitPlan:
    """
    A reproducible description of a split.

    Parameters
    ----------
    kind : SplitKind
        The partitioning scheme.
    k : int | None
        Number of folds, for k-fold plans.
    held_class : str | None
        Class to test on, for leave-class-out plans.
    train_fraction : float | None
        Training share, for fraction plans.
    seed : int
        Shuffle seed.
    """

    kind: SplitKind
    k: int | None = None
    held_class: str | None = None
    train_fraction: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SplitKind(self.kind))
        parameters = {SplitKind.KFOLD: self.k, SplitKind.LEAVE_CLASS_OUT: self.held_class}
        required = parameters.get(self.kind, self.train_fraction)
        if required is None:
            raise BadSplit(f"A {self.kind.value} split plan is missing its parameter.")

    def split(self, ds: Dataset) -> list[Split]:
        """
        Apply the plan.

        Parameters
        ----------
        ds : Dataset
            The dataset.

        Returns
        -------
        list[Split]
            The (train, test) index pairs, a single pair unless the plan is k-fold.
        """
        if self.kind is SplitKind.KFOLD:
            return split_kfold(ds, int(self.k), self.seed)  # type: ignore[arg-type]
        if self.kind is SplitKind.LEAVE_CLASS_OUT:
            return [split_leave_class_out(ds, str(self.held_class))]
        return [subsample_fraction(ds, float(self.train_fraction), self.seed)]  # type: ignore[arg-type]
