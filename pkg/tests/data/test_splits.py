import numpy as np
import pytest

from nrvqa.data.dataset import Dataset
from nrvqa.data.splits import (
    TRAIN_FRACTIONS,
    SplitKind,
    SplitPlan,
    split_kfold,
    split_leave_class_out,
    subsample_fraction,
)
from nrvqa.errors import BadSplit, UnknownClass


@pytest.mark.cpu
@pytest.mark.parametrize("k", [2, 5, 7])
def test_kfold_partitions_every_sample(k: int, linear_dataset: Dataset) -> None:
    """Test that the test folds partition the dataset and never meet their training set."""
    folds = split_kfold(linear_dataset, k, seed=1)
    assert len(folds) == k
    tested = np.concatenate([test for _, test in folds])
    np.testing.assert_array_equal(np.sort(tested), np.arange(len(linear_dataset)))
    for train, test in folds:
        assert np.intersect1d(train, test).size == 0
        assert train.size + test.size == len(linear_dataset)
    sizes = [test.size for _, test in folds]
    assert max(sizes) - min(sizes) <= 1


@pytest.mark.cpu
def test_kfold_is_seeded(linear_dataset: Dataset) -> None:
    """Test that the seed alone determines the folds."""
    first, second = split_kfold(linear_dataset, 5, seed=4), split_kfold(linear_dataset, 5, seed=4)
    for (a_train, a_test), (b_train, b_test) in zip(first, second):
        np.testing.assert_array_equal(a_test, b_test)
        np.testing.assert_array_equal(a_train, b_train)


@pytest.mark.cpu
@pytest.mark.parametrize("k", [1, 41])
def test_kfold_bounds(k: int, linear_dataset: Dataset) -> None:
    """Test that k must lie between 2 and the number of samples."""
    with pytest.raises(BadSplit):
        split_kfold(linear_dataset, k)


@pytest.mark.cpu
def test_leave_class_out(linear_dataset: Dataset) -> None:
    """Test that holding out a class tests on exactly its samples."""
    train, test = split_leave_class_out(linear_dataset, "c1")
    assert set(linear_dataset.class_ids[test]) == {"c1"}
    assert set(linear_dataset.class_ids[train]) == {"c0"}
    with pytest.raises(UnknownClass):
        split_leave_class_out(linear_dataset, "c7")


@pytest.mark.cpu
@pytest.mark.parametrize("fraction", TRAIN_FRACTIONS)
def test_fraction_sizes(fraction: float, linear_dataset: Dataset) -> None:
    """Test that the training side holds floor(fraction * n) samples."""
    train, test = subsample_fraction(linear_dataset, fraction, seed=0)
    assert train.size == int(fraction * 40 + 1e-9)
    assert train.size + test.size == 40
    assert np.intersect1d(train, test).size == 0


@pytest.mark.cpu
@pytest.mark.parametrize("fraction", [0.0, 1.0, 0.01])
def test_fraction_bounds(fraction: float, linear_dataset: Dataset) -> None:
    """Test that fractions leaving an empty side are rejected."""
    with pytest.raises(BadSplit):
        subsample_fraction(linear_dataset, fraction)


@pytest.mark.cpu
def test_split_plan(linear_dataset: Dataset) -> None:
    """Test that a plan reproduces the split it describes."""
    assert len(SplitPlan(SplitKind.KFOLD, k=4, seed=2).split(linear_dataset)) == 4
    [(train, _)] = SplitPlan("fraction", train_fraction=0.6, seed=2).split(linear_dataset)
    np.testing.assert_array_equal(train, subsample_fraction(linear_dataset, 0.6, seed=2)[0])
    with pytest.raises(BadSplit):
        SplitPlan(SplitKind.LEAVE_CLASS_OUT)
