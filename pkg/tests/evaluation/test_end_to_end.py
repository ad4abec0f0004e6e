import pytest

from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.data.dataset import RAW_COLUMNS, Dataset
from nrvqa.data.grid import build_grid
from nrvqa.evaluation import run_blind_eval, run_feature_baseline, run_random_cv, run_size_sweep, time_training
from nrvqa.evaluation.experiments import POOLED_GROUP
from nrvqa.evaluation.report import OVERALL_BLOCK
from nrvqa.video.procedural import make_clip

# moving content only, a static class leaves loss without effect on its quality
GRID_RECIPES = ("mc1", "pa1", "rb1", "sf1")


@pytest.fixture(scope="module")
def grid_dataset() -> Dataset:
    """Four classes at every rung and loss rate of the full grid, on small clips."""
    classes = [make_clip(name, seed=0, width=64, height=48, frames=24) for name in GRID_RECIPES]
    return build_grid(classes, seed=0)


@pytest.mark.cpu
@pytest.mark.slow
def test_grid_shape(grid_dataset: Dataset) -> None:
    """Test that the reduced grid holds one sample per class, rung and loss rate."""
    assert len(grid_dataset) == 4 * 8 * 12
    assert grid_dataset.classes == list(GRID_RECIPES)


@pytest.mark.cpu
@pytest.mark.slow
def test_training_time_order(grid_dataset: Dataset) -> None:
    """Test that training times follow the model complexity."""
    specs = [LearnerSpec(algo) for algo in ("LR", "RT", "ERT-LSB", "ERT-BR")]
    report = time_training(grid_dataset, specs, fractions=(0.8,), repetitions=2, seed=0)
    times = {spec.algo: report.summary(spec.algo, "0.8").mean_time for spec in specs}
    assert times["LR"] < times["RT"] < times["ERT-BR"]
    assert times["LR"] * 100 <= times["ERT-LSB"]


@pytest.mark.cpu
@pytest.mark.slow
def test_boosting_generalizes_to_unseen_content(grid_dataset: Dataset) -> None:
    """Test the leave-class-out accuracy of boosted trees."""
    report = run_blind_eval(grid_dataset, [LearnerSpec("ERT-LSB")], seed=0)
    assert report.summary("ERT-LSB", OVERALL_BLOCK).mean_pcc >= 0.6


@pytest.mark.cpu
@pytest.mark.slow
def test_learned_model_beats_every_single_feature(grid_dataset: Dataset) -> None:
    """Test that combining the inputs predicts quality better than any one of them."""
    cv = run_random_cv(grid_dataset, [LearnerSpec("ERT-LSB")], k=5, seed=0)
    baseline = run_feature_baseline(grid_dataset)
    pooled = [abs(unit.pcc) for unit in baseline.units if unit.group == POOLED_GROUP and unit.pcc is not None]
    assert len(pooled) == len(RAW_COLUMNS)
    summary = cv.summary("ERT-LSB", OVERALL_BLOCK)
    assert summary.mean_pcc >= max(pooled) + 0.05
    assert summary.std_pcc <= 0.1


@pytest.mark.cpu
@pytest.mark.slow
def test_accuracy_trend_over_training_size(grid_dataset: Dataset) -> None:
    """Test that boosted trees lose little accuracy as the training share shrinks."""
    report = run_size_sweep(grid_dataset, [LearnerSpec("ERT-LSB")], fractions=(0.8, 0.2), seed=0)
    large = report.summary("ERT-LSB", "0.8").mean_pcc
    small = report.summary("ERT-LSB", "0.2").mean_pcc
    assert large >= small - 0.02
    assert large - small <= 0.15
