import pytest

from nrvqa.config.learner_space import BLACKBOX, LEARNER_ORDER, LEARNER_SPACE, WHITEBOX
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.errors import UsageError


@pytest.mark.cpu
def test_every_learner_is_registered() -> None:
    """Test that discovery registers every learner with its group."""
    LearnerSpec("LR")
    assert sorted(LEARNER_SPACE.names()) == sorted(LEARNER_ORDER)
    assert LEARNER_SPACE.groups["ERT-LSB"] == WHITEBOX
    assert LEARNER_SPACE.groups["CNN"] == BLACKBOX


@pytest.mark.cpu
def test_defaults_and_string_overrides() -> None:
    """Test that string overrides are coerced and the rest keep their defaults."""
    spec = LearnerSpec("ERT-LSB", {"n_estimators": "50"})
    assert spec["n_estimators"] == 50
    assert spec["learning_rate"] == 0.01
    assert spec["min_samples_split"] == 16


@pytest.mark.cpu
def test_parse_pairs() -> None:
    """Test parsing key=value overrides."""
    spec = LearnerSpec.parse("GPR", ["optimize_noise=false", "noise_variance = 0.001"])
    assert spec["optimize_noise"] is False
    assert spec["noise_variance"] == 0.001
    assert spec.algorithm_group == BLACKBOX


@pytest.mark.cpu
def test_learner_without_hyperparameters() -> None:
    """Test that LR has an empty configuration."""
    assert LearnerSpec("LR").to_dict() == {}


@pytest.mark.cpu
@pytest.mark.parametrize(
    "algo, pairs",
    [
        ("XGB", []),
        ("SVR", ["kernel=linear"]),
        ("SVR", ["C=abc"]),
        ("SVR", ["C=1e9"]),
        ("FNN", ["hidden_units=2.5"]),
        ("RT", ["min_samples_split"]),
    ],
)
def test_invalid_spec(algo: str, pairs: list[str]) -> None:
    """Test that unknown learners, unknown keys and illegal values are usage errors."""
    with pytest.raises(UsageError):
        LearnerSpec.parse(algo, pairs)


@pytest.mark.cpu
def test_unknown_hyperparameter_lookup() -> None:
    """Test that reading an undefined hyperparameter is a usage error."""
    with pytest.raises(UsageError):
        LearnerSpec("RT")["n_estimators"]


@pytest.mark.cpu
def test_equality() -> None:
    """Test that specs compare by learner and values."""
    assert LearnerSpec("SVR", {"C": 5}) == LearnerSpec.parse("SVR", ["C=5.0"])
    assert LearnerSpec("FNN") != LearnerSpec("CNN")
