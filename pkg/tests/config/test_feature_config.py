import pytest

from nrvqa.config.feature_config import DEFAULT_FEATURE_CONFIG, FeatureConfig
from nrvqa.errors import UsageError


@pytest.mark.cpu
def test_default_constants() -> None:
    """Test the default feature constants."""
    config = DEFAULT_FEATURE_CONFIG
    assert config.width_threshold == 5.0
    assert config.freeze_threshold == 0.05
    assert config.noise_sigma_multiplier == 3.0
    assert config.blockiness_epsilon == 1e-6
    assert config.jerkiness_freeze_weight == 0.5
    assert config.edge_threshold == "otsu"


@pytest.mark.cpu
def test_line_reads_back() -> None:
    """Test that the serialized block parses to an equal block."""
    config = FeatureConfig(width_threshold=4.5, freeze_threshold=0.1)
    assert FeatureConfig.from_line(config.to_line()) == config


@pytest.mark.cpu
@pytest.mark.parametrize(
    "line",
    ["colour=blue", "width_threshold", "width_threshold=wide", "version=2", "edge_threshold=canny"],
)
def test_invalid_line(line: str) -> None:
    """Test that unknown keys, bad values and other versions are rejected."""
    with pytest.raises(UsageError):
        FeatureConfig.from_line(line)


@pytest.mark.cpu
def test_freeze_weight_bounds() -> None:
    """Test that the jerkiness blend weight lies in [0, 1]."""
    with pytest.raises(UsageError):
        FeatureConfig(jerkiness_freeze_weight=1.5)
