import numpy as np
import pytest

from nrvqa.errors import DataError, DegenerateFeature
from nrvqa.features.content import FEATURE_NAMES, RawFeatures
from nrvqa.features.normalizer import (
    BITRATE_BOUNDS,
    FEATURE_COUNT,
    INPUT_NAMES,
    LOSS_BOUNDS,
    Normalizer,
    fit_normalizer,
    raw_inputs,
)
from nrvqa.impairment.channel import ChannelStats

from ..common import UNIT_NORMALIZER


def _corpus() -> list[tuple[RawFeatures, ChannelStats]]:
    return [
        (RawFeatures.from_array(np.full(8, 1.0)), ChannelStats(100, 0, 64.0)),
        (RawFeatures.from_array(np.full(8, 3.0)), ChannelStats(100, 5, 5120.0)),
        (RawFeatures.from_array(np.full(8, 2.0)), ChannelStats(100, 1, 640.0)),
    ]


@pytest.mark.cpu
def test_input_names() -> None:
    """Test the canonical input order."""
    assert INPUT_NAMES == FEATURE_NAMES + ("bitrate", "loss")
    assert FEATURE_COUNT == 10


@pytest.mark.cpu
def test_bitrate_normalization() -> None:
    """Test the fixed bitrate bounds."""
    assert UNIT_NORMALIZER.apply_value("bitrate", 2048.0) == pytest.approx((2048 - 64) / (5120 - 64))
    assert UNIT_NORMALIZER.apply_value("bitrate", 2048.0) == pytest.approx(0.3924, abs=1e-4)


@pytest.mark.cpu
def test_fit_normalizer() -> None:
    """Test that content bounds come from the corpus and network bounds are fixed."""
    norm = fit_normalizer(_corpus())
    assert norm.bounds["cx"] == (1.0, 3.0)
    assert norm.bounds["bitrate"] == BITRATE_BOUNDS
    assert norm.bounds["loss"] == LOSS_BOUNDS


@pytest.mark.cpu
def test_apply_clamps_into_unit_interval() -> None:
    """Test that inputs outside the bounds are clamped."""
    norm = fit_normalizer(_corpus())
    raw = np.concatenate([np.full(8, 10.0), [10_000.0, 0.5]])
    np.testing.assert_array_equal(norm.apply(raw), np.ones(10))
    np.testing.assert_array_equal(norm.apply(-raw), np.zeros(10))


@pytest.mark.cpu
def test_apply_matrix() -> None:
    """Test that a batch of raw inputs normalizes row by row."""
    raw = np.stack([raw_inputs(features, stats) for features, stats in _corpus()])
    norm = fit_normalizer(_corpus())
    out = norm.apply(raw)
    assert out.shape == (3, 10)
    np.testing.assert_allclose(out[:, 0], [0.0, 1.0, 0.5])
    np.testing.assert_allclose(out[:, 9], [0.0, 0.5, 0.1])


@pytest.mark.cpu
def test_constant_feature_is_degenerate() -> None:
    """Test that a feature constant over the corpus is rejected."""
    corpus = [(RawFeatures.from_array(np.full(8, 1.0)), ChannelStats(1, 0, 64.0))] * 2
    with pytest.raises(DegenerateFeature) as info:
        fit_normalizer(corpus)
    assert "cx" in str(info.value)


@pytest.mark.cpu
def test_wrong_width() -> None:
    """Test that a vector of the wrong length is rejected."""
    with pytest.raises(DataError):
        UNIT_NORMALIZER.apply(np.zeros(9))


@pytest.mark.cpu
def test_line_format() -> None:
    """Test that the serialized bounds parse back to the same normalizer."""
    norm = fit_normalizer(_corpus())
    assert Normalizer.from_line(norm.to_line()) == norm
    with pytest.raises(DataError):
        Normalizer.from_line("cx=1")
