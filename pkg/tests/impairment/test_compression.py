import numpy as np
import pytest

from nrvqa.errors import UsageError
from nrvqa.impairment.compression import DEFAULT_LADDER, CompressionLevel, check_ladder, compress_proxy

from ..common import constant_clip, random_clip


def _mse(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.mean((a.astype(np.float64) - b.astype(np.float64)) ** 2))


@pytest.mark.cpu
def test_default_ladder_is_ordered() -> None:
    """Test that the default ladder coarsens quantization as the bitrate drops."""
    check_ladder(DEFAULT_LADDER)
    assert [level.level_index for level in DEFAULT_LADDER] == list(range(8))
    assert DEFAULT_LADDER[0].nominal_bitrate_kbps == 64.0
    assert DEFAULT_LADDER[-1].nominal_bitrate_kbps == 5120.0


@pytest.mark.cpu
def test_unordered_ladder() -> None:
    """Test that a ladder with a finer step at a lower bitrate is rejected."""
    with pytest.raises(UsageError):
        check_ladder([CompressionLevel(0, 4.0, 64.0), CompressionLevel(1, 8.0, 128.0)])


@pytest.mark.cpu
@pytest.mark.parametrize("index", [-1, 8])
def test_level_index_bounds(index: int) -> None:
    """Test that rung indices lie in 0..7."""
    with pytest.raises(UsageError):
        CompressionLevel(index, 4.0, 64.0)


@pytest.mark.cpu
def test_compression_keeps_geometry() -> None:
    """Test that compression keeps geometry, frame count and label."""
    clip = random_clip(frames=20, height=16, width=24)
    out = compress_proxy(clip, DEFAULT_LADDER[3])
    assert out.frames.shape == clip.frames.shape
    assert out.clip_id == clip.clip_id
    assert out.frames.dtype == np.uint8


@pytest.mark.cpu
def test_coarser_step_loses_more() -> None:
    """Test that the lowest rung distorts more than the highest."""
    clip = random_clip(seed=5)
    low = _mse(clip.frames, compress_proxy(clip, DEFAULT_LADDER[0]).frames)
    high = _mse(clip.frames, compress_proxy(clip, DEFAULT_LADDER[-1]).frames)
    assert low > high > 0.0


@pytest.mark.cpu
def test_flat_block_survives_fine_step() -> None:
    """Test that a flat clip whose DC is a multiple of the step is unchanged."""
    clip = constant_clip(100)
    assert compress_proxy(clip, DEFAULT_LADDER[-1]) == clip


@pytest.mark.cpu
def test_compression_is_deterministic() -> None:
    """Test that compressing twice gives the same samples."""
    clip = random_clip(seed=2)
    assert compress_proxy(clip, DEFAULT_LADDER[2]) == compress_proxy(clip, DEFAULT_LADDER[2])
