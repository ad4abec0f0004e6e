import pytest

from nrvqa.errors import AlignmentError, UsageError
from nrvqa.impairment.channel import LossModel
from nrvqa.impairment.compression import DEFAULT_LADDER
from nrvqa.impairment.degrade import degrade
from nrvqa.quality.benchmark import DEFAULT_ORACLE, benchmark_index
from nrvqa.quality.oracle_base import BaseOracle
from nrvqa.quality.registry import OracleRegistry
from nrvqa.video.frame_io import VideoClip
from nrvqa.video.procedural import make_clip

from ..common import random_clip


@pytest.mark.cpu
def test_default_oracle_is_registered() -> None:
    """Test that the default oracle is available by name."""
    assert DEFAULT_ORACLE in OracleRegistry.names()


@pytest.mark.cpu
def test_perfect_copy_scores_one() -> None:
    """Test that an undistorted clip has quality 1."""
    clip = random_clip()
    assert benchmark_index(clip, clip) == 1.0


@pytest.mark.cpu
def test_quality_follows_compression() -> None:
    """Test that a coarser rung scores lower than a finer one."""
    clip = make_clip("rb1", seed=0, width=64, height=48, frames=6)
    no_loss = LossModel.bernoulli(0.0)
    low = benchmark_index(clip, degrade(clip, DEFAULT_LADDER[0], no_loss)[0])
    high = benchmark_index(clip, degrade(clip, DEFAULT_LADDER[-1], no_loss)[0])
    assert 0.0 <= low < high <= 1.0


@pytest.mark.cpu
def test_misaligned_clips() -> None:
    """Test that clips of different length cannot be compared."""
    with pytest.raises(AlignmentError):
        benchmark_index(random_clip(frames=4), random_clip(frames=5))


@pytest.mark.cpu
def test_unknown_oracle() -> None:
    """Test that an unregistered oracle name is rejected."""
    with pytest.raises(UsageError):
        benchmark_index(random_clip(), random_clip(), oracle="vqm")


@pytest.mark.cpu
def test_registered_oracle_is_used() -> None:
    """Test that a registered oracle provides the index, clamped to [0, 1]."""

    @OracleRegistry.register("test_constant")
    class ConstantOracle(BaseOracle):
        def compute(self, ref: VideoClip, dist: VideoClip) -> float:
            return 1.5

    assert benchmark_index(random_clip(), random_clip(), oracle="test_constant") == 1.0


@pytest.mark.cpu
@pytest.mark.parametrize("recipe", ["mc1", "pr1"])
def test_quality_never_rises_with_loss(recipe: str) -> None:
    """Test that at a fixed seed the benchmark index does not increase over growing loss rates."""
    clip = make_clip(recipe, seed=0, width=64, height=48, frames=30)
    level = DEFAULT_LADDER[5]
    received = [degrade(clip, level, LossModel.bernoulli(rate, seed=7))[0] for rate in (0.0, 0.05, 0.10)]
    scores = [benchmark_index(clip, dist) for dist in received]
    assert scores[0] >= scores[1] >= scores[2]
    assert scores[0] > scores[2]
