import numpy as np
import pytest

from nrvqa.errors import GeometryMismatch
from nrvqa.quality.oracle_ssim import PSNR_CAP_DB, SSIM_C1, SsimOracle, psnr, ssim_frame
from nrvqa.video.frame_io import VideoClip

from ..common import random_clip


@pytest.mark.cpu
def test_psnr_of_unit_error() -> None:
    """Test the closed-form PSNR of frames one level apart."""
    assert psnr(np.zeros((16, 16), np.uint8), np.ones((16, 16), np.uint8)) == pytest.approx(48.1308036, abs=1e-6)


@pytest.mark.cpu
def test_psnr_of_identical_frames() -> None:
    """Test that identical frames hit the PSNR cap."""
    frame = random_clip().frames[0]
    assert psnr(frame, frame) == PSNR_CAP_DB


@pytest.mark.cpu
def test_ssim_of_identical_frames_is_exactly_one() -> None:
    """Test that a frame compared with itself has SSIM exactly 1."""
    frame = random_clip(seed=3).frames[0]
    assert ssim_frame(frame, frame) == 1.0


@pytest.mark.cpu
def test_ssim_drops_with_noise() -> None:
    """Test that added noise lowers SSIM."""
    rng = np.random.default_rng(0)
    frame = random_clip(seed=1).frames[0]
    noisy = np.clip(frame.astype(np.int16) + rng.integers(-40, 41, frame.shape), 0, 255).astype(np.uint8)
    assert ssim_frame(frame, noisy) < 1.0


@pytest.mark.cpu
def test_ssim_shape_mismatch() -> None:
    """Test that frames of different shapes cannot be compared."""
    with pytest.raises(GeometryMismatch):
        ssim_frame(np.zeros((8, 8), np.uint8), np.zeros((8, 16), np.uint8))


@pytest.mark.cpu
def test_oracle_pools_into_unit_interval() -> None:
    """Test that the clip index is the clamped mean of the frame scores."""
    oracle = SsimOracle()
    clip = random_clip(seed=2)
    inverted = clip.with_frames(255 - clip.frames)
    assert oracle.compute(clip, clip) == 1.0
    assert 0.0 <= oracle.compute(clip, inverted) < 0.5
    assert SsimOracle.pool(np.array([-0.5, -0.1])) == 0.0


@pytest.mark.cpu
def test_oracle_scores_every_frame() -> None:
    """Test that the oracle scores one value per frame."""
    ref = VideoClip(np.zeros((3, 8, 8), np.uint8))
    assert SsimOracle().score_frames(ref.frames, ref.frames).shape == (3,)


@pytest.mark.cpu
@pytest.mark.parametrize("axis", [0, 1])
def test_ssim_mirror_invariance(axis: int) -> None:
    """Test that mirroring both frames leaves SSIM unchanged."""
    ref = random_clip(seed=4, height=24, width=40).frames[0]
    dist = random_clip(seed=5, height=24, width=40).frames[0] // 2 + ref // 2
    score = ssim_frame(ref, dist)
    assert ssim_frame(np.flip(ref, axis), np.flip(dist, axis)) == pytest.approx(score, rel=1e-12)
    assert ssim_frame(ref[::-1, ::-1], dist[::-1, ::-1]) == pytest.approx(score, rel=1e-12)


@pytest.mark.cpu
def test_ssim_constant_closed_form() -> None:
    """Test SSIM of two flat frames, where only the luminance term differs from one."""
    ref = np.full((16, 16), 100, np.uint8)
    dist = np.full((16, 16), 110, np.uint8)
    luminance = (2 * 100 * 110 + SSIM_C1) / (100**2 + 110**2 + SSIM_C1)
    assert ssim_frame(ref, dist) == pytest.approx(luminance, rel=1e-12)
