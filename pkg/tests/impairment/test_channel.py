import numpy as np
import pytest

from nrvqa.errors import GeometryMismatch, MtuTooSmall, UsageError
from nrvqa.impairment.channel import (
    ChannelStats,
    LossKind,
    LossModel,
    apply_loss,
    packetize,
    reconstruct,
)

from ..common import random_clip


@pytest.mark.cpu
@pytest.mark.parametrize("width, packets_per_frame", [(16, 1), (64, 4)])
def test_packet_count(width: int, packets_per_frame: int) -> None:
    """Test how many packets a frame needs at the default MTU."""
    clip = random_clip(frames=3, height=64, width=width)
    stream = packetize(clip, mtu=1400)
    assert len(stream) == 3 * packets_per_frame
    assert all(packet.size_bytes <= 1400 for packet in stream.packets)


@pytest.mark.cpu
def test_short_last_band() -> None:
    """Test that a height off the macroblock grid yields a shorter last band."""
    clip = random_clip(frames=2, height=24, width=16)
    stream = packetize(clip, mtu=1400)
    assert stream.band_count == 2
    assert stream.packets[0].payload.shape == (24, 16)


@pytest.mark.cpu
def test_mtu_too_small() -> None:
    """Test that an MTU unable to carry one macroblock row is rejected."""
    with pytest.raises(MtuTooSmall):
        packetize(random_clip(width=64), mtu=100)


@pytest.mark.cpu
def test_lossless_channel_is_identity() -> None:
    """Test that a zero loss rate reconstructs the input exactly."""
    clip = random_clip(frames=6, height=48, width=64)
    delivered, stats = apply_loss(packetize(clip, mtu=1400), LossModel.bernoulli(0.0, seed=1))
    assert stats.packets_lost == 0
    assert reconstruct(delivered, clip) == clip


@pytest.mark.cpu
def test_total_loss_freezes_first_frame() -> None:
    """Test that losing everything repeats frame 0, which is never dropped."""
    clip = random_clip(frames=5, height=32, width=64)
    stream = packetize(clip, mtu=1400)
    delivered, stats = apply_loss(stream, LossModel.bernoulli(1.0, seed=0))
    assert stats.packets_lost == len(stream) - 2
    out = reconstruct(delivered, clip)
    for frame in out.frames:
        np.testing.assert_array_equal(frame, clip.frames[0])


@pytest.mark.cpu
def test_lost_band_copies_previous_frame() -> None:
    """Test concealment of a single lost band."""
    clip = random_clip(frames=3, height=32, width=64)
    stream = packetize(clip, mtu=1400)
    kept = tuple(p for p in stream.packets if not (p.frame_index == 2 and p.first_row == 1))
    out = reconstruct(type(stream)(stream.width, stream.height, stream.frame_count, stream.mtu, kept), clip)
    np.testing.assert_array_equal(out.frames[2, 16:32], clip.frames[1, 16:32])
    np.testing.assert_array_equal(out.frames[2, :16], clip.frames[2, :16])


@pytest.mark.cpu
def test_bernoulli_losses_are_nested() -> None:
    """Test that at a fixed seed a higher rate loses a superset of packets."""
    clip = random_clip(frames=50, height=32, width=64)
    stream = packetize(clip, mtu=1400)
    lost_sets = []
    for rate in (0.01, 0.05, 0.1):
        delivered, _ = apply_loss(stream, LossModel.bernoulli(rate, seed=9))
        kept = {(p.frame_index, p.first_row) for p in delivered.packets}
        lost_sets.append({(p.frame_index, p.first_row) for p in stream.packets} - kept)
    assert lost_sets[0] <= lost_sets[1] <= lost_sets[2]


@pytest.mark.cpu
@pytest.mark.parametrize("kind", [LossKind.BERNOULLI, LossKind.GILBERT_ELLIOTT])
def test_measured_loss_near_target(kind: LossKind) -> None:
    """Test that the measured loss ratio approaches the target rate."""
    clip = random_clip(frames=20000, height=16, width=16)
    model = LossModel.bernoulli(0.1, seed=3) if kind is LossKind.BERNOULLI else LossModel.gilbert_elliott(0.1, seed=3)
    _, stats = apply_loss(packetize(clip, mtu=1400), model)
    assert stats.measured_loss_ratio == stats.packets_lost / stats.packets_sent
    assert stats.measured_loss_ratio == pytest.approx(0.1, abs=0.02)


@pytest.mark.cpu
def test_gilbert_elliott_stationary_loss() -> None:
    """Test that the derived chain reaches the requested stationary loss."""
    model = LossModel.gilbert_elliott(0.05, p_bg=0.3, loss_in_bad=0.5)
    assert model.ge_params is not None
    assert model.ge_params.stationary_loss == pytest.approx(0.05)


@pytest.mark.cpu
def test_gilbert_elliott_unreachable_rate() -> None:
    """Test that a rate above the bad-state loss is rejected."""
    with pytest.raises(UsageError):
        LossModel.gilbert_elliott(0.6, loss_in_bad=0.5)


@pytest.mark.cpu
def test_loss_rate_bounds() -> None:
    """Test that loss rates outside [0, 1] are rejected."""
    with pytest.raises(UsageError):
        LossModel.bernoulli(1.5)


@pytest.mark.cpu
def test_stats_from_loss_ratio() -> None:
    """Test that reported ratios reproduce exactly."""
    stats = ChannelStats.from_loss_ratio(0.05, 2048.0)
    assert stats.measured_loss_ratio == 0.05
    assert stats.nominal_bitrate_kbps == 2048.0


@pytest.mark.cpu
def test_reconstruct_geometry_mismatch() -> None:
    """Test that a template of a different size is rejected."""
    stream = packetize(random_clip(frames=3, height=32, width=32), mtu=1400)
    with pytest.raises(GeometryMismatch):
        reconstruct(stream, random_clip(frames=4, height=32, width=32))
