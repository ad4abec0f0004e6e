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

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from nrvqa.errors import GeometryMismatch, MtuTooSmall, UsageError
from nrvqa.logging.logger import nrvqa_logger
from nrvqa.video.frame_io import VideoClip

DEFAULT_MTU = 1400
# frame_index, first_row and row_count, padded like an RTP fixed header
PACKET_HEADER_BYTES = 12
MACROBLOCK_SIZE = 16


@dataclass(frozen=True, eq=False)
class Packet:
    """
    Whole macroblock rows of one frame.

    Parameters
    ----------
    frame_index : int
        Frame the rows belong to.
    first_row : int
        Index of the first macroblock row carried.
    row_count : int
        Number of consecutive macroblock rows carried.
    payload : np.ndarray
        The luma samples of those rows, shape (lines, width).
    """

    frame_index: int
    first_row: int
    row_count: int
    payload: np.ndarray

    @property
    def size_bytes(self) -> int:
        """Header plus payload size."""
        return PACKET_HEADER_BYTES + int(self.payload.nbytes)


@dataclass(frozen=True, eq=False)
class PacketStream:
    """
    An in-memory packet sequence in transmission order.

    Parameters
    ----------
    width : int
        Frame width of the packetized clip.
    height : int
        Frame height of the packetized clip.
    frame_count : int
        Number of frames of the packetized clip.
    mtu : int
        Maximum packet size used.
    packets : tuple[Packet, ...]
        Packets in transmission order.
    nominal_bitrate_kbps : float
        Bitrate announced for the stream, 0 when unknown.
    """

    width: int
    height: int
    frame_count: int
    mtu: int
    packets: tuple[Packet, ...]
    nominal_bitrate_kbps: float = 0.0

    @property
    def band_count(self) -> int:
        """Macroblock rows per frame, the last one possibly shorter than 16 lines."""
        return -(-self.height // MACROBLOCK_SIZE)

    def __len__(self) -> int:
        """Number of packets."""
        return len(self.packets)


class LossKind(str, Enum):
    """Packet loss processes supported by the channel."""

    BERNOULLI = "bernoulli"
    GILBERT_ELLIOTT = "gilbert-elliott"


@dataclass(frozen=True)
class GilbertElliottParams:
    """
    Two-state burst loss chain.

    Parameters
    ----------
    p_gb : float
        Probability of moving from the good to the bad state after a packet.
    p_bg : float
        Probability of moving from the bad to the good state after a packet.
    loss_in_bad : float
        Loss probability while in the bad state; the good state is lossless.
    """

    p_gb: float
    p_bg: float
    loss_in_bad: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_gb <= 1.0 and 0.0 < self.p_bg <= 1.0 and 0.0 < self.loss_in_bad <= 1.0):
            raise UsageError(f"Invalid Gilbert-Elliott parameters {self}.")

    @property
    def stationary_bad(self) -> float:
        """Long-run fraction of packets sent in the bad state."""
        return self.p_gb / (self.p_gb + self.p_bg)

    @property
    def stationary_loss(self) -> float:
        """Long-run loss probability."""
        return self.stationary_bad * self.loss_in_bad


@dataclass(frozen=True)
class LossModel:
    """
    A seeded packet loss process.

    Parameters
    ----------
    kind : LossKind
        Bernoulli or Gilbert-Elliott.
    loss_rate : float
        Target mean loss probability.
    seed : int
        Seed of the loss generator.
    ge_params : GilbertElliottParams | None
        Chain parameters, required for Gilbert-Elliott.
    """

    kind: LossKind
    loss_rate: float
    seed: int = 0
    ge_params: GilbertElliottParams | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", LossKind(self.kind))
        if not 0.0 <= self.loss_rate <= 1.0:
            raise UsageError(f"Loss rate must lie in [0, 1], got {self.loss_rate}.")
        if self.kind is LossKind.GILBERT_ELLIOTT:
            if self.ge_params is None:
                raise UsageError("A Gilbert-Elliott loss model needs chain parameters.")
            if abs(self.ge_params.stationary_loss - self.loss_rate) > 1e-9:
                nrvqa_logger.error(
                    f"Chain loss {self.ge_params.stationary_loss} differs from target loss rate {self.loss_rate}."
                )
                raise UsageError("Gilbert-Elliott stationary loss must equal the target loss rate.")

    @classmethod
    def bernoulli(cls, loss_rate: float, seed: int = 0) -> "LossModel":
        """
        Independent losses with probability ``loss_rate``.

        Parameters
        ----------
        loss_rate : float
            Loss probability.
        seed : int
            Seed of the loss generator.

        Returns
        -------
        LossModel
            The loss model.
        """
        return cls(LossKind.BERNOULLI, loss_rate, seed)

    @classmethod
    def gilbert_elliott(
        cls, loss_rate: float, seed: int = 0, p_bg: float = 0.3, loss_in_bad: float = 0.5
    ) -> "LossModel":
        """
        Burst losses whose stationary rate equals ``loss_rate``.

        The good-to-bad transition probability is derived from the other two chain parameters.

        Parameters
        ----------
        loss_rate : float
            Target stationary loss probability, below ``loss_in_bad``.
        seed : int
            Seed of the loss generator.
        p_bg : float
            Bad-to-good transition probability.
        loss_in_bad : float
            Loss probability in the bad state.

        Returns
        -------
        LossModel
            The loss model.
        """
        if not 0.0 <= loss_rate < loss_in_bad:
            raise UsageError(f"Loss rate {loss_rate} is unreachable with a bad-state loss of {loss_in_bad}.")
        stationary_bad = loss_rate / loss_in_bad
        p_gb = stationary_bad * p_bg / (1.0 - stationary_bad)
        return cls(LossKind.GILBERT_ELLIOTT, loss_rate, seed, GilbertElliottParams(p_gb, p_bg, loss_in_bad))


@dataclass(frozen=True)
class ChannelStats:
    """
    Network features measured on one transmission.

    Parameters
    ----------
    packets_sent : int
        Packets offered to the channel.
    packets_lost : int
        Packets dropped by the channel.
    nominal_bitrate_kbps : float
        Bitrate of the compression rung.
    """

    packets_sent: int
    packets_lost: int
    nominal_bitrate_kbps: float

    def __post_init__(self) -> None:
        if self.packets_sent < 0 or not 0 <= self.packets_lost <= self.packets_sent:
            raise UsageError(f"Inconsistent packet counts {self.packets_lost}/{self.packets_sent}.")
        if self.nominal_bitrate_kbps < 0:
            raise UsageError("Nominal bitrate cannot be negative.")

    @property
    def measured_loss_ratio(self) -> float:
        """Fraction of packets dropped, exactly ``packets_lost / packets_sent``."""
        if self.packets_sent == 0:
            return 0.0
        return self.packets_lost / self.packets_sent

    @classmethod
    def from_loss_ratio(cls, loss_ratio: float, nominal_bitrate_kbps: float) -> "ChannelStats":
        """
        Build stats from a reported loss ratio, as a client does without packet counters.

        Parameters
        ----------
        loss_ratio : float
            Reported loss ratio in [0, 1].
        nominal_bitrate_kbps : float
            Reported bitrate.

        Returns
        -------
        ChannelStats
            Stats whose counts reproduce the ratio.
        """
        if not 0.0 <= loss_ratio <= 1.0:
            raise UsageError(f"Loss ratio must lie in [0, 1], got {loss_ratio}.")
        ratio = Fraction(loss_ratio).limit_denominator(1_000_000)
        return cls(ratio.denominator, ratio.numerator, nominal_bitrate_kbps)


def packetize(clip: VideoClip, mtu: int = DEFAULT_MTU, nominal_bitrate_kbps: float = 0.0) -> PacketStream:
    """
    Split every frame into packets of whole 16-line macroblock rows.

    Parameters
    ----------
    clip : VideoClip
        The clip to transmit.
    mtu : int
        Maximum packet size in bytes, header included.
    nominal_bitrate_kbps : float
        Bitrate announced for the stream.

    Returns
    -------
    PacketStream
        The packets, frame by frame and top to bottom.

    Raises
    ------
    MtuTooSmall
        If a single macroblock row does not fit into one packet.

    Examples
    --------
    >>> stream = packetize(clip_64x64, mtu=1400)
    >>> len(stream) == 4 * clip_64x64.frame_count
    True
    """
    rows_per_packet = (mtu - PACKET_HEADER_BYTES) // (MACROBLOCK_SIZE * clip.width)
    if rows_per_packet < 1:
        nrvqa_logger.error(f"MTU {mtu} cannot carry a {clip.width}-pixel macroblock row.")
        raise MtuTooSmall(
            f"MTU {mtu} is below {PACKET_HEADER_BYTES + MACROBLOCK_SIZE * clip.width} bytes needed for one row."
        )

    band_count = -(-clip.height // MACROBLOCK_SIZE)
    packets = []
    for frame_index, frame in enumerate(clip.frames):
        for first_row in range(0, band_count, rows_per_packet):
            row_count = min(rows_per_packet, band_count - first_row)
            payload = frame[first_row * MACROBLOCK_SIZE : (first_row + row_count) * MACROBLOCK_SIZE]
            packets.append(Packet(frame_index, first_row, row_count, payload))

    return PacketStream(clip.width, clip.height, clip.frame_count, mtu, tuple(packets), nominal_bitrate_kbps)


def _gilbert_elliott_losses(n_packets: int, params: GilbertElliottParams, rng: np.random.Generator) -> np.ndarray:
    state_draws = rng.random(n_packets)
    loss_draws = rng.random(n_packets)
    lost = np.zeros(n_packets, dtype=bool)
    bad = bool(rng.random() < params.stationary_bad)
    for i in range(n_packets):
        lost[i] = bad and loss_draws[i] < params.loss_in_bad
        bad = state_draws[i] >= params.p_bg if bad else state_draws[i] < params.p_gb
    return lost


def apply_loss(stream: PacketStream, model: LossModel) -> tuple[PacketStream, ChannelStats]:
    """
    Drop packets according to a seeded loss process.

    Packets of frame 0 are always delivered. Bernoulli losses use one uniform draw per packet, so at a fixed seed
    the packets lost at a lower rate are also lost at any higher rate.

    Parameters
    ----------
    stream : PacketStream
        The transmitted packets.
    model : LossModel
        The loss process.

    Returns
    -------
    tuple[PacketStream, ChannelStats]
        The delivered packets and the exact loss counts.
    """
    rng = np.random.default_rng(model.seed)
    n_packets = len(stream.packets)
    if model.kind is LossKind.BERNOULLI:
        lost = rng.random(n_packets) < model.loss_rate
    else:
        lost = _gilbert_elliott_losses(n_packets, model.ge_params, rng)  # type: ignore[arg-type]

    frame_indices = np.fromiter((packet.frame_index for packet in stream.packets), dtype=np.int64, count=n_packets)
    lost &= frame_indices != 0

    delivered = tuple(packet for packet, dropped in zip(stream.packets, lost) if not dropped)
    stats = ChannelStats(n_packets, int(lost.sum()), stream.nominal_bitrate_kbps)
    nrvqa_logger.debug(f"Channel dropped {stats.packets_lost} of {stats.packets_sent} packets.")
    survivors = PacketStream(
        stream.width, stream.height, stream.frame_count, stream.mtu, delivered, stream.nominal_bitrate_kbps
    )
    return survivors, stats


def reconstruct(stream: PacketStream, template: VideoClip) -> VideoClip:
    """
    Decode delivered packets, concealing losses by copying from the previous reconstructed frame.

    A lost macroblock row takes the co-located rows of the previous reconstructed frame, so a frame that lost every
    packet repeats its predecessor. Frame 0 has no predecessor; rows missing there are taken from the template.

    Parameters
    ----------
    stream : PacketStream
        Delivered packets.
    template : VideoClip
        Clip providing geometry, frame count, frame rate and label.

    Returns
    -------
    VideoClip
        The reconstructed clip.
    """
    if (stream.width, stream.height, stream.frame_count) != (template.width, template.height, template.frame_count):
        nrvqa_logger.error(
            f"Stream geometry {stream.width}x{stream.height}x{stream.frame_count} does not match the template "
            f"{template.width}x{template.height}x{template.frame_count}."
        )
        raise GeometryMismatch("Packet stream and template clip differ in geometry or frame count.")

    frames = np.empty_like(template.frames)
    received = np.zeros((stream.frame_count, stream.band_count), dtype=bool)
    for packet in stream.packets:
        top = packet.first_row * MACROBLOCK_SIZE
        frames[packet.frame_index, top : top + packet.payload.shape[0]] = packet.payload
        received[packet.frame_index, packet.first_row : packet.first_row + packet.row_count] = True

    for frame_index in range(stream.frame_count):
        source = template.frames[0] if frame_index == 0 else frames[frame_index - 1]
        for band in np.flatnonzero(~received[frame_index]):
            rows = slice(band * MACROBLOCK_SIZE, (band + 1) * MACROBLOCK_SIZE)
            frames[frame_index, rows] = source[rows]

    return template.with_frames(frames)
