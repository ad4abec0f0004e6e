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

from nrvqa.impairment.channel import DEFAULT_MTU, ChannelStats, LossModel, apply_loss, packetize, reconstruct
from nrvqa.impairment.compression import CompressionLevel, compress_proxy
from nrvqa.video.frame_io import VideoClip


def transmit(
    compressed: VideoClip, level: CompressionLevel, model: LossModel, mtu: int = DEFAULT_MTU
) -> tuple[VideoClip, ChannelStats]:
    """
    Send an already compressed clip through the lossy channel.

    Parameters
    ----------
    compressed : VideoClip
        Output of ``compress_proxy`` at ``level``.
    level : CompressionLevel
        The rung, providing the nominal bitrate.
    model : LossModel
        The loss process.
    mtu : int
        Maximum packet size in bytes.

    Returns
    -------
    tuple[VideoClip, ChannelStats]
        The concealed clip and the measured network features.
    """
    stream = packetize(compressed, mtu=mtu, nominal_bitrate_kbps=level.nominal_bitrate_kbps)
    delivered, stats = apply_loss(stream, model)
    return reconstruct(delivered, compressed), stats


def degrade(
    clip: VideoClip, level: CompressionLevel, model: LossModel, mtu: int = DEFAULT_MTU
) -> tuple[VideoClip, ChannelStats]:
    """
    Run a pristine clip through the compression proxy and the lossy channel.

    Parameters
    ----------
    clip : VideoClip
        The pristine clip.
    level : CompressionLevel
        The compression rung.
    model : LossModel
        The loss process.
    mtu : int
        Maximum packet size in bytes.

    Returns
    -------
    tuple[VideoClip, ChannelStats]
        The impaired clip, keeping the label of ``clip``, and the measured network features.
    """
    return transmit(compress_proxy(clip, level), level, model, mtu=mtu)
