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
from typing import Sequence

import numpy as np
from scipy.fft import dctn, idctn

from nrvqa.errors import UsageError
from nrvqa.logging.logger import nrvqa_logger
from nrvqa.video.frame_io import BLOCK_SIZE, VideoClip

# frames transformed per batch, bounds the float64 working set
FRAMES_PER_BATCH = 16


@dataclass(frozen=True)
class CompressionLevel:
    """
    One rung of the compression ladder.

    Parameters
    ----------
    level_index : int
        Position on the ladder, 0 for the lowest bitrate.
    quant_step : float
        Uniform quantization step applied to every DCT coefficient.
    nominal_bitrate_kbps : float
        Bitrate the rung stands for, carried as the bitrate network feature.
    """

    level_index: int
    quant_step: float
    nominal_bitrate_kbps: float

    def __post_init__(self) -> None:
        if not 0 <= self.level_index <= 7:
            raise UsageError(f"Compression level index must lie in 0..7, got {self.level_index}.")
        if self.quant_step <= 0 or self.nominal_bitrate_kbps <= 0:
            raise UsageError("Quantization step and nominal bitrate must be positive.")


DEFAULT_LADDER: tuple[CompressionLevel, ...] = tuple(
    CompressionLevel(index, step, bitrate)
    for index, (bitrate, step) in enumerate(
        [(64.0, 64.0), (640.0, 24.0), (768.0, 20.0), (1024.0, 16.0), (2048.0, 10.0), (3072.0, 7.0), (4096.0, 5.0),
         (5120.0, 4.0)]
    )
)


def check_ladder(levels: Sequence[CompressionLevel]) -> None:
    """
    Check that quantization gets strictly coarser as the nominal bitrate drops.

    Parameters
    ----------
    levels : Sequence[CompressionLevel]
        The rungs, in any order.
    """
    if len({level.level_index for level in levels}) != len(levels):
        raise UsageError("Compression levels must have distinct indices.")
    ordered = sorted(levels, key=lambda level: level.nominal_bitrate_kbps)
    for lower, higher in zip(ordered, ordered[1:]):
        if not (lower.nominal_bitrate_kbps < higher.nominal_bitrate_kbps and lower.quant_step > higher.quant_step):
            nrvqa_logger.error(f"Ladder rungs {lower} and {higher} are not strictly ordered.")
            raise UsageError("Quantization step must strictly increase as the nominal bitrate decreases.")


def compress_proxy(clip: VideoClip, level: CompressionLevel) -> VideoClip:
    """
    Quantize every 8x8 block of every frame in the DCT domain.

    Parameters
    ----------
    clip : VideoClip
        The pristine clip.
    level : CompressionLevel
        The rung providing the quantization step.

    Returns
    -------
    VideoClip
        A clip of the same geometry, frame count and label.
    """
    n_frames, height, width = clip.frames.shape
    rows, cols = height // BLOCK_SIZE, width // BLOCK_SIZE
    out = np.empty_like(clip.frames)
    step = float(level.quant_step)

    for start in range(0, n_frames, FRAMES_PER_BATCH):
        batch = clip.frames[start : start + FRAMES_PER_BATCH].astype(np.float64)
        blocks = batch.reshape(-1, rows, BLOCK_SIZE, cols, BLOCK_SIZE)
        coefficients = dctn(blocks, type=2, axes=(2, 4), norm="ortho")
        quantized = np.rint(coefficients / step) * step
        restored = idctn(quantized, type=2, axes=(2, 4), norm="ortho")
        restored = np.clip(np.rint(restored), 0, 255).astype(np.uint8)
        out[start : start + FRAMES_PER_BATCH] = restored.reshape(-1, height, width)

    return clip.with_frames(out)
