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

import numpy as np
from skimage.metrics import peak_signal_noise_ratio

from nrvqa.errors import AlignmentError, GeometryMismatch
from nrvqa.logging.logger import nrvqa_logger
from nrvqa.quality.oracle_base import BaseOracle
from nrvqa.quality.registry import OracleRegistry
from nrvqa.video.frame_io import LumaFrame, VideoClip

PSNR_CAP_DB = 100.0
SSIM_WINDOW = 8
SSIM_C1 = (0.01 * 255) ** 2
SSIM_C2 = (0.03 * 255) ** 2


def _check_pair(ref: np.ndarray, dist: np.ndarray) -> None:
    if ref.shape != dist.shape:
        nrvqa_logger.error(f"Cannot compare frames of shapes {ref.shape} and {dist.shape}.")
        raise GeometryMismatch(f"Frame shapes {ref.shape} and {dist.shape} differ.")


def psnr(ref: LumaFrame, dist: LumaFrame) -> float:
    """
    Peak signal-to-noise ratio of two 8-bit frames.

    Parameters
    ----------
    ref : LumaFrame
        Reference frame.
    dist : LumaFrame
        Distorted frame.

    Returns
    -------
    float
        PSNR in dB, capped at 100 dB for identical frames.
    """
    _check_pair(ref, dist)
    if np.array_equal(ref, dist):
        return PSNR_CAP_DB
    return float(peak_signal_noise_ratio(ref, dist, data_range=255))


def _window_sums(values: np.ndarray) -> np.ndarray:
    # exact 8x8 box sums over every valid window position
    table = np.zeros((values.shape[0] + 1, values.shape[1] + 1), dtype=np.int64)
    np.cumsum(np.cumsum(values, axis=0, dtype=np.int64), axis=1, out=table[1:, 1:])
    w = SSIM_WINDOW
    return table[w:, w:] - table[:-w, w:] - table[w:, :-w] + table[:-w, :-w]


def ssim_frame(ref: LumaFrame, dist: LumaFrame) -> float:
    """
    Mean structural similarity over all 8x8 windows at stride 1.

    Window moments are accumulated in integers, so identical inputs give exactly 1.

    Parameters
    ----------
    ref : LumaFrame
        Reference frame.
    dist : LumaFrame
        Distorted frame.

    Returns
    -------
    float
        Mean SSIM in [-1, 1].
    """
    _check_pair(ref, dist)
    if ref.shape[0] < SSIM_WINDOW or ref.shape[1] < SSIM_WINDOW:
        raise GeometryMismatch(f"SSIM needs frames of at least {SSIM_WINDOW}x{SSIM_WINDOW} pixels.")

    x = ref.astype(np.int64)
    y = dist.astype(np.int64)
    n = SSIM_WINDOW * SSIM_WINDOW
    sum_x, sum_y = _window_sums(x), _window_sums(y)
    sum_xx, sum_yy, sum_xy = _window_sums(x * x), _window_sums(y * y), _window_sums(x * y)

    mu_x = sum_x / n
    mu_y = sum_y / n
    var_x = (n * sum_xx - sum_x * sum_x) / (n * n)
    var_y = (n * sum_yy - sum_y * sum_y) / (n * n)
    cov = (n * sum_xy - sum_x * sum_y) / (n * n)

    numerator = (2.0 * mu_x * mu_y + SSIM_C1) * (2.0 * cov + SSIM_C2)
    denominator = (mu_x * mu_x + mu_y * mu_y + SSIM_C1) * (var_x + var_y + SSIM_C2)
    return float((numerator / denominator).mean())


@OracleRegistry.register("ssim")
class SsimOracle(BaseOracle):
    """Clip quality as the mean per-frame SSIM, clamped to [0, 1]."""

    def score_frames(self, ref: np.ndarray, dist: np.ndarray) -> np.ndarray:
        """
        SSIM of every aligned frame pair.

        Parameters
        ----------
        ref : np.ndarray
            Reference frames, shape (n, H, W).
        dist : np.ndarray
            Distorted frames, same shape.

        Returns
        -------
        np.ndarray
            One SSIM value per frame.
        """
        return np.array([ssim_frame(r, d) for r, d in zip(ref, dist)], dtype=np.float64)

    @staticmethod
    def pool(scores: np.ndarray) -> float:
        """
        Pool per-frame scores into a quality index.

        Parameters
        ----------
        scores : np.ndarray
            Per-frame SSIM.

        Returns
        -------
        float
            The clamped mean.
        """
        return float(np.clip(scores.mean(), 0.0, 1.0))

    def compute(self, ref: VideoClip, dist: VideoClip) -> float:
        """
        Compute the clamped mean SSIM of two aligned clips.

        Parameters
        ----------
        ref : VideoClip
            The pristine reference.
        dist : VideoClip
            The distorted clip.

        Returns
        -------
        float
            Quality index in [0, 1].
        """
        if ref.frame_count != dist.frame_count:
            nrvqa_logger.error(f"Reference has {ref.frame_count} frames, distorted clip {dist.frame_count}.")
            raise AlignmentError()
        return self.pool(self.score_frames(ref.frames, dist.frames))
