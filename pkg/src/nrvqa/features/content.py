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

import math
from dataclasses import dataclass, fields, replace
from typing import Callable

import numpy as np
from scipy import ndimage
from skimage.filters import threshold_otsu

from nrvqa.config.feature_config import DEFAULT_FEATURE_CONFIG, FeatureConfig
from nrvqa.video.frame_io import VideoClip

FEATURE_NAMES: tuple[str, ...] = ("cx", "mo", "bm", "br", "nm", "nr", "bl", "je")

# frames filtered together, bounds the float64 working set
FRAMES_PER_CHUNK = 16

SOBEL_DERIVATIVE = np.array([-1.0, 0.0, 1.0])
SOBEL_SMOOTHING = np.array([1.0, 2.0, 1.0])
# the 3x3 noise kernel [[1,-2,1],[-2,4,-2],[1,-2,1]] is the outer product of this tap with itself
LAPLACIAN_DIFFERENCE = np.array([1.0, -2.0, 1.0])


@dataclass(frozen=True)
class RawFeatures:
    """
    The eight clip-level content features before normalization.

    Parameters
    ----------
    cx : float
        Spatial complexity, mean spatial information.
    mo : float
        Motion, mean temporal information.
    bm : float
        Mean edge width in pixels.
    br : float
        Fraction of edges wider than the width threshold.
    nm : float
        Mean estimated noise standard deviation.
    nr : float
        Mean fraction of noisy pixels.
    bl : float
        Blockiness, excess of block-boundary over interior contrast.
    je : float
        Jerkiness, blend of freezes and post-freeze jumps.
    """

    cx: float
    mo: float
    bm: float
    br: float
    nm: float
    nr: float
    bl: float
    je: float

    def as_array(self) -> np.ndarray:
        """The features in ``FEATURE_NAMES`` order."""
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=np.float64)

    @classmethod
    def from_array(cls, values: np.ndarray) -> "RawFeatures":
        """Build features from an array in ``FEATURE_NAMES`` order."""
        return cls(*(float(value) for value in values))


@dataclass(frozen=True, eq=False)
class ClipStatistics:
    """
    Per-frame and per-pair measurements the content features are pooled from.

    Keeping them separate from the pooled features lets a caller recompute only the frames a channel altered.

    Parameters
    ----------
    si : np.ndarray
        Spatial information per frame.
    edge_count : np.ndarray
        Number of blur edge pixels per frame.
    edge_width_sum : np.ndarray
        Sum of the edge widths per frame.
    wide_edge_count : np.ndarray
        Number of edges wider than the width threshold per frame.
    noise_sigma : np.ndarray
        Estimated noise standard deviation per frame.
    noise_ratio : np.ndarray
        Fraction of noisy interior pixels per frame.
    block_ratio : np.ndarray
        Boundary over interior contrast per frame.
    ti : np.ndarray
        Temporal information per consecutive frame pair.
    mad : np.ndarray
        Mean absolute difference per consecutive frame pair.
    """

    si: np.ndarray
    edge_count: np.ndarray
    edge_width_sum: np.ndarray
    wide_edge_count: np.ndarray
    noise_sigma: np.ndarray
    noise_ratio: np.ndarray
    block_ratio: np.ndarray
    ti: np.ndarray
    mad: np.ndarray

    @property
    def frame_count(self) -> int:
        """Number of frames measured."""
        return int(self.si.shape[0])

    def __eq__(self, other: object) -> bool:
        """Compare all measurements bit-exactly."""
        if not isinstance(other, ClipStatistics):
            return NotImplemented
        return all(np.array_equal(getattr(self, f.name), getattr(other, f.name)) for f in fields(self))

    __hash__ = None  # type: ignore[assignment]


def _filter(frames: np.ndarray, row_taps: np.ndarray, column_taps: np.ndarray) -> np.ndarray:
    # separable 3x3 filter restricted to the interior, frames never mix
    filtered = ndimage.correlate1d(frames, row_taps, axis=1)
    filtered = ndimage.correlate1d(filtered, column_taps, axis=2)
    return filtered[:, 1:-1, 1:-1]


def _run_length_ending(mask: np.ndarray) -> np.ndarray:
    """
    Length of the run of True values ending at every position of the last axis.

    Parameters
    ----------
    mask : np.ndarray
        Boolean array.

    Returns
    -------
    np.ndarray
        Run lengths, 0 where ``mask`` is False.
    """
    position = np.arange(1, mask.shape[-1] + 1)
    last_break = np.where(mask, 0, position)
    np.maximum.accumulate(last_break, axis=-1, out=last_break)
    return np.where(mask, position - last_break, 0)


def _run_length_starting(mask: np.ndarray) -> np.ndarray:
    return _run_length_ending(mask[..., ::-1])[..., ::-1]


def _edge_widths(frames: np.ndarray, gx: np.ndarray) -> np.ndarray:
    """
    Distance between the luminance extrema enclosing every interior pixel along its row.

    A pixel on a rising edge (positive horizontal gradient) extends left over the strictly rising run ending at it
    and right over the strictly rising run starting at it; falling edges use falling runs.

    Parameters
    ----------
    frames : np.ndarray
        Luma samples, shape (n, H, W).
    gx : np.ndarray
        Interior horizontal gradient, shape (n, H - 2, W - 2).

    Returns
    -------
    np.ndarray
        Widths of the interior pixels, at least 1.
    """
    steps = np.diff(frames[:, 1:-1, :].astype(np.int16), axis=2)
    rising = _run_length_ending(steps > 0)[..., :-1] + _run_length_starting(steps > 0)[..., 1:]
    falling = _run_length_ending(steps < 0)[..., :-1] + _run_length_starting(steps < 0)[..., 1:]
    return np.maximum(np.where(gx > 0, rising, falling), 1)


def _block_ratios(frames: np.ndarray, config: FeatureConfig) -> np.ndarray:
    samples = frames.astype(np.int16)
    horizontal = np.abs(np.diff(samples, axis=2)).astype(np.int64)
    vertical = np.abs(np.diff(samples, axis=1)).astype(np.int64)
    on_column_grid = (np.arange(1, samples.shape[2]) % config.block_size) == 0
    on_row_grid = (np.arange(1, samples.shape[1]) % config.block_size) == 0

    boundary_sum = horizontal[:, :, on_column_grid].sum(axis=(1, 2)) + vertical[:, on_row_grid, :].sum(axis=(1, 2))
    interior_sum = horizontal[:, :, ~on_column_grid].sum(axis=(1, 2)) + vertical[:, ~on_row_grid, :].sum(axis=(1, 2))
    boundary_count = samples.shape[1] * on_column_grid.sum() + samples.shape[2] * on_row_grid.sum()
    interior_count = samples.shape[1] * (~on_column_grid).sum() + samples.shape[2] * (~on_row_grid).sum()

    if boundary_count == 0 or interior_count == 0:
        return np.zeros(samples.shape[0])
    return (boundary_sum / boundary_count) / (interior_sum / interior_count + config.blockiness_epsilon)


def _spatial_chunk(frames: np.ndarray, config: FeatureConfig) -> dict[str, np.ndarray]:
    samples = frames.astype(np.float64)
    gx = _filter(samples, SOBEL_SMOOTHING, SOBEL_DERIVATIVE)
    gy = _filter(samples, SOBEL_DERIVATIVE, SOBEL_SMOOTHING)
    magnitude = np.hypot(gx, gy)
    widths = _edge_widths(frames, gx)
    residual = np.abs(_filter(samples, LAPLACIAN_DIFFERENCE, LAPLACIAN_DIFFERENCE))
    interior_pixels = residual.shape[1] * residual.shape[2]
    sigma_scale = math.sqrt(math.pi / 2.0) / (6.0 * interior_pixels)

    n = frames.shape[0]
    out = {
        "si": np.empty(n),
        "edge_count": np.zeros(n, dtype=np.int64),
        "edge_width_sum": np.zeros(n, dtype=np.int64),
        "wide_edge_count": np.zeros(n, dtype=np.int64),
        "noise_sigma": np.empty(n),
        "noise_ratio": np.empty(n),
    }
    for i in range(n):
        out["si"][i] = magnitude[i].std()

        strength = np.abs(gx[i])
        if strength.max() > strength.min():
            edge_widths = widths[i][strength > threshold_otsu(strength)]
            out["edge_count"][i] = edge_widths.size
            out["edge_width_sum"][i] = edge_widths.sum()
            out["wide_edge_count"][i] = np.count_nonzero(edge_widths > config.width_threshold)

        sigma = sigma_scale * residual[i].sum()
        out["noise_sigma"][i] = sigma
        out["noise_ratio"][i] = np.count_nonzero(residual[i] > config.noise_sigma_multiplier * sigma) / interior_pixels
    out["block_ratio"] = _block_ratios(frames, config)
    return out


def _map_chunks(
    frames: np.ndarray, chunk_fn: Callable[[np.ndarray, FeatureConfig], dict[str, np.ndarray]], config: FeatureConfig
) -> dict[str, np.ndarray]:
    starts = range(0, len(frames), FRAMES_PER_CHUNK)
    parts = [chunk_fn(frames[start : start + FRAMES_PER_CHUNK], config) for start in starts]
    return {key: np.concatenate([part[key] for part in parts]) for key in parts[0]}


def frame_statistics(frames: np.ndarray, config: FeatureConfig = DEFAULT_FEATURE_CONFIG) -> dict[str, np.ndarray]:
    """
    Measure the per-frame statistics of a stack of frames.

    The measurement of a frame never depends on the other frames of the stack.

    Parameters
    ----------
    frames : np.ndarray
        Luma samples, shape (n, H, W).
    config : FeatureConfig
        Feature constants.

    Returns
    -------
    dict[str, np.ndarray]
        One array of length n per per-frame field of ``ClipStatistics``.
    """
    return _map_chunks(frames, _spatial_chunk, config)


def pair_statistics(previous: np.ndarray, current: np.ndarray) -> tuple[float, float]:
    """
    Temporal information and mean absolute difference of one frame pair.

    Parameters
    ----------
    previous : np.ndarray
        Earlier frame.
    current : np.ndarray
        Later frame.

    Returns
    -------
    tuple[float, float]
        Population standard deviation and mean absolute value of the difference.
    """
    difference = current.astype(np.int16) - previous.astype(np.int16)
    return float(difference.std()), float(np.abs(difference).mean())


def _pair_arrays(frames: np.ndarray, pairs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ti = np.empty(len(pairs))
    mad = np.empty(len(pairs))
    for i, t in enumerate(pairs):
        ti[i], mad[i] = pair_statistics(frames[t], frames[t + 1])
    return ti, mad


def clip_statistics(clip: VideoClip, config: FeatureConfig = DEFAULT_FEATURE_CONFIG) -> ClipStatistics:
    """
    Measure every frame and frame pair of a clip.

    Parameters
    ----------
    clip : VideoClip
        The clip.
    config : FeatureConfig
        Feature constants.

    Returns
    -------
    ClipStatistics
        The measurements.
    """
    per_frame = frame_statistics(clip.frames, config)
    ti, mad = _pair_arrays(clip.frames, np.arange(clip.frame_count - 1))
    return ClipStatistics(**per_frame, ti=ti, mad=mad)


def update_statistics(
    base: ClipStatistics, clip: VideoClip, changed: np.ndarray, config: FeatureConfig = DEFAULT_FEATURE_CONFIG
) -> ClipStatistics:
    """
    Re-measure a clip that differs from an already measured one only at some frames.

    The result is bit-identical to ``clip_statistics(clip, config)``.

    Parameters
    ----------
    base : ClipStatistics
        Measurements of the clip before the change.
    clip : VideoClip
        The changed clip.
    changed : np.ndarray
        Indices of the frames that differ.
    config : FeatureConfig
        Feature constants, the ones ``base`` was measured with.

    Returns
    -------
    ClipStatistics
        The measurements of ``clip``.
    """
    changed = np.unique(np.asarray(changed, dtype=np.int64))
    if changed.size == 0:
        return base

    updates: dict[str, np.ndarray] = {}
    per_frame = frame_statistics(clip.frames[changed], config)
    for key, values in per_frame.items():
        column = getattr(base, key).copy()
        column[changed] = values
        updates[key] = column

    pairs = np.unique(np.concatenate([changed - 1, changed]))
    pairs = pairs[(pairs >= 0) & (pairs < clip.frame_count - 1)]
    ti, mad = base.ti.copy(), base.mad.copy()
    ti[pairs], mad[pairs] = _pair_arrays(clip.frames, pairs)
    return replace(base, **updates, ti=ti, mad=mad)


def _jerkiness(ti: np.ndarray, mad: np.ndarray, config: FeatureConfig) -> float:
    frozen = mad < config.freeze_threshold
    if not frozen.any():
        return 0.0
    # all frames frozen: a still clip, not a stuttering one
    if frozen.all():
        return 0.0
    mean_ti = ti.mean()
    after_freeze = np.flatnonzero(frozen[:-1] & ~frozen[1:]) + 1
    if after_freeze.size and mean_ti > 0:
        jump = float(np.minimum(ti[after_freeze] / mean_ti, 1.0).mean())
    else:
        jump = 0.0
    weight = config.jerkiness_freeze_weight
    return float(weight * frozen.mean() + (1.0 - weight) * jump)


def pool_features(stats: ClipStatistics, config: FeatureConfig = DEFAULT_FEATURE_CONFIG) -> RawFeatures:
    """
    Pool per-frame and per-pair measurements into clip-level content features.

    Parameters
    ----------
    stats : ClipStatistics
        The measurements.
    config : FeatureConfig
        Feature constants.

    Returns
    -------
    RawFeatures
        The eight content features.
    """
    edges = int(stats.edge_count.sum())
    if edges:
        bm = float(stats.edge_width_sum.sum() / edges)
        br = float(stats.wide_edge_count.sum() / edges)
    else:
        bm = br = 0.0
    return RawFeatures(
        cx=float(stats.si.mean()),
        mo=float(stats.ti.mean()),
        bm=bm,
        br=br,
        nm=float(stats.noise_sigma.mean()),
        nr=float(stats.noise_ratio.mean()),
        bl=float(np.maximum(stats.block_ratio - 1.0, 0.0).mean()),
        je=_jerkiness(stats.ti, stats.mad, config),
    )


def raw_features(clip: VideoClip, config: FeatureConfig = DEFAULT_FEATURE_CONFIG) -> RawFeatures:
    """
    Compute all eight content features of a clip.

    Parameters
    ----------
    clip : VideoClip
        The clip.
    config : FeatureConfig
        Feature constants.

    Returns
    -------
    RawFeatures
        The content features.
    """
    return pool_features(clip_statistics(clip, config), config)


def spatial_complexity(clip: VideoClip) -> float:
    """
    Mean over frames of the standard deviation of the Sobel gradient magnitude.

    Parameters
    ----------
    clip : VideoClip
        The clip.

    Returns
    -------
    float
        Spatial complexity.
    """
    return raw_features(clip).cx


def motion(clip: VideoClip) -> float:
    """
    Mean over consecutive pairs of the standard deviation of the frame difference.

    Parameters
    ----------
    clip : VideoClip
        The clip.

    Returns
    -------
    float
        Motion.
    """
    ti, _ = _pair_arrays(clip.frames, np.arange(clip.frame_count - 1))
    return float(ti.mean())


def blur(clip: VideoClip, config: FeatureConfig = DEFAULT_FEATURE_CONFIG) -> tuple[float, float]:
    """
    Edge-spread blur: mean edge width and fraction of wide edges, pooled over all frames.

    Parameters
    ----------
    clip : VideoClip
        The clip.
    config : FeatureConfig
        Feature constants.

    Returns
    -------
    tuple[float, float]
        Mean width and blur ratio, both 0 when no frame has edges.
    """
    features = raw_features(clip, config)
    return features.bm, features.br


def noise(clip: VideoClip, config: FeatureConfig = DEFAULT_FEATURE_CONFIG) -> tuple[float, float]:
    """
    Fast noise estimation from the Laplacian-difference residual.

    Parameters
    ----------
    clip : VideoClip
        The clip.
    config : FeatureConfig
        Feature constants.

    Returns
    -------
    tuple[float, float]
        Mean estimated sigma and mean fraction of noisy pixels.
    """
    features = raw_features(clip, config)
    return features.nm, features.nr


def blockiness(clip: VideoClip, config: FeatureConfig = DEFAULT_FEATURE_CONFIG) -> float:
    """
    Mean excess of block-boundary contrast over interior contrast.

    Parameters
    ----------
    clip : VideoClip
        The clip.
    config : FeatureConfig
        Feature constants.

    Returns
    -------
    float
        Blockiness, about 0 for content without a block grid.
    """
    starts = range(0, clip.frame_count, FRAMES_PER_CHUNK)
    ratios = np.concatenate([_block_ratios(clip.frames[start : start + FRAMES_PER_CHUNK], config) for start in starts])
    return float(np.maximum(ratios - 1.0, 0.0).mean())


def jerkiness(clip: VideoClip, config: FeatureConfig = DEFAULT_FEATURE_CONFIG) -> float:
    """
    Blend of the frozen-pair ratio and the motion jump following each freeze.

    Parameters
    ----------
    clip : VideoClip
        The clip.
    config : FeatureConfig
        Feature constants.

    Returns
    -------
    float
        Jerkiness in [0, 1], 0 when no pair or every pair is frozen.
    """
    ti, mad = _pair_arrays(clip.frames, np.arange(clip.frame_count - 1))
    return _jerkiness(ti, mad, config)
