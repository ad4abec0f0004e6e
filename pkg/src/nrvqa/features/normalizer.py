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
from typing import Iterable, Mapping

import numpy as np

from nrvqa.errors import DataError, DegenerateFeature
from nrvqa.features.content import FEATURE_NAMES, RawFeatures
from nrvqa.impairment.channel import ChannelStats
from nrvqa.logging.logger import nrvqa_logger

NETWORK_FEATURE_NAMES: tuple[str, ...] = ("bitrate", "loss")
INPUT_NAMES: tuple[str, ...] = FEATURE_NAMES + NETWORK_FEATURE_NAMES
FEATURE_COUNT = len(INPUT_NAMES)

# physical ranges of the dataset grid
BITRATE_BOUNDS = (64.0, 5120.0)
LOSS_BOUNDS = (0.0, 0.10)


def network_features(stats: ChannelStats) -> np.ndarray:
    """
    The two raw network features of a transmission.

    Parameters
    ----------
    stats : ChannelStats
        Measured channel statistics.

    Returns
    -------
    np.ndarray
        Nominal bitrate in kbps and measured loss ratio.
    """
    return np.array([stats.nominal_bitrate_kbps, stats.measured_loss_ratio], dtype=np.float64)


def raw_inputs(raw: RawFeatures, stats: ChannelStats) -> np.ndarray:
    """
    Concatenate content and network features in ``INPUT_NAMES`` order.

    Parameters
    ----------
    raw : RawFeatures
        Content features.
    stats : ChannelStats
        Channel statistics.

    Returns
    -------
    np.ndarray
        The ten raw inputs.
    """
    return np.concatenate([raw.as_array(), network_features(stats)])


@dataclass(frozen=True)
class Normalizer:
    """
    Per-input min/max bounds mapping raw inputs into [0, 1].

    Parameters
    ----------
    bounds : Mapping[str, tuple[float, float]]
        Bounds per input name, every input of ``INPUT_NAMES`` present with max > min.
    """

    bounds: Mapping[str, tuple[float, float]]

    def __post_init__(self) -> None:
        missing = [name for name in INPUT_NAMES if name not in self.bounds]
        if missing:
            raise DataError(f"Normalizer bounds are missing for {missing}.")
        for name in INPUT_NAMES:
            low, high = self.bounds[name]
            if not high > low:
                nrvqa_logger.error(f"Degenerate bounds ({low}, {high}) for feature '{name}'.")
                raise DegenerateFeature(name)
        ordered = {name: (float(self.bounds[name][0]), float(self.bounds[name][1])) for name in INPUT_NAMES}
        object.__setattr__(self, "bounds", ordered)

    @property
    def lower(self) -> np.ndarray:
        """Lower bounds in ``INPUT_NAMES`` order."""
        return np.array([self.bounds[name][0] for name in INPUT_NAMES])

    @property
    def upper(self) -> np.ndarray:
        """Upper bounds in ``INPUT_NAMES`` order."""
        return np.array([self.bounds[name][1] for name in INPUT_NAMES])

    def apply(self, raw: np.ndarray) -> np.ndarray:
        """
        Map raw inputs into [0, 1], clamping values outside the fitted bounds.

        Parameters
        ----------
        raw : np.ndarray
            Raw inputs in ``INPUT_NAMES`` order, one vector or a (n, 10) matrix.

        Returns
        -------
        np.ndarray
            Normalized inputs of the same shape.
        """
        raw = np.asarray(raw, dtype=np.float64)
        if raw.shape[-1] != FEATURE_COUNT:
            raise DataError(f"Expected {FEATURE_COUNT} raw inputs, got {raw.shape[-1]}.")
        lower, upper = self.lower, self.upper
        return np.clip((raw - lower) / (upper - lower), 0.0, 1.0)

    def apply_value(self, name: str, value: float) -> float:
        """
        Normalize a single input.

        Parameters
        ----------
        name : str
            Input name.
        value : float
            Raw value.

        Returns
        -------
        float
            Normalized value in [0, 1].
        """
        low, high = self.bounds[name]
        return float(np.clip((value - low) / (high - low), 0.0, 1.0))

    def to_line(self) -> str:
        """Serialize as ``name=min:max`` pairs joined by semicolons."""
        return ";".join(f"{name}={low!r}:{high!r}" for name, (low, high) in self.bounds.items())

    @classmethod
    def from_line(cls, line: str) -> "Normalizer":
        """
        Parse the output of ``to_line``.

        Parameters
        ----------
        line : str
            Serialized bounds.

        Returns
        -------
        Normalizer
            The normalizer.
        """
        bounds = {}
        try:
            for item in line.strip().split(";"):
                name, values = item.split("=", 1)
                low, high = values.split(":")
                bounds[name.strip()] = (float(low), float(high))
        except ValueError as e:
            raise DataError(f"Malformed normalizer bounds '{line}'.") from e
        return cls(bounds)


def fit_normalizer(raw: Iterable[tuple[RawFeatures, ChannelStats]]) -> Normalizer:
    """
    Fit content feature bounds to a corpus; network bounds are the fixed grid ranges.

    Parameters
    ----------
    raw : Iterable[tuple[RawFeatures, ChannelStats]]
        Content features and channel statistics of every corpus clip.

    Returns
    -------
    Normalizer
        The fitted normalizer.

    Examples
    --------
    >>> norm = fit_normalizer(corpus)
    >>> norm.apply_value("bitrate", 2048.0)
    0.3924...
    """
    content = np.array([features.as_array() for features, _ in raw])
    if content.ndim != 2 or content.shape[0] < 2:
        nrvqa_logger.error("A normalizer needs at least two corpus samples.")
        raise DataError("A normalizer needs at least two corpus samples.")

    low, high = content.min(axis=0), content.max(axis=0)
    bounds: dict[str, tuple[float, float]] = {}
    for index, name in enumerate(FEATURE_NAMES):
        if not high[index] > low[index]:
            nrvqa_logger.error(f"Feature '{name}' is constant ({low[index]}) over the corpus.")
            raise DegenerateFeature(name)
        bounds[name] = (float(low[index]), float(high[index]))
    bounds["bitrate"] = BITRATE_BOUNDS
    bounds["loss"] = LOSS_BOUNDS
    return Normalizer(bounds)
