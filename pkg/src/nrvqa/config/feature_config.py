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

from dataclasses import asdict, dataclass, fields
from typing import Any

from nrvqa.errors import UsageError
from nrvqa.logging.logger import nrvqa_logger

FEATURE_CONFIG_VERSION = 1


@dataclass(frozen=True)
class FeatureConfig:
    """
    Constants of the content feature extractors, versioned with every dataset and model.

    Parameters
    ----------
    width_threshold : float
        Edge width in pixels above which an edge counts as blurred.
    freeze_threshold : float
        Mean absolute frame difference below which a frame pair counts as frozen.
    noise_sigma_multiplier : float
        Residual magnitude, in estimated sigmas, above which a pixel counts as noisy.
    blockiness_epsilon : float
        Guard added to the interior difference of the blockiness ratio.
    jerkiness_freeze_weight : float
        Weight of the freeze ratio in jerkiness; the jump term gets the remainder.
    block_size : int
        Pitch of the coding block grid probed for blockiness.
    edge_threshold : str
        Rule selecting blur edge pixels; only "otsu" is supported.
    version : int
        Format version of this block.
    """

    width_threshold: float = 5.0
    freeze_threshold: float = 0.05
    noise_sigma_multiplier: float = 3.0
    blockiness_epsilon: float = 1e-6
    jerkiness_freeze_weight: float = 0.5
    block_size: int = 8
    edge_threshold: str = "otsu"
    version: int = FEATURE_CONFIG_VERSION

    def __post_init__(self) -> None:
        if self.edge_threshold != "otsu":
            raise UsageError(f"Unsupported edge threshold rule '{self.edge_threshold}'.")
        if not 0.0 <= self.jerkiness_freeze_weight <= 1.0:
            raise UsageError("Jerkiness freeze weight must lie in [0, 1].")
        if self.block_size < 2 or self.width_threshold < 0 or self.blockiness_epsilon <= 0:
            raise UsageError("Invalid feature configuration.")

    def to_dict(self) -> dict[str, Any]:
        """
        Flatten the block into plain key-value pairs.

        Returns
        -------
        dict[str, Any]
            Field names mapped to their values.
        """
        return asdict(self)

    def to_line(self) -> str:
        """
        Serialize the block as ``key=value`` pairs joined by semicolons.

        Returns
        -------
        str
            The serialized block, floats written with ``repr`` so they read back exactly.
        """
        items = []
        for key, value in self.to_dict().items():
            items.append(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}")
        return ";".join(items)

    @classmethod
    def from_dict(cls, values: dict[str, Any]) -> "FeatureConfig":
        """
        Rebuild a block from key-value pairs, coercing strings to the field types.

        Parameters
        ----------
        values : dict[str, Any]
            Field names mapped to values or their string forms.

        Returns
        -------
        FeatureConfig
            The block.
        """
        known = {field.name: field for field in fields(cls)}
        unknown = set(values) - set(known)
        if unknown:
            nrvqa_logger.error(f"Unknown feature configuration keys: {sorted(unknown)}")
            raise UsageError(f"Unknown feature configuration keys {sorted(unknown)}.")

        kwargs: dict[str, Any] = {}
        for key, value in values.items():
            default = known[key].default
            try:
                kwargs[key] = type(default)(value)
            except (TypeError, ValueError) as e:
                raise UsageError(f"Invalid value '{value}' for feature configuration key '{key}'.") from e
        config = cls(**kwargs)
        if config.version != FEATURE_CONFIG_VERSION:
            nrvqa_logger.error(f"Feature configuration version {config.version} is not supported.")
            raise UsageError(f"Unsupported feature configuration version {config.version}.")
        return config

    @classmethod
    def from_line(cls, line: str) -> "FeatureConfig":
        """
        Parse the output of ``to_line``.

        Parameters
        ----------
        line : str
            Semicolon-separated ``key=value`` pairs.

        Returns
        -------
        FeatureConfig
            The block.
        """
        pairs = [item.split("=", 1) for item in line.strip().split(";") if item]
        if any(len(pair) != 2 for pair in pairs):
            raise UsageError(f"Malformed feature configuration '{line}'.")
        return cls.from_dict({key.strip(): value.strip() for key, value in pairs})


DEFAULT_FEATURE_CONFIG = FeatureConfig()
