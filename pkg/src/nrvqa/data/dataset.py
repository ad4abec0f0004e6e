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

import hashlib
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import pandas as pd

from nrvqa.config.feature_config import DEFAULT_FEATURE_CONFIG, FeatureConfig
from nrvqa.errors import DataError, IoError, SchemaError, UnknownClass, UsageError
from nrvqa.features.content import FEATURE_NAMES
from nrvqa.features.normalizer import FEATURE_COUNT, Normalizer
from nrvqa.logging.logger import nrvqa_logger

DATASET_FORMAT = 1
DATASET_MAGIC = f"# nrvqa-dataset format={DATASET_FORMAT}"
FEATURE_CONFIG_PREFIX = "# feature_config: "
NORMALIZER_PREFIX = "# normalizer: "
CSV_COLUMNS: tuple[str, ...] = (
    ("class_id", "level_index", "bitrate_kbps", "loss_rate") + FEATURE_NAMES + ("f_bitrate", "f_loss", "q")
)
RAW_COLUMNS: tuple[str, ...] = FEATURE_NAMES + ("f_bitrate", "f_loss")


@dataclass(frozen=True, eq=False)
class Sample:
    """
    One cell of the dataset grid.

    Parameters
    ----------
    class_id : str
        Video class label.
    level_index : int
        Compression rung, 0..7.
    bitrate_kbps : float
        Nominal bitrate of the rung.
    loss_rate : float
        Loss rate label of the grid cell.
    raw : np.ndarray
        The ten raw inputs: eight content features, nominal bitrate and measured loss ratio.
    features : np.ndarray
        The ten normalized inputs.
    q : float
        Ground-truth quality index.
    """

    class_id: str
    level_index: int
    bitrate_kbps: float
    loss_rate: float
    raw: np.ndarray
    features: np.ndarray
    q: float

    def __post_init__(self) -> None:
        if self.raw.shape != (FEATURE_COUNT,) or self.features.shape != (FEATURE_COUNT,):
            raise DataError(f"Sample {self.key} does not carry {FEATURE_COUNT} inputs.")
        if not 0.0 <= self.q <= 1.0 or np.any((self.features < 0.0) | (self.features > 1.0)):
            nrvqa_logger.error(f"Sample {self.key} has values outside [0, 1].")
            raise DataError(f"Sample {self.key} has a quality index or feature outside [0, 1].")

    @property
    def key(self) -> tuple[str, int, float]:
        """The (class_id, level_index, loss_rate) triple identifying the cell."""
        return (self.class_id, self.level_index, self.loss_rate)

    def __eq__(self, other: Any) -> bool:
        """Compare samples field by field, arrays bit-exactly."""
        if not isinstance(other, Sample):
            return NotImplemented
        return (
            self.key == other.key
            and self.bitrate_kbps == other.bitrate_kbps
            and self.q == other.q
            and np.array_equal(self.raw, other.raw)
            and np.array_equal(self.features, other.features)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    An ordered, immutable collection of grid samples with the normalizer that produced their vectors.

    Parameters
    ----------
    samples : Sequence[Sample]
        The samples, no two sharing a (class_id, level_index, loss_rate) triple.
    normalizer : Normalizer
        Bounds used for every stored feature vector.
    feature_config : FeatureConfig
        Constants the content features were computed with.
    """

    samples: Sequence[Sample]
    normalizer: Normalizer
    feature_config: FeatureConfig = DEFAULT_FEATURE_CONFIG
    _index: dict[tuple[str, int, float], int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        samples = tuple(self.samples)
        index: dict[tuple[str, int, float], int] = {}
        for position, sample in enumerate(samples):
            if sample.key in index:
                nrvqa_logger.error(f"Duplicate dataset cell {sample.key}.")
                raise DataError(f"Duplicate (class_id, level_index, loss_rate) triple {sample.key}.")
            index[sample.key] = position
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        """Number of samples."""
        return len(self.samples)

    def __eq__(self, other: Any) -> bool:
        """Datasets are equal when samples, bounds and feature constants are."""
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.normalizer == other.normalizer
            and self.feature_config == other.feature_config
            and len(self.samples) == len(other.samples)
            and all(a == b for a, b in zip(self.samples, other.samples))
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def X(self) -> np.ndarray:  # noqa: N802
        """Normalized feature matrix, shape (n, 10)."""
        if not self.samples:
            return np.empty((0, FEATURE_COUNT))
        return np.stack([sample.features for sample in self.samples])

    @property
    def y(self) -> np.ndarray:
        """Quality indices, shape (n,)."""
        return np.array([sample.q for sample in self.samples], dtype=np.float64)

    @property
    def raw(self) -> np.ndarray:
        """Raw input matrix, shape (n, 10)."""
        if not self.samples:
            return np.empty((0, FEATURE_COUNT))
        return np.stack([sample.raw for sample in self.samples])

    @property
    def class_ids(self) -> np.ndarray:
        """Class label of every sample."""
        return np.array([sample.class_id for sample in self.samples], dtype=object)

    @property
    def classes(self) -> list[str]:
        """Distinct class labels in order of first appearance."""
        return list(dict.fromkeys(sample.class_id for sample in self.samples))

    def position(self, class_id: str, level_index: int, loss_rate: float) -> int:
        """
        Position of the sample of a grid cell.

        Parameters
        ----------
        class_id : str
            Video class label.
        level_index : int
            Compression rung.
        loss_rate : float
            Loss rate label.

        Returns
        -------
        int
            Index into ``samples``.
        """
        key = (class_id, level_index, loss_rate)
        if key not in self._index:
            raise UnknownClass(f"No sample for cell {key}.")
        return self._index[key]

    def subset(self, indices: Sequence[int] | np.ndarray) -> "Dataset":
        """
        Select samples by position, keeping the normalizer and feature constants.

        Parameters
        ----------
        indices : Sequence[int] | np.ndarray
            Positions to keep, in the order given.

        Returns
        -------
        Dataset
            The selection.
        """
        return Dataset([self.samples[int(i)] for i in indices], self.normalizer, self.feature_config)

    def to_csv_text(self) -> str:
        """
        Render the dataset in its CSV file format.

        Returns
        -------
        str
            The file content.
        """
        rows = []
        for sample in self.samples:
            row: dict[str, Any] = {
                "class_id": sample.class_id,
                "level_index": sample.level_index,
                "bitrate_kbps": _float_text(sample.bitrate_kbps),
                "loss_rate": _float_text(sample.loss_rate),
            }
            row.update({name: _float_text(value) for name, value in zip(RAW_COLUMNS, sample.raw)})
            row["q"] = _float_text(sample.q)
            rows.append(row)
        frame = pd.DataFrame(rows, columns=list(CSV_COLUMNS))

        buffer = io.StringIO()
        buffer.write(f"{DATASET_MAGIC}\n")
        buffer.write(f"{FEATURE_CONFIG_PREFIX}{self.feature_config.to_line()}\n")
        buffer.write(f"{NORMALIZER_PREFIX}{self.normalizer.to_line()}\n")
        frame.to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()

    def fingerprint(self) -> str:
        """SHA-256 of the CSV rendering, identifying the training set of a model."""
        return hashlib.sha256(self.to_csv_text().encode("utf-8")).hexdigest()


def _float_text(value: float) -> str:
    # shortest decimal that reads back to the same binary64 value
    return repr(float(value))


def save_csv(ds: Dataset, path: str | Path) -> None:
    """
    Write a dataset to CSV with its feature constants and normalizer bounds in comment lines.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    path : str | Path
        Target file.
    """
    try:
        Path(path).write_text(ds.to_csv_text(), encoding="utf-8")
    except OSError as e:
        nrvqa_logger.error(f"Could not write dataset to {path}: {e}")
        raise IoError(f"Could not write dataset to {path}.") from e


def _read_comments(lines: list[str]) -> dict[str, str]:
    comments: dict[str, str] = {}
    for line in lines:
        if not line.startswith("#"):
            break
        if line.startswith("# nrvqa-dataset"):
            comments["magic"] = line
        elif line.startswith(FEATURE_CONFIG_PREFIX):
            comments["feature_config"] = line[len(FEATURE_CONFIG_PREFIX) :]
        elif line.startswith(NORMALIZER_PREFIX):
            comments["normalizer"] = line[len(NORMALIZER_PREFIX) :]
    return comments


def load_csv(path: str | Path) -> Dataset:
    """
    Read a dataset written by ``save_csv``.

    Normalized vectors are recomputed from the raw columns with the embedded bounds, reproducing the stored
    vectors bit for bit.

    Parameters
    ----------
    path : str | Path
        The CSV file.

    Returns
    -------
    Dataset
        The dataset.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        nrvqa_logger.error(f"Could not read dataset {path}: {e}")
        raise IoError(f"Could not read dataset {path}.") from e

    comments = _read_comments(text.splitlines())
    if comments.get("magic") != DATASET_MAGIC:
        nrvqa_logger.error(f"{path} is not a format {DATASET_FORMAT} dataset file.")
        raise SchemaError("# nrvqa-dataset")
    if "normalizer" not in comments:
        raise SchemaError("# normalizer")
    try:
        normalizer = Normalizer.from_line(comments["normalizer"])
        feature_config = FeatureConfig.from_line(comments.get("feature_config", DEFAULT_FEATURE_CONFIG.to_line()))
    except UsageError as e:
        raise SchemaError("# feature_config") from e

    try:
        frame = pd.read_csv(
            io.StringIO(text),
            comment="#",
            dtype={"class_id": str},
            float_precision="round_trip",
            keep_default_na=False,
        )
    except (ValueError, pd.errors.ParserError) as e:
        nrvqa_logger.error(f"Malformed dataset {path}: {e}")
        raise SchemaError("<table>") from e

    for column in CSV_COLUMNS:
        if column not in frame.columns:
            nrvqa_logger.error(f"Dataset {path} lacks column '{column}'.")
            raise SchemaError(column)
    for column in frame.columns:
        if column not in CSV_COLUMNS:
            raise SchemaError(column)

    try:
        raw = frame[list(RAW_COLUMNS)].to_numpy(dtype=np.float64)
        levels = frame["level_index"].to_numpy(dtype=np.int64)
        bitrates = frame["bitrate_kbps"].to_numpy(dtype=np.float64)
        losses = frame["loss_rate"].to_numpy(dtype=np.float64)
        qualities = frame["q"].to_numpy(dtype=np.float64)
    except (TypeError, ValueError) as e:
        nrvqa_logger.error(f"Non-numeric value in dataset {path}: {e}")
        raise SchemaError("<numeric column>") from e

    features = normalizer.apply(raw) if len(frame) else raw
    samples = [
        Sample(
            class_id=str(frame["class_id"].iloc[i]),
            level_index=int(levels[i]),
            bitrate_kbps=float(bitrates[i]),
            loss_rate=float(losses[i]),
            raw=raw[i].copy(),
            features=features[i].copy(),
            q=float(qualities[i]),
        )
        for i in range(len(frame))
    ]
    return Dataset(samples, normalizer, feature_config)
