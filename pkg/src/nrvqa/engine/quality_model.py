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

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from nrvqa.config.feature_config import FeatureConfig
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.errors import DimensionError
from nrvqa.features.extract import extract_features
from nrvqa.features.normalizer import FEATURE_COUNT, Normalizer
from nrvqa.impairment.channel import ChannelStats
from nrvqa.logging.logger import nrvqa_logger
from nrvqa.video.frame_io import VideoClip

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class QualityModel:
    """
    A trained quality regressor together with everything needed to feed it.

    Parameters
    ----------
    spec : LearnerSpec
        Learner and hyperparameters the model was trained with.
    payload : dict[str, Any]
        Trained parameters, opaque per learner.
    normalizer : Normalizer
        Bounds mapping raw features to the unit interval.
    feature_config : FeatureConfig
        Feature constants the training features were extracted with.
    train_seed : int
        Seed of the training run.
    train_time_seconds : float
        Wall-clock training time.
    """

    spec: LearnerSpec
    payload: dict[str, Any]
    normalizer: Normalizer
    feature_config: FeatureConfig
    train_seed: int = 0
    train_time_seconds: float = 0.0
    format_version: int = field(default=MODEL_FORMAT_VERSION)

    @property
    def algo(self) -> str:
        """Tag of the learner."""
        return self.spec.algo

    @property
    def learner(self) -> Any:
        """The registered learner instance predicting for this model."""
        from nrvqa.algorithms import get_learner

        return get_learner(self.algo)

    def predict_batch(self, X: np.ndarray) -> np.ndarray:  # noqa: N803
        """
        Predict quality indices for a batch of feature vectors.

        Parameters
        ----------
        X : np.ndarray
            Normalized feature vectors, shape (n, 10).

        Returns
        -------
        np.ndarray
            Quality indices clamped to [0, 1].
        """
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != FEATURE_COUNT:
            nrvqa_logger.error(f"Feature batch has shape {X.shape}, expected (n, {FEATURE_COUNT}).")
            raise DimensionError(f"Expected feature vectors of length {FEATURE_COUNT}, got shape {X.shape}.")
        return np.clip(self.learner.predict(self.payload, X), 0.0, 1.0)

    def predict(self, x: np.ndarray) -> float:
        """
        Predict the quality index of one feature vector.

        Parameters
        ----------
        x : np.ndarray
            Normalized feature vector of length 10.

        Returns
        -------
        float
            Quality index in [0, 1].
        """
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (FEATURE_COUNT,):
            nrvqa_logger.error(f"Feature vector has shape {x.shape}, expected ({FEATURE_COUNT},).")
            raise DimensionError(f"Expected a feature vector of length {FEATURE_COUNT}, got shape {x.shape}.")
        return float(self.predict_batch(x[None, :])[0])

    def predict_clip(self, clip: VideoClip, stats: ChannelStats) -> float:
        """
        Extract the features of a received clip and predict its quality index.

        Parameters
        ----------
        clip : VideoClip
            The received clip.
        stats : ChannelStats
            Network statistics of its transmission.

        Returns
        -------
        float
            Quality index in [0, 1].
        """
        return self.predict(extract_features(clip, stats, self.normalizer, self.feature_config))

    def save(self, path: str | Path) -> None:
        """Write the model file."""
        from nrvqa.engine.save import save_quality_model

        save_quality_model(self, path)

    @staticmethod
    def load(path: str | Path) -> "QualityModel":
        """Read a model file written by ``save``."""
        from nrvqa.engine.load import load_quality_model

        return load_quality_model(path)

    def __repr__(self) -> str:  # noqa: D105
        return f"QualityModel(algo={self.algo!r}, seed={self.train_seed}, train_time={self.train_time_seconds:.3f}s)"
