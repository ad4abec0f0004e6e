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

import pickle
import zipfile
from pathlib import Path
from typing import Any

import torch

from nrvqa.config.feature_config import FeatureConfig
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.engine.quality_model import MODEL_FORMAT_VERSION, QualityModel
from nrvqa.errors import IoError, NrvqaError, ParseError
from nrvqa.features.normalizer import Normalizer
from nrvqa.logging.logger import nrvqa_logger

ENVELOPE_KEYS = (
    "format_version",
    "algo",
    "hyperparameters",
    "normalizer",
    "feature_config",
    "train_seed",
    "train_time_seconds",
    "payload",
)


def from_storable(value: Any) -> Any:
    """
    Invert ``to_storable``: tensors become numpy arrays again.

    Parameters
    ----------
    value : Any
        Stored value.

    Returns
    -------
    Any
        The payload value.
    """
    if isinstance(value, torch.Tensor):
        return value.numpy()
    if isinstance(value, dict):
        return {key: from_storable(item) for key, item in value.items()}
    if isinstance(value, list):
        return [from_storable(item) for item in value]
    return value


def load_quality_model(path: str | Path) -> QualityModel:
    """
    Load a model file written by ``save_quality_model``.

    Parameters
    ----------
    path : str | Path
        The model file.

    Returns
    -------
    QualityModel
        The model, predicting exactly as the saved one.
    """
    path = Path(path)
    try:
        envelope = torch.load(path, map_location="cpu", weights_only=True)
    except FileNotFoundError as e:
        nrvqa_logger.error(f"Model file {path} does not exist.")
        raise IoError(f"Model file {path} does not exist.") from e
    except (RuntimeError, pickle.UnpicklingError, zipfile.BadZipFile, EOFError) as e:
        nrvqa_logger.error(f"Model file {path} is not a valid model archive: {e}")
        raise ParseError(f"Model file {path} is not a valid model archive.") from e

    if not isinstance(envelope, dict) or set(envelope) != set(ENVELOPE_KEYS):
        nrvqa_logger.error(f"Model file {path} has an unexpected envelope.")
        raise ParseError(f"Model file {path} has an unexpected envelope.")
    if envelope["format_version"] != MODEL_FORMAT_VERSION:
        nrvqa_logger.error(f"Model file format {envelope['format_version']} is not supported.")
        raise ParseError(f"Unsupported model file format {envelope['format_version']}.")

    try:
        spec = LearnerSpec(envelope["algo"], from_storable(envelope["hyperparameters"]))
        normalizer = Normalizer.from_line(envelope["normalizer"])
        feature_config = FeatureConfig.from_line(envelope["feature_config"])
    except NrvqaError as e:
        nrvqa_logger.error(f"Model file {path} has invalid metadata: {e}")
        raise ParseError(f"Model file {path} has invalid metadata.") from e

    return QualityModel(
        spec=spec,
        payload=from_storable(envelope["payload"]),
        normalizer=normalizer,
        feature_config=feature_config,
        train_seed=envelope["train_seed"],
        train_time_seconds=envelope["train_time_seconds"],
    )
