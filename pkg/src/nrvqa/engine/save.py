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

from pathlib import Path
from typing import Any

import numpy as np
import torch

from nrvqa.engine.quality_model import QualityModel
from nrvqa.errors import IoError
from nrvqa.logging.logger import nrvqa_logger


def to_storable(value: Any) -> Any:
    """
    Convert a payload into plain Python types and tensors, the only objects a weights-only load accepts.

    Parameters
    ----------
    value : Any
        Payload value, possibly nested in dicts, lists and tuples.

    Returns
    -------
    Any
        The converted value.
    """
    if isinstance(value, np.ndarray):
        return torch.from_numpy(np.ascontiguousarray(value).copy())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {str(key): to_storable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_storable(item) for item in value]
    return value


def model_envelope(model: QualityModel) -> dict[str, Any]:
    """
    Build the envelope written to a model file.

    Parameters
    ----------
    model : QualityModel
        The model.

    Returns
    -------
    dict[str, Any]
        Format version, learner tag, hyperparameters, normalizer bounds, feature config, seed, time and payload.
    """
    return {
        "format_version": model.format_version,
        "algo": model.algo,
        "hyperparameters": to_storable(model.spec.to_dict()),
        "normalizer": model.normalizer.to_line(),
        "feature_config": model.feature_config.to_line(),
        "train_seed": int(model.train_seed),
        "train_time_seconds": float(model.train_time_seconds),
        "payload": to_storable(model.payload),
    }


def save_quality_model(model: QualityModel, path: str | Path) -> None:
    """
    Save a model as a ``torch.save`` archive.

    Parameters
    ----------
    model : QualityModel
        The model to save.
    path : str | Path
        Target file, parent directories are created.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        torch.save(model_envelope(model), path)
    except OSError as e:
        nrvqa_logger.error(f"Could not write model file {path}: {e}")
        raise IoError(f"Could not write model file {path}.") from e
    nrvqa_logger.info(f"Saved {model.algo} model to {path}.")
