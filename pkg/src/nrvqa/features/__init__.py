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

from nrvqa.features.content import (
    FEATURE_NAMES,
    ClipStatistics,
    RawFeatures,
    blockiness,
    blur,
    clip_statistics,
    jerkiness,
    motion,
    noise,
    pool_features,
    raw_features,
    spatial_complexity,
    update_statistics,
)
from nrvqa.features.extract import extract_features, feature_vector
from nrvqa.features.normalizer import FEATURE_COUNT, INPUT_NAMES, Normalizer, fit_normalizer, raw_inputs

__all__ = [
    "FEATURE_COUNT",
    "FEATURE_NAMES",
    "INPUT_NAMES",
    "ClipStatistics",
    "Normalizer",
    "RawFeatures",
    "blockiness",
    "blur",
    "clip_statistics",
    "extract_features",
    "feature_vector",
    "fit_normalizer",
    "jerkiness",
    "motion",
    "noise",
    "pool_features",
    "raw_features",
    "raw_inputs",
    "spatial_complexity",
    "update_statistics",
]
