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

from nrvqa.config.feature_config import DEFAULT_FEATURE_CONFIG, FeatureConfig
from nrvqa.features.content import RawFeatures, raw_features
from nrvqa.features.normalizer import Normalizer, raw_inputs
from nrvqa.impairment.channel import ChannelStats
from nrvqa.video.frame_io import VideoClip


def feature_vector(raw: RawFeatures, stats: ChannelStats, norm: Normalizer) -> np.ndarray:
    """
    Normalize already computed content features together with the network features.

    Parameters
    ----------
    raw : RawFeatures
        Content features.
    stats : ChannelStats
        Channel statistics.
    norm : Normalizer
        Fitted normalizer.

    Returns
    -------
    np.ndarray
        The ten normalized inputs ``[cx, mo, bm, br, nm, nr, bl, je, bitrate, loss]``.
    """
    return norm.apply(raw_inputs(raw, stats))


def extract_features(
    clip: VideoClip, stats: ChannelStats, norm: Normalizer, config: FeatureConfig = DEFAULT_FEATURE_CONFIG
) -> np.ndarray:
    """
    Client-side feature extraction of an impaired clip.

    Parameters
    ----------
    clip : VideoClip
        The received clip.
    stats : ChannelStats
        Network statistics reported for the transmission.
    norm : Normalizer
        Normalizer of the model the vector is meant for.
    config : FeatureConfig
        Feature constants, the ones the model was trained with.

    Returns
    -------
    np.ndarray
        The ten normalized inputs.
    """
    return feature_vector(raw_features(clip, config), stats, norm)
