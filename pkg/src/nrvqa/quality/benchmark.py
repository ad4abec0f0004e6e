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

from nrvqa.errors import AlignmentError
from nrvqa.logging.logger import nrvqa_logger
from nrvqa.quality.registry import OracleRegistry
from nrvqa.video.frame_io import VideoClip

DEFAULT_ORACLE = "ssim"


def benchmark_index(ref: VideoClip, dist: VideoClip, oracle: str = DEFAULT_ORACLE) -> float:
    """
    Ground-truth quality of a distorted clip.

    Parameters
    ----------
    ref : VideoClip
        The pristine reference.
    dist : VideoClip
        The distorted clip, same geometry and frame count.
    oracle : str
        Name of the registered oracle.

    Returns
    -------
    float
        Quality index in [0, 1], 1 for a perfect copy.
    """
    if ref.frame_count != dist.frame_count:
        nrvqa_logger.error(f"Cannot align {dist.frame_count} distorted frames with {ref.frame_count} reference frames.")
        raise AlignmentError()
    q = OracleRegistry.get_oracle(oracle).compute(ref, dist)
    return min(max(q, 0.0), 1.0)
