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

from abc import ABC, abstractmethod

from nrvqa.video.frame_io import VideoClip


class BaseOracle(ABC):
    """The base class for full-reference quality oracles providing the ground-truth index."""

    def __init__(self) -> None:
        """Initialize the BaseOracle class."""
        pass

    @abstractmethod
    def compute(self, ref: VideoClip, dist: VideoClip) -> float:
        """
        Compute the quality of a distorted clip against its reference.

        Parameters
        ----------
        ref : VideoClip
            The pristine reference.
        dist : VideoClip
            The distorted clip, aligned frame by frame with ``ref``.

        Returns
        -------
        float
            Quality index in [0, 1], higher is better.
        """
        pass
