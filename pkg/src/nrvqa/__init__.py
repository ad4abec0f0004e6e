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

# isort: skip_file
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.engine.quality_model import QualityModel
from nrvqa.train import train
from nrvqa.algorithms import NRVQA_ALGORITHMS
from importlib_metadata import version

__version__ = version(__name__)

__all__ = ["LearnerSpec", "QualityModel", "train", "NRVQA_ALGORITHMS", "__version__"]
