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

import warnings


def apply_warning_filter() -> None:
    """Silence library warnings (numerical or deprecation) while a quiet context is active."""
    warnings.filterwarnings("ignore")


def remove_warning_filter() -> None:
    """Restore the default warning behavior."""
    warnings.filterwarnings("default")
