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

from nrvqa.data.dataset import CSV_COLUMNS, Dataset, Sample, load_csv, save_csv
from nrvqa.data.grid import GRID_MTU, LOSS_GRID, build_from_clips, build_grid, write_grid_clips
from nrvqa.data.splits import SplitKind, SplitPlan, split_kfold, split_leave_class_out, subsample_fraction

__all__ = [
    "CSV_COLUMNS",
    "GRID_MTU",
    "LOSS_GRID",
    "Dataset",
    "Sample",
    "SplitKind",
    "SplitPlan",
    "build_from_clips",
    "build_grid",
    "load_csv",
    "save_csv",
    "split_kfold",
    "split_leave_class_out",
    "subsample_fraction",
    "write_grid_clips",
]
