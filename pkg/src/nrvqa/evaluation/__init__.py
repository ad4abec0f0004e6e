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

from nrvqa.evaluation.correlation import pearson, try_pearson
from nrvqa.evaluation.report import REPORT_COLUMNS, EvaluationReport, SummaryRow, UnitResult
from nrvqa.evaluation.experiments import (
    run_blind_eval,
    run_feature_baseline,
    run_random_cv,
    run_size_sweep,
    time_training,
)
from nrvqa.evaluation.render import ReportFormat, render_report

__all__ = [
    "REPORT_COLUMNS",
    "EvaluationReport",
    "ReportFormat",
    "SummaryRow",
    "UnitResult",
    "pearson",
    "render_report",
    "run_blind_eval",
    "run_feature_baseline",
    "run_random_cv",
    "run_size_sweep",
    "time_training",
    "try_pearson",
]
