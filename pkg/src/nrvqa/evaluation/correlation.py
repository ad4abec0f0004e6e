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

from typing import Sequence

import numpy as np

from nrvqa.errors import DataError, UndefinedCorrelation
from nrvqa.logging.logger import nrvqa_logger


def pearson(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """
    Sample Pearson correlation, computed in two passes.

    Parameters
    ----------
    x : Sequence[float] | np.ndarray
        First sequence.
    y : Sequence[float] | np.ndarray
        Second sequence, same length as ``x``.

    Returns
    -------
    float
        The coefficient in [-1, 1].
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        nrvqa_logger.error(f"Cannot correlate sequences of lengths {x.size} and {y.size}.")
        raise DataError(f"Sequences have different lengths {x.size} and {y.size}.")
    if x.size < 2:
        raise DataError("Correlation needs at least two values.")

    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelation()
    r = float(dx @ dy) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


def try_pearson(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float | None:
    """``pearson``, or ``None`` when a sequence is constant."""
    try:
        return pearson(x, y)
    except UndefinedCorrelation:
        return None
