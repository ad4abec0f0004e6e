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

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

REPORT_COLUMNS = ("experiment", "algo", "group", "pcc", "n", "train_time_s", "seed")
OVERALL_BLOCK = "overall"
STD_KIND = "population"


@dataclass(frozen=True, eq=False)
class UnitResult:
    """
    Outcome of one train/test evaluation of one learner.

    Parameters
    ----------
    algo : str
        Learner tag, or feature name for the single-feature baseline.
    group : str
        Label of the evaluation unit, e.g. the held-out class or the fold.
    block : str | None
        Summary the unit contributes to, ``None`` for a standalone row.
    pcc : float | None
        Correlation of predictions against the oracle, ``None`` when undefined.
    n : int
        Number of test samples.
    seed : int
        Seed of the split and training.
    train_time_s : float | None
        Wall-clock training time, only recorded by the timing experiment.
    train_indices : np.ndarray
        Dataset positions used for training.
    test_indices : np.ndarray
        Dataset positions used for testing.
    q : np.ndarray
        Oracle quality of the test samples.
    q_hat : np.ndarray
        Predicted quality of the test samples.
    """

    algo: str
    group: str
    block: str | None
    pcc: float | None
    n: int
    seed: int
    train_time_s: float | None = None
    train_indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64), repr=False)
    test_indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64), repr=False)
    q: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)
    q_hat: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)

    @property
    def undefined(self) -> bool:
        """Whether the correlation of this unit was undefined."""
        return self.pcc is None


@dataclass(frozen=True)
class SummaryRow:
    """Mean and population standard deviation over the units of one block."""

    algo: str
    block: str
    mean_pcc: float | None
    std_pcc: float | None
    n: int
    units: int
    undefined: int
    mean_time: float | None = None
    std_time: float | None = None


def _mean_std(values: list[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    array = np.asarray(values, dtype=np.float64)
    return float(array.mean()), float(array.std())


def format_value(value: float | None) -> str:
    """Shortest exact text of a float, empty for a missing value."""
    return "" if value is None else repr(float(value))


@dataclass
class EvaluationReport:
    """
    Results of one experiment across learners.

    Parameters
    ----------
    experiment : str
        Experiment name, one of "blind", "cv", "sweep", "time" and "baseline".
    algos : list[str]
        Learners in reporting order.
    units : list[UnitResult]
        Every train/test evaluation.
    seed : int
        Experiment seed.
    metadata : dict[str, Any]
        Dataset fingerprint, split plan and the kind of standard deviation.
    """

    experiment: str
    algos: list[str]
    units: list[UnitResult]
    seed: int
    metadata: dict[str, Any] = field(default_factory=dict)

    def units_of(self, algo: str) -> list[UnitResult]:
        """Units of one learner, in evaluation order."""
        return [unit for unit in self.units if unit.algo == algo]

    @property
    def groups(self) -> list[str]:
        """Distinct unit labels in order of appearance."""
        return list(dict.fromkeys(unit.group for unit in self.units))

    @property
    def blocks(self) -> list[str]:
        """Distinct summary blocks in order of appearance."""
        return list(dict.fromkeys(unit.block for unit in self.units if unit.block is not None))

    @property
    def timed(self) -> bool:
        """Whether the report carries training times."""
        return any(unit.train_time_s is not None for unit in self.units)

    def summary(self, algo: str, block: str) -> SummaryRow:
        """
        Summarize the units of one learner in one block.

        Parameters
        ----------
        algo : str
            Learner tag.
        block : str
            Block label.

        Returns
        -------
        SummaryRow
            Mean and population standard deviation, undefined units excluded.
        """
        members = [unit for unit in self.units_of(algo) if unit.block == block]
        defined = [unit for unit in members if unit.pcc is not None]
        mean_pcc, std_pcc = _mean_std([unit.pcc for unit in defined])  # type: ignore[misc]
        times = [unit.train_time_s for unit in members if unit.train_time_s is not None]
        mean_time, std_time = _mean_std(times)
        return SummaryRow(
            algo=algo,
            block=block,
            mean_pcc=mean_pcc,
            std_pcc=std_pcc,
            n=sum(unit.n for unit in defined),
            units=len(members),
            undefined=len(members) - len(defined),
            mean_time=mean_time,
            std_time=std_time,
        )

    def summaries(self) -> list[SummaryRow]:
        """Summary rows of every learner and block."""
        return [self.summary(algo, block) for algo in self.algos for block in self.blocks]

    def flagged(self) -> list[UnitResult]:
        """Units whose correlation was undefined."""
        return [unit for unit in self.units if unit.undefined]

    def rows(self) -> list[dict[str, str]]:
        """
        CSV rows: every unit of a learner followed by its block summaries.

        Returns
        -------
        list[dict[str, str]]
            Rows keyed by the report columns, values as text.
        """
        rows = []
        for algo in self.algos:
            for unit in self.units_of(algo):
                rows.append(
                    {
                        "experiment": self.experiment,
                        "algo": algo,
                        "group": unit.group,
                        "pcc": format_value(unit.pcc),
                        "n": str(unit.n),
                        "train_time_s": format_value(unit.train_time_s),
                        "seed": str(unit.seed),
                    }
                )
            for block in self.blocks:
                row = self.summary(algo, block)
                rows.append(
                    {
                        "experiment": self.experiment,
                        "algo": algo,
                        "group": block,
                        "pcc": format_value(row.mean_pcc),
                        "n": str(row.n),
                        "train_time_s": format_value(row.mean_time),
                        "seed": str(self.seed),
                    }
                )
        return rows

    def metadata_json(self) -> str:
        """Report metadata as deterministic JSON text."""
        content = {
            "experiment": self.experiment,
            "seed": self.seed,
            "std": STD_KIND,
            "algos": self.algos,
            "flagged": [[unit.algo, unit.group] for unit in self.flagged()],
            **self.metadata,
        }
        return json.dumps(content, indent=2, sort_keys=True) + "\n"
