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

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Sequence

import numpy as np
from tqdm.auto import tqdm

from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.data.dataset import RAW_COLUMNS, Dataset
from nrvqa.data.splits import TRAIN_FRACTIONS, SplitKind, split_kfold, split_leave_class_out, subsample_fraction
from nrvqa.errors import BadSplit
from nrvqa.evaluation.correlation import try_pearson
from nrvqa.evaluation.report import OVERALL_BLOCK, EvaluationReport, UnitResult
from nrvqa.logging.logger import NrvqaLoggerContext, nrvqa_logger
from nrvqa.train import train

DEFAULT_FOLDS = 5
SWEEP_REPETITIONS = 5
POOLED_GROUP = "pooled"


@dataclass(frozen=True, eq=False)
class EvaluationJob:
    """One train/test evaluation, self-contained so it can run in a worker process."""

    algo: str
    hyperparameters: dict[str, Any]
    group: str
    block: str | None
    train_indices: np.ndarray
    test_indices: np.ndarray
    seed: int
    timed: bool = field(default=False)


def fraction_label(train_fraction: float) -> str:
    """Block label of a training fraction, e.g. "0.8"."""
    return f"{train_fraction:g}"


def run_job(ds: Dataset, job: EvaluationJob) -> UnitResult:
    """
    Train on the job's training positions and correlate predictions on its test positions.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    job : EvaluationJob
        What to train and where to test.

    Returns
    -------
    UnitResult
        The unit outcome; the training time is kept only for timed jobs.
    """
    spec = LearnerSpec(job.algo, job.hyperparameters)
    model = train(spec, ds.subset(job.train_indices), seed=job.seed)
    q = ds.y[job.test_indices]
    q_hat = model.predict_batch(ds.X[job.test_indices])
    pcc = try_pearson(q_hat, q)
    if pcc is None:
        nrvqa_logger.warning(f"Correlation of {job.algo} on {job.group} is undefined and excluded from the mean.")
    return UnitResult(
        algo=job.algo,
        group=job.group,
        block=job.block,
        pcc=pcc,
        n=int(job.test_indices.size),
        seed=job.seed,
        train_time_s=model.train_time_seconds if job.timed else None,
        train_indices=job.train_indices,
        test_indices=job.test_indices,
        q=q,
        q_hat=q_hat,
    )


def run_jobs(ds: Dataset, jobs: Sequence[EvaluationJob], n_jobs: int = 1, verbose: bool = False) -> list[UnitResult]:
    """
    Run evaluation jobs, in worker processes when ``n_jobs`` exceeds one.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    jobs : Sequence[EvaluationJob]
        The jobs.
    n_jobs : int
        Worker processes.
    verbose : bool
        Whether to show progress.

    Returns
    -------
    list[UnitResult]
        Results in job order.
    """
    worker = partial(run_job, ds)
    progress = tqdm(total=len(jobs), desc="evaluations", disable=not verbose)
    results = []
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            for result in pool.map(worker, jobs):
                results.append(result)
                progress.update()
    else:
        for job in jobs:
            results.append(worker(job))
            progress.update()
    progress.close()
    return results


def _ordered(specs: Sequence[LearnerSpec]) -> list[LearnerSpec]:
    algos = [spec.algo for spec in specs]
    if len(set(algos)) != len(algos):
        nrvqa_logger.error(f"Learners are listed more than once: {algos}")
        raise BadSplit("Each learner may be evaluated once per report.")
    return list(specs)


def _metadata(ds: Dataset, specs: Sequence[LearnerSpec], split: dict[str, Any]) -> dict[str, Any]:
    return {
        "dataset": ds.fingerprint(),
        "samples": len(ds),
        "split": split,
        "hyperparameters": {spec.algo: spec.to_dict() for spec in specs},
    }


def _report(
    experiment: str,
    ds: Dataset,
    specs: Sequence[LearnerSpec],
    jobs: list[EvaluationJob],
    seed: int,
    split: dict[str, Any],
    n_jobs: int,
    verbose: bool,
) -> EvaluationReport:
    with NrvqaLoggerContext(verbose):
        nrvqa_logger.info(f"Running the {experiment} experiment: {len(jobs)} trainings over {len(ds)} samples.")
        units = run_jobs(ds, jobs, n_jobs=n_jobs, verbose=verbose)
    report = EvaluationReport(
        experiment=experiment,
        algos=[spec.algo for spec in specs],
        units=units,
        seed=seed,
        metadata=_metadata(ds, specs, split),
    )
    for unit in report.flagged():
        nrvqa_logger.warning(f"Flagged {unit.algo} on {unit.group}: constant sequence.")
    return report


def run_blind_eval(
    ds: Dataset, specs: Sequence[LearnerSpec], seed: int = 0, n_jobs: int = 1, verbose: bool = False
) -> EvaluationReport:
    """
    Hold out every class in turn, train on the others and correlate on the held-out class.

    Parameters
    ----------
    ds : Dataset
        A dataset with at least two classes.
    specs : Sequence[LearnerSpec]
        Learners to evaluate.
    seed : int
        Training seed.
    n_jobs : int
        Worker processes.
    verbose : bool
        Whether to show progress.

    Returns
    -------
    EvaluationReport
        One unit per (learner, class) and one overall block.
    """
    specs = _ordered(specs)
    classes = ds.classes
    if len(classes) < 2:
        nrvqa_logger.error(f"Blind evaluation needs two classes, the dataset has {len(classes)}.")
        raise BadSplit("Blind evaluation needs at least two classes.")
    splits = [(class_id, split_leave_class_out(ds, class_id)) for class_id in classes]
    jobs = [
        EvaluationJob(spec.algo, spec.to_dict(), class_id, OVERALL_BLOCK, train_idx, test_idx, seed)
        for spec in specs
        for class_id, (train_idx, test_idx) in splits
    ]
    split = {"kind": SplitKind.LEAVE_CLASS_OUT.value, "classes": classes}
    return _report("blind", ds, specs, jobs, seed, split, n_jobs, verbose)


def run_random_cv(
    ds: Dataset,
    specs: Sequence[LearnerSpec],
    k: int = DEFAULT_FOLDS,
    seed: int = 0,
    n_jobs: int = 1,
    verbose: bool = False,
) -> EvaluationReport:
    """
    Seeded k-fold cross-validation.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    specs : Sequence[LearnerSpec]
        Learners to evaluate.
    k : int
        Number of folds.
    seed : int
        Seed of the fold assignment and training.
    n_jobs : int
        Worker processes.
    verbose : bool
        Whether to show progress.

    Returns
    -------
    EvaluationReport
        One unit per (learner, fold) and one overall block.
    """
    specs = _ordered(specs)
    folds = split_kfold(ds, k, seed)
    jobs = [
        EvaluationJob(spec.algo, spec.to_dict(), f"fold-{i + 1}", OVERALL_BLOCK, train_idx, test_idx, seed)
        for spec in specs
        for i, (train_idx, test_idx) in enumerate(folds)
    ]
    split = {"kind": SplitKind.KFOLD.value, "k": k}
    return _report("cv", ds, specs, jobs, seed, split, n_jobs, verbose)


def repetition_seed(seed: int, fraction_index: int, repetition: int) -> int:
    """Seed of one subsampling repetition."""
    return int(np.random.SeedSequence([seed, fraction_index, repetition]).generate_state(1)[0])


def _fraction_jobs(
    ds: Dataset, specs: Sequence[LearnerSpec], fractions: Sequence[float], seed: int, repetitions: int, timed: bool
) -> list[EvaluationJob]:
    jobs = []
    for spec in specs:
        for fi, train_fraction in enumerate(fractions):
            for rep in range(repetitions):
                rep_seed = repetition_seed(seed, fi, rep)
                train_idx, test_idx = subsample_fraction(ds, train_fraction, rep_seed)
                jobs.append(
                    EvaluationJob(
                        spec.algo,
                        spec.to_dict(),
                        f"{fraction_label(train_fraction)}/rep-{rep + 1}",
                        fraction_label(train_fraction),
                        train_idx,
                        test_idx,
                        rep_seed,
                        timed,
                    )
                )
    return jobs


def run_size_sweep(
    ds: Dataset,
    specs: Sequence[LearnerSpec],
    fractions: Sequence[float] = TRAIN_FRACTIONS,
    seed: int = 0,
    repetitions: int = SWEEP_REPETITIONS,
    n_jobs: int = 1,
    verbose: bool = False,
) -> EvaluationReport:
    """
    Train on shrinking random fractions of the dataset and test on the rest.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    specs : Sequence[LearnerSpec]
        Learners to evaluate.
    fractions : Sequence[float]
        Training fractions, reported in the given order.
    seed : int
        Experiment seed, repetition seeds derive from it.
    repetitions : int
        Seeded repetitions per fraction.
    n_jobs : int
        Worker processes.
    verbose : bool
        Whether to show progress.

    Returns
    -------
    EvaluationReport
        One unit per (learner, fraction, repetition) and one block per fraction.
    """
    specs = _ordered(specs)
    jobs = _fraction_jobs(ds, specs, fractions, seed, repetitions, timed=False)
    split = {"kind": SplitKind.FRACTION.value, "fractions": list(fractions), "repetitions": repetitions}
    return _report("sweep", ds, specs, jobs, seed, split, n_jobs, verbose)


def time_training(
    ds: Dataset,
    specs: Sequence[LearnerSpec],
    fractions: Sequence[float] = TRAIN_FRACTIONS,
    seed: int = 0,
    repetitions: int = SWEEP_REPETITIONS,
    n_jobs: int = 1,
    verbose: bool = False,
) -> EvaluationReport:
    """
    Measure wall-clock training time per learner and training fraction.

    Only the training call is timed; splitting and prediction are excluded.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    specs : Sequence[LearnerSpec]
        Learners to time.
    fractions : Sequence[float]
        Training fractions.
    seed : int
        Experiment seed.
    repetitions : int
        Timed repetitions per fraction.
    n_jobs : int
        Worker processes; values above one make the timings compete for cores.
    verbose : bool
        Whether to show progress.

    Returns
    -------
    EvaluationReport
        The sweep units with their training times.
    """
    if n_jobs > 1:
        nrvqa_logger.warning("Timing with several workers measures contended training times.")
    specs = _ordered(specs)
    jobs = _fraction_jobs(ds, specs, fractions, seed, repetitions, timed=True)
    split = {"kind": SplitKind.FRACTION.value, "fractions": list(fractions), "repetitions": repetitions}
    return _report("time", ds, specs, jobs, seed, split, n_jobs, verbose)


def run_feature_baseline(ds: Dataset, seed: int = 0) -> EvaluationReport:
    """
    Correlate every raw feature with the oracle, per class and pooled over the dataset.

    Parameters
    ----------
    ds : Dataset
        The dataset.
    seed : int
        Recorded in the report only.

    Returns
    -------
    EvaluationReport
        One unit per (feature, class) in the overall block and one standalone pooled unit per feature.
    """
    raw = ds.raw
    y = ds.y
    all_indices = np.arange(len(ds))
    units = []
    for j, name in enumerate(RAW_COLUMNS):
        for class_id in ds.classes:
            members = np.flatnonzero(ds.class_ids == class_id)
            units.append(
                UnitResult(
                    algo=name,
                    group=class_id,
                    block=OVERALL_BLOCK,
                    pcc=try_pearson(raw[members, j], y[members]),
                    n=int(members.size),
                    seed=seed,
                    test_indices=members,
                    q=y[members],
                    q_hat=raw[members, j],
                )
            )
        units.append(
            UnitResult(
                algo=name,
                group=POOLED_GROUP,
                block=None,
                pcc=try_pearson(raw[:, j], y),
                n=len(ds),
                seed=seed,
                test_indices=all_indices,
                q=y,
                q_hat=raw[:, j],
            )
        )
    return EvaluationReport(
        experiment="baseline",
        algos=list(RAW_COLUMNS),
        units=units,
        seed=seed,
        metadata={"dataset": ds.fingerprint(), "samples": len(ds), "split": {"kind": "per-class"}},
    )
