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

import time

from nrvqa.algorithms import get_learner
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.data.dataset import Dataset
from nrvqa.engine.quality_model import QualityModel
from nrvqa.logging.logger import NrvqaLoggerContext, nrvqa_logger


def train(spec: LearnerSpec, dataset: Dataset, seed: int = 0, verbose: bool = False) -> QualityModel:
    """
    Train a quality model on a dataset.

    Parameters
    ----------
    spec : LearnerSpec
        Learner and hyperparameters.
    dataset : Dataset
        Training samples; their normalizer and feature configuration travel with the model.
    seed : int
        Seed of every random choice made during training.
    verbose : bool
        Whether to print the progress of training.

    Returns
    -------
    QualityModel
        The trained model.
    """
    with NrvqaLoggerContext(verbose=verbose):
        learner = get_learner(spec.algo)
        nrvqa_logger.info(f"Training {spec.algo} on {len(dataset)} samples with seed {seed}...")
        start = time.perf_counter()
        payload = learner.fit(dataset.X, dataset.y, spec, seed=seed)
        elapsed = time.perf_counter() - start
        nrvqa_logger.info(f"{spec.algo} was trained in {elapsed:.3f} s.")

    return QualityModel(
        spec=spec,
        payload=payload,
        normalizer=dataset.normalizer,
        feature_config=dataset.feature_config,
        train_seed=seed,
        train_time_seconds=elapsed,
    )
