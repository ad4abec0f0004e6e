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

import math
from dataclasses import dataclass

import numpy as np
from ConfigSpace import UniformFloatHyperparameter, UniformIntegerHyperparameter
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import minimize
from scipy.spatial.distance import cdist

from nrvqa.algorithms.blackbox import BlackBoxLearner
from nrvqa.algorithms.learner_base import Payload
from nrvqa.config.learner_space import Boolean
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.errors import TrainingError
from nrvqa.logging.logger import nrvqa_logger

INITIAL_JITTER = 1e-8
MAX_JITTER = 1e-2
# multi-starts as (length-scale, signal share, noise share) of the target variance
MULTI_STARTS = ((0.5, 1.0, 0.01), (1.0, 1.0, 0.1), (0.2, 1.0, 0.001))
LOG_BOUNDS = {
    "length_scale": (math.log(1e-3), math.log(1e3)),
    "signal_variance": (math.log(1e-8), math.log(1e3)),
    "noise_variance": (math.log(1e-10), math.log(1.0)),
}


class FactorizationError(Exception):
    """Raised when a covariance matrix stays indefinite after the largest jitter."""


@dataclass(frozen=True)
class GpFit:
    """
    A factorized Gaussian process posterior.

    Parameters
    ----------
    length_scale : float
        Kernel length-scale.
    signal_variance : float
        Kernel amplitude.
    noise_variance : float
        Observation noise.
    jitter : float
        Diagonal jitter that made the factorization succeed.
    mean : float
        Generalized least-squares estimate of the constant mean.
    alpha : np.ndarray
        Weights of the training kernel columns in the posterior mean.
    log_marginal_likelihood : float
        Log marginal likelihood at these hyperparameters.
    """

    length_scale: float
    signal_variance: float
    noise_variance: float
    jitter: float
    mean: float
    alpha: np.ndarray
    log_marginal_likelihood: float


def squared_exponential(
    a: np.ndarray, b: np.ndarray, length_scale: float, signal_variance: float
) -> np.ndarray:
    """
    Squared-exponential covariance between two sets of points.

    Parameters
    ----------
    a : np.ndarray
        Points, shape (n, d).
    b : np.ndarray
        Points, shape (m, d).
    length_scale : float
        Isotropic length-scale.
    signal_variance : float
        Covariance at zero distance.

    Returns
    -------
    np.ndarray
        Covariance matrix, shape (n, m).
    """
    return signal_variance * np.exp(-0.5 * cdist(a, b, "sqeuclidean") / (length_scale * length_scale))


def _factorize(covariance: np.ndarray) -> tuple[tuple[np.ndarray, bool], float]:
    jitter = 0.0
    while True:
        try:
            factor = cho_factor(covariance + jitter * np.eye(covariance.shape[0]), lower=True, check_finite=True)
            return factor, jitter
        except (np.linalg.LinAlgError, ValueError):
            jitter = INITIAL_JITTER if jitter == 0.0 else jitter * 10.0
            if jitter > MAX_JITTER * (1.0 + 1e-9):
                raise FactorizationError() from None


def gp_fit(
    X: np.ndarray, y: np.ndarray, length_scale: float, signal_variance: float, noise_variance: float  # noqa: N803
) -> GpFit:
    """
    Condition a constant-mean Gaussian process on training data.

    Parameters
    ----------
    X : np.ndarray
        Training inputs.
    y : np.ndarray
        Training targets.
    length_scale : float
        Kernel length-scale.
    signal_variance : float
        Kernel amplitude.
    noise_variance : float
        Observation noise.

    Returns
    -------
    GpFit
        The posterior and its log marginal likelihood.
    """
    n = X.shape[0]
    covariance = squared_exponential(X, X, length_scale, signal_variance) + noise_variance * np.eye(n)
    factor, jitter = _factorize(covariance)
    ones = np.ones(n)
    inv_ones = cho_solve(factor, ones)
    mean = float(inv_ones @ y / (inv_ones @ ones))
    alpha = cho_solve(factor, y - mean)
    log_det = 2.0 * np.log(np.diag(factor[0])).sum()
    lml = -0.5 * float((y - mean) @ alpha) - 0.5 * log_det - 0.5 * n * math.log(2.0 * math.pi)
    return GpFit(length_scale, signal_variance, noise_variance, jitter, mean, alpha, lml)


class GaussianProcessLearner(BlackBoxLearner):
    """
    Exact Gaussian-process regression with a constant mean and a squared-exponential kernel.

    Length-scale, signal variance and (optionally) noise variance maximize the log marginal likelihood, searched
    by Nelder-Mead in log space from fixed multi-starts with seeded initial simplices.
    """

    algorithm_name = "GPR"
    references = {"Book": "https://gaussianprocess.org/gpml/chapters/RW2.pdf"}

    def get_hyperparameters(self) -> list:
        """
        Configure all learner-specific hyperparameters with ConfigSpace.

        Returns
        -------
        list
            The hyperparameters.
        """
        return [
            Boolean("optimize_noise", default=True, meta=dict(desc="Whether the noise variance is fitted.")),
            UniformFloatHyperparameter(
                "noise_variance",
                lower=1e-10,
                upper=1.0,
                log=True,
                default_value=1e-4,
                meta=dict(desc="Noise variance, the fixed value when not fitted."),
            ),
            UniformIntegerHyperparameter(
                "max_iterations",
                lower=10,
                upper=10000,
                default_value=400,
                meta=dict(desc="Nelder-Mead iterations per multi-start."),
            ),
        ]

    def _fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int) -> Payload:  # noqa: N803
        rng = np.random.default_rng(seed)
        optimize_noise = spec["optimize_noise"]
        fixed_noise = spec["noise_variance"]
        names = ["length_scale", "signal_variance"] + (["noise_variance"] if optimize_noise else [])
        bounds = [LOG_BOUNDS[name] for name in names]
        target_variance = max(float(y.var()), 1e-6)

        def unpack(theta: np.ndarray) -> tuple[float, float, float]:
            values = {name: float(value) for name, value in zip(names, np.exp(theta))}
            return values["length_scale"], values["signal_variance"], values.get("noise_variance", fixed_noise)

        def negative_lml(theta: np.ndarray) -> float:
            try:
                return -gp_fit(X, y, *unpack(theta)).log_marginal_likelihood
            except FactorizationError:
                return math.inf

        best_theta, best_value = None, math.inf
        start_values = []
        for length_scale, signal_share, noise_share in MULTI_STARTS:
            start = [math.log(length_scale), math.log(signal_share * target_variance)]
            if optimize_noise:
                start.append(math.log(noise_share * target_variance))
            x0 = np.clip(start, [b[0] for b in bounds], [b[1] for b in bounds])
            start_value = negative_lml(x0)
            start_values.append(-start_value)
            simplex = np.vstack([x0, x0 + np.diag(rng.uniform(0.5, 1.0, size=x0.size))])
            result = minimize(
                negative_lml,
                x0,
                method="Nelder-Mead",
                bounds=bounds,
                options=dict(initial_simplex=simplex, maxiter=spec["max_iterations"], xatol=1e-6, fatol=1e-9),
            )
            for theta, value in ((x0, start_value), (result.x, float(result.fun))):
                if value < best_value:
                    best_theta, best_value = np.asarray(theta, dtype=np.float64), value

        if best_theta is None:
            nrvqa_logger.error("Every GPR multi-start produced an indefinite covariance.")
            raise TrainingError(f"GPR: covariance stays indefinite with jitter up to {MAX_JITTER}.")
        try:
            fit = gp_fit(X, y, *unpack(best_theta))
        except FactorizationError as e:
            raise TrainingError(f"GPR: covariance stays indefinite with jitter up to {MAX_JITTER}.") from e
        nrvqa_logger.debug(
            f"GPR length-scale {fit.length_scale:.4g}, signal variance {fit.signal_variance:.4g}, "
            f"noise variance {fit.noise_variance:.4g}, log marginal likelihood {fit.log_marginal_likelihood:.4f}"
        )
        return {
            "X_train": X.copy(),
            "alpha": fit.alpha,
            "mean": fit.mean,
            "length_scale": fit.length_scale,
            "signal_variance": fit.signal_variance,
            "noise_variance": fit.noise_variance,
            "jitter": fit.jitter,
            "log_marginal_likelihood": fit.log_marginal_likelihood,
            "start_log_marginal_likelihoods": np.array(start_values, dtype=np.float64),
        }

    def _predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        cross = squared_exponential(X, payload["X_train"], payload["length_scale"], payload["signal_variance"])
        return payload["mean"] + cross @ payload["alpha"]
