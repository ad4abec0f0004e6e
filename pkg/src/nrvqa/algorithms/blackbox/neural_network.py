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

import numpy as np
import torch
from ConfigSpace import UniformFloatHyperparameter, UniformIntegerHyperparameter

from nrvqa.algorithms.blackbox import BlackBoxLearner
from nrvqa.algorithms.learner_base import Payload
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.errors import TrainingError
from nrvqa.logging.logger import nrvqa_logger

MAX_DAMPING = 1e10
MIN_DAMPING = 1e-20


def parameter_count(n_inputs: int, hidden: int, cascade: bool) -> int:
    """
    Number of weights of a one-hidden-layer network.

    Parameters
    ----------
    n_inputs : int
        Input dimension.
    hidden : int
        Hidden units.
    cascade : bool
        Whether the inputs also connect directly to the output.

    Returns
    -------
    int
        Length of the flat weight vector.
    """
    return hidden * n_inputs + 2 * hidden + 1 + (n_inputs if cascade else 0)


def _split(weights: torch.Tensor | np.ndarray, n_inputs: int, hidden: int) -> tuple:
    # flat layout: input weights, hidden biases, output weights, output bias, then direct weights
    end_w1 = hidden * n_inputs
    end_b1 = end_w1 + hidden
    end_w2 = end_b1 + hidden
    return (
        weights[:end_w1].reshape(hidden, n_inputs),
        weights[end_w1:end_b1],
        weights[end_b1:end_w2],
        weights[end_w2],
        weights[end_w2 + 1 :],
    )


def network_forward(weights: torch.Tensor, X: torch.Tensor, hidden: int, cascade: bool) -> torch.Tensor:  # noqa: N803
    """
    Output of a tanh hidden layer with a linear output unit.

    Parameters
    ----------
    weights : torch.Tensor
        Flat weight vector.
    X : torch.Tensor
        Inputs, shape (n, d).
    hidden : int
        Hidden units.
    cascade : bool
        Whether the inputs also connect directly to the output.

    Returns
    -------
    torch.Tensor
        Outputs, shape (n,).
    """
    w1, b1, w2, b2, direct = _split(weights, X.shape[1], hidden)
    out = torch.tanh(X @ w1.T + b1) @ w2 + b2
    if cascade:
        out = out + X @ direct
    return out


def _residuals_and_jacobian(
    weights: torch.Tensor, X: torch.Tensor, y: torch.Tensor, hidden: int, cascade: bool  # noqa: N803
) -> tuple[torch.Tensor, torch.Tensor]:
    residuals = network_forward(weights, X, hidden, cascade) - y
    jacobian = torch.func.jacrev(lambda w: network_forward(w, X, hidden, cascade))(weights)
    return residuals, jacobian


def batch_loss(weights: np.ndarray, X: np.ndarray, y: np.ndarray, hidden: int, cascade: bool) -> float:  # noqa: N803
    """
    Half the sum of squared residuals over a batch.

    Parameters
    ----------
    weights : np.ndarray
        Flat weight vector.
    X : np.ndarray
        Inputs.
    y : np.ndarray
        Targets.
    hidden : int
        Hidden units.
    cascade : bool
        Whether the inputs also connect directly to the output.

    Returns
    -------
    float
        The loss.
    """
    residuals = network_forward(torch.as_tensor(weights), torch.as_tensor(X), hidden, cascade) - torch.as_tensor(y)
    return 0.5 * float(residuals @ residuals)


def loss_gradient(
    weights: np.ndarray, X: np.ndarray, y: np.ndarray, hidden: int, cascade: bool  # noqa: N803
) -> np.ndarray:
    """
    Gradient of ``batch_loss``, the residual Jacobian transposed times the residuals.

    Parameters
    ----------
    weights : np.ndarray
        Flat weight vector.
    X : np.ndarray
        Inputs.
    y : np.ndarray
        Targets.
    hidden : int
        Hidden units.
    cascade : bool
        Whether the inputs also connect directly to the output.

    Returns
    -------
    np.ndarray
        The gradient.
    """
    residuals, jacobian = _residuals_and_jacobian(
        torch.as_tensor(weights), torch.as_tensor(X), torch.as_tensor(y), hidden, cascade
    )
    return (jacobian.T @ residuals).numpy()


def initial_weights(n_inputs: int, hidden: int, cascade: bool, generator: torch.Generator) -> torch.Tensor:
    """
    Uniform initialization in plus or minus one over the square root of each unit's fan-in.

    Parameters
    ----------
    n_inputs : int
        Input dimension.
    hidden : int
        Hidden units.
    cascade : bool
        Whether the inputs also connect directly to the output.
    generator : torch.Generator
        Seeded generator.

    Returns
    -------
    torch.Tensor
        Flat float64 weight vector.
    """
    hidden_bound = 1.0 / math.sqrt(n_inputs)
    output_bound = 1.0 / math.sqrt(hidden + (n_inputs if cascade else 0))
    bounds = torch.cat(
        [
            torch.full((hidden * n_inputs + hidden,), hidden_bound, dtype=torch.float64),
            torch.full((hidden + 1 + (n_inputs if cascade else 0),), output_bound, dtype=torch.float64),
        ]
    )
    uniform = torch.rand(bounds.shape[0], generator=generator, dtype=torch.float64)
    return (2.0 * uniform - 1.0) * bounds


def levenberg_marquardt(
    X: np.ndarray,  # noqa: N803
    y: np.ndarray,
    hidden: int,
    cascade: bool,
    seed: int,
    max_epochs: int = 200,
    mu_init: float = 1e-3,
    validation_fraction: float = 0.15,
    patience: int = 10,
) -> tuple[np.ndarray, int]:
    """
    Full-batch Levenberg-Marquardt training with early stopping on a seeded validation split.

    Parameters
    ----------
    X : np.ndarray
        Inputs.
    y : np.ndarray
        Targets.
    hidden : int
        Hidden units.
    cascade : bool
        Whether the inputs also connect directly to the output.
    seed : int
        Seed of the initialization and the validation split.
    max_epochs : int
        Maximum number of accepted steps.
    mu_init : float
        Initial damping, multiplied by 10 on a rejected step and divided by 10 on an accepted one.
    validation_fraction : float
        Share of samples held out for early stopping.
    patience : int
        Epochs without validation improvement before stopping.

    Returns
    -------
    tuple[np.ndarray, int]
        The weights with the best validation loss, and the number of epochs run.
    """
    rng = np.random.default_rng(seed)
    generator = torch.Generator().manual_seed(seed)
    n = X.shape[0]
    n_validation = min(max(1, round(validation_fraction * n)), n - 1)
    order = rng.permutation(n)
    X_val, y_val = torch.as_tensor(X[order[:n_validation]]), torch.as_tensor(y[order[:n_validation]])
    X_fit, y_fit = torch.as_tensor(X[order[n_validation:]]), torch.as_tensor(y[order[n_validation:]])

    def validation_loss(w: torch.Tensor) -> float:
        residuals = network_forward(w, X_val, hidden, cascade) - y_val
        return float(residuals @ residuals)

    weights = initial_weights(X.shape[1], hidden, cascade, generator)
    identity = torch.eye(weights.shape[0], dtype=torch.float64)
    best_weights, best_validation, stale = weights.clone(), validation_loss(weights), 0
    residuals, jacobian = _residuals_and_jacobian(weights, X_fit, y_fit, hidden, cascade)
    loss = float(residuals @ residuals)
    mu = mu_init

    epoch = 0
    for epoch in range(1, max_epochs + 1):
        gradient = jacobian.T @ residuals
        curvature = jacobian.T @ jacobian
        accepted = False
        while mu <= MAX_DAMPING:
            candidate = weights + torch.linalg.solve(curvature + mu * identity, -gradient)
            candidate_residuals = network_forward(candidate, X_fit, hidden, cascade) - y_fit
            candidate_loss = float(candidate_residuals @ candidate_residuals)
            if math.isfinite(candidate_loss) and candidate_loss < loss:
                weights, accepted = candidate, True
                mu = max(mu / 10.0, MIN_DAMPING)
                break
            mu *= 10.0
        if not accepted:
            nrvqa_logger.debug(f"Levenberg-Marquardt found no descent step after {epoch - 1} epochs.")
            break

        residuals, jacobian = _residuals_and_jacobian(weights, X_fit, y_fit, hidden, cascade)
        loss = float(residuals @ residuals)
        current = validation_loss(weights)
        if current < best_validation:
            best_weights, best_validation, stale = weights.clone(), current, 0
        else:
            stale += 1
            if stale >= patience:
                break

    if not torch.all(torch.isfinite(best_weights)):
        raise TrainingError("Levenberg-Marquardt produced non-finite weights.")
    return best_weights.numpy().copy(), epoch


class NeuralNetworkLearner(BlackBoxLearner):
    """Feed-forward network with one tanh hidden layer and a linear output, trained by Levenberg-Marquardt."""

    algorithm_name = "FNN"
    references = {"Paper": "https://doi.org/10.1109/72.329697"}
    cascade = False

    def get_hyperparameters(self) -> list:
        """
        Configure all learner-specific hyperparameters with ConfigSpace.

        Returns
        -------
        list
            The hyperparameters.
        """
        return [
            UniformIntegerHyperparameter(
                "hidden_units", lower=1, upper=200, default_value=20, meta=dict(desc="Number of hidden neurons.")
            ),
            UniformIntegerHyperparameter(
                "max_epochs", lower=1, upper=10000, default_value=200, meta=dict(desc="Maximum training epochs.")
            ),
            UniformFloatHyperparameter(
                "mu_init",
                lower=1e-8,
                upper=1e3,
                log=True,
                default_value=1e-3,
                meta=dict(desc="Initial Levenberg-Marquardt damping."),
            ),
            UniformFloatHyperparameter(
                "validation_fraction",
                lower=0.05,
                upper=0.5,
                default_value=0.15,
                meta=dict(desc="Share of samples held out for early stopping."),
            ),
            UniformIntegerHyperparameter(
                "patience",
                lower=1,
                upper=1000,
                default_value=10,
                meta=dict(desc="Non-improving validation epochs before stopping."),
            ),
        ]

    def _fit(self, X: np.ndarray, y: np.ndarray, spec: LearnerSpec, seed: int) -> Payload:  # noqa: N803
        weights, epochs = levenberg_marquardt(
            X,
            y,
            hidden=spec["hidden_units"],
            cascade=self.cascade,
            seed=seed,
            max_epochs=spec["max_epochs"],
            mu_init=spec["mu_init"],
            validation_fraction=spec["validation_fraction"],
            patience=spec["patience"],
        )
        nrvqa_logger.debug(f"{self.algorithm_name} trained for {epochs} epochs.")
        return {"weights": weights, "hidden_units": spec["hidden_units"], "cascade": self.cascade, "epochs": epochs}

    def _predict(self, payload: Payload, X: np.ndarray) -> np.ndarray:  # noqa: N803
        w1, b1, w2, b2, direct = _split(payload["weights"], X.shape[1], payload["hidden_units"])
        out = np.tanh(X @ w1.T + b1) @ w2 + b2
        if payload["cascade"]:
            out = out + X @ direct
        return out


class CascadeNetworkLearner(NeuralNetworkLearner):
    """Cascade-forward network: the feed-forward network plus direct input-to-output weights."""

    algorithm_name = "CNN"
    references = {"Docs": "https://www.mathworks.com/help/deeplearning/ref/cascadeforwardnet.html"}
    cascade = True
