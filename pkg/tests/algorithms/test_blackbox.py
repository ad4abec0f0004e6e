import numpy as np
import pytest
import torch
from sklearn.svm import SVR

from nrvqa.algorithms import get_learner
from nrvqa.algorithms.blackbox.gaussian_process import FactorizationError, _factorize, gp_fit, squared_exponential
from nrvqa.algorithms.blackbox.neural_network import (
    batch_loss,
    initial_weights,
    levenberg_marquardt,
    loss_gradient,
    network_forward,
    parameter_count,
)
from nrvqa.algorithms.blackbox.support_vector import rbf_gamma
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.data.dataset import Dataset
from nrvqa.errors import TrainingError


@pytest.mark.cpu
def test_squared_exponential_diagonal() -> None:
    """Test that the kernel equals the signal variance at zero distance."""
    points = np.random.default_rng(0).random((5, 3))
    kernel = squared_exponential(points, points, 0.7, 2.5)
    np.testing.assert_allclose(np.diag(kernel), 2.5)
    np.testing.assert_allclose(kernel, kernel.T)


@pytest.mark.cpu
def test_jitter_escalation() -> None:
    """Test that a singular covariance gets the smallest jitter and an indefinite one fails."""
    _, jitter = _factorize(np.ones((2, 2)))
    assert jitter == 1e-8
    with pytest.raises(FactorizationError):
        _factorize(np.array([[1.0, 2.0], [2.0, 1.0]]))


@pytest.mark.cpu
def test_gp_interpolates_without_noise() -> None:
    """Test that a nearly noise-free process reproduces its training targets."""
    rng = np.random.default_rng(1)
    X = rng.random((12, 2))  # noqa: N806
    y = np.sin(3 * X[:, 0]) + X[:, 1]
    fit = gp_fit(X, y, length_scale=0.2, signal_variance=1.0, noise_variance=1e-10)
    predictions = fit.mean + squared_exponential(X, X, 0.2, 1.0) @ fit.alpha
    np.testing.assert_allclose(predictions, y, atol=1e-4)
    assert np.isfinite(fit.log_marginal_likelihood)


@pytest.mark.cpu
def test_gp_search_improves_on_starts(linear_dataset: Dataset) -> None:
    """Test that the fitted likelihood is at least as good as every multi-start."""
    payload = get_learner("GPR").fit(linear_dataset.X, linear_dataset.y, LearnerSpec("GPR", {"max_iterations": 60}))
    assert payload["log_marginal_likelihood"] >= payload["start_log_marginal_likelihoods"].max() - 1e-9


@pytest.mark.cpu
def test_gp_fixed_noise(linear_dataset: Dataset) -> None:
    """Test that a fixed noise variance is kept."""
    spec = LearnerSpec("GPR", {"optimize_noise": False, "noise_variance": 0.01, "max_iterations": 30})
    payload = get_learner("GPR").fit(linear_dataset.X, linear_dataset.y, spec)
    assert payload["noise_variance"] == 0.01


@pytest.mark.cpu
def test_rbf_gamma() -> None:
    """Test the kernel width rule and its degenerate case."""
    X = np.array([[0.0, 0.0], [2.0, 2.0]])  # noqa: N806
    assert rbf_gamma(X, 10.0) == pytest.approx(0.1)
    with pytest.raises(TrainingError):
        rbf_gamma(np.ones((4, 2)), 10.0)


@pytest.mark.cpu
def test_svr_expansion_matches_solver(linear_dataset: Dataset) -> None:
    """Test that predicting from the stored expansion matches the solver's own prediction."""
    learner = get_learner("SVR")
    payload = learner.fit(linear_dataset.X, linear_dataset.y, LearnerSpec("SVR"))
    reference = SVR(kernel="rbf", C=20.0, epsilon=0.1, gamma=payload["gamma"], tol=1e-3, max_iter=100_000)
    reference.fit(linear_dataset.X, linear_dataset.y)
    np.testing.assert_allclose(
        learner.predict(payload, linear_dataset.X), reference.predict(linear_dataset.X), atol=1e-9
    )


@pytest.mark.cpu
def test_svr_wide_tube_is_constant(linear_dataset: Dataset) -> None:
    """Test that a tube containing every target predicts a constant."""
    learner = get_learner("SVR")
    payload = learner.fit(linear_dataset.X, linear_dataset.y, LearnerSpec("SVR", {"epsilon": 1.0}))
    assert np.ptp(learner.predict(payload, linear_dataset.X)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.cpu
@pytest.mark.parametrize("cascade, expected", [(False, 241), (True, 251)])
def test_parameter_count(cascade: bool, expected: int) -> None:
    """Test the flat weight length for ten inputs and twenty hidden units."""
    assert parameter_count(10, 20, cascade) == expected
    weights = initial_weights(10, 20, cascade, torch.Generator().manual_seed(0))
    assert weights.shape == (expected,)
    assert float(weights.abs().max()) <= 1.0 / np.sqrt(10) + 1e-12


@pytest.mark.cpu
@pytest.mark.parametrize("cascade", [False, True])
def test_loss_gradient_matches_finite_differences(cascade: bool) -> None:
    """Test the Jacobian-based gradient against central differences."""
    rng = np.random.default_rng(2)
    X, y = rng.random((8, 3)), rng.random(8)  # noqa: N806
    weights = rng.normal(scale=0.5, size=parameter_count(3, 2, cascade))
    gradient = loss_gradient(weights, X, y, 2, cascade)
    step = 1e-6
    for i in range(weights.size):
        shift = np.zeros_like(weights)
        shift[i] = step
        numeric = (batch_loss(weights + shift, X, y, 2, cascade) - batch_loss(weights - shift, X, y, 2, cascade)) / (
            2 * step
        )
        assert gradient[i] == pytest.approx(numeric, rel=1e-5, abs=1e-8)


@pytest.mark.cpu
def test_zero_network_outputs_zero() -> None:
    """Test that all-zero weights give a zero output."""
    X = torch.ones((4, 10), dtype=torch.float64)  # noqa: N806
    out = network_forward(torch.zeros(parameter_count(10, 3, True), dtype=torch.float64), X, 3, True)
    assert torch.equal(out, torch.zeros(4, dtype=torch.float64))


@pytest.mark.cpu
def test_levenberg_marquardt_reduces_loss(linear_dataset: Dataset) -> None:
    """Test that training lowers the loss below the initial network's."""
    X, y = linear_dataset.X, linear_dataset.y  # noqa: N806
    initial = initial_weights(10, 3, False, torch.Generator().manual_seed(0)).numpy()
    weights, epochs = levenberg_marquardt(X, y, hidden=3, cascade=False, seed=0, max_epochs=30)
    assert 1 <= epochs <= 30
    assert batch_loss(weights, X, y, 3, False) < batch_loss(initial, X, y, 3, False)


@pytest.mark.cpu
def test_network_payload(linear_dataset: Dataset) -> None:
    """Test the stored network description of both architectures."""
    for algo, cascade in (("FNN", False), ("CNN", True)):
        spec = LearnerSpec(algo, {"hidden_units": 2, "max_epochs": 5})
        payload = get_learner(algo).fit(linear_dataset.X, linear_dataset.y, spec)
        assert payload["cascade"] is cascade
        assert payload["weights"].shape == (parameter_count(10, 2, cascade),)


@pytest.mark.cpu
@pytest.mark.parametrize("C", [0.05, 20.0])
def test_svr_dual_coefficients_in_box(linear_dataset: Dataset, C: float) -> None:  # noqa: N803
    """Test that every dual coefficient respects the box constraint and they sum to zero."""
    payload = get_learner("SVR").fit(linear_dataset.X, linear_dataset.y, LearnerSpec("SVR", {"C": C, "epsilon": 0.01}))
    dual = payload["dual_coef"]
    assert dual.size > 0
    assert np.all(np.abs(dual) <= C + 1e-12)
    assert abs(dual.sum()) <= 1e-8
    if C < 1.0:
        assert np.isclose(np.abs(dual).max(), C)
