import numpy as np
import pytest

from nrvqa.errors import DataError, UndefinedCorrelation
from nrvqa.evaluation import pearson, try_pearson


@pytest.mark.cpu
@pytest.mark.parametrize(
    "x, y, expected",
    [
        ([1, 2, 3], [1, 3, 2], 0.5),
        ([1, 2, 3], [2, 4, 6], 1.0),
        ([1, 2, 3, 4], [4, 3, 2, 1], -1.0),
    ],
)
def test_pearson_values(x: list[int], y: list[int], expected: float) -> None:
    """Test the correlation of small known sequences."""
    assert pearson(x, y) == pytest.approx(expected, abs=1e-12)


@pytest.mark.cpu
def test_pearson_is_bounded() -> None:
    """Test that rounding never pushes the coefficient outside [-1, 1]."""
    x = np.linspace(0.1, 0.3, 1000)
    assert -1.0 <= pearson(x, 3.0 * x + 1e-3) <= 1.0


@pytest.mark.cpu
def test_constant_sequence_is_undefined() -> None:
    """Test that a constant sequence has no correlation."""
    with pytest.raises(UndefinedCorrelation):
        pearson([0.5, 0.5, 0.5], [0.1, 0.2, 0.3])
    assert try_pearson([0.5, 0.5, 0.5], [0.1, 0.2, 0.3]) is None


@pytest.mark.cpu
@pytest.mark.parametrize("x, y", [([1.0, 2.0], [1.0, 2.0, 3.0]), ([1.0], [2.0])])
def test_pearson_rejects_bad_lengths(x: list[float], y: list[float]) -> None:
    """Test that mismatched or too short sequences are data errors."""
    with pytest.raises(DataError):
        pearson(x, y)


@pytest.mark.cpu
def test_pearson_properties() -> None:
    """Test symmetry, affine invariance and agreement with a brute-force sum on seeded vectors."""
    rng = np.random.default_rng(0)
    for _ in range(1000):
        n = int(rng.integers(2, 500))
        x, y = rng.random(n), rng.random(n)
        r = pearson(x, y)
        assert pearson(y, x) == r
        assert pearson(3.0 * x + 2.0, y) == pytest.approx(r, abs=1e-12)
        assert pearson(-x, y) == pytest.approx(-r, abs=1e-12)
        mx, my = sum(x) / n, sum(y) / n
        num = sum((a - mx) * (b - my) for a, b in zip(x, y))
        den = (sum((a - mx) ** 2 for a in x) * sum((b - my) ** 2 for b in y)) ** 0.5
        assert r == pytest.approx(num / den, abs=1e-12)
