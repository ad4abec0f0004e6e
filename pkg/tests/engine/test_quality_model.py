import time
from pathlib import Path

import numpy as np
import pytest
import torch

from nrvqa import train
from nrvqa.config.feature_config import DEFAULT_FEATURE_CONFIG
from nrvqa.config.learner_space import LEARNER_ORDER
from nrvqa.config.learner_spec import LearnerSpec
from nrvqa.data.dataset import Dataset
from nrvqa.engine import QualityModel
from nrvqa.engine.load import ENVELOPE_KEYS, load_quality_model
from nrvqa.engine.save import model_envelope
from nrvqa.errors import DimensionError, IoError, ParseError
from nrvqa.impairment.channel import ChannelStats

from ..common import FAST_SETTINGS, UNIT_NORMALIZER, constant_clip


def _hand_made_model(bias: float = 0.3) -> QualityModel:
    payload = {"weights": np.ones(10), "bias": bias, "rank": 11}
    return QualityModel(LearnerSpec("LR"), payload, UNIT_NORMALIZER, DEFAULT_FEATURE_CONFIG)


@pytest.mark.cpu
def test_train_records_metadata(linear_dataset: Dataset) -> None:
    """Test that a trained model carries its spec, seed, timing and normalizer."""
    model = train(LearnerSpec("RT"), linear_dataset, seed=5)
    assert model.algo == "RT"
    assert model.train_seed == 5
    assert model.train_time_seconds >= 0.0
    assert model.normalizer == linear_dataset.normalizer
    assert repr(model).startswith("QualityModel(algo='RT', seed=5")


@pytest.mark.cpu
@pytest.mark.parametrize("algo", list(LEARNER_ORDER))
def test_saved_model_predicts_identically(algo: str, tmp_path: Path, linear_dataset: Dataset) -> None:
    """Test that a loaded model reproduces every prediction bit for bit."""
    model = train(LearnerSpec(algo, FAST_SETTINGS[algo]), linear_dataset, seed=1)
    model.save(tmp_path / "model.pt")
    loaded = QualityModel.load(tmp_path / "model.pt")
    assert loaded.spec == model.spec
    assert loaded.normalizer == model.normalizer
    assert loaded.feature_config == model.feature_config
    assert loaded.train_seed == 1
    np.testing.assert_array_equal(loaded.predict_batch(linear_dataset.X), model.predict_batch(linear_dataset.X))
    unseen = np.random.default_rng(1).random((1000, 10))
    np.testing.assert_array_equal(loaded.predict_batch(unseen), model.predict_batch(unseen))
    assert [loaded.predict(x) for x in unseen[:50]] == [model.predict(x) for x in unseen[:50]]


@pytest.mark.cpu
@pytest.mark.slow
@pytest.mark.parametrize("algo", list(LEARNER_ORDER))
def test_single_prediction_time(algo: str, linear_dataset: Dataset) -> None:
    """Test that a model with default settings predicts one vector in under a millisecond."""
    model = train(LearnerSpec(algo), linear_dataset, seed=0)
    vectors = np.random.default_rng(2).random((200, 10))
    model.predict(vectors[0])
    start = time.perf_counter()
    for x in vectors:
        model.predict(x)
    assert (time.perf_counter() - start) / len(vectors) < 1e-3


@pytest.mark.cpu
def test_predictions_are_clamped() -> None:
    """Test that predictions outside [0, 1] are clamped."""
    model = _hand_made_model()
    assert model.predict(np.ones(10)) == 1.0
    assert model.predict(-np.ones(10)) == 0.0
    np.testing.assert_array_equal(model.predict_batch(np.zeros((3, 10))), np.full(3, 0.3))


@pytest.mark.cpu
@pytest.mark.parametrize("shape", [(9,), (1, 10), (10, 1)])
def test_single_prediction_dimension(shape: tuple[int, ...]) -> None:
    """Test that a single prediction needs a vector of length 10."""
    with pytest.raises(DimensionError):
        _hand_made_model().predict(np.zeros(shape))


@pytest.mark.cpu
def test_batch_prediction_dimension() -> None:
    """Test that a batch needs ten columns."""
    with pytest.raises(DimensionError):
        _hand_made_model().predict_batch(np.zeros((4, 9)))


@pytest.mark.cpu
def test_predict_clip() -> None:
    """Test clip prediction through feature extraction."""
    model = _hand_made_model(bias=0.25)
    assert model.predict_clip(constant_clip(), ChannelStats(50, 0, 64.0)) == 0.25


@pytest.mark.cpu
def test_envelope_layout() -> None:
    """Test the keys and plain types of the stored envelope."""
    envelope = model_envelope(_hand_made_model())
    assert tuple(envelope) == ENVELOPE_KEYS
    assert envelope["format_version"] == 1
    assert envelope["normalizer"] == UNIT_NORMALIZER.to_line()
    assert isinstance(envelope["payload"]["weights"], torch.Tensor)


@pytest.mark.cpu
def test_missing_model_file(tmp_path: Path) -> None:
    """Test that a missing model file is an I/O error."""
    with pytest.raises(IoError):
        load_quality_model(tmp_path / "absent.pt")


@pytest.mark.cpu
def test_corrupt_model_file(tmp_path: Path) -> None:
    """Test that a file that is not a model archive is a parse error."""
    (tmp_path / "bad.pt").write_bytes(b"definitely not a model")
    with pytest.raises(ParseError):
        load_quality_model(tmp_path / "bad.pt")


@pytest.mark.cpu
def test_foreign_envelope(tmp_path: Path) -> None:
    """Test that an archive without the model keys is a parse error."""
    torch.save({"weights": torch.zeros(3)}, tmp_path / "foreign.pt")
    with pytest.raises(ParseError):
        load_quality_model(tmp_path / "foreign.pt")


@pytest.mark.cpu
def test_unsupported_version(tmp_path: Path) -> None:
    """Test that a newer format version is a parse error."""
    envelope = model_envelope(_hand_made_model())
    envelope["format_version"] = 2
    torch.save(envelope, tmp_path / "future.pt")
    with pytest.raises(ParseError):
        load_quality_model(tmp_path / "future.pt")


@pytest.mark.cpu
def test_invalid_metadata(tmp_path: Path) -> None:
    """Test that an unknown learner in the envelope is a parse error."""
    envelope = model_envelope(_hand_made_model())
    envelope["algo"] = "KNN"
    torch.save(envelope, tmp_path / "knn.pt")
    with pytest.raises(ParseError):
        load_quality_model(tmp_path / "knn.pt")
