from typing import Any

import pytest

from nrvqa.data.dataset import Dataset
from nrvqa.video.frame_io import VideoClip
from nrvqa.video.procedural import make_clip_classes

from .common import make_dataset, random_clip


@pytest.fixture(scope="module")
def linear_dataset() -> Dataset:
    """Two-class, 40-sample dataset with an exactly affine quality index."""
    return make_dataset()


@pytest.fixture(scope="function")
def noise_clip() -> VideoClip:
    """Small seeded noise clip."""
    return random_clip()


@pytest.fixture(scope="module")
def small_classes() -> list[VideoClip]:
    """Two tiny procedural clip classes."""
    return make_clip_classes(2, seed=1, width=64, height=48, frames=10)


@pytest.fixture(scope="function")
def tmp_dir(tmp_path: Any) -> Any:
    """Fresh output directory per test."""
    return tmp_path
