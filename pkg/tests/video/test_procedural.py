import numpy as np
import pytest

from nrvqa.errors import UsageError
from nrvqa.video.procedural import CLIP_RECIPES, make_clip, make_clip_classes


@pytest.mark.cpu
@pytest.mark.parametrize("name", list(CLIP_RECIPES))
def test_recipe_geometry(name: str) -> None:
    """Test that every recipe honours the requested geometry."""
    clip = make_clip(name, seed=0, width=64, height=48, frames=6)
    assert clip.frames.shape == (6, 48, 64)
    assert clip.clip_id == name


@pytest.mark.cpu
@pytest.mark.parametrize("name", list(CLIP_RECIPES))
def test_recipe_is_deterministic(name: str) -> None:
    """Test that a recipe reproduces its clip for a fixed seed."""
    assert make_clip(name, seed=7, width=32, height=32, frames=4) == make_clip(
        name, seed=7, width=32, height=32, frames=4
    )


@pytest.mark.cpu
def test_recipes_differ() -> None:
    """Test that distinct recipes produce distinct content."""
    clips = make_clip_classes(seed=0, width=32, height=32, frames=4)
    assert len(clips) == len(CLIP_RECIPES)
    for i, a in enumerate(clips):
        for b in clips[i + 1 :]:
            assert not np.array_equal(a.frames, b.frames)


@pytest.mark.cpu
def test_unknown_recipe() -> None:
    """Test that an unknown recipe name is a usage error."""
    with pytest.raises(UsageError):
        make_clip("zz9")


@pytest.mark.cpu
@pytest.mark.parametrize("count", [0, len(CLIP_RECIPES) + 1])
def test_class_count_bounds(count: int) -> None:
    """Test that the class count is bounded by the number of recipes."""
    with pytest.raises(UsageError):
        make_clip_classes(count, width=32, height=32, frames=4)
