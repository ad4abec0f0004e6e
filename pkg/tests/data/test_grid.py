import json
from pathlib import Path

import numpy as np
import pytest

from nrvqa.data.dataset import Dataset
from nrvqa.data.grid import LOSS_GRID, build_from_clips, build_grid, cell_seed, read_manifest, write_grid_clips
from nrvqa.errors import DataError, IoError, SchemaError, UsageError
from nrvqa.impairment.compression import DEFAULT_LADDER
from nrvqa.video.frame_io import VideoClip

LEVELS = (DEFAULT_LADDER[0], DEFAULT_LADDER[4])
LOSSES = (0.0, 0.5)


@pytest.fixture(scope="module")
def small_grid(small_classes: list[VideoClip]) -> Dataset:
    """A 2x2x2 grid of tiny clips."""
    return build_grid(small_classes, LEVELS, LOSSES, seed=0)


@pytest.mark.cpu
def test_loss_grid() -> None:
    """Test the twelve loss rates of the default grid."""
    assert len(LOSS_GRID) == 12
    assert LOSS_GRID[0] == 0.0 and LOSS_GRID[-1] == 0.10


@pytest.mark.cpu
def test_grid_order_and_ranges(small_grid: Dataset, small_classes: list[VideoClip]) -> None:
    """Test that cells are ordered by class, level and loss with values in range."""
    keys = [sample.key for sample in small_grid.samples]
    expected = [
        (clip.clip_id, level.level_index, loss) for clip in small_classes for level in LEVELS for loss in LOSSES
    ]
    assert keys == expected
    assert np.all((small_grid.y >= 0.0) & (small_grid.y <= 1.0))
    assert np.all((small_grid.X >= 0.0) & (small_grid.X <= 1.0))


@pytest.mark.cpu
def test_lossless_cells_measure_no_loss(small_grid: Dataset) -> None:
    """Test that the network features of lossless cells record no loss."""
    for sample in small_grid.samples:
        if sample.loss_rate == 0.0:
            assert sample.raw[9] == 0.0
        assert sample.raw[8] == sample.bitrate_kbps


@pytest.mark.cpu
def test_finer_rung_scores_higher(small_grid: Dataset, small_classes: list[VideoClip]) -> None:
    """Test that without loss the finer rung has the higher quality index."""
    for clip in small_classes:
        coarse = small_grid.samples[small_grid.position(clip.clip_id, 0, 0.0)].q
        fine = small_grid.samples[small_grid.position(clip.clip_id, 4, 0.0)].q
        assert coarse < fine


@pytest.mark.cpu
def test_grid_is_reproducible(small_grid: Dataset, small_classes: list[VideoClip]) -> None:
    """Test that the seed reproduces the dataset bit for bit."""
    assert build_grid(small_classes, LEVELS, LOSSES, seed=0) == small_grid


@pytest.mark.cpu
def test_cell_seed_is_shared_across_losses() -> None:
    """Test that the loss seed depends on class and level only."""
    assert cell_seed(0, 1, 2) == cell_seed(0, 1, 2)
    assert cell_seed(0, 1, 2) != cell_seed(0, 2, 1)


@pytest.mark.cpu
def test_grid_argument_checks(small_classes: list[VideoClip]) -> None:
    """Test that a single class or repeated loss rates are rejected."""
    with pytest.raises(UsageError):
        build_grid(small_classes[:1], LEVELS, LOSSES)
    with pytest.raises(UsageError):
        build_grid(small_classes, LEVELS, (0.0, 0.0))


@pytest.mark.cpu
def test_clips_rebuild_the_same_dataset(tmp_path: Path, small_grid: Dataset, small_classes: list[VideoClip]) -> None:
    """Test that measuring written clips reproduces the in-memory grid."""
    manifest = write_grid_clips(small_classes, tmp_path, LEVELS, LOSSES, seed=0)
    content = read_manifest(manifest)
    assert len(content["cells"]) == 8
    assert set(content["references"]) == {clip.clip_id for clip in small_classes}
    assert build_from_clips(manifest) == small_grid
    assert build_from_clips(tmp_path, refs_dir=tmp_path / "refs") == small_grid
    assert build_from_clips(tmp_path, oracle="ssim", seed=0) == small_grid
    with pytest.raises(DataError):
        build_from_clips(tmp_path, seed=1)
    with pytest.raises(UsageError):
        build_from_clips(tmp_path, oracle="vqm")


@pytest.mark.slow
@pytest.mark.cpu
def test_parallel_grid(small_grid: Dataset, small_classes: list[VideoClip]) -> None:
    """Test that worker processes give the same dataset."""
    assert build_grid(small_classes, LEVELS, LOSSES, seed=0, jobs=2) == small_grid


@pytest.mark.cpu
def test_manifest_errors(tmp_path: Path) -> None:
    """Test that a missing or malformed manifest is reported."""
    with pytest.raises(IoError):
        read_manifest(tmp_path / "absent.json")
    (tmp_path / "manifest.json").write_text("{not json")
    with pytest.raises(SchemaError):
        read_manifest(tmp_path)
    (tmp_path / "manifest.json").write_text(json.dumps({"format": 1, "cells": []}))
    with pytest.raises(SchemaError):
        read_manifest(tmp_path)
