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

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
from tqdm.auto import tqdm

from nrvqa.config.feature_config import DEFAULT_FEATURE_CONFIG, FeatureConfig
from nrvqa.data.dataset import Dataset, Sample
from nrvqa.errors import DataError, IoError, SchemaError, UsageError
from nrvqa.features.content import RawFeatures, clip_statistics, pool_features, update_statistics
from nrvqa.features.normalizer import fit_normalizer, raw_inputs
from nrvqa.impairment.channel import ChannelStats, LossKind, LossModel
from nrvqa.impairment.compression import DEFAULT_LADDER, CompressionLevel, check_ladder, compress_proxy
from nrvqa.impairment.degrade import transmit
from nrvqa.logging.logger import NrvqaLoggerContext, nrvqa_logger
from nrvqa.quality.benchmark import DEFAULT_ORACLE, benchmark_index
from nrvqa.quality.oracle_ssim import SsimOracle
from nrvqa.quality.registry import OracleRegistry
from nrvqa.video.frame_io import VideoClip, read_y4m, write_y4m

LOSS_GRID: tuple[float, ...] = (0.0, 0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.04, 0.045, 0.05, 0.10)
# jumbo frames, a 320-pixel macroblock row does not fit a 1400-byte packet
GRID_MTU = 9000
MANIFEST_NAME = "manifest.json"
MANIFEST_FORMAT = 1


@dataclass(frozen=True)
class GridCell:
    """
    Outcome of one (class, level, loss) cell before normalization.

    Parameters
    ----------
    class_id : str
        Video class label.
    level : CompressionLevel
        Compression rung.
    loss_rate : float
        Loss rate label.
    raw : RawFeatures
        Content features of the impaired clip.
    stats : ChannelStats
        Measured channel statistics.
    q : float
        Ground-truth quality index.
    """

    class_id: str
    level: CompressionLevel
    loss_rate: float
    raw: RawFeatures
    stats: ChannelStats
    q: float


def cell_seed(seed: int, class_index: int, level_index: int) -> int:
    """
    Loss seed of a (class, level) row of the grid.

    All loss rates of a row share the seed, so Bernoulli losses are nested in the loss rate.

    Parameters
    ----------
    seed : int
        Grid seed.
    class_index : int
        Position of the class in the grid.
    level_index : int
        Compression rung.

    Returns
    -------
    int
        A 64-bit seed.
    """
    state = np.random.SeedSequence([seed, class_index, level_index]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def loss_model(kind: LossKind | str, loss_rate: float, seed: int) -> LossModel:
    """
    Build the grid's loss process for one cell.

    Parameters
    ----------
    kind : LossKind | str
        Bernoulli or Gilbert-Elliott.
    loss_rate : float
        Target loss rate.
    seed : int
        Loss seed.

    Returns
    -------
    LossModel
        The loss model.
    """
    if LossKind(kind) is LossKind.BERNOULLI:
        return LossModel.bernoulli(loss_rate, seed)
    return LossModel.gilbert_elliott(loss_rate, seed)


def _check_grid(classes: Sequence[VideoClip], levels: Sequence[CompressionLevel], losses: Sequence[float]) -> None:
    if len(classes) < 2:
        nrvqa_logger.error(f"A grid needs at least two clip classes, got {len(classes)}.")
        raise UsageError("A grid needs at least two clip classes.")
    if len({clip.clip_id for clip in classes}) != len(classes):
        raise UsageError("Clip classes must have distinct labels.")
    check_ladder(levels)
    if len(set(losses)) != len(losses) or any(not 0.0 <= loss <= 1.0 for loss in losses):
        raise UsageError("Loss rates must be distinct probabilities.")


def _impaired_cells(
    class_index: int,
    clip: VideoClip,
    levels: Sequence[CompressionLevel],
    losses: Sequence[float],
    seed: int,
    loss_kind: str,
    mtu: int,
) -> Iterable[tuple[CompressionLevel, float, VideoClip, VideoClip, ChannelStats]]:
    for level in levels:
        compressed = compress_proxy(clip, level)
        row_seed = cell_seed(seed, class_index, level.level_index)
        for loss_rate in losses:
            impaired, stats = transmit(compressed, level, loss_model(loss_kind, loss_rate, row_seed), mtu=mtu)
            yield level, loss_rate, compressed, impaired, stats


def _evaluate_class(
    class_index: int,
    clip: VideoClip,
    levels: Sequence[CompressionLevel],
    losses: Sequence[float],
    seed: int,
    feature_config: FeatureConfig,
    oracle: str,
    loss_kind: str,
    mtu: int,
) -> list[GridCell]:
    """
    Evaluate every cell of one class.

    Measurements of the compressed clip are cached per level; an impaired clip only re-measures the frames
    the channel changed. Results are bit-identical to evaluating each impaired clip from scratch.
    """
    ssim = OracleRegistry.get_oracle(oracle)
    cached_oracle = isinstance(ssim, SsimOracle)
    cells = []
    cached_level = None
    for level, loss_rate, compressed, impaired, stats in _impaired_cells(
        class_index, clip, levels, losses, seed, loss_kind, mtu
    ):
        if cached_level is not level:
            base_stats = clip_statistics(compressed, feature_config)
            base_scores = ssim.score_frames(clip.frames, compressed.frames) if cached_oracle else None
            cached_level = level

        changed = np.flatnonzero((impaired.frames != compressed.frames).any(axis=(1, 2)))
        raw = pool_features(update_statistics(base_stats, impaired, changed, feature_config), feature_config)
        if cached_oracle:
            scores = base_scores.copy()
            scores[changed] = ssim.score_frames(clip.frames[changed], impaired.frames[changed])
            q = SsimOracle.pool(scores)
        else:
            q = benchmark_index(clip, impaired, oracle)
        nrvqa_logger.debug(
            f"{clip.clip_id} level {level.level_index} loss {loss_rate}: {stats.packets_lost} lost, q={q:.4f}"
        )
        cells.append(GridCell(clip.clip_id, level, loss_rate, raw, stats, q))
    return cells


def assemble_dataset(cells: Sequence[GridCell], feature_config: FeatureConfig = DEFAULT_FEATURE_CONFIG) -> Dataset:
    """
    Fit the normalizer on all raw rows and produce the samples.

    Parameters
    ----------
    cells : Sequence[GridCell]
        Evaluated cells in grid order.
    feature_config : FeatureConfig
        Constants the content features were computed with.

    Returns
    -------
    Dataset
        The dataset.
    """
    normalizer = fit_normalizer((cell.raw, cell.stats) for cell in cells)
    raw = np.stack([raw_inputs(cell.raw, cell.stats) for cell in cells])
    features = normalizer.apply(raw)
    samples = [
        Sample(
            class_id=cell.class_id,
            level_index=cell.level.level_index,
            bitrate_kbps=cell.level.nominal_bitrate_kbps,
            loss_rate=float(cell.loss_rate),
            raw=raw[i],
            features=features[i],
            q=cell.q,
        )
        for i, cell in enumerate(cells)
    ]
    return Dataset(samples, normalizer, feature_config)


def build_grid(
    classes: Sequence[VideoClip],
    levels: Sequence[CompressionLevel] = DEFAULT_LADDER,
    losses: Sequence[float] = LOSS_GRID,
    seed: int = 0,
    feature_config: FeatureConfig = DEFAULT_FEATURE_CONFIG,
    oracle: str = DEFAULT_ORACLE,
    loss_kind: str = LossKind.BERNOULLI.value,
    mtu: int = GRID_MTU,
    jobs: int = 1,
    verbose: bool = False,
) -> Dataset:
    """
    Degrade every class at every (level, loss) cell, measure features and ground truth, and normalize.

    Parameters
    ----------
    classes : Sequence[VideoClip]
        Pristine clips, one per video class, with distinct labels.
    levels : Sequence[CompressionLevel]
        Compression rungs.
    losses : Sequence[float]
        Loss rates.
    seed : int
        Grid seed, loss seeds derive from it per (class, level).
    feature_config : FeatureConfig
        Feature constants.
    oracle : str
        Name of the ground-truth oracle.
    loss_kind : str
        Loss process, "bernoulli" or "gilbert-elliott".
    mtu : int
        Packet size of the channel.
    jobs : int
        Worker processes, one class per task.
    verbose : bool
        Whether to show progress.

    Returns
    -------
    Dataset
        ``len(classes) * len(levels) * len(losses)`` samples ordered by class, level and loss.

    Examples
    --------
    >>> ds = build_grid(make_clip_classes(2, frames=10, width=64, height=48), DEFAULT_LADDER[:2], (0.0, 0.05))
    >>> len(ds)
    8
    """
    _check_grid(classes, levels, losses)
    OracleRegistry.get_oracle(oracle)
    with NrvqaLoggerContext(verbose):
        nrvqa_logger.info(f"Building a {len(classes)}x{len(levels)}x{len(losses)} grid.")
        tasks = [
            (index, clip, tuple(levels), tuple(losses), seed, feature_config, oracle, LossKind(loss_kind).value, mtu)
            for index, clip in enumerate(classes)
        ]
        per_class: list[list[GridCell]] = []
        progress = tqdm(total=len(tasks), desc="classes", disable=not verbose)
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for result in pool.map(_evaluate_class, *zip(*tasks)):
                    per_class.append(result)
                    progress.update()
        else:
            for task in tasks:
                per_class.append(_evaluate_class(*task))
                progress.update()
        progress.close()
        return assemble_dataset([cell for cells in per_class for cell in cells], feature_config)


def _clip_name(class_id: str, level_index: int, loss_index: int) -> str:
    return f"{class_id}_L{level_index}_P{loss_index:02d}.y4m"


def write_grid_clips(
    classes: Sequence[VideoClip],
    out_dir: str | Path,
    levels: Sequence[CompressionLevel] = DEFAULT_LADDER,
    losses: Sequence[float] = LOSS_GRID,
    seed: int = 0,
    feature_config: FeatureConfig = DEFAULT_FEATURE_CONFIG,
    oracle: str = DEFAULT_ORACLE,
    loss_kind: str = LossKind.BERNOULLI.value,
    mtu: int = GRID_MTU,
    verbose: bool = False,
) -> Path:
    """
    Write the references, every impaired grid clip and a manifest with their channel statistics.

    Parameters
    ----------
    classes : Sequence[VideoClip]
        Pristine clips.
    out_dir : str | Path
        Output directory, created if needed.
    levels : Sequence[CompressionLevel]
        Compression rungs.
    losses : Sequence[float]
        Loss rates.
    seed : int
        Grid seed.
    feature_config : FeatureConfig
        Feature constants recorded for the later extraction.
    oracle : str
        Oracle recorded for the later extraction.
    loss_kind : str
        Loss process.
    mtu : int
        Packet size of the channel.
    verbose : bool
        Whether to show progress.

    Returns
    -------
    Path
        The manifest file.
    """
    _check_grid(classes, levels, losses)
    out = Path(out_dir)
    manifest: dict[str, Any] = {
        "format": MANIFEST_FORMAT,
        "seed": seed,
        "oracle": oracle,
        "feature_config": feature_config.to_line(),
        "references": {},
        "cells": [],
    }
    with NrvqaLoggerContext(verbose):
        try:
            (out / "refs").mkdir(parents=True, exist_ok=True)
            (out / "clips").mkdir(parents=True, exist_ok=True)
        except OSError as e:
            nrvqa_logger.error(f"Could not create {out}: {e}")
            raise IoError(f"Could not create output directory {out}.") from e

        for class_index, clip in enumerate(tqdm(classes, desc="classes", disable=not verbose)):
            reference = Path("refs") / f"{clip.clip_id}.y4m"
            write_y4m(clip, out / reference)
            manifest["references"][clip.clip_id] = reference.as_posix()
            for level, loss_rate, _, impaired, stats in _impaired_cells(
                class_index, clip, levels, losses, seed, LossKind(loss_kind).value, mtu
            ):
                relative = Path("clips") / _clip_name(clip.clip_id, level.level_index, list(losses).index(loss_rate))
                write_y4m(impaired, out / relative)
                manifest["cells"].append(
                    {
                        "class_id": clip.clip_id,
                        "level_index": level.level_index,
                        "quant_step": level.quant_step,
                        "bitrate_kbps": level.nominal_bitrate_kbps,
                        "loss_rate": loss_rate,
                        "path": relative.as_posix(),
                        "packets_sent": stats.packets_sent,
                        "packets_lost": stats.packets_lost,
                    }
                )

        manifest_path = out / MANIFEST_NAME
        try:
            manifest_path.write_text(json.dumps(manifest, indent=4), encoding="utf-8")
        except OSError as e:
            raise IoError(f"Could not write {manifest_path}.") from e
        nrvqa_logger.info(f"Wrote {len(manifest['cells'])} impaired clips to {out}.")
    return manifest_path


def read_manifest(path: str | Path) -> dict[str, Any]:
    """
    Load and check a grid manifest.

    Parameters
    ----------
    path : str | Path
        The manifest file, or the directory holding it.

    Returns
    -------
    dict[str, Any]
        The manifest content.
    """
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        nrvqa_logger.error(f"Could not read manifest {path}: {e}")
        raise IoError(f"Could not read manifest {path}.") from e
    except json.JSONDecodeError as e:
        raise SchemaError("manifest") from e
    if manifest.get("format") != MANIFEST_FORMAT:
        raise SchemaError("format")
    for key in ("references", "cells", "feature_config", "oracle"):
        if key not in manifest:
            nrvqa_logger.error(f"Manifest {path} lacks '{key}'.")
            raise SchemaError(key)
    return manifest


def _measure_entry(
    entry: dict[str, Any], reference: VideoClip, root: Path, feature_config: FeatureConfig, oracle: str
) -> GridCell:
    try:
        level = CompressionLevel(int(entry["level_index"]), float(entry["quant_step"]), float(entry["bitrate_kbps"]))
        stats = ChannelStats(int(entry["packets_sent"]), int(entry["packets_lost"]), level.nominal_bitrate_kbps)
        impaired = read_y4m(root / entry["path"])
        loss_rate = float(entry["loss_rate"])
    except KeyError as e:
        nrvqa_logger.error(f"Manifest entry {entry} lacks {e}.")
        raise SchemaError(str(e.args[0])) from e
    if impaired.frames.shape != reference.frames.shape:
        raise DataError(f"Impaired clip {entry['path']} does not match its reference geometry.")
    raw = pool_features(clip_statistics(impaired, feature_config), feature_config)
    q = benchmark_index(reference, impaired, oracle)
    return GridCell(entry["class_id"], level, loss_rate, raw, stats, q)


def build_from_clips(
    manifest_path: str | Path,
    refs_dir: str | Path | None = None,
    jobs: int = 1,
    verbose: bool = False,
    oracle: str | None = None,
    seed: int | None = None,
) -> Dataset:
    """
    Rebuild the dataset from clips written by ``write_grid_clips``.

    Every impaired clip is measured from scratch; the result is bit-identical to ``build_grid`` with the same
    arguments.

    Parameters
    ----------
    manifest_path : str | Path
        The manifest file or its directory.
    refs_dir : str | Path | None
        Directory holding ``<class_id>.y4m`` references, instead of the paths listed in the manifest.
    jobs : int
        Worker processes, one clip per task.
    verbose : bool
        Whether to show progress.
    oracle : str | None
        Ground-truth oracle, the one recorded in the manifest if ``None``.
    seed : int | None
        Grid seed the clips must have been synthesized with, unchecked if ``None``.

    Returns
    -------
    Dataset
        The dataset.
    """
    manifest_path = Path(manifest_path)
    root = manifest_path if manifest_path.is_dir() else manifest_path.parent
    manifest = read_manifest(manifest_path)
    feature_config = FeatureConfig.from_line(manifest["feature_config"])
    oracle = str(manifest["oracle"]) if oracle is None else oracle
    OracleRegistry.get_oracle(oracle)
    if seed is not None and manifest.get("seed") != seed:
        nrvqa_logger.error(f"Clips in {root} were synthesized with seed {manifest.get('seed')}, not {seed}.")
        raise DataError(f"Grid seed mismatch: manifest has {manifest.get('seed')}, expected {seed}.")

    with NrvqaLoggerContext(verbose):
        references = {
            class_id: read_y4m(root / relative if refs_dir is None else Path(refs_dir) / f"{class_id}.y4m")
            for class_id, relative in manifest["references"].items()
        }
        entries = manifest["cells"]
        for entry in entries:
            if entry.get("class_id") not in references:
                nrvqa_logger.error(f"Manifest entry {entry} names no known reference.")
                raise SchemaError("class_id")
        tasks = [(entry, references[entry["class_id"]], root, feature_config, oracle) for entry in entries]
        cells = []
        progress = tqdm(total=len(tasks), desc="clips", disable=not verbose)
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for cell in pool.map(_measure_entry, *zip(*tasks)):
                    cells.append(cell)
                    progress.update()
        else:
            for task in tasks:
                cells.append(_measure_entry(*task))
                progress.update()
        progress.close()
        return assemble_dataset(cells, feature_config)
