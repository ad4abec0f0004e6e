import os
import subprocess
import sys
from fractions import Fraction
from typing import Any, Callable

import numpy as np
from docutils.core import publish_doctree
from docutils.nodes import literal_block, section, title

from nrvqa.data.dataset import Dataset, Sample
from nrvqa.data.grid import LOSS_GRID
from nrvqa.features.content import FEATURE_NAMES
from nrvqa.features.normalizer import BITRATE_BOUNDS, LOSS_BOUNDS, Normalizer
from nrvqa.impairment.compression import DEFAULT_LADDER
from nrvqa.video.frame_io import VideoClip

UNIT_NORMALIZER = Normalizer(
    {**{name: (0.0, 1.0) for name in FEATURE_NAMES}, "bitrate": BITRATE_BOUNDS, "loss": LOSS_BOUNDS}
)


def linear_quality(features: np.ndarray) -> float:
    """Quality index that is an exact affine function of the inputs."""
    return float(0.2 + 0.3 * features[0] + 0.2 * features[9] + 0.1 * features[3])


def make_dataset(
    n_classes: int = 2,
    n_levels: int = 4,
    n_losses: int = 5,
    quality: Callable[[np.ndarray], float] = linear_quality,
    seed: int = 0,
) -> Dataset:
    """Grid-shaped dataset of random content features whose quality is a known function of the inputs."""
    rng = np.random.default_rng(seed)
    samples = []
    for ci in range(n_classes):
        for level in DEFAULT_LADDER[:n_levels]:
            for loss_rate in LOSS_GRID[:n_losses]:
                raw = np.concatenate([rng.random(len(FEATURE_NAMES)), [level.nominal_bitrate_kbps, loss_rate]])
                features = UNIT_NORMALIZER.apply(raw)
                samples.append(
                    Sample(
                        class_id=f"c{ci}",
                        level_index=level.level_index,
                        bitrate_kbps=level.nominal_bitrate_kbps,
                        loss_rate=loss_rate,
                        raw=raw,
                        features=features,
                        q=quality(features),
                    )
                )
    return Dataset(samples, UNIT_NORMALIZER)


def constant_clip(value: int = 100, frames: int = 4, height: int = 16, width: int = 16) -> VideoClip:
    """A clip whose every sample equals ``value``."""
    return VideoClip(np.full((frames, height, width), value, dtype=np.uint8), fps=Fraction(25), clip_id="const")


def random_clip(seed: int = 0, frames: int = 4, height: int = 32, width: int = 48) -> VideoClip:
    """A clip of seeded uniform noise."""
    rng = np.random.default_rng(seed)
    return VideoClip(rng.integers(0, 256, size=(frames, height, width), dtype=np.uint8), clip_id="noise")


# small settings keep every learner fast on the 40-sample grid
FAST_SETTINGS: dict[str, dict[str, Any]] = {
    "LR": {},
    "RT": {},
    "ERT-LSB": {"n_estimators": 40, "learning_rate": 0.1},
    "ERT-BR": {"n_estimators": 20},
    "EDT-AB": {"n_estimators": 20, "n_classes": 10},
    "GPR": {"max_iterations": 60},
    "SVR": {},
    "FNN": {"hidden_units": 3, "max_epochs": 40},
    "CNN": {"hidden_units": 2, "max_epochs": 40},
}


def run_script_successfully(script_file: str, cwd: str | None = None) -> None:
    """Run the script with the current interpreter and assert that it succeeds."""
    result = subprocess.run([sys.executable, script_file], capture_output=True, text=True, cwd=cwd)
    assert result.returncode == 0, f"Script {script_file} failed with error:\n{result.stderr}"


def extract_python_code_blocks(rst_file_path: str, output_dir: str) -> None:
    """Extract code blocks from first-level sections of an rst file, skipping blocks with the `noextract` class."""
    with open(rst_file_path, "r") as file:
        rst_content = file.read()

    document = publish_doctree(rst_content, settings_overrides={"report_level": 5})
    os.makedirs(output_dir, exist_ok=True)

    def extract_code_blocks_from_node(node: Any, section_name: str) -> None:
        blocks = [
            block.astext()
            for block in node.traverse(literal_block)
            if "noextract" not in block.attributes.get("classes", [])
            and "python" in block.attributes.get("classes", [])
        ]
        if not blocks:
            return
        with open(os.path.join(output_dir, f"{section_name}_code.py"), "w") as code_file:
            code_file.write("\n".join(blocks) + "\n")

    # only first-level sections, subsections belong to their parent
    for sec in document.traverse(section):
        if sec.parent is not document:
            continue
        section_title_node = sec.next_node(title)
        if section_title_node:
            section_title = section_title_node.astext().replace(" ", "_").lower()
            extract_code_blocks_from_node(sec, section_title)
