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

from fractions import Fraction
from typing import Callable, Tuple

import numpy as np
from scipy import ndimage

from nrvqa.errors import UsageError
from nrvqa.logging.logger import nrvqa_logger
from nrvqa.video.frame_io import VideoClip

DEFAULT_WIDTH = 320
DEFAULT_HEIGHT = 240
DEFAULT_FRAMES = 250
DEFAULT_FPS = Fraction(25)


def _to_luma(values: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(values), 0, 255).astype(np.uint8)


def _smooth_texture(rng: np.random.Generator, shape: tuple[int, int], sigma: float, amplitude: float) -> np.ndarray:
    texture = ndimage.gaussian_filter(rng.standard_normal(shape), sigma=sigma, mode="wrap")
    return amplitude * texture / (texture.std() + 1e-12)


def _grid(height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    return np.mgrid[0:height, 0:width].astype(np.float64)


def setup_static_gradient_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Static diagonal gradient with a faint fixed texture.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    yy, xx = _grid(height, width)
    image = 40.0 + 150.0 * (0.6 * xx / width + 0.4 * yy / height) + _smooth_texture(rng, (height, width), 4.0, 6.0)
    return np.broadcast_to(_to_luma(image), (frames, height, width)).copy()


def setup_scrolling_texture_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Fine texture scrolling horizontally at two pixels per frame.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    speed = 2
    canvas = 128.0 + _smooth_texture(rng, (height, width + speed * frames), 1.5, 45.0)
    out = np.empty((frames, height, width), dtype=np.uint8)
    for t in range(frames):
        out[t] = _to_luma(canvas[:, t * speed : t * speed + width])
    return out


def setup_random_pan_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Camera pan over a textured scene following a bounded random walk.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    margin = 48
    canvas = 110.0 + _smooth_texture(rng, (height + 2 * margin, width + 2 * margin), 3.0, 35.0)
    # a few sharp rectangles give the scene hard edges
    for _ in range(12):
        top, left = rng.integers(0, height + margin), rng.integers(0, width + margin)
        canvas[top : top + rng.integers(8, 40), left : left + rng.integers(8, 40)] = rng.uniform(20, 235)

    steps = rng.integers(-3, 4, size=(frames, 2))
    offset = np.array([margin, margin])
    out = np.empty((frames, height, width), dtype=np.uint8)
    for t in range(frames):
        offset = np.clip(offset + steps[t], 0, 2 * margin)
        out[t] = _to_luma(canvas[offset[0] : offset[0] + height, offset[1] : offset[1] + width])
    return out


def setup_noise_field_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Independent, lightly smoothed noise in every frame.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    out = np.empty((frames, height, width), dtype=np.uint8)
    for t in range(frames):
        out[t] = _to_luma(128.0 + ndimage.gaussian_filter(60.0 * rng.standard_normal((height, width)), sigma=0.7))
    return out


def setup_bouncing_shapes_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Bright discs bouncing off the borders of a dark gradient.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    yy, xx = _grid(height, width)
    background = 30.0 + 50.0 * yy / height
    n_shapes = 4
    radius = rng.uniform(0.06, 0.14, n_shapes) * min(height, width)
    position = np.column_stack([rng.uniform(radius, height - radius), rng.uniform(radius, width - radius)])
    velocity = rng.uniform(-4.0, 4.0, (n_shapes, 2))
    level = rng.uniform(150, 240, n_shapes)

    out = np.empty((frames, height, width), dtype=np.uint8)
    for t in range(frames):
        image = background.copy()
        for k in range(n_shapes):
            image[(yy - position[k, 0]) ** 2 + (xx - position[k, 1]) ** 2 <= radius[k] ** 2] = level[k]
        out[t] = _to_luma(image)
        position += velocity
        for axis, limit in enumerate((height, width)):
            bounce = (position[:, axis] < radius) | (position[:, axis] > limit - radius)
            velocity[bounce, axis] *= -1
            position[:, axis] = np.clip(position[:, axis], radius, limit - radius)
    return out


def setup_zooming_rings_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Concentric rings whose spacing shrinks over time.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    yy, xx = _grid(height, width)
    center = rng.uniform(0.35, 0.65, 2) * (height, width)
    radius = np.hypot(yy - center[0], xx - center[1])
    phase = rng.uniform(0, 2 * np.pi)
    out = np.empty((frames, height, width), dtype=np.uint8)
    for t in range(frames):
        period = 24.0 - 16.0 * t / max(frames - 1, 1)
        out[t] = _to_luma(128.0 + 100.0 * np.sin(2 * np.pi * radius / period + phase))
    return out


def setup_moving_checker_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Hard-edged checkerboard drifting diagonally by one pixel per frame.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    yy, xx = np.mgrid[0:height, 0:width]
    cell = int(rng.integers(10, 15))
    dark, bright = rng.uniform(30, 60), rng.uniform(190, 225)
    out = np.empty((frames, height, width), dtype=np.uint8)
    for t in range(frames):
        parity = (((yy + t) // cell) + ((xx + t) // cell)) % 2
        out[t] = _to_luma(np.where(parity == 0, dark, bright))
    return out


def setup_fading_scene_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Textured still scene fading out and back in, with sensor-like noise.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    scene = 120.0 + _smooth_texture(rng, (height, width), 2.5, 50.0)
    out = np.empty((frames, height, width), dtype=np.uint8)
    for t in range(frames):
        gain = 0.6 + 0.4 * np.cos(2 * np.pi * t / max(frames, 1))
        out[t] = _to_luma(gain * scene + 3.0 * rng.standard_normal((height, width)))
    return out


def setup_rotating_bars_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Soft-edged bars rotating around the frame center.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    yy, xx = _grid(height, width)
    yy -= height / 2
    xx -= width / 2
    period = rng.uniform(20, 32)
    angular_speed = rng.uniform(0.02, 0.04)
    out = np.empty((frames, height, width), dtype=np.uint8)
    for t in range(frames):
        angle = angular_speed * t
        coordinate = xx * np.cos(angle) + yy * np.sin(angle)
        out[t] = _to_luma(128.0 + 90.0 * np.tanh(1.5 * np.sin(2 * np.pi * coordinate / period)))
    return out


def setup_falling_particles_clip(rng: np.random.Generator, frames: int, height: int, width: int) -> np.ndarray:
    """
    Small bright particles falling at different speeds over a smooth background.

    Parameters
    ----------
    rng : np.random.Generator
        Seeded generator.
    frames : int
        Number of frames.
    height : int
        Frame height.
    width : int
        Frame width.

    Returns
    -------
    np.ndarray
        The samples, shape (frames, height, width).
    """
    background = 70.0 + _smooth_texture(rng, (height, width), 8.0, 20.0)
    n_particles = max(8, height * width // 1000)
    rows = rng.uniform(0, height, n_particles)
    cols = rng.integers(0, width - 2, n_particles)
    speed = rng.uniform(2.0, 6.0, n_particles)
    out = np.empty((frames, height, width), dtype=np.uint8)
    for t in range(frames):
        image = background.copy()
        top = ((rows + speed * t) % (height - 2)).astype(int)
        for r, c in zip(top, cols):
            image[r : r + 3, c : c + 3] = 235.0
        out[t] = _to_luma(image)
    return out


CLIP_RECIPES: dict[str, Tuple[Callable[[np.random.Generator, int, int, int], np.ndarray], str]] = {
    "bs1": (setup_static_gradient_clip, "static gradient"),
    "mc1": (setup_scrolling_texture_clip, "scrolling texture"),
    "pa1": (setup_random_pan_clip, "random-walk pan"),
    "pr1": (setup_noise_field_clip, "noise field"),
    "rb1": (setup_bouncing_shapes_clip, "bouncing shapes"),
    "rh1": (setup_zooming_rings_clip, "zooming rings"),
    "sf1": (setup_moving_checker_clip, "moving checker"),
    "sh1": (setup_fading_scene_clip, "fading scene"),
    "st1": (setup_rotating_bars_clip, "rotating bars"),
    "tr1": (setup_falling_particles_clip, "falling particles"),
}


def make_clip(
    name: str,
    seed: int = 0,
    width: int = DEFAULT_WIDTH,
    height: int = DEFAULT_HEIGHT,
    frames: int = DEFAULT_FRAMES,
    fps: Fraction = DEFAULT_FPS,
) -> VideoClip:
    """
    Generate a procedural clip class.

    Parameters
    ----------
    name : str
        Recipe name, a key of ``CLIP_RECIPES``.
    seed : int
        Seed of the recipe's random generator.
    width : int
        Frame width, a multiple of 8.
    height : int
        Frame height, a multiple of 8.
    frames : int
        Number of frames, at least 2.
    fps : Fraction
        Frame rate.

    Returns
    -------
    VideoClip
        The generated clip, labelled with the recipe name.

    Examples
    --------
    >>> clip = make_clip("sf1", seed=3, width=64, height=48, frames=10)
    >>> clip.frame_count
    10
    """
    if name not in CLIP_RECIPES:
        nrvqa_logger.error(f"Unknown clip recipe '{name}'.")
        raise UsageError(f"Unknown clip recipe '{name}', available: {', '.join(CLIP_RECIPES)}.")
    factory, _ = CLIP_RECIPES[name]
    recipe_index = list(CLIP_RECIPES).index(name)
    rng = np.random.default_rng([seed, recipe_index])
    return VideoClip(factory(rng, frames, height, width), fps=fps, clip_id=name)


def make_clip_classes(
    count: int = len(CLIP_RECIPES),
    seed: int = 0,
    width: int = DEFAULT_WIDTH,
    height: int = DEFAULT_HEIGHT,
    frames: int = DEFAULT_FRAMES,
) -> list[VideoClip]:
    """
    Generate the first ``count`` clip classes in recipe order.

    Parameters
    ----------
    count : int
        Number of classes, between 2 and the number of recipes.
    seed : int
        Seed shared by all recipes.
    width : int
        Frame width.
    height : int
        Frame height.
    frames : int
        Number of frames.

    Returns
    -------
    list[VideoClip]
        One clip per class.
    """
    if not 1 <= count <= len(CLIP_RECIPES):
        raise UsageError(f"Between 1 and {len(CLIP_RECIPES)} clip classes can be generated, got {count}.")
    return [make_clip(name, seed, width, height, frames) for name in list(CLIP_RECIPES)[:count]]
