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

import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import numpy.typing as npt

from nrvqa.errors import InvalidClip, IoError, ParseError, TruncatedInput, UnsupportedGeometry
from nrvqa.logging.logger import nrvqa_logger

LumaFrame = npt.NDArray[np.uint8]

BLOCK_SIZE = 8
Y4M_MAGIC = b"YUV4MPEG2"
FRAME_TOKEN = b"FRAME"
# frame headers may carry parameters, anything longer than this is not a frame header
MAX_FRAME_HEADER = 1024
MONO_COLORSPACES = {"mono"}
YUV420_COLORSPACES = {"420", "420jpeg", "420paldv", "420mpeg2"}


def check_frame(frame: Any) -> LumaFrame:
    """
    Validate a single luma frame.

    Parameters
    ----------
    frame : Any
        Candidate frame, a two-dimensional array of 8-bit samples.

    Returns
    -------
    LumaFrame
        The frame as a uint8 array.
    """
    frame = np.asarray(frame)
    if frame.ndim != 2 or frame.dtype != np.uint8:
        nrvqa_logger.error(f"Expected a 2-D uint8 luma frame, got shape {frame.shape} and dtype {frame.dtype}.")
        raise InvalidClip("A luma frame must be a 2-D array of uint8 samples.")
    _check_geometry(frame.shape[1], frame.shape[0])
    return frame


def _check_geometry(width: int, height: int) -> None:
    if width <= 0 or height <= 0 or width % BLOCK_SIZE or height % BLOCK_SIZE:
        nrvqa_logger.error(f"Unsupported geometry {width}x{height}.")
        raise UnsupportedGeometry(f"Frame dimensions {width}x{height} are not positive multiples of {BLOCK_SIZE}.")


@dataclass(frozen=True, eq=False)
class VideoClip:
    """
    An ordered sequence of 8-bit luma frames sharing one geometry.

    Parameters
    ----------
    frames : np.ndarray
        Samples with shape (frame_count, height, width) and dtype uint8. The clip keeps a read-only view.
    fps : Fraction
        Frame rate in frames per second.
    clip_id : str
        Free-form label, the file stem when read from disk.
    """

    frames: np.ndarray
    fps: Fraction = Fraction(25)
    clip_id: str = "clip"

    def __post_init__(self) -> None:
        frames = np.asarray(self.frames)
        if frames.ndim != 3 or frames.shape[0] == 0:
            nrvqa_logger.error(f"Clip '{self.clip_id}' has no frames or a malformed frame array {frames.shape}.")
            raise InvalidClip("A clip needs a (frames, height, width) array with at least one frame.")
        if frames.dtype != np.uint8:
            raise InvalidClip(f"Clip samples must be uint8, got {frames.dtype}.")
        if frames.shape[0] < 2:
            nrvqa_logger.error(f"Clip '{self.clip_id}' has a single frame.")
            raise InvalidClip("A clip needs at least two frames.")
        _check_geometry(frames.shape[2], frames.shape[1])
        fps = Fraction(self.fps)
        if fps <= 0:
            raise InvalidClip(f"Frame rate must be positive, got {fps}.")

        view = frames.view()
        view.flags.writeable = False
        object.__setattr__(self, "frames", view)
        object.__setattr__(self, "fps", fps)

    @classmethod
    def from_frames(
        cls, frames: Sequence[LumaFrame], fps: Fraction = Fraction(25), clip_id: str = "clip"
    ) -> "VideoClip":
        """
        Build a clip from a list of frames.

        Parameters
        ----------
        frames : Sequence[LumaFrame]
            The frames in presentation order.
        fps : Fraction
            Frame rate in frames per second.
        clip_id : str
            Label of the clip.

        Returns
        -------
        VideoClip
            The assembled clip.
        """
        if len(frames) == 0:
            nrvqa_logger.error(f"Clip '{clip_id}' was built from an empty frame list.")
            raise InvalidClip("A clip needs at least two frames, got an empty frame list.")
        checked = [check_frame(frame) for frame in frames]
        if len({frame.shape for frame in checked}) != 1:
            raise InvalidClip("All frames of a clip must share the same geometry.")
        return cls(np.stack(checked), fps=fps, clip_id=clip_id)

    @property
    def width(self) -> int:
        """Frame width in pixels."""
        return int(self.frames.shape[2])

    @property
    def height(self) -> int:
        """Frame height in pixels."""
        return int(self.frames.shape[1])

    @property
    def frame_count(self) -> int:
        """Number of frames."""
        return int(self.frames.shape[0])

    def with_frames(self, frames: np.ndarray) -> "VideoClip":
        """
        Return a clip with the same frame rate and label holding new samples.

        Parameters
        ----------
        frames : np.ndarray
            The replacement samples.

        Returns
        -------
        VideoClip
            The new clip.
        """
        return VideoClip(frames, fps=self.fps, clip_id=self.clip_id)

    def __eq__(self, other: Any) -> bool:
        """Compare clips field by field, samples bit-exactly."""
        if not isinstance(other, VideoClip):
            return NotImplemented
        return (
            self.clip_id == other.clip_id
            and self.fps == other.fps
            and self.frames.shape == other.frames.shape
            and bool(np.array_equal(self.frames, other.frames))
        )

    __hash__ = None  # type: ignore[assignment]


def _parse_header(line: bytes) -> tuple[int, int, Fraction, int]:
    if not line.startswith(Y4M_MAGIC) or not line.endswith(b"\n"):
        raise ParseError("Missing YUV4MPEG2 signature.")
    try:
        tokens = line[len(Y4M_MAGIC) :].decode("ascii").split()
    except UnicodeDecodeError as e:
        raise ParseError("Header is not ASCII.") from e

    fields: dict[str, str] = {}
    for token in tokens:
        fields[token[0]] = token[1:]

    try:
        width, height = int(fields["W"]), int(fields["H"])
        num, den = (int(part) for part in fields["F"].split(":"))
    except (KeyError, ValueError) as e:
        raise ParseError(f"Header lacks a valid W, H or F field: {line!r}") from e
    if num <= 0 or den <= 0:
        raise ParseError(f"Invalid frame rate {num}:{den}.")
    if width <= 0 or height <= 0:
        raise ParseError(f"Invalid dimensions {width}x{height}.")

    colorspace = fields.get("C", "420jpeg")
    if colorspace in MONO_COLORSPACES:
        chroma_bytes = 0
    elif colorspace in YUV420_COLORSPACES:
        chroma_bytes = 2 * ((width + 1) // 2) * ((height + 1) // 2)
    else:
        raise ParseError(f"Unsupported colorspace C{colorspace}, expected 8-bit 4:2:0 or mono.")
    return width, height, Fraction(num, den), chroma_bytes


def read_y4m(path: str | Path) -> VideoClip:
    """
    Read the luma planes of a Y4M file.

    Chroma planes are skipped. The frame buffer is sized from the file length before reading, so frames are read
    in place one at a time.

    Parameters
    ----------
    path : str | Path
        The Y4M file.

    Returns
    -------
    VideoClip
        The clip, labelled with the file stem.

    Raises
    ------
    ParseError
        If the stream or frame headers are malformed.
    UnsupportedGeometry
        If the dimensions are not multiples of 8.
    TruncatedInput
        If a frame payload is cut short.
    """
    path = Path(path)
    try:
        handle = open(path, "rb")
    except OSError as e:
        nrvqa_logger.error(f"Cannot open {path}: {e}")
        raise IoError(f"Cannot open {path}: {e}") from e

    with handle:
        try:
            width, height, fps, chroma_bytes = _parse_header(handle.readline(MAX_FRAME_HEADER))
        except ParseError:
            nrvqa_logger.error(f"Malformed Y4M header in {path}.")
            raise
        _check_geometry(width, height)

        luma_bytes = width * height
        remaining = os.fstat(handle.fileno()).st_size - handle.tell()
        # each frame occupies at least "FRAME\n" plus its planes
        capacity = remaining // (len(FRAME_TOKEN) + 1 + luma_bytes + chroma_bytes)
        frames = np.empty((capacity, height, width), dtype=np.uint8)

        count = 0
        while True:
            frame_header = handle.readline(MAX_FRAME_HEADER)
            if not frame_header:
                break
            if not frame_header.startswith(FRAME_TOKEN):
                raise ParseError(f"Expected a FRAME header at frame {count} in {path}.")
            if not frame_header.endswith(b"\n") or count >= capacity:
                raise TruncatedInput(f"Frame {count} of {path} is truncated.")
            if handle.readinto(memoryview(frames[count]).cast("B")) != luma_bytes:
                nrvqa_logger.error(f"Frame {count} of {path} ends before its luma plane is complete.")
                raise TruncatedInput(f"Frame {count} of {path} is truncated.")
            if chroma_bytes and len(handle.read(chroma_bytes)) != chroma_bytes:
                raise TruncatedInput(f"Chroma planes of frame {count} of {path} are truncated.")
            count += 1

    return VideoClip(frames[:count], fps=fps, clip_id=path.stem)


def write_y4m(clip: VideoClip, path: str | Path) -> None:
    """
    Write a clip as a mono Y4M file.

    Parameters
    ----------
    clip : VideoClip
        The clip to write.
    path : str | Path
        Destination file.
    """
    if not isinstance(clip, VideoClip):
        raise InvalidClip(f"Expected a VideoClip, got {type(clip).__name__}.")
    header = f"YUV4MPEG2 W{clip.width} H{clip.height} F{clip.fps.numerator}:{clip.fps.denominator} Ip A1:1 Cmono\n"
    try:
        with open(path, "wb") as handle:
            handle.write(header.encode("ascii"))
            for frame in clip.frames:
                handle.write(FRAME_TOKEN + b"\n")
                handle.write(frame.tobytes())
    except OSError as e:
        nrvqa_logger.error(f"Cannot write {path}: {e}")
        raise IoError(f"Cannot write {path}: {e}") from e
