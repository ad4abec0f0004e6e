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


class NrvqaError(Exception):
    """
    Base class of every error raised by nrvqa.

    Parameters
    ----------
    message : str, optional
        The message to display when the exception is raised.
    """

    exit_code: int = 1

    def __init__(self, message: str = "An nrvqa operation failed.") -> None:
        super().__init__(message)


class UsageError(NrvqaError):
    """
    Raised when an operation is invoked with an unknown name, key or option.

    Parameters
    ----------
    message : str, optional
        The message to display when the exception is raised.
    """

    exit_code = 1

    def __init__(self, message: str = "Invalid usage.") -> None:
        super().__init__(message)


class DataError(NrvqaError):
    """
    Raised when input data (clips, datasets, feature vectors) violates its contract.

    Parameters
    ----------
    message : str, optional
        The message to display when the exception is raised.
    """

    exit_code = 2

    def __init__(self, message: str = "Invalid input data.") -> None:
        super().__init__(message)


class TrainingError(NrvqaError):
    """
    Raised when a learner cannot be fitted on the given data.

    Parameters
    ----------
    message : str, optional
        The message to display when the exception is raised.
    """

    exit_code = 3

    def __init__(self, message: str = "Training failed.") -> None:
        super().__init__(message)


class ParseError(DataError):
    """Raised when a container header or a file section cannot be parsed."""

    def __init__(self, message: str = "Malformed header.") -> None:
        super().__init__(message)


class UnsupportedGeometry(DataError):
    """Raised when frame dimensions are not multiples of the 8-pixel block grid."""

    def __init__(self, message: str = "Frame dimensions must be multiples of 8.") -> None:
        super().__init__(message)


class TruncatedInput(DataError):
    """Raised when a frame payload ends before its declared size."""

    def __init__(self, message: str = "Truncated frame payload.") -> None:
        super().__init__(message)


class InvalidClip(DataError):
    """Raised when a clip violates its invariants (frame count, shared geometry, sample type)."""

    def __init__(self, message: str = "Invalid clip.") -> None:
        super().__init__(message)


class IoError(DataError):
    """Raised when a file cannot be read or written."""

    def __init__(self, message: str = "I/O failure.") -> None:
        super().__init__(message)


class MtuTooSmall(DataError):
    """Raised when the MTU cannot carry a single macroblock row plus the packet header."""

    def __init__(self, message: str = "MTU too small for one macroblock row.") -> None:
        super().__init__(message)


class GeometryMismatch(DataError):
    """Raised when two frames, clips or a stream and its template disagree on geometry."""

    def __init__(self, message: str = "Geometry mismatch.") -> None:
        super().__init__(message)


class AlignmentError(DataError):
    """Raised when reference and distorted clips have different frame counts."""

    def __init__(self, message: str = "Frame count mismatch between reference and distorted clip.") -> None:
        super().__init__(message)


class DegenerateFeature(DataError):
    """
    Raised when a feature takes a single value over the whole fitting corpus.

    Parameters
    ----------
    feature : str
        Name of the degenerate feature.
    """

    def __init__(self, feature: str) -> None:
        self.feature = feature
        super().__init__(f"Feature '{feature}' is constant over the corpus and cannot be normalized.")


class SchemaError(DataError):
    """
    Raised when a dataset file does not follow the expected schema.

    Parameters
    ----------
    column : str
        The offending column or section.
    """

    def __init__(self, column: str) -> None:
        self.column = column
        super().__init__(column)


class BadSplit(DataError):
    """Raised when a split plan cannot partition the dataset."""

    def __init__(self, message: str = "Invalid split parameters.") -> None:
        super().__init__(message)


class UnknownClass(DataError):
    """Raised when a requested video class is absent from the dataset."""

    def __init__(self, message: str = "Unknown video class.") -> None:
        super().__init__(message)


class DimensionError(DataError):
    """Raised when a feature vector does not have the expected number of components."""

    def __init__(self, message: str = "Feature vector has the wrong dimension.") -> None:
        super().__init__(message)


class UndefinedCorrelation(DataError):
    """Raised when a correlation is requested for a constant sequence."""

    def __init__(self, message: str = "Correlation is undefined for a constant sequence.") -> None:
        super().__init__(message)
