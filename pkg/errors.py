"""
Exception hierarchy for the Green-PointHop pipeline.

Every error carries an ``exit_code`` so the CLI can map failures to distinct
process statuses (config=2, data=3, numeric=4).
"""

from typing import Optional


class GreenHopError(Exception):
    exit_code = 1


class InvalidInputError(GreenHopError, ValueError):
    """Argument outside an operation's precondition."""
    exit_code = 3


class ConfigError(GreenHopError):
    exit_code = 2


# ---- data ----
class DataError(GreenHopError):
    exit_code = 3

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{where}{message}")


class ManifestError(DataError):
    pass


class PointFileError(DataError):
    pass


class LayoutError(DataError):
    pass


# ---- numerics ----
class NumericalError(GreenHopError):
    exit_code = 4


class DegenerateTrainingError(NumericalError):
    def __init__(self, message: str, rank: Optional[int] = None):
        self.rank = rank
        super().__init__(message)


class NumericalRankError(NumericalError):
    pass


# ---- model files ----
class ModelFormatError(GreenHopError):
    exit_code = 3


class BadMagicError(ModelFormatError):
    pass


class UnsupportedVersionError(ModelFormatError):
    def __init__(self, found: int, supported: int):
        self.found = found
        self.supported = supported
        super().__init__(f"Unsupported model format_version {found} (this build reads {supported})")


class TruncatedModelError(ModelFormatError):
    pass


class ChecksumError(ModelFormatError):
    pass
