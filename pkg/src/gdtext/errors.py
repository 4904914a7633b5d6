"""Exception types raised by the localization pipeline."""


class GDTextError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(GDTextError, ValueError):
    pass


class ShapeError(GDTextError, ValueError):
    pass


class TooShortError(ShapeError):
    """Signal or image axis is too short for the requested operation."""


class LevelOverflowError(ShapeError):
    """More decomposition levels were requested than the image size allows."""


class EmptyInputError(GDTextError):
    pass


class PipelineError(GDTextError):
    """Wraps a failure inside :func:`gdtext.pipeline.run_pipeline` with the stage name."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
