"""Error types shared by every stage, each mapped to a CLI exit code.

None of these derive from ValueError: pydantic turns ValueErrors raised inside
validators into ValidationError, and domain models must surface the DataError itself.
"""


class GraphDRError(Exception):
    """Base error. `exit_code` is what the CLI returns when it surfaces."""
    exit_code = 1


class ConfigError(GraphDRError):
    """Bad parameters, unknown recipe/method names, unreadable config files."""
    exit_code = 2


class DataError(GraphDRError):
    """Input data or graph violates a precondition."""
    exit_code = 3


class NumericError(GraphDRError):
    """A numerical procedure failed to converge or hit a degenerate case."""
    exit_code = 4


class PipelineStageError(GraphDRError):
    """Wraps a stage failure with the stage name, keeping the cause's exit code."""

    def __init__(self, stage: str, cause: GraphDRError):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code
