from pathlib import Path


class LinkEvalError(ValueError):
    """Base class for every error the CLI turns into a non-zero exit."""


class ParseError(LinkEvalError):
    def __init__(self, path: Path | str, line: int, reason: str):
        self.path = Path(path)
        self.line = line
        super().__init__(f"{path}:{line}: {reason}")


class MissingSplitError(LinkEvalError):
    def __init__(self, split: str, path: Path | str):
        self.split = split
        self.path = Path(path)
        super().__init__(f"missing split: {split} ({path})")


class UnknownSymbolError(LinkEvalError):
    pass


class PredictionFileError(LinkEvalError):
    pass


class NegativesFileError(LinkEvalError):
    pass


class ProtocolError(LinkEvalError):
    pass


class MetricError(LinkEvalError):
    pass


class UsageError(LinkEvalError):
    """Bad combination of command-line flags; exits with code 2."""
