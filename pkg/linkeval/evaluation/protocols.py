from dataclasses import dataclass
from pathlib import Path
from typing import ClassVar

from core.errors import ProtocolError, UsageError


@dataclass(frozen=True)
class NonSampling:
    """Rank the truth among every entity of the test graph."""

    name: ClassVar[str] = "non-sampling"


@dataclass(frozen=True)
class RandomSampling:
    """Rank the truth among ``negatives`` uniformly drawn entities, ``runs`` times."""

    name: ClassVar[str] = "random"

    runs: int = 100
    negatives: int = 49
    exclude_known: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise ProtocolError(f"runs must be >= 1, got {self.runs}")
        if self.negatives < 1:
            raise ProtocolError(f"negatives must be >= 1, got {self.negatives}")


@dataclass(frozen=True)
class TypeMatched:
    """Rank the truth among the negatives of a TMN file."""

    name: ClassVar[str] = "tmn"

    negatives_file: Path
    strict: bool = False


Protocol = NonSampling | RandomSampling | TypeMatched

PROTOCOL_NAMES = (NonSampling.name, RandomSampling.name, TypeMatched.name)


def make_protocol(
    name: str,
    runs: int = 100,
    negatives: int = 49,
    tmn_file: Path | str | None = None,
    exclude_known: bool = False,
) -> Protocol:
    match name:
        case "non-sampling" | "nonsampling" | "full":
            return NonSampling()
        case "random":
            return RandomSampling(runs=runs, negatives=negatives, exclude_known=exclude_known)
        case "tmn" | "type-matched":
            if not tmn_file:
                raise UsageError("protocol tmn requires --tmn-file")
            return TypeMatched(negatives_file=Path(tmn_file))
        case _:
            raise UsageError(f"Unknown protocol: {name}. Use one of {', '.join(PROTOCOL_NAMES)}")
