"""Benenson automata: simulation, compilation from circuits and branching
programs, circuit extraction, and wet-lab molecule emission."""

from .core import (
    Alphabet,
    BenensonAutomaton,
    CuttingRule,
    accepts,
    check_determinism,
    dump_ben,
    is_deterministic,
    parse_ben,
    reachable_offsets,
    run,
    sparseness,
    step,
)
from .errors import (
    BenensonError,
    DeterminismError,
    GeometryError,
    InvalidOffsetError,
    InvariantError,
    MalformedError,
    PreconditionError,
    ProfileMismatchError,
    UnsupportedAlphabetError,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BenensonAutomaton",
    "CuttingRule",
    "accepts",
    "check_determinism",
    "dump_ben",
    "is_deterministic",
    "parse_ben",
    "reachable_offsets",
    "run",
    "sparseness",
    "step",
    "BenensonError",
    "DeterminismError",
    "GeometryError",
    "InvalidOffsetError",
    "InvariantError",
    "MalformedError",
    "PreconditionError",
    "ProfileMismatchError",
    "UnsupportedAlphabetError",
]
