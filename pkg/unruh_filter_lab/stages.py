"""Stage registry for the channel-pipeline language."""
import logging
import math
import typing as t
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

from app.models.models import MU_MAX, R_MAX, FilterMode, PairPolicy, Subsystem

logger = logging.getLogger(__name__)


@dataclass
class StageArg:
    """Stage argument."""

    name: str
    type: t.Any
    description: str
    required: bool = True
    default: t.Any = None
    # (low, high, closed) for numbers; closed=False excludes both endpoints
    bounds: Optional[Tuple[float, float, bool]] = None
    bounds_text: str = ""

    @property
    def choices(self) -> Tuple[str, ...]:
        if isinstance(self.type, type) and issubclass(self.type, Enum):
            return tuple(member.value for member in self.type)
        return ()

    def out_of_range(self, value: float) -> bool:
        if self.bounds is None:
            return False
        low, high, closed = self.bounds
        if closed:
            return not low <= value <= high
        return not low < value < high


@dataclass
class Stage:
    """Stage definition."""

    name: str
    description: str
    args: List[StageArg]
    terminal: bool = False
    # cross-argument rule; returns an error message or None
    check: Optional[Callable[[Dict[str, Any], Dict[str, Any]], Optional[str]]] = field(
        default=None, repr=False
    )

    def arg(self, name: str) -> Optional[StageArg]:
        for arg in self.args:
            if arg.name == name:
                return arg
        return None


def _strength_arg(name: str, description: str) -> StageArg:
    return StageArg(
        name=name,
        type=float,
        description=description,
        required=False,
        bounds=(0.0, 1.0, False),
        bounds_text="(0, 1)",
    )


def _positive_arg(name: str, description: str, default: Optional[float]) -> StageArg:
    return StageArg(
        name=name,
        type=float,
        description=description,
        required=False,
        default=default,
        bounds=(0.0, math.inf, False),
        bounds_text="(0, inf)",
    )


def _check_accel(given: Dict[str, Any], resolved: Dict[str, Any]) -> Optional[str]:
    if ("r" in given) == ("a" in given):
        return "accel needs exactly one of r or a"
    if "r" in given and ("omega" in given or "c" in given):
        return "omega and c only apply together with a"
    return None


def _check_filter(given: Dict[str, Any], resolved: Dict[str, Any]) -> Optional[str]:
    if resolved["part"] == Subsystem.QUBIT:
        if "kappa" not in given or "Q" in given:
            return "a qubit filter takes kappa, not Q"
        if resolved["mode"] != FilterMode.POSTSELECT:
            return "a qubit filter only supports mode=postselect"
        if "pair" in given:
            return "pair only applies to a qutrit filter"
    elif "Q" not in given or "kappa" in given:
        return "a qutrit filter takes Q, not kappa"
    elif resolved["mode"] == FilterMode.CHANNEL and given.get("pair") == PairPolicy.DISCARD:
        return "pair=discard only applies to mode=postselect; a channel keeps the pair level"
    return None


# Define the stages of the pipeline language
STAGES = [
    Stage(
        name="state",
        description="Prepare the one-parameter qubit-qutrit state",
        args=[
            StageArg(
                name="mu",
                type=float,
                description="Family parameter",
                bounds=(0.0, MU_MAX, True),
                bounds_text="[0, 0.5]",
            ),
        ],
    ),
    Stage(
        name="accel",
        description="Accelerate one subsystem and trace out region II",
        args=[
            StageArg(name="part", type=Subsystem, description="Accelerated subsystem"),
            StageArg(
                name="r",
                type=float,
                description="Rindler parameter",
                required=False,
                bounds=(0.0, R_MAX, True),
                bounds_text="[0, pi/4]",
            ),
            _positive_arg("a", "Proper acceleration (alternative to r)", None),
            _positive_arg("omega", "Mode frequency, used with a", 1.0),
            _positive_arg("c", "Speed of light, used with a", 1.0),
        ],
        check=_check_accel,
    ),
    Stage(
        name="filter",
        description="Apply a local filter to one subsystem",
        args=[
            StageArg(name="part", type=Subsystem, description="Filtered subsystem"),
            _strength_arg("kappa", "Qubit filter strength"),
            _strength_arg("Q", "Qutrit filter strength"),
            StageArg(
                name="mode",
                type=FilterMode,
                description="postselect or channel",
                required=False,
                default=FilterMode.POSTSELECT,
            ),
            StageArg(
                name="pair",
                type=PairPolicy,
                description="Pair-level policy on an accelerated qutrit (keep for a channel)",
                required=False,
            ),
        ],
        check=_check_filter,
    ),
    Stage(
        name="negativity",
        description="Negativity of the current state",
        args=[],
        terminal=True,
    ),
    Stage(
        name="dump",
        description="Print the current density matrix",
        args=[],
        terminal=True,
    ),
]

# Create a mapping of stage names to stage objects
STAGE_MAP = {stage.name: stage for stage in STAGES}
