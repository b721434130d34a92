"""Liouville numbers of prescribed normality and finite-state dimension."""
from .constructions import ConstructionRecipe, DigitStream, Kind, StageSchedule, make_stream, stage_boundary, take_prefix
from .debruijn import DeBruijnSequence, cyclic_occurrences, generate_debruijn
from .digits import BudgetExceededError
from .exact import ExactRational, convergent, expansion_digits, verify_liouville, verify_liouville_stage

__all__ = [
    "BudgetExceededError",
    "ConstructionRecipe",
    "DeBruijnSequence",
    "DigitStream",
    "ExactRational",
    "Kind",
    "StageSchedule",
    "convergent",
    "cyclic_occurrences",
    "expansion_digits",
    "generate_debruijn",
    "make_stream",
    "stage_boundary",
    "take_prefix",
    "verify_liouville",
    "verify_liouville_stage",
]
