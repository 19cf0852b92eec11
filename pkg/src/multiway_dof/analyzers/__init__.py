"""Upper bounds and the regime catalog."""

from .bounds import dof_upper_bound, genie_schedule
from .catalog import classify, classify_2x2, classify_2x3, classify_symmetric

__all__ = [
    "dof_upper_bound",
    "genie_schedule",
    "classify",
    "classify_2x2",
    "classify_2x3",
    "classify_symmetric",
]
