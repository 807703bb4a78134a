"""ctutor: program-similarity engine and tutoring hints for introductory C.

Pipeline: parse C source, flatten it to a normalized token stream, compare
programs with a weighted edit distance, cluster per-problem submissions,
and turn edit scripts against near neighbors into anonymized hints.
"""

from .cluster import DistanceMatrix, build_snapshot  # noqa: F401
from .cparse import parse  # noqa: F401
from .distance import Weights, program_distance  # noqa: F401
from .hints import filter_hints, script_to_hints  # noqa: F401
from .linear import LinearProgram, program_from_text, program_to_text  # noqa: F401
from .normalize import normalize  # noqa: F401

__version__ = "0.1.0"
