"""Online and dynamic geometric set cover / hitting set, in exact integer arithmetic."""

from .bbdcover import BBDCover, BBDTree, depth_guard
from .dynamic import DynamicHittingSet, DynamicSetCover
from .engine import CoverDelta, CoverEngine
from .errors import GeometryError, InfeasibleError, ParseError, PreconditionError
from .evaluation import (
    IntervalCoverState,
    LowerBoundInstance,
    OracleResult,
    gen_quadrant_lb,
    gen_unitsquare_lb,
    opt_hitting_set,
    opt_set_cover,
    play_halving_adversary,
    play_interval_adversary,
)
from .extquad import Fragment, FragmentIndex, FreqMetrics
from .geometry import AxisBox, Point, RankMap, rank_space_reduce
from .harness import ALGORITHMS, RunMetrics, run_experiment, write_csv
from .hitcover import HittingState
from .instancefile import Instance, parse_instance, parse_text, serialize
from .quadcover import QuadtreeCover, offline_cover
from .transforms import (
    point_to_cube,
    point_to_dual,
    rect_to_cube,
    rect_to_point,
    round_weight,
    weight_classes,
)

__all__ = [
    "ALGORITHMS",
    "AxisBox",
    "BBDCover",
    "BBDTree",
    "CoverDelta",
    "CoverEngine",
    "DynamicHittingSet",
    "DynamicSetCover",
    "Fragment",
    "FragmentIndex",
    "FreqMetrics",
    "GeometryError",
    "HittingState",
    "InfeasibleError",
    "Instance",
    "IntervalCoverState",
    "LowerBoundInstance",
    "OracleResult",
    "ParseError",
    "Point",
    "PreconditionError",
    "QuadtreeCover",
    "RankMap",
    "RunMetrics",
    "depth_guard",
    "gen_quadrant_lb",
    "gen_unitsquare_lb",
    "offline_cover",
    "opt_hitting_set",
    "opt_set_cover",
    "parse_instance",
    "parse_text",
    "play_halving_adversary",
    "play_interval_adversary",
    "point_to_cube",
    "point_to_dual",
    "rank_space_reduce",
    "rect_to_cube",
    "rect_to_point",
    "round_weight",
    "run_experiment",
    "serialize",
    "weight_classes",
]
