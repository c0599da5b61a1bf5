"""Angle chains in finite point sets: counting, constructions and scaling analysis."""

from .errors import *  # noqa: F401,F403
from .geometry import AngleSpec, PointSet, SimilarityTransform, angle_cosine, matches_angle, parse_angle, apply_similarity
from .counting import (
    ChainQuery, CountReport, Pin, count_chains, count_chains_bruteforce, count_chains_dp,
    count_middle_pinned_triples, count_pairs_at_distance, count_pinned_chains, count_rich_lines,
    count_triples_planar_fast, query,
)
from .constructions import ConstructionOutput, GENERATORS, designated_chains, generate

__version__ = "0.1.0"
