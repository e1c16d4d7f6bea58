"""Exact Novikov, filtered-complex, torus Floer and cobordism-metric computations."""

from artifact._core import (
    boundary_level,
    hf_rank,
    homology_rank,
    intersection_count,
    nov_add,
    nov_mul,
    planar_shadow,
    relative_width,
    repro_lemma,
    run_scenario,
    twisted_square_zero,
    valuation,
)

__all__ = [
    "boundary_level",
    "hf_rank",
    "homology_rank",
    "intersection_count",
    "nov_add",
    "nov_mul",
    "planar_shadow",
    "relative_width",
    "repro_lemma",
    "run_scenario",
    "twisted_square_zero",
    "valuation",
]
