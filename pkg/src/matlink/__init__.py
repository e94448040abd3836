"""Hybrid node-link / adjacency-matrix visualization engine.

Communities of an underlying graph are aggregated into ordered groups;
groups of two or more members render as embedded adjacency-matrix glyphs
inside an energy-based node-link layout, with full editing semantics,
staged animated transitions between the two depictions, and structural
pattern classification.
"""

from .graph import (
    GraphDocument,
    GraphFormatError,
    MetricError,
    clustering_coefficient,
    connected_components,
    density,
    load_graph,
    serialize_graph_json,
    small_world_graph,
)
from .grouping import GroupingError, GroupingState, initial_state
from .layout import LayoutState, LinLogParams, linlog_energy, relax
from .scene import Scene, StyleConfig, build_scene, scene_hash
from .render import render_svg
from .animation import AnimationSpec, plan_transition
from .patterns import PatternReport, PatternThresholds, classify
from .session import Session, run_session

__all__ = [
    "GraphDocument",
    "GraphFormatError",
    "MetricError",
    "GroupingError",
    "GroupingState",
    "LayoutState",
    "LinLogParams",
    "Scene",
    "StyleConfig",
    "AnimationSpec",
    "PatternReport",
    "PatternThresholds",
    "Session",
    "build_scene",
    "classify",
    "clustering_coefficient",
    "connected_components",
    "density",
    "initial_state",
    "linlog_energy",
    "load_graph",
    "plan_transition",
    "relax",
    "render_svg",
    "run_session",
    "scene_hash",
    "serialize_graph_json",
    "small_world_graph",
]

__version__ = "0.1.0"
