"""Toolkit for the clustered-graph form of the rainbow 3-edge-path threshold."""

from .model import (
    ClusteredGraph,
    DerivedQuantities,
    Layout,
    WeightDelta,
    claim7_shift,
    contract,
    densities,
    density_form,
    drop_color,
    extremal,
    f,
    families_for,
    from_json_dict,
    increment,
    load_graph,
    min_density,
    permute_colors,
    proportional_redistribution,
    renormalized,
    save_graph,
    to_json_dict,
    validate,
)

__version__ = "0.1.0"
