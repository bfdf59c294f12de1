"""Tie-strength measures on ego networks: embeddedness, dispersion and bridging baselines."""

__version__ = "0.1.0"

from .baselines import betweenness_scores, constraint_scores
from .dispersion import (DispersionProfile, ParametricParams, RecursiveState, ScoreTable, absolute_dispersion,
                         normalized_dispersion, parametric_score, recursive_dispersion, recursive_step)
from .distances import DistanceSpec, louvain, pairwise_distance, spring_layout, connected_components
from .graph import (EgoNetwork, EgoNetworkError, build_ego_network, common_neighbors, embeddedness,
                    remove_nodes)
from .ranking import Instance, Measure, Prediction, evaluate, rank, sweep_parametric, two_hop_predict

__all__ = [
    "DispersionProfile", "DistanceSpec", "EgoNetwork", "EgoNetworkError", "Instance", "Measure",
    "ParametricParams", "Prediction", "RecursiveState", "ScoreTable", "absolute_dispersion",
    "betweenness_scores", "build_ego_network", "common_neighbors", "connected_components",
    "constraint_scores", "embeddedness", "evaluate", "louvain", "normalized_dispersion", "pairwise_distance",
    "parametric_score", "rank", "recursive_dispersion", "recursive_step", "remove_nodes", "spring_layout",
    "sweep_parametric", "two_hop_predict",
]
