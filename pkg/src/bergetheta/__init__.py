"""Berge paths and thetas in uniform hypergraphs.

Greedy m-set reduction with its multiplicity bound, random polynomial
hypergraphs over prime fields, path censuses and exact theta search.
"""

from .hypergraph import (
    BergePathWitness,
    Hypergraph,
    HypergraphError,
    ParseError,
    ThetaWitness,
    build,
    validate_path,
    validate_theta,
)
from .reduction import ReducedGraph, ReductionParams, lift_theta, multiplicity_bound, reduce
from .search import (
    PathQuery,
    SearchInconclusive,
    count_paths,
    enumerate_paths,
    find_theta,
    is_theta_free,
)

__version__ = "0.1.0"
