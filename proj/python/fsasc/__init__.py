"""Subspace clustering with filtrated algebraic affinities."""

from ._fsasc import (
    CapacityError,
    ContractError,
    HomoPoly,
    NumericalError,
    ParseError,
    angle_affinity,
    beta_statistic,
    cluster,
    clustering_error,
    distance_affinity,
    exponents,
    fit_vanishing,
    inter_connectivity,
    intra_connectivity,
    monomial_count,
    run_experiment,
    sample_cloud,
    set_worker_count,
    veronese,
)

__all__ = [name for name in dir() if not name.startswith("_")]
