"""Quantum hitting times for Szegedy walks on bipartite-duplicated Markov
chains, with closed-form results on the complete graph."""

from .chebyshev import cheb_t, cheb_t_rec, cheb_u, cheb_u_rec
from .complete_graph import (
    AsymptoticConstants,
    CompleteGraphParams,
    ReducedSpectrum,
    asymptotic_H,
    asymptotic_probabilities,
    closed_F,
    closed_pM,
    closed_state,
    eigenvalue_one_closed,
    hitting_time_closed,
    inv_sinc_half,
    limiting_F,
    reduced_spectrum,
    t_max,
    t_max_asymptotic,
)
from .markov import (
    AbsorbingChain,
    MarkovChain,
    ReducedMatrix,
    absorb,
    complete_graph,
    load_chain,
    mark_last,
    mark_vertices,
    reduced,
    relabel_marked_last,
)
from .operators import (
    Discriminant,
    WalkOperators,
    WalkState,
    build_operators,
    discriminant,
)
from .simulate import (
    EvolutionTrace,
    F_of_T,
    HittingReport,
    NoCrossingError,
    WalkBundle,
    dist2_chebyshev,
    evolve_direct,
    evolve_spectral,
    hitting_time,
    initial_state,
    prepare_walk,
    success_probability,
)
from .spectral import (
    DegenerateAngleError,
    OverlapCoefficients,
    RotationalPair,
    SingularTriple,
    WalkSpectrum,
    eigenvalue_one_component,
    overlap_coefficients,
    svd_discriminant,
    walk_eigenpairs,
)

__version__ = "0.1.0"

__all__ = [
    "AbsorbingChain",
    "AsymptoticConstants",
    "CompleteGraphParams",
    "DegenerateAngleError",
    "Discriminant",
    "EvolutionTrace",
    "F_of_T",
    "HittingReport",
    "MarkovChain",
    "NoCrossingError",
    "OverlapCoefficients",
    "ReducedMatrix",
    "ReducedSpectrum",
    "RotationalPair",
    "SingularTriple",
    "WalkBundle",
    "WalkOperators",
    "WalkSpectrum",
    "WalkState",
    "absorb",
    "asymptotic_H",
    "asymptotic_probabilities",
    "build_operators",
    "cheb_t",
    "cheb_t_rec",
    "cheb_u",
    "cheb_u_rec",
    "closed_F",
    "closed_pM",
    "closed_state",
    "complete_graph",
    "discriminant",
    "dist2_chebyshev",
    "eigenvalue_one_closed",
    "eigenvalue_one_component",
    "evolve_direct",
    "evolve_spectral",
    "hitting_time",
    "hitting_time_closed",
    "initial_state",
    "inv_sinc_half",
    "limiting_F",
    "load_chain",
    "mark_last",
    "mark_vertices",
    "overlap_coefficients",
    "prepare_walk",
    "reduced",
    "reduced_spectrum",
    "relabel_marked_last",
    "success_probability",
    "svd_discriminant",
    "t_max",
    "t_max_asymptotic",
    "walk_eigenpairs",
]
