"""Rewriting over finite sets and rational vector spaces: termination by
filtrations, strategies, and confluence certificates."""

from .carrier import CarrierMap, CarrierObject, Kind, coequalizer, finite_set, pullback, vector_space
from .confluence import (
    LcStructure,
    ac_suite,
    bridge_lemma_check,
    lc_structure_from_ac1,
    newman,
    newman_algebraic,
    sc_suite,
    search_lc_structure_set,
    verify_lc_structure,
)
from .filtration import DirectedPoset, Filtration, filtration_from_height, filtration_from_terminating_relation
from .graph import InternalGraph, Path, linear_graph, quotient_by_graph, set_graph
from .linear import AlgebraicRelation, algebraic_relation, monic_polynomial_relation, wf_normalize
from .strategy import (
    GlobalStrategy,
    induce_global_strategy,
    is_confluent_strategy,
    normal_form,
    split_coequalizer_certificate,
)
from .termination import (
    LocalStrategy,
    local_strategy_from_choices,
    strategy_from_algebraic_relation,
    strategy_from_set_relation,
    transport_strategy,
    verify_local_strategy,
)
from .vector import Vec

__all__ = [name for name in dir() if not name.startswith("_")]
