"""Branch-width and weak ultrafilters on finite connectivity systems."""

from .core import (AxiomReport, CapacityError, ConnectivitySystem, CutRank, GraphCut,
                   GroundSet, InputError, Table, WeightedGraphCut, enumerate_k_efficient,
                   is_k_efficient, verify_lemma2, verify_submodularity, verify_symmetry)
from .decomposition import (DecompositionTree, brute_force_branchwidth, edge_side_set,
                            enumerate_all_trees, exact_branchwidth, width_of_edge,
                            width_of_tree)
from .ultrafilter import (SearchConfig, SetFamily, brute_force_enumerate, check_axiom,
                          check_classical, enumerate_families, is_weak_ultrafilter,
                          max_order, search, search_tangle)

__version__ = "0.1.0"
