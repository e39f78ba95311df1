"""Simulation lab for quantum cut-query and additive-query graph algorithms.

Hidden graphs sit behind charged oracles; every algorithm's queries are
counted in a ledger and can be checked against closed-form costs.
"""

from .adversary import build_adversary_pair, fredholm_certificate, symvec
from .connectivity import (approx_degree_sequence, connected_components, contract, learn_low,
                           reduce_high, shrink)
from .costs import verify_ledger
from .counting import approximate_count, r_test_success_prob, sample_hitting_set
from .estimators import (ApproximateCounter, ConnectedComponents, GraphLearner, MatrixLearner,
                         SpanningForestFinder, SparseSketch)
from .exceptions import (CapacityError, DecodingAmbiguity, DisjointnessError, ModeError,
                         NonTerminationError, ParameterError, RankError, RecoveryFailure,
                         SimulationIntegrityError, SolvableError)
from .experiments import fit_exponent, run_trial, scale, write_csv
from .forest import (spanning_forest, test_acyclic, test_bipartite, test_empty_subgraph,
                     witness_contract, witness_low_high, witness_low_low, witness_reduce_high,
                     witness_shrink)
from .graph import (BipartiteSplit, SpanningForest, WeightedGraph, additive_value, check_forest,
                    cut_value, generate, read_graph, reference_components, reference_is_acyclic,
                    reference_is_bipartite, write_graph)
from .graph_learn import learn_bipartite_cut, learn_graph_additive, learn_graph_cut, learn_graph_cut_full
from .matrix_learn import degree_sequence, learn_dense, learn_m_nonzeros, learn_sparse_rows
from .oracles import (AdjacencyOracle, BiadjacencyOracle, ExplicitMatrixOracle, OracleHandle,
                      QueryLedger, biadjacency_cut_query, cut_via_additive,
                      disjoint_matrix_cut_via_cut, matrix_cut_via_additive)
from .profiles import DESK, PAPER, Profile, get_profile
from .quantum import compute_Ay_mod, qft_learn_subset_sums, statevector_validate
from .sketch import Sketch, SketchSpec, decode, signature

__version__ = "0.1.0"
