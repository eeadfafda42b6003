"""Executable laboratory for zero-weight-triangle and 3SUM reductions.

The package turns a family of fine-grained reductions into concrete,
testable instance transformations: digit decompositions with a constant
carry set, sparse label-graph constructions, mod-p weight compression,
degree-bounded pruning, an All-Nodes listing recursion, a deterministic
near-zero witness-table pipeline, and a few-zero-4-cycle driver.  Every
transformation is checked against brute-force oracles at desk scale.
"""

from __future__ import annotations

from .campaigns import CAMPAIGNS, UsageError, run_campaign
from .cli import bench_ladder, main, run_command
from .det_reduction import (
    B0,
    TOL,
    DetStats,
    LevelStats,
    base_case,
    build_instance,
    det_reduce,
    halve,
    lift_level,
    near_zero_table,
    scale_by_4,
)
from .digit_reduction import (
    ANListResult,
    DecomposedThreeSum,
    DeltaSet,
    DigitTriple,
    NoPrimeInRangeError,
    PrimeDraw,
    ShiftFunction,
    audit_mod_p,
    build_sparse_3sum,
    build_sparse_exact,
    build_sparse_unbalanced,
    decode_3sum_triangle,
    decompose_graph,
    decompose_graph_mixed,
    degree_bounded_sparse,
    degree_threshold,
    delta_set,
    delta_set_mixed,
    detect_via_sparse,
    digit_decompose,
    digit_reconstruct,
    exact_tri_via_an,
    exact_tri_via_listing,
    icbrt_ceil,
    is_prime,
    list_via_an_oracle,
    mod_p_range,
    mod_p_reduce,
    random_prime,
    random_shift,
    residue_target_triples,
    retarget,
    threesum_via_listing,
)
from .four_cycles import (
    FewC4Observer,
    HeavyPairContext,
    SubInstance,
    bucket_split,
    estimate_zero_4cycles,
    fredman_e0,
    heavy_pair,
    pad_to_bound,
    remove_edge_set,
    solve_with_fewc4_oracle,
    zero_tri_through_e0,
)
from .instances import (
    ThreeSumInstance,
    TriangleWitness,
    UndirectedWeightedGraph,
    UnweightedTripartiteGraph,
    WeightedTripartiteGraph,
    antisymmetrize,
    decode_triangle,
    gen_3sum,
    gen_exact_tri,
    gen_undirected,
    parse_instance,
    serialize_instance,
    verify_witness,
)
from .oracles import (
    TriangleListing,
    all_edges_triangle,
    all_nodes_triangle,
    brute_3sum,
    brute_exact_triangles,
    count_zero_4cycles_brute,
    detect_triangle,
    equality_product_queries,
    list_triangles,
    near_zero_witness_table_brute,
)
from .report import ReductionReport, canonical_json
from .tables import EdgeFlagTable, NodeFlagTable, WitnessTable

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
