"""Small circuits for dense 0/1 linear operators over semigroups."""
from .circuit import (Circuit, PathMultiplicity, evaluate, is_regular, parse, path_multiplicity,
                      prune, reverse, serialize, to_binary)
from .errors import SemicircError
from .graphs import GraphExpr, build_dense_graph_expr, eval_graph_expr
from .matrix import Matrix01, format_matrix, parse_matrix
from .ranges import (build_blocks, build_decompose, build_prefix_suffix, build_window_all_ranges,
                     query_blocks, query_decompose)
from .semirings import SEMIRINGS, get_semiring, matmul_complement_sparse
from .semigroups import Multiset, SemigroupInstance, Word, catalog, combine, fold_ordered
from .synth import (SynthParams, SynthReport, build_one_zero_per_row, synth_heavy_rows,
                    synth_light_rows, synthesize)

__version__ = "0.1.0"
