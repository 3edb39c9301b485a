"""Random regular graphs: configuration-model sampling, exact counts,
structural checks, exact and list coloring, and a seeded experiment harness."""

from .coloring import (chromatic_number, dsatur_coloring, greedy_coloring, k_colorable,
                       list_coloring_greedy, max_clique)
from .counts import (class_size, class_size_table, expected_internal_pairs, prob_simple,
                     ratio_f, tail_bound_internal)
from .enumerate import enumerate_regular
from .errors import (InputError, NumericalError, RRGError, SamplingError, ScopeError,
                     UndefinedRatioError)
from .extension import ExtensionInstance, ExtensionParams, extend_coloring
from .graph import Coloring, Graph, MultiGraph, RegularGraph, is_proper_coloring
from .pairing import Pairing, mix_seed, random_pairing, sample_simple
from .structure import gamma_report, mixing_check, spectral_lambda

__version__ = "0.1.0"

__all__ = [
    "Coloring", "ExtensionInstance", "ExtensionParams", "Graph", "InputError", "MultiGraph",
    "NumericalError", "Pairing", "RRGError", "RegularGraph", "SamplingError", "ScopeError",
    "UndefinedRatioError", "chromatic_number", "class_size", "class_size_table",
    "dsatur_coloring", "enumerate_regular", "expected_internal_pairs", "extend_coloring",
    "gamma_report", "greedy_coloring", "is_proper_coloring", "k_colorable",
    "list_coloring_greedy", "max_clique", "mix_seed", "mixing_check", "prob_simple",
    "random_pairing", "ratio_f", "sample_simple", "spectral_lambda", "tail_bound_internal",
]
