"""Network motif detection by compression."""

from .canon import CanonicalGraph, canonicalize, is_connected
from .codes import dm_codelength, log_binomial, log_factorial, log_multinomial, nat_codelength
from .graph import DegreeSequence, Graph, degree_sequence, induced_subgraph, load_edgelist
from .motifcode import (InstanceList, build_template, exdegree, log_factor, motif_codelength, prune_search,
                        reconstruct, remove_overlaps)
from .nullmodels import IntervalBits, NullModelKind
from .sampler import run_sampling, sample_instance, top_candidates

__version__ = "0.1.0"

__all__ = [
    "CanonicalGraph", "canonicalize", "is_connected",
    "dm_codelength", "log_binomial", "log_factorial", "log_multinomial", "nat_codelength",
    "DegreeSequence", "Graph", "degree_sequence", "induced_subgraph", "load_edgelist",
    "InstanceList", "build_template", "exdegree", "log_factor", "motif_codelength", "prune_search",
    "reconstruct", "remove_overlaps",
    "IntervalBits", "NullModelKind",
    "run_sampling", "sample_instance", "top_candidates",
]
