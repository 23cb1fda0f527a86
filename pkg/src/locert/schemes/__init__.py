"""Concrete certification schemes."""

from .fragments import (
    Depth2Scheme, ExistentialFOScheme, REALIZABLE_PROFILES, depth2_classify, depth2_fo_scheme,
    existential_fo_scheme, graph_profile,
)
from .kernel_scheme import (
    KERNEL_FIELDS, FOTreedepthScheme, KernelScheme, fo_treedepth_scheme, kernel_certs, kernel_scheme,
)
from .spanning import (
    AcyclicityScheme, CountScheme, SpanningTreeScheme, bfs_tree, check_count, check_tree,
    count_certs, count_scheme, spanning_tree_scheme, tree_cert,
)
from .treedepth_scheme import (
    TreedepthScheme, check_treedepth, find_model, treedepth_certs, treedepth_scheme,
)

__all__ = [
    "AcyclicityScheme", "CountScheme", "Depth2Scheme", "ExistentialFOScheme", "FOTreedepthScheme",
    "KERNEL_FIELDS", "KernelScheme", "REALIZABLE_PROFILES", "SpanningTreeScheme", "TreedepthScheme",
    "bfs_tree", "check_count", "check_tree", "check_treedepth", "count_certs", "count_scheme",
    "depth2_classify", "depth2_fo_scheme", "existential_fo_scheme", "find_model",
    "fo_treedepth_scheme", "graph_profile", "kernel_certs", "kernel_scheme",
    "spanning_tree_scheme", "tree_cert", "treedepth_certs", "treedepth_scheme",
]
