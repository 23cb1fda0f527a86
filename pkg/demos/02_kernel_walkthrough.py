# Pruning a graph down to its k-kernel
#
# Siblings in the elimination tree with the same labelled subtree (their
# "type") are interchangeable for sentences of quantifier depth k as long as
# at least k copies remain.  Removing the surplus gives a graph whose size
# depends only on k and the tree height.

from locert.ef import ef_equivalent
from locert.graph import make_graph
from locert.kernel import dump_reduction, k_reduce
from locert.treedepth import model_from_parents

# Centre 1, three hubs, each hub with five leaves.
parent = {1: 1, 2: 1, 3: 1, 4: 1}
for i, v in enumerate(range(5, 20)):
    parent[v] = 2 + i % 3
g = make_graph(range(1, 20), [(v, p) for v, p in parent.items() if v != p])
m = model_from_parents(1, parent)

for k in (1, 2, 3):
    r = k_reduce(g, m, k)
    print(f"k={k}: {g.n} vertices -> {r.kernel.n}, pruned roots {sorted(r.pruned_roots)}")
    print("  same depth-k sentences as the original:", ef_equivalent(g, r.kernel, k))

# The dump lists each vertex with its depth, whether it was deleted, and the
# index of its end type, followed by the type table itself.

print(dump_reduction(k_reduce(g, m, 2)))
