"""Cut the loop polytope into loopless pieces and add their volumes back up.

Run:  python3 demos/subdivision.py
"""

from cryvol.dynflow import volume_via_thm_volD
from cryvol.graphs import family_graphs, make_complete_C
from cryvol.kostant import polytope_dimension
from cryvol.reduce import (
    ReductionStats,
    cryc_netflow,
    full_dimensional_leaves,
    reduce_order_O,
    strip_loops_at_1,
    volume_via_reduction,
)

n = 3
KC = make_complete_C(n + 1)
d = polytope_dimension(KC, cryc_netflow(n + 1))
leaves = reduce_order_O(n)
full = full_dimensional_leaves(leaves, d)
print(f"{len(leaves)} leaves, {len(full)} of dimension {d}")

family = set(family_graphs(n))
for leaf in full:
    G = strip_loops_at_1(leaf.graph)
    assert G in family
    print(f"  volume {volume_via_thm_volD(G):>3}  {G}")
print("total:", sum(volume_via_thm_volD(strip_loops_at_1(leaf.graph)) for leaf in full))

stats = ReductionStats()
print("general reduction strategy:", volume_via_reduction(KC, stats=stats), stats)
