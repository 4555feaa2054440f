"""A walk through dynamic flows on a three-vertex graph.

Every unit on the left half of a positive edge spawns one more right half at
its far end, so the count grows faster than the ordinary partition function.

Run:  python3 demos/dynamic_flows.py
"""

from collections import Counter

from cryvol.dynflow import enumerate_dynamic_flows, kdyn, kdyn_via_series
from cryvol.graphs import SignedEdge, fig2_graph
from cryvol.kostant import kpf

G = fig2_graph()
a = (2, 1, 1)
print("graph:", G)
print("ordinary flows:", kpf(G, a))

flows = enumerate_dynamic_flows(G, a)
print("dynamic flows:", len(flows), "recursion:", kdyn(G, a), "series:", kdyn_via_series(G, a))

plus = SignedEdge(1, 3, "+")
by_left = Counter(f.pos(plus).left for f in flows)
for left in sorted(by_left):
    print(f"  {by_left[left]:>2} flows put {left} unit(s) on the left half of {plus}")

print("one of them:", flows[-1].to_json())
