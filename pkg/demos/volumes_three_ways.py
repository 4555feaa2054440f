"""Volumes of the complete signed-graph polytopes, computed three ways.

Run:  python3 demos/volumes_three_ways.py
"""

from cryvol import ct, exact
from cryvol.dynflow import kdyn, volume_via_thm_volD
from cryvol.graphs import make_complete_C, make_complete_D
from cryvol.kostant import normalized_volume_ehrhart
from cryvol.reduce import cryc_netflow

print("Type D: lattice counts, constant terms and dynamic flows")
for n in range(1, 4):
    G = make_complete_D(n + 1)
    ehr = normalized_volume_ehrhart(G, cryc_netflow(n + 1))
    by_ct = ct.iterated_ct(ct.build_cryd_lhs(n))
    dyn = volume_via_thm_volD(G)
    print(f"  n={n}: {ehr:>4} {exact.format_number(by_ct):>4} {dyn:>4}   formula {exact.cryd_volume_formula(n)}")

# With loops the dynamic route goes through a single count on the full graph.
print("Type C")
for n in range(1, 4):
    G = make_complete_C(n + 1)
    ehr = normalized_volume_ehrhart(G, cryc_netflow(n + 1))
    by_ct = ct.iterated_ct(ct.build_cryc_lhs(n))
    dyn = kdyn(G, (0, 0) + tuple(range(1, n)))
    print(f"  n={n}: {ehr:>4} {exact.format_number(by_ct):>4} {dyn:>4}   formula {exact.cryc_volume_formula(n)}")

# Lattice counting stops being practical around n=4; the constant term does not.
print("Constant terms only, n=4:",
      exact.format_number(ct.iterated_ct(ct.build_cryd_lhs(4))),
      exact.format_number(ct.iterated_ct(ct.build_cryc_lhs(4))))
