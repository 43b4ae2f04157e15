"""The star tree at k = 4 with blocks of size 2: bases, flats and the half-space description."""
from tropmat import bipartite as bp
from tropmat import matroid as mt

P = bp.Partition.from_sizes([2, 2, 2, 2])
spec = bp.forest_spec(P, [(0, 1), (0, 2), (0, 3)])
M = bp.ma_of_forest(spec)
print(f"MA(star): {len(M.bases)} bases, kappa = {mt.kappa(M)}")

fl = bp.ma_nondeg_flats(spec)
for F, r in fl.edge_flats:
    print(f"  edge flat {sorted(F)} of rank {mt.rank(M, F)} (bound {r})")
for F, r in fl.node_flats:
    print(f"  node flat {sorted(F)} of rank {mt.rank(M, F)}")

# the per-node reading gives a larger family that is not a matroid
fam = bp.node_rule_sets(spec)
print(f"per-node rule: {len(fam)} sets, base exchange holds: {mt.is_base_collection(fam)}")
print(f"ball moving reproduces MA(star): {bp.ball_moving_bases(spec) == M.base_set}")
