"""k = 3: a hexagonal polytrope and the six-cell subdivision of Delta(3, 6) it induces."""
from tropmat import bipartite as bp
from tropmat import subdivision as sd
from tropmat import tropical as tr

V = [[0, 3, 3], [3, 0, 3], [3, 3, 0]]
T = tr.realize_type(V)
print(f"{len(T.vertices)} vertices")
for e, x in zip(T.vertices, T.points):
    print(f"  {str(e):24s} at {tuple(map(str, x))}")

P = bp.Partition.from_sizes([2, 2, 2])
S = sd.build_sigma_star(T, P)
rep = sd.verify_subdivision(S, samples=500)
print(f"cells: {rep.cells}, verified: {rep.ok}, common bases: {len(S.common_bases())}")
for a, b, flat, r in rep.dual.edges:
    print(f"  cells {a} and {b} meet on x({sorted(flat)}) = {r}")
print("dual graph matches the hexagon:", bool(sd.check_duality(S, T, P, rep)))
