"""k = 4: the 14-cell coarse subdivision, its splits, and the scan over small rank-4 matroids."""
from tropmat import bipartite as bp
from tropmat import matroid as mt
from tropmat import polytope as pt
from tropmat import subdivision as sd
from tropmat import tropical as tr

P = bp.Partition.from_sizes([2, 2, 2, 2])
tilde = sd.build_tilde(P)
print(f"coarse subdivision: {len(tilde.cells)} cells, verified: {sd.verify_subdivision(tilde, samples=200).ok}")
for label, cell in zip(tilde.labels, tilde.cells):
    print(f"  {str(label):40s} {len(cell)} bases")

for cell, I, lo, hi in sd.all_splits(P):
    print(f"  split {cell} along I={sorted(I)}: {len(lo)} + {len(hi)} bases")

T = tr.realize_type(tr.random_generic_matrix(4, 0))
S = sd.build_sigma_star(T, P)
print(f"fine subdivision from a generic polytrope refines the coarse one: {sd.refines(S, tilde) == []}")

Q = pt.BasePolytope(mt.make_matroid(P.n, tilde.common_bases()))
print("quotient support f-vector:", pt.quotient_support(tilde, Q).f_vector())

rep = sd.splits_lemma_scan(sd.lemma71_family(max_n=7))
print(f"scan: {rep.matroids} matroids, {rep.codim2_pairs} codim-2 pairs, {len(rep.violations)} violations")
