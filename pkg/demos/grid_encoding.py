"""Build the four-coloured grid, test the horizontal and vertical modalities and the tile constraints."""
from ptmu.formula import TRUE
from ptmu.graph import abcd_grid
from ptmu.reductions import DominoSystem, build_psi2, functionality_constraints, lv_modality, tile_constraints
from ptmu.semantics import evaluate

m = 5
stripes = DominoSystem(["w", "k"], hor=[("w", "k"), ("k", "w")], vert=[("w", "w"), ("k", "k")])
paving = {(i, j): "w" if j % 2 else "k" for i in range(1, m + 1) for j in range(1, m + 1)}
g = abcd_grid(m, stripes, paving, closed=True)
print(f"{m}x{m} grid, closed: {g.n} vertices, {g.edge_count} edges")
for rel in "lv":
    print(f"{rel}-neighbour exists at {len(evaluate(g, lv_modality(rel, TRUE)))} vertices")
everywhere = frozenset(g.vertices)
print("functionality holds everywhere:", evaluate(g, functionality_constraints()) == everywhere)
print("tile constraints hold everywhere:", evaluate(g, tile_constraints(stripes)) == everywhere)
print("psi2 extension size on the grid:", len(evaluate(abcd_grid(6), build_psi2())))
