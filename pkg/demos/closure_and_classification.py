"""Classify the fixture graphs, close them under P-transitivity and check a reachability formula."""
from ptmu.formula import parse, render
from ptmu.graph import classify_graph, g5, path4, ptc
from ptmu.semantics import evaluate

PHI_PLUS = parse("P /\\ mu X. q \\/ <P p> X \\/ <p P> X")

for name, g in [("g5", g5()), ("path4", path4())]:
    print(f"== {name}: {g.n} vertices, {g.edge_count} edges")
    print("\n".join(classify_graph(g).lines()))
    if "P" in g.valuation:
        closed = ptc(g)
        print(f"ptc adds {closed.edge_count - g.edge_count} edges")
        print("\n".join("  " + line for line in classify_graph(closed).lines()))

g = path4().replace(valuation={**path4().valuation, "q": ["x4"]})
print(f"\n{render(PHI_PLUS)}")
print("holds at", sorted(evaluate(g, PHI_PLUS)))
print("holds after closure at", sorted(evaluate(ptc(g), PHI_PLUS)))
