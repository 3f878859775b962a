"""Reduce plain model checking to P-transitive graphs, then search for small P-transitive models."""
from ptmu.formula import parse, render
from ptmu.graph import g5, is_p_transitive
from ptmu.reductions import bounded_sat, reduce_mc
from ptmu.semantics import model_check

f = parse("mu X. <> X \\/ [] false")
for v in g5().vertices:
    r = reduce_mc(g5(), v, f)
    assert is_p_transitive(r.graph)
    print(f"vertex {v}: direct={model_check(g5(), v, f)} reduced={model_check(r.graph, r.initial, r.formula)}")
print("reduced formula:", render(r.formula))
print("cost:", r.cost)

for text in ["<P p> true", "P /\\ <> p /\\ [] P", "q /\\ ~r /\\ <> (~q /\\ r /\\ <> (~q /\\ ~r))"]:
    w = bounded_sat(parse(text), 4)
    if w is None:
        print(f"{text}: no model with at most 4 vertices")
    else:
        print(f"{text}: model with {w.graph.n} vertices at {w.vertex}")
        print("  " + w.graph.to_text().replace("\n", "\n  ").rstrip())
