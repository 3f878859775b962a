import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptmu.formula import (
    P, PBAR, TRUE, And, Atom, CBox, Diamond, GDiamond, NegAtom, expand_guards, implies, parse, render, size,
    swap_p, translate_phi_p,
)
from ptmu.generators import random_formula
from ptmu.graph import GraphError, LabeledGraph, abcd_grid, g5, is_p_transitive, ptc, random_colored_graph
from ptmu.reductions import (
    DominoSystem, ReductionError, bounded_sat, build_functionality, build_psi2, copy_name,
    functionality_constraints, lv_modality, reduce_mc, tile_constraints,
)
from ptmu.semantics import evaluate, model_check

STRIPES = DominoSystem(["w", "k"], hor=[("w", "k"), ("k", "w")], vert=[("w", "w"), ("k", "k")])


def stripes_paving(m):
    return {(i, j): "w" if j % 2 else "k" for i in range(1, m + 1) for j in range(1, m + 1)}


def interior(m):
    return {f"{i}.{j}" for i in range(2, m) for j in range(2, m)}


# -- model-checking reduction -----------------------------------------------------------


def test_reduction_shape():
    g = random_colored_graph(3, 5, 0.3, ("q",), colored=False)
    r = reduce_mc(g, "0", parse("<> q"))
    assert r.graph.n == 2 * g.n and r.graph.edge_count >= 2 * g.n ** 2
    assert r.initial == copy_name("0", P) and r.vertex_map["0"] == ("0:P", "0:p")
    assert is_p_transitive(r.graph)
    assert r.cost["edges"] == 2 * g.edge_count + 2 * g.n ** 2 == r.graph.edge_count


def test_reduction_formula():
    r = reduce_mc(g5(), "1", parse("<> q"))
    assert r.formula == parse("<P p> q \\/ <p P> q")
    r = reduce_mc(g5(), "1", parse("[] q"))
    assert r.formula == parse("[P p] q /\\ [p P] q")


def test_formula_cost_is_linear():
    for text in ["<> q", "mu X. q \\/ <> X /\\ [] X", "nu Y. [] (Y /\\ <> q)"]:
        f = parse(text)
        assert reduce_mc(g5(), "1", f).cost["formula_nodes"] == size(f)


@pytest.mark.parametrize("g, f", [
    (random_colored_graph(1, 3, 0.5), parse("q")),
    (g5(), parse("P /\\ q")),
    (g5(), parse("<P p> q")),
    (g5(), parse("<>{>1} q")),
])
def test_reduction_rejects(g, f):
    with pytest.raises(ReductionError):
        reduce_mc(g, g.vertices[0], f)


def test_reduction_rejects_unknown_vertex():
    with pytest.raises(ReductionError):
        reduce_mc(g5(), "9", parse("q"))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 7), st.floats(0.1, 0.6), st.integers(0, 10**9), st.integers(1, 10))
def test_reduction_soundness(gs, n, d, fs, k):
    g = random_colored_graph(gs, n, d, ("q", "r"), colored=False)
    f = random_formula(fs, k, max_ad=2)
    for v in g.vertices:
        r = reduce_mc(g, v, f)
        expected = model_check(g, v, f)
        assert model_check(r.graph, r.initial, r.formula) == expected
        assert model_check(r.graph, copy_name(v, PBAR), swap_p(r.formula)) == expected


# -- bounded satisfiability ---------------------------------------------------------------


def test_contradiction_has_no_model():
    for n in range(1, 5):
        assert bounded_sat(parse("P /\\ p"), n) is None
    assert bounded_sat(parse("mu X. <> X"), 3) is None


def test_cross_edge_needs_two_vertices():
    w = bounded_sat(parse("<P p> true"), 4)
    assert w is not None and w.graph.n == 2
    assert model_check(w.graph, w.vertex, parse("<P p> true")) and is_p_transitive(w.graph)


def test_witness_size_is_minimal():
    # three distinct atom patterns along a path force three vertices
    f = parse("q /\\ ~r /\\ <> (~q /\\ r /\\ <> (~q /\\ ~r))")
    w = bounded_sat(f, 4)
    assert w.graph.n == 3
    assert bounded_sat(f, 2) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 9))
def test_witnesses_re_verify(seed, k):
    f = random_formula(seed, k, guards=True, colors=True)
    w = bounded_sat(f, 3)
    if w is not None:
        assert model_check(w.graph, w.vertex, f) and is_p_transitive(w.graph)


def test_bounded_sat_rejects_enriched_and_open():
    with pytest.raises(ReductionError, match="undecidable"):
        bounded_sat(parse("<>{>1} q"), 2)
    with pytest.raises(ReductionError):
        bounded_sat(parse("<> X"), 2)


def test_satisfiability_transfer():
    rng = random.Random(21)
    hits = 0
    for _ in range(200):
        g = random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 7), rng.uniform(0.1, 0.5), ("q", "r"))
        f = random_formula(rng, rng.randint(1, 9), guards=True, colors=True)
        closed = ptc(g)
        for v in evaluate(g, translate_phi_p(expand_guards(f))):
            hits += 1
            assert model_check(closed, v, f)
    assert hits > 50


# -- domino encoding ----------------------------------------------------------------------


def test_lv_modality_expansions():
    l = lv_modality("l", Atom("q"))
    assert render(l) == "a /\\ <> (b /\\ q) \\/ b /\\ <> (a /\\ q) \\/ c /\\ <> (d /\\ q) \\/ d /\\ <> (c /\\ q)"
    v = lv_modality("v", Atom("q"))
    assert render(v) == "a /\\ <> (c /\\ q) \\/ c /\\ <> (a /\\ q) \\/ b /\\ <> (d /\\ q) \\/ d /\\ <> (b /\\ q)"
    inv = lv_modality("l", Atom("q"), inverse=True)
    assert render(inv).count("<->{>0}") == 4


def _grid_neighbours(g, relation):
    pairs = {"l": {("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")},
             "v": {("a", "c"), ("c", "a"), ("b", "d"), ("d", "b")}}[relation]
    colour = {v: next(x for x in "abcd" if v in g.valuation[x]) for v in g.vertices}
    return {u for u, w in g.edges if (colour[u], colour[w]) in pairs}


@pytest.mark.parametrize("relation", ["l", "v"])
def test_lv_modality_on_grid(relation):
    for g in (abcd_grid(4), abcd_grid(4, closed=True)):
        assert evaluate(g, lv_modality(relation, TRUE)) == _grid_neighbours(g, relation)


def test_lv_box_is_dual():
    g = abcd_grid(4)
    body = Atom("N")
    assert evaluate(g, lv_modality("l", body, box=True)) == \
        frozenset(g.vertices) - evaluate(g, lv_modality("l", NegAtom("N")))


PSI2_TEXT = (
    "(a \\/ b \\/ c \\/ d) /\\ (~a \\/ ~b) /\\ (~a \\/ ~c) /\\ (~a \\/ ~d) /\\ (~b \\/ ~c) /\\ (~b \\/ ~d) /\\ "
    "(~c \\/ ~d) /\\ (~N \\/ a) /\\ (~a \\/ <->{>0} b /\\ <> c) /\\ ([] ~b \\/ [-]{<=0} ~c \\/ a) /\\ "
    "(~b \\/ <->{>0} a /\\ <> d) /\\ ([-]{<=0} ~d \\/ [] ~a \\/ b) /\\ (~c \\/ <->{>0} d /\\ <> a) /\\ "
    "([-]{<=0} ~a \\/ [] ~d \\/ c) /\\ (~d \\/ <->{>0} c /\\ <> b) /\\ ([-]{<=0} ~b \\/ [] ~c \\/ d)"
)


def _conjuncts(f):
    out, stack = [], [f]
    while stack:
        h = stack.pop()
        if isinstance(h, And):
            stack += [h.right, h.left]
        else:
            out.append(h)
    return out


def test_psi2_golden():
    psi = build_psi2()
    assert render(psi) == PSI2_TEXT
    parts = _conjuncts(psi)
    assert implies(Atom("N"), Atom("a")) in parts
    assert implies(And(Diamond(Atom("b")), parse("<->{>0} c")), Atom("a")) in parts


def test_psi2_forward_clauses_hold_inside_grid():
    g = abcd_grid(6)
    forward = [h for h in _conjuncts(build_psi2())[8::2]]
    assert len(forward) == 4
    for clause in forward:
        assert interior(6) <= evaluate(g, clause)


def test_psi2_converse_clauses_fail_at_d():
    # every interior d has a b son and a c father, so the converse rule for a
    # would force it to be a as well
    g = abcd_grid(6)
    inside_d = interior(6) & g.valuation["d"]
    converse_a = _conjuncts(build_psi2())[9]
    assert inside_d and not inside_d & evaluate(g, converse_a)
    assert not evaluate(g, build_psi2())


def test_functionality_constraints():
    parts = _conjuncts(functionality_constraints())
    assert implies(Atom("a"), CBox(1, NegAtom("b"))) in parts
    assert render(parts[8]) == "~a \\/ [-]{<=1} ~b"
    for g in (abcd_grid(5), abcd_grid(5, closed=True)):
        assert evaluate(g, functionality_constraints()) == frozenset(g.vertices)
    literal = implies(Atom("a"), CBox(1, Atom("b")))
    assert evaluate(abcd_grid(5, closed=True), literal) != frozenset(abcd_grid(5).vertices)


def test_functionality_detects_two_l_successors():
    g = LabeledGraph("xyz", [("x", "y"), ("x", "z")], {"a": "x", "b": "yz", P: "x"})
    assert "x" not in evaluate(g, functionality_constraints())


def test_tile_constraints_on_paved_grid():
    m = 5
    paving = stripes_paving(m)
    assert STRIPES.is_paving(paving, m)
    g = abcd_grid(m, STRIPES, paving, closed=True)
    assert evaluate(g, tile_constraints(STRIPES)) == frozenset(g.vertices)
    assert interior(m) <= evaluate(g, build_functionality(STRIPES))


def test_tile_constraints_catch_bad_paving():
    m = 4
    paving = stripes_paving(m)
    paving[2, 2] = "w"
    assert not STRIPES.is_paving(paving, m)
    g = abcd_grid(m, STRIPES, paving, closed=True)
    assert evaluate(g, tile_constraints(STRIPES)) != frozenset(g.vertices)


def test_domino_text_round_trip():
    back = DominoSystem.from_text(STRIPES.to_text())
    assert back.tiles == STRIPES.tiles and back.hor == STRIPES.hor and back.vert == STRIPES.vert
    with pytest.raises(ValueError):
        DominoSystem(["w"], hor=[("w", "z")])
    with pytest.raises(ValueError):
        DominoSystem.from_text("tile\n")


def test_grid_rejects_unknown_tile():
    paving = stripes_paving(2)
    paving[1, 1] = "z"
    with pytest.raises(GraphError):
        abcd_grid(2, STRIPES, paving)


def test_guarded_diamond_witness_is_cross_colour():
    w = bounded_sat(GDiamond(P, PBAR, TRUE), 2)
    (u, v), = w.graph.edges
    assert (u in w.graph.valuation[P]) != (v in w.graph.valuation[P])
