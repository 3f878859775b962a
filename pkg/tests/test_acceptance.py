"""Acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL ...`` line, printed in
the pytest terminal summary.  The module
can also be run directly (``python tests/test_acceptance.py``) to get just the
ten lines.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from ptmu.formula import P, PBAR, expand_guards, parse, size, swap_p, translate_phi_p  # noqa: E402
from ptmu.games import (  # noqa: E402
    _solve_indexed, encode_game, game_check, solve, walukiewicz,
)
from ptmu.generators import random_formula, random_game, random_p_parity_game  # noqa: E402
from ptmu.graph import (  # noqa: E402
    g5, is_p_transitive, is_transitive, path4, ptc, random_colored_graph, reachability_diameter,
)
from ptmu.reductions import bounded_sat, reduce_mc  # noqa: E402
from ptmu.semantics import evaluate, model_check  # noqa: E402


REPORT: list[str] = []


def _report(k: int, ok: bool, detail: str) -> None:
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}"
    REPORT.append(line)
    if __name__ == "__main__":
        print(line, flush=True)


# -- 1 ----------------------------------------------------------------------------------


def criterion_1():
    rng = random.Random(101)
    start = time.perf_counter()
    mismatches, count = 0, 0
    while count < 500:
        g = random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 8), rng.uniform(0.1, 0.6), ("q", "r"))
        f = random_formula(rng, rng.randint(1, 12), guards=True, colors=True, max_ad=2)
        v = rng.choice(g.vertices)
        mismatches += model_check(g, v, f) != game_check(g, v, f)
        count += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    return ok, f"{count} triples, {mismatches} mismatches, {elapsed:.1f}s"


# -- 2 ----------------------------------------------------------------------------------


def criterion_2():
    rng = random.Random(202)
    violations, transitive_seen, pt_seen = 0, 0, 0
    for k in range(500):
        g = random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 10), rng.uniform(0.0, 0.5))
        if k % 3 == 1:
            g = ptc(g)
        elif k % 3 == 2:
            reach = oracles.reach_pairs(g.vertices, set(g.edges))
            g = g.replace(edges=reach)
        t, pt, dia = is_transitive(g), is_p_transitive(g), reachability_diameter(g)
        transitive_seen += t
        pt_seen += pt
        violations += (t and not pt) or (pt and dia > 3)
    example = reachability_diameter(g5().with_edges([("2", "5")]))
    ok = violations == 0 and example == 2
    return ok, (f"500 graphs ({transitive_seen} transitive, {pt_seen} P-transitive), "
                f"{violations} violations, diameter(G5+(2,5))={example}")


# -- 3 ----------------------------------------------------------------------------------


def _rows_post(rows, s, n):
    out = np.zeros_like(s)
    for j in range(n):
        out |= ((s >> j) & 1) * rows[j]
    return out


def lemma2_discrepancies(n: int, n_p: int, chunk: int = 1 << 21) -> int:
    """Edge sets on n vertices (the first n_p coloured P) where the 2-or-3-path
    condition and the reachability definition of P-transitivity disagree."""
    col = [i < n_p for i in range(n)]
    same = [sum(1 << j for j in range(n) if col[j] == col[i]) for i in range(n)]
    bad = 0
    total = 1 << (n * n)
    for start in range(0, total, chunk):
        m = np.arange(start, min(start + chunk, total), dtype=np.int64)
        rows = [((m >> (i * n)) & ((1 << n) - 1)).astype(np.uint8) for i in range(n)]
        reach = list(rows)
        for _ in range(n.bit_length() + 1):
            reach = [r | _rows_post(reach, r, n) for r in reach]
        ok_lemma = np.ones(len(m), dtype=bool)
        ok_def = np.ones(len(m), dtype=bool)
        for i in range(n):
            two = _rows_post(rows, rows[i], n)
            three = _rows_post(rows, two, n)
            ok_lemma &= ((two | three) & same[i] & ~rows[i]) == 0
            ok_def &= (reach[i] & same[i] & ~rows[i]) == 0
        bad += int(np.count_nonzero(ok_lemma != ok_def))
    return bad


def criterion_3():
    # colourings up to vertex order; at 5 vertices also up to the P/p swap
    checked, bad = 0, 0
    for n in range(1, 5):
        for n_p in range(n + 1):
            # colourings with the same number of P vertices are isomorphic
            bad += lemma2_discrepancies(n, n_p)
            checked += 1 << (n * n)
    for n_p in range(0, 3):
        bad += lemma2_discrepancies(5, n_p)
        checked += 1 << 25
    # the library predicate against the definition, every coloured graph up to 3 vertices
    lib_bad = 0
    from ptmu.graph import graph_from_mask
    for n in range(1, 4):
        for cols in itertools.product((True, False), repeat=n):
            val = {P: [str(i) for i in range(n) if cols[i]]}
            for mask in range(1 << (n * n)):
                g = graph_from_mask(n, mask, val)
                lib_bad += is_p_transitive(g) != oracles.p_transitive_by_definition(g)
    ok = bad == 0 and lib_bad == 0
    return ok, f"{checked} (graph, colouring) cases, {bad} discrepancies; library vs definition <=3 vertices: {lib_bad}"


# -- 4 ----------------------------------------------------------------------------------


def criterion_4():
    rng = random.Random(404)
    failures = 0
    for _ in range(500):
        g = random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 9), rng.uniform(0.05, 0.4))
        h = ptc(g)
        failures += ptc(h) != h or not is_p_transitive(h)
        reach = oracles.reach_pairs(g.vertices, set(g.edges))
        colour = {v: v in g.valuation[P] for v in g.vertices}
        original = set(g.edges)
        for e in set(h.edges) - original:
            without = h.replace(edges=[x for x in h.edges if x != e])
            justified = e in reach and colour[e[0]] == colour[e[1]]
            failures += is_p_transitive(without) or not justified
    p4 = path4()
    added = set(ptc(p4).edges) - set(p4.edges)
    expected = {("x0", "x2"), ("x0", "x4"), ("x2", "x4"), ("x1", "x3")}
    ok = failures == 0 and added == expected
    return ok, f"500 graphs, {failures} failures; PATH4 added {sorted(added)}"


# -- 5 ----------------------------------------------------------------------------------


def criterion_5():
    rng = random.Random(505)
    failures, count = 0, 0
    while count < 300:
        g = random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 7), rng.uniform(0.1, 0.5),
                                 ("q", "r"), colored=False)
        f = random_formula(rng, rng.randint(1, 10), max_ad=2)
        v = rng.choice(g.vertices)
        r = reduce_mc(g, v, f)
        failures += model_check(g, v, f) != model_check(r.graph, r.initial, r.formula)
        failures += not is_p_transitive(r.graph)
        count += 1
    sizes = np.arange(2, 41)
    costs = []
    for n in sizes:
        g = random_colored_graph(int(n), int(n), 0.3, ("q",), colored=False)
        costs.append(reduce_mc(g, g.vertices[0], parse("<> q")).cost["edges"])
    costs = np.array(costs, dtype=float)
    fit = np.polyval(np.polyfit(sizes, costs, 2), sizes)
    ratio = costs / fit
    within = bool(np.all((ratio <= 2) & (ratio >= 0.5)))
    ok = failures == 0 and within
    return ok, (f"{count} instances, {failures} failures; cost/fit in "
                f"[{ratio.min():.3f}, {ratio.max():.3f}] over |V| = 2..40")


# -- 6 ----------------------------------------------------------------------------------


def criterion_6():
    rng = random.Random(606)
    fail_a = fail_b = 0
    for _ in range(200):
        g = ptc(random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 8), rng.uniform(0.1, 0.5), ("q", "r")))
        f = random_formula(rng, rng.randint(1, 10), guards=True, colors=True, max_ad=2)
        fail_a += evaluate(g, f) != evaluate(g, translate_phi_p(f))
    for _ in range(200):
        g = random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 8), rng.uniform(0.1, 0.5), ("q", "r"))
        f = random_formula(rng, rng.randint(1, 10), guards=True, colors=True, max_ad=2)
        fp = translate_phi_p(expand_guards(f))
        closed = ptc(g)
        fail_b += not evaluate(g, fp) <= evaluate(closed, f)
    ok = fail_a == 0 and fail_b == 0
    return ok, f"(a) 200 P-transitive graphs, {fail_a} failures; (b) 200 graphs, {fail_b} failures"


# -- 7 ----------------------------------------------------------------------------------


def criterion_7():
    rng = random.Random(707)
    bad = {}
    for n in (0, 1, 2):
        bad[n] = 0
        w = walukiewicz(n)
        for _ in range(100):
            game = random_game(rng.randrange(1 << 30), rng.randint(1, 6), n, rng.uniform(0.2, 0.6))
            enc = encode_game(game, n)
            a = game.initial in solve(game).win_d
            b = model_check(enc, game.initial, w)
            c = game_check(enc, game.initial, w)
            bad[n] += not (a == b == c)
    bad_p = 0
    wp = walukiewicz(2, p_variant=True)
    for _ in range(100):
        game = random_p_parity_game(rng.randrange(1 << 30), rng.randint(1, 6), 2)
        bad_p += (game.initial in solve(game).win_d) != model_check(encode_game(game, 2), game.initial, wp)
    ok = not any(bad.values()) and bad_p == 0
    return ok, f"triangle mismatches per n {bad}; P-W_2 mismatches {bad_p}/100"


# -- 8 ----------------------------------------------------------------------------------


def _orbit_minimal(n: int, labels, masks: np.ndarray) -> np.ndarray:
    keep = np.ones(len(masks), dtype=bool)
    for perm in itertools.permutations(range(n)):
        if all(labels[perm[i]] == labels[i] for i in range(n)) and perm != tuple(range(n)):
            image = np.zeros_like(masks)
            for i in range(n):
                for j in range(n):
                    image |= ((masks >> (i * n + j)) & 1) << (perm[i] * n + perm[j])
            keep &= masks <= image
    return masks[keep]


def criterion_8(max_n: int = 4):
    """Solver against strategy enumeration on every game up to isomorphism."""
    games = mismatches = 0
    for n in range(1, max_n + 1):
        for labels in itertools.combinations_with_replacement(range(6), n):
            owner_d = tuple(lab >= 3 for lab in labels)
            prio = tuple(lab % 3 for lab in labels)
            truth = oracles.vectorised_d_wins(owner_d, prio)
            expected = (truth.astype(np.int64) << np.arange(n)).sum(axis=1).tolist()
            od = sum(1 << i for i in range(n) if owner_d[i])
            full = (1 << n) - 1
            for mask in _orbit_minimal(n, labels, np.arange(1 << (n * n), dtype=np.int64)).tolist():
                succ = [(mask >> (i * n)) & full for i in range(n)]
                wd, _, _ = _solve_indexed(n, od, prio, succ)
                mismatches += wd != expected[mask]
                games += 1
    return mismatches == 0, f"{games} games up to isomorphism (<= {max_n} vertices, priorities <= 2), {mismatches} mismatches"


# -- 9 ----------------------------------------------------------------------------------


def criterion_9():
    from ptmu.graph import swap_valuation

    rng = random.Random(909)
    swap_bad = 0
    for _ in range(300):
        g = random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 8), rng.uniform(0.1, 0.5), ("q", "r"))
        f = random_formula(rng, rng.randint(1, 10), guards=True, colors=True, max_ad=2)
        swap_bad += evaluate(g, f) != evaluate(swap_valuation(g), swap_p(f))
    plus = parse("P /\\ mu X. q \\/ <P p> X \\/ <p P> X")
    minus = swap_p(plus)
    unfolded = parse("P /\\ (q \\/ <> Y)")
    from ptmu.formula import substitute

    unfolded = substitute(unfolded, "Y", minus)
    eq_bad = 0
    for _ in range(300):
        g = random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 8), rng.uniform(0.1, 0.5), ("q",))
        eq_bad += evaluate(g, plus) != evaluate(g, unfolded)
    ok = swap_bad == 0 and eq_bad == 0
    return ok, f"swap lemma 300 pairs, {swap_bad} failures; phi+ unfolding 300 graphs, {eq_bad} failures"


# -- 10 ---------------------------------------------------------------------------------


_PT_CACHE: dict = {}


def _oracle_min_model(f, max_n: int):
    """Smallest n <= max_n with a P-transitive model of f, by full enumeration."""
    core = expand_guards(f)
    names = sorted({h.name for h in _atoms(core)} - {P, PBAR})
    for n in range(1, max_n + 1):
        adj = oracles.all_adjacency(n)
        for labels in itertools.combinations_with_replacement(range(2 << len(names)), n):
            is_p = np.array([lab & 1 for lab in labels], dtype=bool)
            key = (n, tuple(is_p))
            if key not in _PT_CACHE:
                _PT_CACHE[key] = adj[oracles.p_transitive_tensor(adj, is_p)]
            cand = _PT_CACHE[key]
            val = {P: is_p, PBAR: ~is_p}
            for k, a in enumerate(names):
                val[a] = np.array([lab >> (k + 1) & 1 for lab in labels], dtype=bool)
            if oracles.tensor_eval(cand, val, core).any():
                return n
    return None


def _atoms(f):
    from ptmu.formula import walk
    from ptmu.formula.nodes import Atom, NegAtom

    return [h for h in walk(f) if isinstance(h, (Atom, NegAtom))]


def criterion_10():
    rng = random.Random(1010)
    mismatches, witnesses, reverified = 0, 0, 0
    for _ in range(30):
        f = random_formula(rng, rng.randint(1, 6), guards=True, colors=True)
        w = bounded_sat(f, 4)
        truth = _oracle_min_model(f, 4)
        if w is not None:
            witnesses += 1
            reverified += model_check(w.graph, w.vertex, f) and is_p_transitive(w.graph)
        mismatches += (None if w is None else w.graph.n) != truth
    none_ok = bounded_sat(parse("P /\\ p"), 4) is None
    ok = mismatches == 0 and reverified == witnesses and none_ok
    return ok, (f"30 formulas, {mismatches} mismatches against enumeration, "
                f"{reverified}/{witnesses} witnesses re-verified, 'P /\\ p' none={none_ok}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("k", range(1, 11))
def test_criterion(k):
    ok, detail = CRITERIA[k - 1]()
    _report(k, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for k, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()
        _report(k, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
