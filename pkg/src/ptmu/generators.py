"""Seeded random formulas and games for tests, demos and the CLI."""

from __future__ import annotations

import random

from .formula.hierarchy import classify
from .formula.nodes import (
    ANY, P, PBAR,
    And, Atom, Bottom, Box, CBox, CDiamond, Diamond, Formula, GBox, GDiamond,
    InvBox, InvDiamond, Mu, NegAtom, Nu, Or, Top, Var,
)
from .games import C, D, ParityGame


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_formula(
    seed,
    size: int,
    atoms=("q", "r"),
    guards: bool = False,
    colors: bool = False,
    counting: bool = False,
    max_ad: int | None = None,
    tries: int = 200,
) -> Formula:
    """A random formula with exactly ``size`` nodes.

    ``guards`` allows guarded modalities, ``colors`` the atoms ``P`` and ``p``,
    ``counting`` the counting and inverse modalities.  With ``max_ad`` the
    draw is repeated until the alternation depth is small enough.
    """
    rng = _rng(seed)
    leaves = list(atoms) + ([P, PBAR] if colors else [])
    guard_colors = (P, PBAR, ANY)
    counter = [0]

    def gen(budget: int, scope: tuple[str, ...]) -> Formula:
        if budget == 1:
            if scope and rng.random() < 0.5:
                return Var(rng.choice(scope))
            r = rng.random()
            if r < 0.05:
                return Top()
            if r < 0.1:
                return Bottom()
            name = rng.choice(leaves)
            return Atom(name) if r < 0.6 else NegAtom(name)
        if budget == 2:
            kind = rng.choice(["dia", "box", "fix"] + (["guard"] if guards else []) + (["count"] if counting else []))
        else:
            kind = rng.choice(["or", "and", "or", "and", "dia", "box", "fix", "fix"]
                              + (["guard"] * 2 if guards else []) + (["count"] if counting else []))
        if kind in ("or", "and"):
            left = rng.randint(1, budget - 2)
            return (Or if kind == "or" else And)(gen(left, scope), gen(budget - 1 - left, scope))
        if kind == "dia":
            return Diamond(gen(budget - 1, scope))
        if kind == "box":
            return Box(gen(budget - 1, scope))
        if kind == "guard":
            cls = GDiamond if rng.random() < 0.5 else GBox
            return cls(rng.choice(guard_colors), rng.choice(guard_colors), gen(budget - 1, scope))
        if kind == "count":
            cls = rng.choice([CDiamond, CBox, InvDiamond, InvBox])
            return cls(rng.randint(0, 2), gen(budget - 1, scope))
        counter[0] += 1
        var = f"X{counter[0]}"
        return (Mu if rng.random() < 0.5 else Nu)(var, gen(budget - 1, scope + (var,)))

    for _ in range(tries):
        counter[0] = 0
        f = gen(size, ())
        if max_ad is None or classify(f).ad <= max_ad:
            return f
    raise RuntimeError(f"no formula with ad <= {max_ad} found in {tries} draws")


def random_game(seed, n: int, max_priority: int, density: float = 0.4) -> ParityGame:
    rng = _rng(seed)
    vs = [f"g{i}" for i in range(n)]
    owner = {v: rng.choice((C, D)) for v in vs}
    prio = {v: rng.randint(0, max_priority) for v in vs}
    edges = [(u, w) for u in vs for w in vs if rng.random() < density]
    return ParityGame(owner, prio, edges, vs[0])


def random_p_parity_game(seed, n: int, max_priority: int, density: float = 0.5) -> ParityGame:
    """Random game whose moves all change P-colour."""
    rng = _rng(seed)
    vs = [f"g{i}" for i in range(n)]
    owner = {v: rng.choice((C, D)) for v in vs}
    prio = {v: rng.randint(0, max_priority) for v in vs}
    color = {v: rng.choice((P, PBAR)) for v in vs}
    edges = [(u, w) for u in vs for w in vs if color[u] != color[w] and rng.random() < density]
    return ParityGame(owner, prio, edges, vs[0], color, p_parity=True)
