"""Parity games, their solution, evaluation games and the Walukiewicz formulas.

Player ``d`` wins an infinite play when the greatest priority seen infinitely
often is even; a player with no move loses.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .formula.hierarchy import binder_blocks, classify
from .formula.nodes import (
    FIXPOINTS, P, PBAR,
    And, Atom, Bottom, Box, Diamond, Formula, GBox, GDiamond, Mu, NegAtom, Nu, Or, Top, Var,
    conj, disj, free_variables, is_enriched, walk,
)
from .formula.transform import expand_guards, rename_apart
from .graph import GraphError, LabeledGraph, bits, natural_key

logger = logging.getLogger(__name__)

C, D = "c", "d"


class GameError(ValueError):
    pass


class ParityGame:
    """Arena ``(V = V_c + V_d, v0, E, priority)`` with an optional P-colouring."""

    def __init__(
        self,
        owner: Mapping[str, str],
        priority: Mapping[str, int],
        edges: Iterable[tuple[str, str]],
        initial: str | None = None,
        color: Mapping[str, str] | None = None,
        p_parity: bool = False,
    ):
        vs = sorted(owner, key=natural_key)
        if set(priority) != set(vs):
            raise GameError("every vertex needs exactly one owner and one priority")
        for v in vs:
            if owner[v] not in (C, D):
                raise GameError(f"owner of {v} must be c or d, got {owner[v]!r}")
            if not isinstance(priority[v], int) or priority[v] < 0:
                raise GameError(f"priority of {v} must be a non-negative integer")
        self.vertices: tuple[str, ...] = tuple(vs)
        self.index = {v: i for i, v in enumerate(vs)}
        self.owner = {v: owner[v] for v in vs}
        self.priority = {v: priority[v] for v in vs}
        succ = [0] * len(vs)
        for u, w in edges:
            if u not in self.index or w not in self.index:
                raise GameError(f"move ({u}, {w}) uses an undeclared position")
            succ[self.index[u]] |= 1 << self.index[w]
        self.succ: tuple[int, ...] = tuple(succ)
        if initial is not None and initial not in self.index:
            raise GameError(f"initial position {initial} is not declared")
        self.initial = initial
        self.color = dict(color) if color else None
        if self.color is not None:
            if set(self.color) != set(vs) or not set(self.color.values()) <= {P, PBAR}:
                raise GameError("a P-colouring must give every position colour P or p")
        self.p_parity = p_parity
        if p_parity:
            if self.color is None:
                raise GameError("a P-parity game needs a P-colouring")
            for u, w in self.edges:
                if self.color[u] == self.color[w]:
                    raise GameError(f"P-parity move ({u}, {w}) does not change colour")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> list[tuple[str, str]]:
        return [(self.vertices[i], self.vertices[j]) for i, m in enumerate(self.succ) for j in bits(m)]

    @property
    def max_priority(self) -> int:
        return max(self.priority.values(), default=0)

    def successors(self, v: str) -> list[str]:
        return [self.vertices[j] for j in bits(self.succ[self.index[v]])]

    def to_text(self) -> str:
        lines = []
        for v in self.vertices:
            extra = f" color={self.color[v]}" if self.color else ""
            lines.append(f"gvertex {v} owner={self.owner[v]} prio={self.priority[v]}{extra}")
        lines.extend(f"gedge {u} {w}" for u, w in self.edges)
        if self.initial is not None:
            lines.append(f"ginitial {self.initial}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ParityGame":
        owner, prio, color, edges, initial = {}, {}, {}, [], None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "gvertex" and len(parts) >= 2:
                v = parts[1]
                if v in owner:
                    raise GameError(f"line {lineno}: duplicate position {v}")
                fields = {}
                for item in parts[2:]:
                    key, sep, value = item.partition("=")
                    if not sep or key not in ("owner", "prio", "color"):
                        raise GameError(f"line {lineno}: bad field {item!r}")
                    fields[key] = value
                if "owner" not in fields or "prio" not in fields:
                    raise GameError(f"line {lineno}: gvertex needs owner= and prio=")
                if not fields["prio"].isdigit():
                    raise GameError(f"line {lineno}: priority must be a non-negative integer")
                owner[v], prio[v] = fields["owner"], int(fields["prio"])
                if "color" in fields:
                    color[v] = fields["color"]
            elif parts[0] == "gedge" and len(parts) == 3:
                edges.append((parts[1], parts[2]))
            elif parts[0] == "ginitial" and len(parts) == 2:
                initial = parts[1]
            else:
                raise GameError(f"line {lineno}: cannot parse {raw.strip()!r}")
        if color and len(color) != len(owner):
            raise GameError("either every position has a colour or none does")
        p_parity = bool(color) and all(color[u] != color[w] for u, w in edges if u in color and w in color)
        return cls(owner, prio, edges, initial, color or None, p_parity)

    @classmethod
    def load(cls, path) -> "ParityGame":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


@dataclass
class GameSolution:
    """Winning regions and positional winning strategies.

    A strategy maps each position of the player's region where the player has
    a move to the chosen successor.
    """

    win_d: frozenset[str]
    win_c: frozenset[str]
    strategy_d: dict[str, str] = field(default_factory=dict)
    strategy_c: dict[str, str] = field(default_factory=dict)

    def winner(self, v: str) -> str:
        return D if v in self.win_d else C


# -- Zielonka on bitmasks ----------------------------------------------------

_SMALL = 1 << 10
_BITS_TABLE = [tuple(bits(m)) for m in range(_SMALL)]


def _bits(mask: int):
    return _BITS_TABLE[mask] if mask < _SMALL else tuple(bits(mask))


def _attractor(player_mask: int, succ, pred, arena: int, target: int, strat: dict[int, int]):
    """Vertices of ``arena`` from which the player owning ``player_mask`` forces ``target``."""
    attr = target & arena
    count = {}
    queue = list(_bits(attr))
    while queue:
        u = queue.pop()
        for v in _bits(pred[u] & arena & ~attr):
            if player_mask >> v & 1:
                attr |= 1 << v
                strat[v] = u
                queue.append(v)
            else:
                left = count.get(v)
                if left is None:
                    left = (succ[v] & arena).bit_count()
                left -= 1
                count[v] = left
                if left == 0:
                    attr |= 1 << v
                    queue.append(v)
    return attr


def _zielonka(arena: int, owner_d: int, prio, by_prio, succ, pred):
    """Returns (win_d, win_c, strategy) on the sub-arena; strategy covers both players."""
    if not arena:
        return 0, 0, {}
    top = max(p for p, m in by_prio.items() if m & arena)
    i_is_d = top % 2 == 0
    mine = owner_d if i_is_d else ~owner_d
    theirs = ~mine
    strat: dict[int, int] = {}
    u = by_prio[top] & arena
    a = _attractor(mine, succ, pred, arena, u, strat)
    for v in _bits(u & mine):
        # any move staying in the arena will do for the top-priority positions
        s = succ[v] & arena
        strat[v] = (s & -s).bit_length() - 1
    wd, wc, sub = _zielonka(arena & ~a, owner_d, prio, by_prio, succ, pred)
    w_opp = wc if i_is_d else wd
    if not w_opp:
        for v, w in sub.items():
            if mine >> v & 1:
                strat[v] = w
        return (arena, 0, strat) if i_is_d else (0, arena, strat)
    strat2: dict[int, int] = {}
    b = _attractor(theirs, succ, pred, arena, w_opp, strat2)
    for v in _bits(w_opp):
        if theirs >> v & 1 and v in sub:
            strat2[v] = sub[v]
    wd2, wc2, sub2 = _zielonka(arena & ~b, owner_d, prio, by_prio, succ, pred)
    sub2.update({v: w for v, w in strat2.items() if theirs >> v & 1})
    if i_is_d:
        return wd2, wc2 | b, sub2
    return wd2 | b, wc2, sub2


def _solve_indexed(n: int, owner_d: int, prio, succ) -> tuple[int, int, dict[int, int]]:
    """Solve a game given by bitmasks over ``range(n)``.

    Dead ends are redirected to two fresh sinks: a stuck ``c`` moves to a
    priority-0 loop, a stuck ``d`` to a priority-1 loop.
    """
    sink_d, sink_c = n, n + 1
    succ = list(succ) + [1 << sink_d, 1 << sink_c]
    for v in range(n):
        if not succ[v]:
            succ[v] = 1 << (sink_c if owner_d >> v & 1 else sink_d)
    owner = owner_d | 1 << sink_d
    prios = list(prio) + [0, 1]
    pred = [0] * (n + 2)
    for v, m in enumerate(succ):
        for w in _bits(m):
            pred[w] |= 1 << v
    by_prio: dict[int, int] = {}
    for v, p in enumerate(prios):
        by_prio[p] = by_prio.get(p, 0) | 1 << v
    full = (1 << (n + 2)) - 1
    wd, wc, strat = _zielonka(full, owner, prios, by_prio, succ, pred)
    keep = (1 << n) - 1
    return wd & keep, wc & keep, {v: w for v, w in strat.items() if v < n and w < n}


def solve(g: ParityGame) -> GameSolution:
    owner_d = sum(1 << i for i, v in enumerate(g.vertices) if g.owner[v] == D)
    prio = [g.priority[v] for v in g.vertices]
    wd, wc, strat = _solve_indexed(g.n, owner_d, prio, g.succ)
    name = g.vertices
    sd, sc = {}, {}
    for v, w in strat.items():
        if owner_d >> v & 1 and wd >> v & 1:
            sd[name[v]] = name[w]
        elif not owner_d >> v & 1 and wc >> v & 1:
            sc[name[v]] = name[w]
    return GameSolution(
        frozenset(name[i] for i in bits(wd)), frozenset(name[i] for i in bits(wc)), sd, sc
    )


# -- evaluation games -----------------------------------------------------------


def fixpoint_priority(f: Formula, rank: int) -> int:
    """Round ``rank`` down to even for nu and to odd for mu (never below 0)."""
    if isinstance(f, Nu):
        return rank if rank % 2 == 0 else rank - 1
    return rank if rank % 2 == 1 else max(rank - 1, 0)


@dataclass
class EvaluationGame:
    game: ParityGame
    positions: dict[str, tuple[str, Formula]]
    formula: Formula


def build_evaluation_game(g: LabeledGraph, v0: str, f: Formula, priority: str = "chain") -> EvaluationGame:
    """Positions ``(v, psi)`` for vertices ``v`` and subformulas ``psi`` of ``f``.

    ``c`` owns conjunctions, boxes, variables, fixpoints and true literals;
    ``d`` owns the rest.  A fixpoint's priority comes from the longest
    alternating dependency chain it heads (``priority="chain"``, default) or
    from the alternation depth of the fixpoint subformula (``"ad"``), rounded
    down to even for nu and odd for mu.  The ``"ad"`` rule is kept for
    comparison only: a fixpoint of high alternation depth nested inside, but
    independent of, an outer fixpoint can then outrank it.
    """
    if is_enriched(f):
        raise GameError("evaluation games cover the core mu-calculus only")
    if free_variables(f):
        raise GameError(f"formula has free variables: {', '.join(sorted(free_variables(f)))}")
    if v0 not in g.index:
        raise GraphError(f"no vertex {v0!r}")
    core = rename_apart(expand_guards(f))
    subs: list[Formula] = []
    seen: set[Formula] = set()
    for h in walk(core):
        if h not in seen:
            seen.add(h)
            subs.append(h)
    binder_of = {h.var: h for h in subs if isinstance(h, FIXPOINTS)}
    if priority == "chain":
        blocks = binder_blocks(core)
        rank = {h: fixpoint_priority(h, blocks[h.var]) for h in binder_of.values()}
    elif priority == "ad":
        rank = {h: fixpoint_priority(h, classify(h).ad) for h in binder_of.values()}
    else:
        raise ValueError(f"unknown priority rule {priority!r}")
    k_of = {h: k for k, h in enumerate(subs)}

    def pid(v: str, h: Formula) -> str:
        return f"{v}:{k_of[h]}"

    owner, prio, edges, positions = {}, {}, [], {}
    for v in g.vertices:
        atoms_here = set(g.atoms_at(v))
        for h in subs:
            p = pid(v, h)
            positions[p] = (v, h)
            prio[p] = rank.get(h, 0)
            if isinstance(h, (Atom, NegAtom)):
                holds = (h.name in atoms_here) == isinstance(h, Atom)
                owner[p] = C if holds else D
            elif isinstance(h, Top):
                owner[p] = C
            elif isinstance(h, Bottom):
                owner[p] = D
            elif isinstance(h, (Or, Diamond)):
                owner[p] = D
            else:
                owner[p] = C
            if isinstance(h, (Or, And)):
                edges += [(p, pid(v, h.left)), (p, pid(v, h.right))]
            elif isinstance(h, (Diamond, Box)):
                edges += [(p, pid(w, h.body)) for w in g.successors(v)]
            elif isinstance(h, FIXPOINTS):
                edges.append((p, pid(v, h.body)))
            elif isinstance(h, Var):
                edges.append((p, pid(v, binder_of[h.name])))
    game = ParityGame(owner, prio, edges, pid(v0, core))
    return EvaluationGame(game, positions, core)


def game_check(g: LabeledGraph, v: str, f: Formula, priority: str = "chain") -> bool:
    """True iff ``d`` wins the evaluation game from ``(v, f)``."""
    ev = build_evaluation_game(g, v, f, priority)
    return ev.game.initial in solve(ev.game).win_d


# -- encoding games as graphs and the Walukiewicz formulas ------------------------


def priority_atom(i: int) -> str:
    return f"pr{i}"


def encode_game(g: ParityGame, n: int | None = None) -> LabeledGraph:
    """Graph with atoms ``c``/``d`` for owners and ``pr0..prn`` for priorities."""
    n = g.max_priority if n is None else n
    if g.max_priority > n:
        raise GameError(f"priority {g.max_priority} exceeds the encoding bound {n}")
    val: dict[str, set[str]] = {C: set(), D: set()}
    for i in range(n + 1):
        val[priority_atom(i)] = set()
    for v in g.vertices:
        val[g.owner[v]].add(v)
        val[priority_atom(g.priority[v])].add(v)
    if g.color is not None:
        val[P] = {v for v in g.vertices if g.color[v] == P}
    return LabeledGraph(g.vertices, g.edges, val, g.initial)


def decode_game(gr: LabeledGraph) -> ParityGame:
    owner, prio = {}, {}
    for v in gr.vertices:
        here = set(gr.atoms_at(v))
        owners = here & {C, D}
        prios = [int(a[2:]) for a in here if a.startswith("pr") and a[2:].isdigit()]
        if len(owners) != 1 or len(prios) != 1:
            raise GameError(f"vertex {v} does not encode exactly one owner and one priority")
        owner[v], prio[v] = owners.pop(), prios[0]
    color = None
    if gr.colored:
        color = {v: P if v in gr.valuation[P] else PBAR for v in gr.vertices}
    p_parity = color is not None and all(color[u] != color[w] for u, w in gr.edges)
    return ParityGame(owner, prio, gr.edges, gr.initial, color, p_parity)


def _cross_diamond(body: Formula) -> Formula:
    return Or(GDiamond(P, PBAR, body), GDiamond(PBAR, P, body))


def _cross_box(body: Formula) -> Formula:
    return And(GBox(P, PBAR, body), GBox(PBAR, P, body))


def walukiewicz(n: int, p_variant: bool = False) -> Formula:
    """``sigma X_n ... sigma X_0. \\/_i pr_i /\\ ((d /\\ <> X_i) \\/ (c /\\ [] X_i))``.

    ``X_i`` is a greatest fixpoint for even ``i`` and a least one for odd
    ``i``; ``X_n`` is outermost.  With ``p_variant`` each modality is replaced
    by its cross-colour guarded version.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    dia = _cross_diamond if p_variant else Diamond
    box = _cross_box if p_variant else Box
    xs = [f"X{i}" for i in range(n + 1)]
    body = disj(*(
        conj(Atom(priority_atom(i)), Or(And(Atom(D), dia(Var(xs[i]))), And(Atom(C), box(Var(xs[i])))))
        for i in range(n + 1)
    ))
    for i in range(n + 1):
        body = (Nu if i % 2 == 0 else Mu)(xs[i], body)
    return body
