"""Model-checking reduction to P-transitive graphs, bounded satisfiability and
the formula pieces of the domino encoding."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .formula.nodes import (
    P, PBAR,
    And, Atom, Box, CBox, Diamond, Formula, GBox, GDiamond, InvBox, InvDiamond, NegAtom, Or,
    atoms, conj, disj, free_variables, implies, is_enriched, transform, uses_p,
)
from .formula.transform import expand_guards
from .graph import LabeledGraph, graph_from_mask, is_p_transitive, p_transitive_masks, tile_atom
from .semantics import batch_extension, model_check

logger = logging.getLogger(__name__)


class ReductionError(ValueError):
    pass


# -- model-checking reduction --------------------------------------------------------


@dataclass
class ReductionResult:
    graph: LabeledGraph
    initial: str
    formula: Formula
    vertex_map: dict[str, tuple[str, str]]
    cost: dict[str, int] = field(default_factory=dict)


def copy_name(v: str, color: str) -> str:
    return f"{v}:{color}"


def reduce_mc(g: LabeledGraph, v: str, f: Formula) -> ReductionResult:
    """Build a P-transitive ``G'`` and ``f'`` with ``G, v |= f`` iff ``G', (v, P) |= f'``.

    Every vertex gets a P copy and a p copy.  Each edge ``v -> w`` becomes
    ``(v,P) -> (w,p)`` and ``(v,p) -> (w,P)``; both colour classes are made
    complete (self-pairs included).  ``f'`` only looks along colour-changing
    edges, so the complete blocks never matter to it.
    """
    if g.colored or P in g.valuation or PBAR in g.valuation:
        raise ReductionError("the graph already uses the colour atoms P/p")
    if uses_p(f):
        raise ReductionError("the formula already uses P/p or guarded modalities")
    if is_enriched(f):
        raise ReductionError("the reduction covers the core mu-calculus only")
    if v not in g.index:
        raise ReductionError(f"no vertex {v!r}")
    cost = {"edges": 0, "formula_nodes": 0}
    vmap = {x: (copy_name(x, P), copy_name(x, PBAR)) for x in g.vertices}
    edges = []
    for x, y in g.edges:
        edges += [(copy_name(x, P), copy_name(y, PBAR)), (copy_name(x, PBAR), copy_name(y, P))]
        cost["edges"] += 2
    for c in (P, PBAR):
        for x in g.vertices:
            for y in g.vertices:
                edges.append((copy_name(x, c), copy_name(y, c)))
                cost["edges"] += 1
    val = {a: {copy_name(x, c) for x in ext for c in (P, PBAR)} for a, ext in g.valuation.items()}
    val[P] = {copy_name(x, P) for x in g.vertices}
    g2 = LabeledGraph([n for pair in vmap.values() for n in pair], edges, val, copy_name(v, P))

    def step(h: Formula) -> Formula:
        cost["formula_nodes"] += 1
        if isinstance(h, Diamond):
            return Or(GDiamond(P, PBAR, h.body), GDiamond(PBAR, P, h.body))
        if isinstance(h, Box):
            return And(GBox(P, PBAR, h.body), GBox(PBAR, P, h.body))
        return h

    f2 = transform(expand_guards(f), step)
    return ReductionResult(g2, copy_name(v, P), f2, vmap, cost)


# -- bounded satisfiability -------------------------------------------------------


@dataclass
class SatWitness:
    graph: LabeledGraph
    vertex: str


@lru_cache(maxsize=None)
def _pt_masks(is_p: tuple[bool, ...]) -> np.ndarray:
    return p_transitive_masks(is_p)


def _stabilizer(labels: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Vertex permutations preserving a sorted labelling (permute within blocks)."""
    blocks = [list(grp) for _, grp in itertools.groupby(range(len(labels)), key=lambda i: labels[i])]
    perms = []
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = [0] * len(labels)
        for block, image in zip(blocks, choice):
            for i, j in zip(block, image):
                perm[i] = j
        perms.append(tuple(perm))
    return perms


def _canonical(n: int, masks: np.ndarray, perms) -> np.ndarray:
    """Keep the masks that are smallest in their orbit under ``perms``."""
    keep = np.ones(len(masks), dtype=bool)
    for perm in perms:
        if list(perm) == list(range(n)):
            continue
        image = np.zeros_like(masks)
        for i in range(n):
            for j in range(n):
                image |= ((masks >> (i * n + j)) & 1) << (perm[i] * n + perm[j])
        keep &= masks <= image
    return masks[keep]


def bounded_sat(f: Formula, max_n: int) -> SatWitness | None:
    """Search P-transitive graphs with at most ``max_n`` vertices for a model of ``f``.

    Candidates go by increasing size, then by sorted vertex labelling (colour
    and atoms), then by edge set.  Every graph is isomorphic to one with a
    sorted labelling, and within a labelling only edge sets minimal under
    label-preserving permutations are tried, so no isomorphism class is
    missed.  ``None`` means no model up to ``max_n``, not unsatisfiability.
    """
    if is_enriched(f):
        raise ReductionError("satisfiability of the enriched mu-calculus is undecidable on P-transitive graphs")
    if free_variables(f):
        raise ReductionError("bounded_sat needs a closed formula")
    core = expand_guards(f)
    extra = sorted(atoms(core) - {P, PBAR})
    n_labels = 2 << len(extra)
    for n in range(1, max_n + 1):
        for labels in itertools.combinations_with_replacement(range(n_labels), n):
            # label bit 0 is the colour (1 = P), bit k + 1 is atom extra[k]
            is_p = tuple(bool(lab & 1) for lab in labels)
            val = {P: sum(1 << i for i, p in enumerate(is_p) if p)}
            val[PBAR] = ((1 << n) - 1) & ~val[P]
            for k, a in enumerate(extra):
                val[a] = sum(1 << i for i, lab in enumerate(labels) if lab >> (k + 1) & 1)
            masks = _canonical(n, _pt_masks(is_p), _stabilizer(labels))
            if not len(masks):
                continue
            ext = batch_extension(n, masks, val, core)
            hits = np.flatnonzero(ext)
            if not len(hits):
                continue
            k = int(hits[0])
            e = int(ext[k])
            vertex = str((e & -e).bit_length() - 1)
            valuation = {a: [str(i) for i in range(n) if m >> i & 1] for a, m in val.items()}
            w = graph_from_mask(n, int(masks[k]), valuation, vertex)
            if not (is_p_transitive(w) and model_check(w, vertex, f)):
                raise AssertionError("bounded_sat witness failed re-verification")
            return SatWitness(w, vertex)
        logger.info("no model with %d vertices", n)
    return None


# -- domino encoding ------------------------------------------------------------------


class DominoSystem:
    """Tiles with horizontal and vertical compatibility relations.

    ``(t, u)`` in ``hor`` allows ``u`` immediately right of ``t``; ``(t, u)``
    in ``vert`` allows ``u`` immediately below ``t``.
    """

    def __init__(self, tiles, hor=(), vert=()):
        self.tiles = tuple(dict.fromkeys(tiles))
        self.hor = frozenset(map(tuple, hor))
        self.vert = frozenset(map(tuple, vert))
        known = set(self.tiles)
        for t, u in self.hor | self.vert:
            if t not in known or u not in known:
                raise ValueError(f"relation pair ({t}, {u}) uses an unknown tile")

    def to_text(self) -> str:
        lines = [f"tile {t}" for t in self.tiles]
        lines += [f"hor {t} {u}" for t, u in sorted(self.hor)]
        lines += [f"vert {t} {u}" for t, u in sorted(self.vert)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DominoSystem":
        tiles, hor, vert = [], [], []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "tile" and len(parts) == 2:
                tiles.append(parts[1])
            elif parts[0] in ("hor", "vert") and len(parts) == 3:
                (hor if parts[0] == "hor" else vert).append((parts[1], parts[2]))
            else:
                raise ValueError(f"line {lineno}: cannot parse {raw.strip()!r}")
        return cls(tiles, hor, vert)

    def is_paving(self, paving, m: int) -> bool:
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                if j < m and (paving[i, j], paving[i, j + 1]) not in self.hor:
                    return False
                if i < m and (paving[i, j], paving[i + 1, j]) not in self.vert:
                    return False
        return True


LV_PAIRS = {
    "l": (("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")),
    "v": (("a", "c"), ("c", "a"), ("b", "d"), ("d", "b")),
}


def lv_modality(relation: str, body: Formula, inverse: bool = False, box: bool = False) -> Formula:
    """``<l_G> body`` (or ``<v_G>``) spelled out over the single relation.

    ``a /\\ <>(b /\\ body) \\/ b /\\ <>(a /\\ body) \\/ ...`` with the colour pairs
    of the relation; ``inverse`` walks edges backwards, ``box`` gives the dual.
    """
    pairs = LV_PAIRS[relation]
    if box:
        mod = (lambda x: InvBox(0, x)) if inverse else Box
        return conj(*(Or(NegAtom(x), mod(Or(NegAtom(y), body))) for x, y in pairs))
    mod = (lambda x: InvDiamond(0, x)) if inverse else Diamond
    return disj(*(And(Atom(x), mod(And(Atom(y), body))) for x, y in pairs))


def _a(name):
    return Atom(name)


def build_psi2() -> Formula:
    """The grid-colouring conditions, each bullet transcribed as printed."""
    a, b, c, d = map(_a, "abcd")
    father = lambda x: InvDiamond(0, x)  # noqa: E731
    son = Diamond
    partition = conj(
        disj(a, b, c, d),
        *(Or(NegAtom(x), NegAtom(y)) for x, y in itertools.combinations("abcd", 2)),
    )
    return conj(
        partition,
        implies(_a("N"), a),
        implies(a, And(father(b), son(c))),
        implies(And(son(b), father(c)), a),
        implies(b, And(father(a), son(d))),
        implies(And(father(d), son(a)), b),
        implies(c, And(father(d), son(a))),
        implies(And(father(a), son(d)), c),
        implies(d, And(father(c), son(b))),
        implies(And(father(b), son(c)), d),
    )


def functionality_constraints() -> Formula:
    """``x -> []{<=1} ~y``: at most one ``y`` successor (and predecessor) per relation pair."""
    parts = []
    for relation in ("l", "v"):
        for x, y in LV_PAIRS[relation]:
            parts.append(implies(Atom(x), CBox(1, NegAtom(y))))
    for relation in ("l", "v"):
        for x, y in LV_PAIRS[relation]:
            parts.append(implies(Atom(x), InvBox(1, NegAtom(y))))
    return conj(*parts)


def tile_constraints(domino: DominoSystem) -> Formula:
    """Exactly one tile per vertex; left and lower neighbours respect ``hor`` and ``vert``."""
    tiles = [Atom(tile_atom(t)) for t in domino.tiles]
    parts = [disj(*tiles)]
    parts += [Or(NegAtom(x.name), NegAtom(y.name)) for x, y in itertools.combinations(tiles, 2)]
    for t in domino.tiles:
        # left edges point from a cell to the cell on its left
        left_ok = disj(*(Atom(tile_atom(u)) for u in domino.tiles if (u, t) in domino.hor))
        below_ok = disj(*(Atom(tile_atom(u)) for u in domino.tiles if (t, u) in domino.vert))
        parts.append(implies(Atom(tile_atom(t)), lv_modality("l", left_ok, box=True)))
        parts.append(implies(Atom(tile_atom(t)), lv_modality("v", below_ok, box=True)))
    return conj(*parts)


def build_functionality(domino: DominoSystem) -> Formula:
    return And(functionality_constraints(), tile_constraints(domino))
