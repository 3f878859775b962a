"""Finite vertex-labelled directed graphs and their structural properties.

Vertices are opaque string ids kept in a deterministic natural order; edge
sets are stored as one successor bitmask per vertex (bit ``j`` of ``succ[i]``
is the edge ``i -> j``).  The colour atoms ``P`` and ``p`` (P-bar), when
present, partition the vertex set.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .formula.nodes import NOMINAL, P, PBAR


class GraphError(ValueError):
    pass


def natural_key(vid: str):
    return tuple((0, int(t), "") if t.isdigit() else (1, 0, t) for t in re.findall(r"\d+|\D+", vid))


def bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class LabeledGraph:
    """A finite graph ``(V, R)`` with a valuation of atoms and an optional initial vertex."""

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, str]] = (),
        valuation: Mapping[str, Iterable[str]] | None = None,
        initial: str | None = None,
    ):
        vs = sorted({str(v) for v in vertices}, key=natural_key)
        self.vertices: tuple[str, ...] = tuple(vs)
        self.index = {v: i for i, v in enumerate(vs)}
        succ = [0] * len(vs)
        for u, w in edges:
            if u not in self.index or w not in self.index:
                raise GraphError(f"edge ({u}, {w}) uses an undeclared vertex")
            succ[self.index[u]] |= 1 << self.index[w]
        self.succ: tuple[int, ...] = tuple(succ)
        val = {}
        for a, ext in (valuation or {}).items():
            ext = frozenset(ext)
            bad = ext - set(self.index)
            if bad:
                raise GraphError(f"atom {a} labels undeclared vertices {sorted(bad)}")
            val[a] = ext
        everything = frozenset(vs)
        if (P in val) != (PBAR in val):
            given = P if P in val else PBAR
            val[PBAR if given == P else P] = everything - val[given]
        elif P in val and (val[P] & val[PBAR] or val[P] | val[PBAR] != everything):
            raise GraphError("atoms P and p must partition the vertices")
        if NOMINAL in val and len(val[NOMINAL]) != 1:
            raise GraphError("the nominal N must label exactly one vertex")
        self.valuation: dict[str, frozenset[str]] = {a: val[a] for a in sorted(val)}
        if initial is not None and initial not in self.index:
            raise GraphError(f"initial vertex {initial} is not declared")
        self.initial = initial
        pred = [0] * len(vs)
        for i, m in enumerate(succ):
            for j in bits(m):
                pred[j] |= 1 << i
        self.pred: tuple[int, ...] = tuple(pred)

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def edges(self) -> list[tuple[str, str]]:
        return [(self.vertices[i], self.vertices[j]) for i, m in enumerate(self.succ) for j in bits(m)]

    @property
    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.succ)

    def has_edge(self, u: str, w: str) -> bool:
        return bool(self.succ[self.index[u]] >> self.index[w] & 1)

    def successors(self, v: str) -> list[str]:
        return [self.vertices[j] for j in bits(self.succ[self.index[v]])]

    def atoms_at(self, v: str) -> list[str]:
        return [a for a, ext in self.valuation.items() if v in ext]

    def mask(self, vs: Iterable[str]) -> int:
        out = 0
        for v in vs:
            out |= 1 << self.index[v]
        return out

    def unmask(self, m: int) -> frozenset[str]:
        return frozenset(self.vertices[i] for i in bits(m))

    def atom_mask(self, a: str) -> int:
        return self.mask(self.valuation.get(a, ()))

    @property
    def colored(self) -> bool:
        return P in self.valuation

    def require_colored(self) -> int:
        """Bitmask of the P vertices; raises if the graph carries no P colouring."""
        if not self.colored:
            raise GraphError("graph has no P/p colouring")
        return self.atom_mask(P)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for i, m in enumerate(self.succ):
            for j in bits(m):
                a[i, j] = True
        return a

    # -- derived graphs ----------------------------------------------------

    def replace(self, edges=None, valuation=None, initial="keep") -> "LabeledGraph":
        return LabeledGraph(
            self.vertices,
            self.edges if edges is None else edges,
            self.valuation if valuation is None else valuation,
            self.initial if initial == "keep" else initial,
        )

    def with_edges(self, extra: Iterable[tuple[str, str]]) -> "LabeledGraph":
        return self.replace(edges=list(self.edges) + list(extra))

    def _key(self):
        val = {a: ext for a, ext in self.valuation.items() if ext}
        return (self.vertices, self.succ, tuple(sorted(val.items())), self.initial)

    def __eq__(self, other):
        return isinstance(other, LabeledGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, edges={self.edge_count}, atoms={list(self.valuation)})"

    # -- file format ---------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for v in self.vertices:
            atoms = self.atoms_at(v)
            lines.append(f"vertex {v}" + (f" atoms={','.join(atoms)}" if atoms else ""))
        lines.extend(f"edge {u} {w}" for u, w in self.edges)
        if self.initial is not None:
            lines.append(f"initial {self.initial}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LabeledGraph":
        vertices, edges, valuation, initial = [], [], {}, None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            kind = parts[0]
            if kind == "vertex" and len(parts) in (2, 3):
                vertices.append(parts[1])
                if len(parts) == 3:
                    if not parts[2].startswith("atoms="):
                        raise GraphError(f"line {lineno}: expected atoms=..., got {parts[2]!r}")
                    for a in filter(None, parts[2][len("atoms="):].split(",")):
                        valuation.setdefault(a, set()).add(parts[1])
            elif kind == "edge" and len(parts) == 3:
                edges.append((parts[1], parts[2]))
            elif kind == "initial" and len(parts) == 2:
                initial = parts[1]
            else:
                raise GraphError(f"line {lineno}: cannot parse {raw.strip()!r}")
        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex declaration")
        return cls(vertices, edges, valuation, initial)

    @classmethod
    def load(cls, path) -> "LabeledGraph":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())


# -- reachability ------------------------------------------------------------


def post(succ: tuple[int, ...], m: int) -> int:
    out = 0
    for i in bits(m):
        out |= succ[i]
    return out


def reach_masks(g: LabeledGraph) -> list[int]:
    """``reach[i]``: vertices reachable from ``i`` by a path of length >= 1."""
    reach = list(g.succ)
    changed = True
    while changed:
        changed = False
        for i in range(g.n):
            new = reach[i] | post(reach, reach[i])
            if new != reach[i]:
                reach[i] = new
                changed = True
    return reach


def is_transitive(g: LabeledGraph) -> bool:
    return all(post(g.succ, m) & ~m == 0 for m in g.succ)


def reachability_diameter(g: LabeledGraph) -> int:
    """Least ``k`` such that ``g`` is k-transitive; ``1`` for edgeless graphs.

    If ``y`` is reachable from ``x`` its shortest path has some length ``d``,
    and ``g`` is k-transitive exactly when every such ``d`` is at most ``k``: a
    (k+1)-step path can then be shortened, and conversely a pair whose
    shortest path is ``k+1`` violates k-transitivity.
    """
    best = 1
    for i in range(g.n):
        seen, frontier, d = 0, g.succ[i], 1
        while frontier & ~seen:
            new = frontier & ~seen
            best = max(best, d)
            seen |= new
            frontier = post(g.succ, new)
            d += 1
    return best


def is_p_transitive(g: LabeledGraph) -> bool:
    """Same-coloured endpoints of every path of length 2 or 3 are adjacent."""
    pm = g.require_colored()
    for i in range(g.n):
        two = post(g.succ, g.succ[i])
        three = post(g.succ, two)
        same = pm if pm >> i & 1 else g.full & ~pm
        if (two | three) & same & ~g.succ[i]:
            return False
    return True


def ptc(g: LabeledGraph) -> LabeledGraph:
    """P-transitive closure: link same-coloured pairs ``x`` reaching ``y``."""
    pm = g.require_colored()
    reach = reach_masks(g)
    extra = []
    for i in range(g.n):
        same = pm if pm >> i & 1 else g.full & ~pm
        for j in bits(reach[i] & same & ~g.succ[i]):
            extra.append((g.vertices[i], g.vertices[j]))
    return g.with_edges(extra) if extra else g


def is_wellfounded(g: LabeledGraph) -> bool:
    return all(not (m >> i & 1) for i, m in enumerate(reach_masks(g)))


@dataclass(frozen=True)
class ClassificationReport:
    transitive: bool
    p_transitive: bool | None
    reachability_diameter: int
    wellfounded: bool

    def lines(self) -> list[str]:
        pt = "n/a" if self.p_transitive is None else str(self.p_transitive).lower()
        return [
            f"transitive={str(self.transitive).lower()}",
            f"p-transitive={pt}",
            f"diameter={self.reachability_diameter}",
            f"wellfounded={str(self.wellfounded).lower()}",
        ]


def classify_graph(g: LabeledGraph) -> ClassificationReport:
    return ClassificationReport(
        transitive=is_transitive(g),
        p_transitive=is_p_transitive(g) if g.colored else None,
        reachability_diameter=reachability_diameter(g),
        wellfounded=is_wellfounded(g),
    )


# -- derived valuations and restrictions --------------------------------------


def swap_valuation(g: LabeledGraph) -> LabeledGraph:
    """Exchange the extensions of ``P`` and ``p``."""
    g.require_colored()
    val = dict(g.valuation)
    val[P], val[PBAR] = g.valuation[PBAR], g.valuation[P]
    return g.replace(valuation=val)


def cross_color_restriction(g: LabeledGraph) -> LabeledGraph:
    """Keep only the edges joining a P vertex and a p vertex."""
    pm = g.require_colored()
    return g.replace(edges=[(u, w) for u, w in g.edges if (pm >> g.index[u] & 1) != (pm >> g.index[w] & 1)])


# -- fixtures and generators -------------------------------------------------------


def g5() -> LabeledGraph:
    """The five-vertex DAG with two incomparable 2-transitive completions."""
    return LabeledGraph("12345", [("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("4", "5")])


def path4() -> LabeledGraph:
    """Alternating path ``x0 -> x1 -> x2 -> x3 -> x4`` coloured P, p, P, p, P."""
    vs = [f"x{i}" for i in range(5)]
    return LabeledGraph(vs, zip(vs, vs[1:]), {P: vs[0::2]}, initial="x0")


def loop1() -> LabeledGraph:
    return LabeledGraph(["0"], [("0", "0")], initial="0")


GRID_COLORS = ("a", "b", "c", "d")


def grid_color(i: int, j: int) -> str:
    """Colour of cell (row i, column j), both counted from 1."""
    if i % 2:
        return "a" if j % 2 else "b"
    return "c" if j % 2 else "d"


def abcd_grid(m: int, domino=None, paving: Mapping[tuple[int, int], str] | None = None,
              closed: bool = False) -> LabeledGraph:
    """The ``m x m`` fragment of the abcd-coloured grid.

    Vertex ``"i.j"`` is row ``i``, column ``j``.  Left edges run from
    ``(i, j+1)`` to ``(i, j)`` and vertical edges from ``(i, j)`` to ``(i+1, j)``.
    ``P`` is ``a`` or ``d``; the nominal ``N`` sits on the origin ``1.1``.  With
    a paving, tile ``t`` becomes the atom ``tile_t``.  ``closed`` applies
    :func:`ptc`.
    """
    if m < 2:
        raise GraphError("grid fragments need m >= 2")
    cells = [(i, j) for i in range(1, m + 1) for j in range(1, m + 1)]
    name = {c: f"{c[0]}.{c[1]}" for c in cells}
    edges = []
    for i, j in cells:
        if j < m:
            edges.append((name[i, j + 1], name[i, j]))
        if i < m:
            edges.append((name[i, j], name[i + 1, j]))
    val: dict[str, set[str]] = {c: set() for c in GRID_COLORS}
    for c in cells:
        val[grid_color(*c)].add(name[c])
    val[P] = val["a"] | val["d"]
    val[NOMINAL] = {name[1, 1]}
    if paving is not None:
        missing = [c for c in cells if c not in paving]
        if missing:
            raise GraphError(f"paving is not total: no tile at {missing[0]}")
        for c in cells:
            t = paving[c]
            if domino is not None and t not in domino.tiles:
                raise GraphError(f"unknown tile {t!r} at {c}")
            val.setdefault(tile_atom(t), set()).add(name[c])
    g = LabeledGraph(name.values(), edges, val, initial=name[1, 1])
    return ptc(g) if closed else g


def tile_atom(t: str) -> str:
    return f"tile_{t}"


def random_colored_graph(seed: int, n: int, density: float, atoms: Iterable[str] = ("q",),
                         colored: bool = True) -> LabeledGraph:
    """Each ordered pair (self-loops included) is an edge with probability ``density``."""
    if n < 1:
        raise GraphError("need at least one vertex")
    rng = random.Random(seed)
    vs = [str(i) for i in range(n)]
    val: dict[str, list[str]] = {}
    if colored:
        val[P] = [v for v in vs if rng.random() < 0.5]
    for a in atoms:
        val[a] = [v for v in vs if rng.random() < 0.5]
    edges = [(u, w) for u in vs for w in vs if rng.random() < density]
    return LabeledGraph(vs, edges, val, initial=vs[0])


# -- vectorised enumeration ------------------------------------------------------


def p_transitive_masks(is_p: tuple[bool, ...], chunk: int = 1 << 18) -> np.ndarray:
    """All edge sets on ``len(is_p)`` vertices that are P-transitive for this colouring.

    An edge set is an integer whose bit ``i * n + j`` is the edge ``i -> j``.
    The result is sorted ascending.
    """
    n = len(is_p)
    k = n * n
    col = np.array(is_p, dtype=bool)
    same = col[:, None] == col[None, :]
    shifts = np.arange(k, dtype=np.int64)
    out = []
    for start in range(0, 1 << k, chunk):
        masks = np.arange(start, min(start + chunk, 1 << k), dtype=np.int64)
        a = ((masks[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1, n, n)
        a2 = np.matmul(a, a) > 0
        a3 = np.matmul(a2.astype(np.uint8), a) > 0
        bad = ((a2 | a3) & same & (a == 0)).reshape(len(masks), -1).any(axis=1)
        out.append(masks[~bad])
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def graph_from_mask(n: int, mask: int, valuation=None, initial=None) -> LabeledGraph:
    vs = [str(i) for i in range(n)]
    edges = [(vs[b // n], vs[b % n]) for b in bits(int(mask))]
    return LabeledGraph(vs, edges, valuation, initial)
