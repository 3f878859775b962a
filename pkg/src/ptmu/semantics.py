"""Direct fixpoint-iteration semantics over finite labelled graphs.

Extensions are computed as vertex bitmasks.  Least fixpoints iterate upward
from the empty set and greatest fixpoints downward from ``V``; by
monotonicity each iteration stabilises within ``|V| + 1`` rounds.  A fixpoint met again with the same values for its free variables
is not recomputed.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .formula.nodes import (
    ANY, NOMINAL, P, PBAR,
    And, Atom, Bottom, Box, CBox, CDiamond, Diamond, Formula, GBox, GDiamond,
    InvBox, InvDiamond, Mu, NegAtom, Nu, Or, Star, Top, Var, free_variables,
)
from .graph import GraphError, LabeledGraph, bits


class SemanticsError(ValueError):
    pass


class _Evaluator:
    def __init__(self, g: LabeledGraph):
        self.g = g
        self.full = g.full
        self.succ = g.succ
        self.pred = g.pred
        self._atoms: dict[str, int] = {}
        # fixpoint results keyed by node identity and the values of its free variables
        self._free: dict[int, tuple[str, ...]] = {}
        self._memo: dict[tuple, int] = {}

    def atom(self, name: str) -> int:
        m = self._atoms.get(name)
        if m is None:
            if name == NOMINAL and len(self.g.valuation.get(NOMINAL, ())) != 1:
                raise SemanticsError("the nominal N must denote exactly one vertex")
            if name in (P, PBAR) and not self.g.colored:
                raise GraphError("formula uses colour atoms but the graph has no P/p colouring")
            m = self._atoms[name] = self.g.atom_mask(name)
        return m

    def color(self, c: str) -> int:
        return self.full if c == ANY else self.atom(c)

    def diamond(self, s: int) -> int:
        out = 0
        for j in bits(s):
            out |= self.pred[j]
        return out

    def box(self, s: int) -> int:
        return self.full & ~self.diamond(self.full & ~s)

    def count_above(self, adj, s: int, n: int) -> int:
        out = 0
        for i, m in enumerate(adj):
            if (m & s).bit_count() > n:
                out |= 1 << i
        return out

    def ev(self, f: Formula, env: Mapping[str, int]) -> int:
        if isinstance(f, Atom):
            return self.atom(f.name)
        if isinstance(f, NegAtom):
            return self.full & ~self.atom(f.name)
        if isinstance(f, Var):
            try:
                return env[f.name]
            except KeyError:
                raise SemanticsError(f"unbound variable {f.name}") from None
        if isinstance(f, Or):
            return self.ev(f.left, env) | self.ev(f.right, env)
        if isinstance(f, And):
            return self.ev(f.left, env) & self.ev(f.right, env)
        if isinstance(f, Diamond):
            return self.diamond(self.ev(f.body, env))
        if isinstance(f, Box):
            return self.box(self.ev(f.body, env))
        if isinstance(f, GDiamond):
            return self.color(f.src) & self.diamond(self.color(f.dst) & self.ev(f.body, env))
        if isinstance(f, GBox):
            src, dst = self.color(f.src), self.color(f.dst)
            return (self.full & ~src) | self.box((self.full & ~dst) | self.ev(f.body, env))
        if isinstance(f, CDiamond):
            return self.count_above(self.succ, self.ev(f.body, env), f.n)
        if isinstance(f, CBox):
            # at most n successors outside the body
            return self.full & ~self.count_above(self.succ, self.full & ~self.ev(f.body, env), f.n)
        if isinstance(f, InvDiamond):
            return self.count_above(self.pred, self.ev(f.body, env), f.n)
        if isinstance(f, InvBox):
            return self.full & ~self.count_above(self.pred, self.full & ~self.ev(f.body, env), f.n)
        if isinstance(f, (Mu, Nu)):
            free = self._free.get(id(f))
            if free is None:
                free = self._free[id(f)] = tuple(sorted(free_variables(f)))
            key = (id(f), *(env.get(x) for x in free))
            s = self._memo.get(key)
            if s is None:
                s = self._memo[key] = self.fixpoint(f.var, f.body, 0 if isinstance(f, Mu) else self.full, env)
            return s
        if isinstance(f, Star):
            body = self.ev(f.body, env)
            s = 0
            for _ in range(self.g.n + 2):
                new = body | self.diamond(s)
                if new == s:
                    return s
                s = new
            raise AssertionError("star iteration did not stabilise")
        if isinstance(f, Top):
            return self.full
        if isinstance(f, Bottom):
            return 0
        raise TypeError(type(f).__name__)

    def fixpoint(self, var: str, body: Formula, start: int, env: Mapping[str, int]) -> int:
        s = start
        for _ in range(self.g.n + 2):
            new = self.ev(body, {**env, var: s})
            if new == s:
                return s
            s = new
        raise AssertionError(f"fixpoint for {var} did not stabilise")


def extension_mask(g: LabeledGraph, f: Formula, env: Mapping[str, int] | None = None) -> int:
    """Extension of ``f`` as a bitmask over ``g.vertices``."""
    return _Evaluator(g).ev(f, env or {})


def evaluate(g: LabeledGraph, f: Formula, env: Mapping[str, Iterable[str]] | None = None) -> frozenset[str]:
    """The set of vertices of ``g`` satisfying ``f`` under ``env``."""
    masks = {x: g.mask(vs) for x, vs in (env or {}).items()}
    return g.unmask(extension_mask(g, f, masks))


eval = evaluate


def model_check(g: LabeledGraph, v: str, f: Formula) -> bool:
    free = free_variables(f)
    if free:
        raise SemanticsError(f"formula has free variables: {', '.join(sorted(free))}")
    if v not in g.index:
        raise GraphError(f"no vertex {v!r}")
    return bool(extension_mask(g, f) >> g.index[v] & 1)


# -- batch evaluation over many edge sets --------------------------------------


class _BatchEvaluator:
    """Evaluate one formula on many graphs sharing ``n`` vertices and a valuation.

    Graph ``k`` has edge ``i -> j`` iff bit ``i * n + j`` of ``masks[k]`` is set.
    Extensions are uint32 arrays of vertex bitmasks.
    """

    def __init__(self, n: int, masks: np.ndarray, valuation: Mapping[str, int]):
        self.n = n
        self.full = np.uint32((1 << n) - 1)
        m = np.asarray(masks, dtype=np.int64)
        self.edge = [[((m >> (i * n + j)) & 1).astype(bool) for j in range(n)] for i in range(n)]
        self.valuation = valuation
        self.size = len(m)

    def const(self, value: int) -> np.ndarray:
        return np.full(self.size, value, dtype=np.uint32)

    def atom(self, name: str) -> np.ndarray:
        if name == NOMINAL:
            raise SemanticsError("batch evaluation does not support the nominal")
        return self.const(self.valuation.get(name, 0))

    def diamond(self, s: np.ndarray) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.uint32)
        for j in range(self.n):
            sj = ((s >> np.uint32(j)) & np.uint32(1)).astype(bool)
            for i in range(self.n):
                out |= (self.edge[i][j] & sj).astype(np.uint32) << np.uint32(i)
        return out

    def ev(self, f: Formula, env) -> np.ndarray:
        full = self.full
        if isinstance(f, Atom):
            return self.atom(f.name)
        if isinstance(f, NegAtom):
            return full & ~self.atom(f.name)
        if isinstance(f, Var):
            return env[f.name]
        if isinstance(f, Or):
            return self.ev(f.left, env) | self.ev(f.right, env)
        if isinstance(f, And):
            return self.ev(f.left, env) & self.ev(f.right, env)
        if isinstance(f, Diamond):
            return self.diamond(self.ev(f.body, env))
        if isinstance(f, Box):
            return full & ~self.diamond(full & ~self.ev(f.body, env))
        if isinstance(f, GDiamond):
            src = full if f.src == ANY else self.atom(f.src)
            dst = full if f.dst == ANY else self.atom(f.dst)
            return src & self.diamond(dst & self.ev(f.body, env))
        if isinstance(f, GBox):
            src = full if f.src == ANY else self.atom(f.src)
            dst = full if f.dst == ANY else self.atom(f.dst)
            return (full & ~src) | (full & ~self.diamond(dst & (full & ~self.ev(f.body, env))))
        if isinstance(f, (Mu, Nu)):
            s = self.const(0 if isinstance(f, Mu) else int(full))
            # n + 1 rounds reach the fixpoint; further rounds leave it unchanged
            for _ in range(self.n + 1):
                s = self.ev(f.body, {**env, f.var: s})
            return s
        if isinstance(f, Star):
            body = self.ev(f.body, env)
            s = self.const(0)
            for _ in range(self.n + 1):
                s = body | self.diamond(s)
            return s
        if isinstance(f, Top):
            return self.const(int(full))
        if isinstance(f, Bottom):
            return self.const(0)
        raise SemanticsError(f"batch evaluation does not support {type(f).__name__}")


def batch_extension(n: int, masks, valuation: Mapping[str, int], f: Formula) -> np.ndarray:
    """Extensions of a closed core formula ``f`` on every graph in ``masks``."""
    return _BatchEvaluator(n, masks, valuation).ev(f, {})
