"""Modal depth and the position of a formula in the fixpoint hierarchy."""

from __future__ import annotations

from dataclasses import dataclass

from .nodes import (
    COUNTING, FIXPOINTS, GUARDED, LEAVES,
    Box, Diamond, Formula, Mu, Star, free_variables,
)
from .transform import rename_apart


class DepthError(ValueError):
    pass


def modal_depth(f: Formula) -> int:
    """Nesting depth of modalities in a fixpoint-free, counting-free formula.

    A guarded modality counts once, as its expansion ``P /\\ <>(P /\\ ..)`` does.
    """
    if isinstance(f, LEAVES):
        return 0
    if isinstance(f, (FIXPOINTS, Star)):
        raise DepthError("modal depth is undefined for formulas with fixpoints")
    if isinstance(f, COUNTING):
        raise DepthError("modal depth is undefined for counting or inverse modalities")
    if isinstance(f, (Diamond, Box) + GUARDED):
        return 1 + modal_depth(f.body)
    return max(modal_depth(k) for k in f.children())


@dataclass(frozen=True)
class FixpointClass:
    """Least Sigma and Pi levels and the alternation depth."""

    sigma: int
    pi: int
    ad: int

    @property
    def delta(self) -> int:
        return self.ad + 1


def binder_blocks(f: Formula) -> dict[str, int]:
    """Length of the longest alternating dependency chain starting at each binder.

    ``blocks(B)`` counts the fixpoint blocks along chains ``B = B0 > B1 > ...``
    where each ``B(i+1)`` lies inside ``Bi`` and has ``Bi``'s variable free; the
    count goes up by one each time the fixpoint type changes.  ``f`` should be
    renamed apart; keys are variable names.
    """
    blocks: dict[str, int] = {}

    def go(g: Formula) -> list[tuple[Formula, set[str]]]:
        # returns every binder at or below g with its free variables
        below: list[tuple[Formula, set[str]]] = []
        for k in g.children():
            below.extend(go(k))
        if isinstance(g, FIXPOINTS):
            b = 1
            for c, free in below:
                if g.var in free:
                    b = max(b, blocks[c.var] + (type(c) is not type(g)))
            blocks[g.var] = b
            below.append((g, free_variables(g)))
        return below

    go(f)
    return blocks


def classify(f: Formula) -> FixpointClass:
    """Least Sigma/Pi levels and alternation depth; free variables act as atoms.

    A binder heading a chain of ``b`` blocks needs level ``b`` on its own side
    (Sigma for mu, Pi for nu) and ``b + 1`` on the other.  Composition lets
    independent binders sit at their own levels, so the formula's level is the
    maximum over binders.
    """
    g = rename_apart(f)
    blocks = binder_blocks(g)
    if not blocks:
        return FixpointClass(0, 0, 0)
    kinds = {h.var: isinstance(h, Mu) for h in _binders(g)}
    sigma = max(b if kinds[x] else b + 1 for x, b in blocks.items())
    pi = max(b + 1 if kinds[x] else b for x, b in blocks.items())
    return FixpointClass(sigma, pi, max(sigma, pi) - 1)


def alternation_depth(f: Formula) -> int:
    return classify(f).ad


def _binders(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, FIXPOINTS):
            yield g
        stack.extend(g.children())
