"""Syntax trees for the modal mu-calculus in positive normal form.

Formulas are immutable, hashable dataclasses.  Structural equality is plain
``==``; :func:`alpha_equivalent` compares up to renaming of bound variables.

The two complementary colour atoms are named ``P`` and ``p`` (for P-bar).
Guarded modalities carry a source and a target colour drawn from
``{"P", "p", "-"}`` where ``"-"`` puts no constraint on that endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

P = "P"
PBAR = "p"
ANY = "-"
COLORS = (P, PBAR, ANY)
NOMINAL = "N"


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        from .syntax import render

        return render(self)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class NegAtom(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Var(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Diamond(Formula):
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class Box(Formula):
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class GDiamond(Formula):
    """``<src dst> body``: src-coloured here, some dst-coloured successor satisfies body."""

    src: str
    dst: str
    body: Formula

    def __post_init__(self):
        if self.src not in COLORS or self.dst not in COLORS:
            raise ValueError(f"bad guard colours {self.src!r}, {self.dst!r}")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class GBox(Formula):
    """``[src dst] body``: the dual of :class:`GDiamond`."""

    src: str
    dst: str
    body: Formula

    def __post_init__(self):
        if self.src not in COLORS or self.dst not in COLORS:
            raise ValueError(f"bad guard colours {self.src!r}, {self.dst!r}")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class CDiamond(Formula):
    """More than ``n`` successors satisfy body."""

    n: int
    body: Formula

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"counting threshold must be a non-negative int, got {self.n!r}")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class CBox(Formula):
    """At most ``n`` successors fail body."""

    n: int
    body: Formula

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"counting threshold must be a non-negative int, got {self.n!r}")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class InvDiamond(Formula):
    """More than ``n`` predecessors satisfy body."""

    n: int
    body: Formula

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"counting threshold must be a non-negative int, got {self.n!r}")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class InvBox(Formula):
    """At most ``n`` predecessors fail body."""

    n: int
    body: Formula

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"counting threshold must be a non-negative int, got {self.n!r}")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class Mu(Formula):
    var: str
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class Nu(Formula):
    var: str
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class Star(Formula):
    """Kleene-star macro ``<>* body``, i.e. ``mu X. body \\/ <> X``."""

    body: Formula

    def children(self):
        return (self.body,)


TRUE = Top()
FALSE = Bottom()

LEAVES = (Top, Bottom, Atom, NegAtom, Var)
BINARY = (Or, And)
FIXPOINTS = (Mu, Nu)
COUNTING = (CDiamond, CBox, InvDiamond, InvBox)
GUARDED = (GDiamond, GBox)


def with_children(f: Formula, kids: tuple[Formula, ...]) -> Formula:
    """Rebuild ``f`` with new children, keeping every other field."""
    if isinstance(f, LEAVES):
        return f
    if isinstance(f, BINARY):
        left, right = kids
        if left is f.left and right is f.right:
            return f
        return type(f)(left, right)
    (body,) = kids
    if body is f.body:
        return f
    if isinstance(f, GUARDED):
        return type(f)(f.src, f.dst, body)
    if isinstance(f, COUNTING):
        return type(f)(f.n, body)
    if isinstance(f, FIXPOINTS):
        return type(f)(f.var, body)
    return type(f)(body)


def transform(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    """Bottom-up rewrite: children first, then ``fn`` on the rebuilt node."""
    kids = tuple(transform(k, fn) for k in f.children())
    return fn(with_children(f, kids))


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of every node occurrence."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def subformulas(f: Formula) -> set[Formula]:
    return set(walk(f))


def atoms(f: Formula) -> set[str]:
    return {g.name for g in walk(f) if isinstance(g, (Atom, NegAtom))}


def uses_p(f: Formula) -> bool:
    """True if ``f`` mentions a colour atom or a guarded modality."""
    return any(
        isinstance(g, GUARDED) or (isinstance(g, (Atom, NegAtom)) and g.name in (P, PBAR))
        for g in walk(f)
    )


def bound_variables(f: Formula) -> list[str]:
    return [g.var for g in walk(f) if isinstance(g, FIXPOINTS)]


def free_variables(f: Formula) -> set[str]:
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, FIXPOINTS):
        return free_variables(f.body) - {f.var}
    out: set[str] = set()
    for k in f.children():
        out |= free_variables(k)
    return out


def is_enriched(f: Formula) -> bool:
    return any(
        isinstance(g, COUNTING) or (isinstance(g, (Atom, NegAtom)) and g.name == NOMINAL)
        for g in walk(f)
    )


def disj(*fs: Formula) -> Formula:
    """Left-associated disjunction; the empty disjunction is ``false``."""
    if not fs:
        return FALSE
    out = fs[0]
    for g in fs[1:]:
        out = Or(out, g)
    return out


def conj(*fs: Formula) -> Formula:
    """Left-associated conjunction; the empty conjunction is ``true``."""
    if not fs:
        return TRUE
    out = fs[0]
    for g in fs[1:]:
        out = And(out, g)
    return out


def implies(antecedent: Formula, consequent: Formula) -> Formula:
    from .transform import negate

    return Or(negate(antecedent), consequent)


def alpha_equivalent(f: Formula, g: Formula) -> bool:
    """Structural equality up to consistent renaming of bound variables."""

    def go(a, b, env_a, env_b, depth):
        if type(a) is not type(b):
            return False
        if isinstance(a, Var):
            da, db = env_a.get(a.name), env_b.get(b.name)
            if da is None and db is None:
                return a.name == b.name
            return da == db
        if isinstance(a, FIXPOINTS):
            return go(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1)
        if isinstance(a, (Atom, NegAtom)):
            return a.name == b.name
        if isinstance(a, GUARDED) and (a.src, a.dst) != (b.src, b.dst):
            return False
        if isinstance(a, COUNTING) and a.n != b.n:
            return False
        return all(go(x, y, env_a, env_b, depth) for x, y in zip(a.children(), b.children()))

    return go(f, g, {}, {}, 0)
