"""Formula-to-formula translations."""

from __future__ import annotations

from .nodes import (
    ANY, COUNTING, FIXPOINTS, GUARDED, P, PBAR,
    And, Atom, Bottom, Box, CBox, CDiamond, Diamond, Formula, GBox, GDiamond,
    InvBox, InvDiamond, Mu, NegAtom, Nu, Or, Star, Top, Var,
    bound_variables, conj, disj, free_variables, transform, walk, with_children,
)


class CaptureError(ValueError):
    def __init__(self, variable: str, binder: str):
        self.variable = variable
        self.binder = binder
        super().__init__(f"substitution would capture free variable {variable} under binder {binder}")


class TranslationError(ValueError):
    pass


def names_in(f: Formula) -> set[str]:
    return free_variables(f) | set(bound_variables(f))


def fresh_name(base: str, used: set[str], counters: dict[str, int] | None = None) -> str:
    """``base``, else ``base'``, else ``base'2``, ``base'3``, ...; ``counters``
    remembers where the search stopped for each base."""
    if base not in used:
        return base
    k = 1 if counters is None else counters.get(base, 1)
    name = base + "'"
    while name in used:
        k += 1
        name = f"{base}'{k}"
    if counters is not None:
        counters[base] = k
    return name


def rename_apart(f: Formula, used: set[str] | None = None) -> Formula:
    """Rename binders so that each variable is bound once and never also free.

    Formulas already satisfying this come back unchanged (the same object).
    """
    used = set(free_variables(f)) if used is None else used
    counters: dict[str, int] = {}

    def go(g: Formula, env: dict[str, str]) -> Formula:
        if isinstance(g, Var):
            new = env.get(g.name, g.name)
            return g if new == g.name else Var(new)
        if isinstance(g, FIXPOINTS):
            new = fresh_name(g.var, used, counters)
            used.add(new)
            body = go(g.body, {**env, g.var: new})
            if new == g.var and body is g.body:
                return g
            return type(g)(new, body)
        kids = g.children()
        if not kids:
            return g
        return with_children(g, tuple(go(k, env) for k in kids))

    return go(f, {})


def substitute(f: Formula, x: str, g: Formula) -> Formula:
    """Replace the free occurrences of variable ``x`` in ``f`` by ``g``."""
    g_free = free_variables(g)

    def go(h: Formula, binders: tuple[Formula, ...]) -> Formula:
        if isinstance(h, Var):
            if h.name != x:
                return h
            for b in binders:
                if b.var in g_free:
                    raise CaptureError(b.var, f"{'mu' if isinstance(b, Mu) else 'nu'} {b.var}")
            return g
        if isinstance(h, FIXPOINTS):
            if h.var == x:
                return h
            body = go(h.body, binders + (h,))
            return h if body is h.body else type(h)(h.var, body)
        kids = h.children()
        if not kids:
            return h
        return with_children(h, tuple(go(k, binders) for k in kids))

    out = go(f, ())
    return out if out is f else rename_apart(out)


def _color(c: str) -> Formula:
    return Atom(c)


def _not_color(c: str) -> Formula:
    return NegAtom(c)


def expand_star(f: Star, used: set[str]) -> Formula:
    var = fresh_name("X", used)
    used.add(var)
    return Mu(var, Or(f.body, Diamond(Var(var))))


def _guard_to_core(g: Formula) -> Formula:
    if isinstance(g, GDiamond):
        inner = g.body if g.dst == ANY else And(_color(g.dst), g.body)
        out = Diamond(inner)
        return out if g.src == ANY else And(_color(g.src), out)
    inner = g.body if g.dst == ANY else Or(_not_color(g.dst), g.body)
    out = Box(inner)
    return out if g.src == ANY else Or(_not_color(g.src), out)


_CONCRETE = ((P, P), (P, PBAR), (PBAR, P), (PBAR, PBAR))


def _guard_to_fourway(g: Formula) -> Formula:
    srcs = (P, PBAR) if g.src == ANY else (g.src,)
    dsts = (P, PBAR) if g.dst == ANY else (g.dst,)
    parts = [type(g)(s, d, g.body) for s in srcs for d in dsts]
    return disj(*parts) if isinstance(g, GDiamond) else conj(*parts)


def expand_guards(f: Formula, fourway: bool = False) -> Formula:
    """Rewrite guarded modalities and the star macro into core syntax.

    With ``fourway=True`` the direction is reversed: every plain or
    partially guarded modality becomes a disjunction (conjunction for boxes)
    of the concretely guarded ``<P P>``, ``<P p>``, ``<p P>``, ``<p p>`` forms.
    That rewrite is sound on graphs where ``P`` and ``p`` partition the vertices.
    """
    used = names_in(f)

    def step(g: Formula) -> Formula:
        if isinstance(g, Star):
            g = expand_star(g, used)
            if fourway:
                var = g.var
                return Mu(var, Or(g.body.left, disj(*(GDiamond(s, d, Var(var)) for s, d in _CONCRETE))))
            return g
        if fourway:
            if isinstance(g, Diamond):
                return disj(*(GDiamond(s, d, g.body) for s, d in _CONCRETE))
            if isinstance(g, Box):
                return conj(*(GBox(s, d, g.body) for s, d in _CONCRETE))
            if isinstance(g, GUARDED) and ANY in (g.src, g.dst):
                return _guard_to_fourway(g)
            return g
        if isinstance(g, GUARDED):
            return _guard_to_core(g)
        return g

    return rename_apart(transform(f, step))


_SWAP = {P: PBAR, PBAR: P, ANY: ANY}


def swap_p(f: Formula) -> Formula:
    """Exchange the colours ``P`` and ``p`` everywhere, guards included."""

    def step(g: Formula) -> Formula:
        if isinstance(g, (Atom, NegAtom)) and g.name in (P, PBAR):
            return type(g)(_SWAP[g.name])
        if isinstance(g, GUARDED):
            return type(g)(_SWAP[g.src], _SWAP[g.dst], g.body)
        return g

    return transform(f, step)


def negate(f: Formula) -> Formula:
    """The De Morgan / fixpoint dual of ``f``.

    Only meaningful as the complement for closed formulas.  Not part of the
    object syntax; used to build implications and test fixtures.
    """
    if isinstance(f, Top):
        return Bottom()
    if isinstance(f, Bottom):
        return Top()
    if isinstance(f, Atom):
        return NegAtom(f.name)
    if isinstance(f, NegAtom):
        return Atom(f.name)
    if isinstance(f, Var):
        return f
    if isinstance(f, Or):
        return And(negate(f.left), negate(f.right))
    if isinstance(f, And):
        return Or(negate(f.left), negate(f.right))
    if isinstance(f, Diamond):
        return Box(negate(f.body))
    if isinstance(f, Box):
        return Diamond(negate(f.body))
    if isinstance(f, GDiamond):
        return GBox(f.src, f.dst, negate(f.body))
    if isinstance(f, GBox):
        return GDiamond(f.src, f.dst, negate(f.body))
    # not(more than n satisfy b) == at most n satisfy b == at most n fail (not b)
    if isinstance(f, CDiamond):
        return CBox(f.n, negate(f.body))
    if isinstance(f, CBox):
        return CDiamond(f.n, negate(f.body))
    if isinstance(f, InvDiamond):
        return InvBox(f.n, negate(f.body))
    if isinstance(f, InvBox):
        return InvDiamond(f.n, negate(f.body))
    if isinstance(f, Mu):
        return Nu(f.var, negate(f.body))
    if isinstance(f, Nu):
        return Mu(f.var, negate(f.body))
    if isinstance(f, Star):
        return negate(expand_star(f, names_in(f)))
    raise TypeError(type(f).__name__)


def translate_phi_p(f: Formula) -> Formula:
    """Make same-colour modalities see every same-colour vertex reachable by a path.

    ``<P P> psi`` becomes ``<P P> psi \\/ <P -> <>*<- P> psi`` (and likewise for
    ``p``); boxes get the dual ``[P P] psi /\\ [P -] []*[- P] psi`` where
    ``[]* a`` is ``nu X. a /\\ [] X``.  On P-transitive graphs the result is
    equivalent to ``f``; on any graph ``F`` its extension equals the extension
    of ``f`` in the P-transitive closure of ``F``.
    """
    if any(isinstance(g, COUNTING) for g in walk(f)):
        raise TranslationError("counting modalities have no P-translation")
    g = expand_guards(f, fourway=True)
    for h in walk(g):
        if isinstance(h, (Diamond, Box)):
            raise TranslationError(f"unguarded modality left after normalisation: {h}")
    used = names_in(g)
    counters: dict[str, int] = {}

    def step(h: Formula) -> Formula:
        if isinstance(h, GUARDED) and h.src == h.dst:
            c = h.src
            var = fresh_name("X", used, counters)
            used.add(var)
            if isinstance(h, GDiamond):
                reach = Mu(var, Or(GDiamond(ANY, c, h.body), Diamond(Var(var))))
                return Or(h, GDiamond(c, ANY, reach))
            reach = Nu(var, And(GBox(ANY, c, h.body), Box(Var(var))))
            return And(h, GBox(c, ANY, reach))
        return h

    return rename_apart(transform(g, step))


def star(body: Formula) -> Formula:
    return Star(body)
