"""Mu-calculus formulas: syntax trees, parsing, classification, translations."""

from .hierarchy import DepthError, FixpointClass, alternation_depth, binder_blocks, classify, modal_depth
from .nodes import (
    ANY, COLORS, FALSE, NOMINAL, P, PBAR, TRUE,
    And, Atom, Bottom, Box, CBox, CDiamond, Diamond, Formula, GBox, GDiamond,
    InvBox, InvDiamond, Mu, NegAtom, Nu, Or, Star, Top, Var,
    alpha_equivalent, atoms, bound_variables, conj, disj, free_variables, implies,
    is_enriched, size, subformulas, transform, uses_p, walk,
)
from .syntax import FormulaSyntaxError, parse, render
from .transform import (
    CaptureError, TranslationError, expand_guards, expand_star, negate, rename_apart,
    star, substitute, swap_p, translate_phi_p,
)
