"""Algebra of nonorientable open books in dimension three.

Submodules: ``words`` (free groups), ``presentation`` (presentations, Tietze
moves, abelianization), ``rewrite`` (Knuth-Bendix), ``mcg`` (the mapping class
group of the Klein bottle with one hole), ``openbook`` (fundamental groups of
total spaces), ``murasugi`` (connected-sum calculus), ``klassen`` (numerics for
an explicit open book of P^2 x S^1) and ``cli``.
"""

from obcalc.mcg import MCGElement, parse_mcg
from obcalc.murasugi import ManifoldExpression, parse_expression
from obcalc.openbook import h1_open_book, identify_total_space, total_space_presentation
from obcalc.pages import KLEIN, MOBIUS, PageDescriptor
from obcalc.presentation import AbelianInvariants, GroupPresentation
from obcalc.words import Endomorphism, Word

__version__ = "0.1.0"

__all__ = [
    "Word",
    "Endomorphism",
    "GroupPresentation",
    "AbelianInvariants",
    "PageDescriptor",
    "KLEIN",
    "MOBIUS",
    "MCGElement",
    "parse_mcg",
    "ManifoldExpression",
    "parse_expression",
    "total_space_presentation",
    "h1_open_book",
    "identify_total_space",
]
