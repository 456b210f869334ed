"""The mapping class group of the Klein bottle with one hole, ``K``.

``Map(K) = <t, y | t y t = y>`` where ``t`` is the Dehn twist about the
two-sided curve alpha and ``y`` is the crosscap slide (Y-homeomorphism).
Every element has a unique normal form ``t^m y^n``; since ``y t = t^-1 y``
the product is a semidirect product law on pairs ``(m, n)``.

The action on ``pi_1(K, p) = F(a, b)``, with ``p`` on the boundary, comes from
an :class:`AutomorphismCatalog`, found by a bounded search over words (see
:func:`derive_catalog`) and stored as a small text fixture.  Mapping classes
are compared through their action on ``F(a, b)``, on the standing assumption
that ``Map(K, dK) -> Aut(F_2)`` is injective.
"""

from __future__ import annotations

import functools
import os
from collections.abc import Iterator
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from obcalc.murasugi import ManifoldExpression, Prime, normalize_expression
from obcalc.presentation import GroupPresentation, abelianize
from obcalc.words import Endomorphism, Word, exponent_sums, parse_endomorphism

__all__ = [
    "MCGElement",
    "AutomorphismCatalog",
    "CatalogNotFound",
    "parse_mcg",
    "mul",
    "inv",
    "conjugacy_representative",
    "is_conjugate",
    "twist_parity",
    "derive_catalog",
    "check_catalog",
    "induced_automorphism",
    "classify_total_space",
    "load_catalog",
    "save_catalog",
    "format_catalog",
    "parse_catalog",
    "default_catalog",
    "T_ALPHA",
    "Y",
    "U",
    "T_BOUNDARY",
    "IDENTITY",
]

ALPHABET = ("a", "b")
FIXTURE_NAME = "catalog.txt"
FIXTURE_ENV = "OBCALC_FIXTURE_DIR"


@dataclass(frozen=True)
class MCGElement:
    """``t^m y^n``."""

    m: int = 0
    n: int = 0

    def __mul__(self, other: MCGElement) -> MCGElement:
        return mul(self, other)

    def __pow__(self, k: int) -> MCGElement:
        base = self if k >= 0 else inv(self)
        out = IDENTITY
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self) -> str:
        return f"t^{self.m} y^{self.n}"


IDENTITY = MCGElement(0, 0)
T_ALPHA = MCGElement(1, 0)
Y = MCGElement(0, 1)
U = MCGElement(-1, 1)  # crosscap transposition t^-1 y
T_BOUNDARY = MCGElement(0, 2)  # y^2

_LETTERS = {"t": T_ALPHA, "T": MCGElement(-1, 0), "y": Y, "Y": MCGElement(0, -1)}


def mul(g1: MCGElement, g2: MCGElement) -> MCGElement:
    sign = -1 if g1.n % 2 else 1
    return MCGElement(g1.m + sign * g2.m, g1.n + g2.n)


def inv(g: MCGElement) -> MCGElement:
    sign = -1 if g.n % 2 else 1
    return MCGElement(-sign * g.m, -g.n)


def parse_mcg(s: str) -> MCGElement:
    """Left-fold a string over ``t, T, y, Y`` (``T = t^-1``, ``Y = y^-1``); ``1`` is the identity."""
    out = IDENTITY
    if s.strip() == "1":
        return out
    for c in s.strip():
        if c in " *":
            continue
        if c not in _LETTERS:
            raise ValueError(f"bad character {c!r} in mapping class word {s!r}")
        out = mul(out, _LETTERS[c])
    return out


def conjugacy_representative(g: MCGElement) -> MCGElement:
    if g.n % 2 == 0:
        return MCGElement(abs(g.m), g.n)
    return MCGElement(g.m % 2, g.n)


def is_conjugate(g1: MCGElement, g2: MCGElement) -> bool:
    return conjugacy_representative(g1) == conjugacy_representative(g2)


def twist_parity(g: MCGElement) -> int:
    """``n mod 2``; zero exactly on products of Dehn twists about two-sided curves."""
    return g.n % 2


# -- action on pi_1 ----------------------------------------------------------


class CatalogNotFound(LookupError):
    pass


@dataclass(frozen=True)
class AutomorphismCatalog:
    """The action of ``t`` and ``y`` on ``F(a, b)``.

    ``y*`` sends ``a -> b a b^-1`` and ``b -> h b^-1 h^-1``; ``boundary_word`` is
    the loop parallel to the boundary, and ``y*^2`` is conjugation by
    ``boundary_word ** epsilon``.
    """

    boundary_word: Word
    h: Word
    epsilon: int
    t_star: Endomorphism

    @property
    def y_star(self) -> Endomorphism:
        return y_star_for(self.h)

    @functools.cached_property
    def _action(self) -> CatalogAction:
        return CatalogAction(self)


def y_star_for(h: Word | str) -> Endomorphism:
    h = Word(h)
    return Endomorphism(ALPHABET, (Word("baB"), h * Word("B") * ~h))


def _abelian_matrix(f: Endomorphism) -> tuple[tuple[int, ...], ...]:
    cols = [exponent_sums(im, f.alphabet) for im in f.images]
    return tuple(tuple(c[g] for c in cols) for g in f.alphabet)


def check_catalog(cat: AutomorphismCatalog) -> dict[str, bool]:
    """Evaluate each defining constraint exactly.

    C1  t* fixes the boundary word
    C2  y* fixes the boundary word
    C3  y* has the prescribed shape (a -> baB, b -> h B h^-1)
    C4  y* o y* is conjugation by boundary_word ** epsilon, epsilon = +-1
    C5  t* o y* o t* = y*
    C6  t* acts nontrivially on H_1 (rules out t* = id and inner automorphisms)
    """
    w, y, t = cat.boundary_word, cat.y_star, cat.t_star
    return {
        "C1": t(w) == w,
        "C2": y(w) == w,
        "C3": y["a"] == Word("baB") and y["b"] == cat.h * Word("B") * ~cat.h,
        "C4": cat.epsilon in (1, -1) and y @ y == Endomorphism.conjugation(w**cat.epsilon, ALPHABET),
        "C5": t @ y @ t == y,
        "C6": _abelian_matrix(t) != ((1, 0), (0, 1)),
    }


def _words_upto(max_len: int, min_len: int = 0) -> Iterator[Word]:
    """Reduced words over a, A, b, B in shortlex order (a < A < b < B)."""
    letters = "aAbB"
    layer = [""]
    for n in range(max_len + 1):
        if n >= min_len:
            for s in layer:
                yield Word._trusted(s)
        layer = [s + c for s in layer for c in letters if not (s and s[-1].swapcase() == c)]


def _klein_boundary_candidates() -> Iterator[Word]:
    # length-4 cyclically reduced words w with H_1(<a, b | w>) = Z + Z2,
    # i.e. the closed-up surface is a Klein bottle
    target = abelianize(GroupPresentation.make("ab", ["abaB"]))
    for w in _words_upto(4, 4):
        if w.is_cyclically_reduced() and w.generators() == {"a", "b"}:
            if abelianize(GroupPresentation(ALPHABET, (w,))) == target:
                yield w


def derive_catalog(max_len: int = 8) -> AutomorphismCatalog:
    """Shortlex-least catalog satisfying C1-C6, with all searched words of length <= max_len.

    Search order: boundary word, then ``h``, then ``t*(a)``, then ``t*(b)``.
    """
    if max_len < 4:
        raise ValueError("max_len must be at least 4")
    for w in _klein_boundary_candidates():
        for h in _words_upto(max_len):
            y = y_star_for(h)
            if y(w) != w:
                continue
            yy = y @ y
            eps = next((e for e in (1, -1) if yy == Endomorphism.conjugation(w**e, ALPHABET)), None)
            if eps is None:
                continue
            t = _search_twist(w, y, max_len)
            if t is not None:
                cat = AutomorphismCatalog(w, h, eps, t)
                assert all(check_catalog(cat).values())
                return cat
    raise CatalogNotFound(f"no catalog with words of length <= {max_len}")


def _search_twist(w: Word, y: Endomorphism, max_len: int) -> Endomorphism | None:
    for ta in _words_upto(max_len, 1):
        for tb in _words_upto(max_len, 1):
            t = Endomorphism(ALPHABET, (ta, tb))
            if t(w) != w or _abelian_matrix(t) == ((1, 0), (0, 1)):
                continue
            if t @ y @ t == y:
                return t
    return None


class CatalogAction:
    """Induced automorphisms ``t*^m o y*^n``, with inverses derived from the relations.

    ``y*^-1 = c(w^-eps) o y*`` because ``y*^2 = c(w^eps)``, and
    ``t*^-1 = y* o t* o y*^-1`` because ``t* o y* o t* = y*``.
    """

    def __init__(self, cat: AutomorphismCatalog):
        self.t = cat.t_star
        self.y = cat.y_star
        self.y_inv = Endomorphism.conjugation(cat.boundary_word ** (-cat.epsilon), ALPHABET) @ self.y
        self.t_inv = self.y @ self.t @ self.y_inv
        ident = Endomorphism.identity(ALPHABET)
        if not (self.y @ self.y_inv == ident == self.y_inv @ self.y and self.t @ self.t_inv == ident == self.t_inv @ self.t):
            raise ValueError("catalog fails its own relations; run check_catalog")
        self._cache: dict[MCGElement, Endomorphism] = {}

    @staticmethod
    def _power(f: Endomorphism, f_inv: Endomorphism, k: int) -> Endomorphism:
        base = f if k >= 0 else f_inv
        out = Endomorphism.identity(ALPHABET)
        for _ in range(abs(k)):
            out = out @ base
        return out

    def __call__(self, g: MCGElement) -> Endomorphism:
        if g not in self._cache:
            self._cache[g] = self._power(self.t, self.t_inv, g.m) @ self._power(self.y, self.y_inv, g.n)
        return self._cache[g]


def induced_automorphism(g: MCGElement, cat: AutomorphismCatalog | None = None) -> Endomorphism:
    """The automorphism of ``F(a, b)`` induced by ``t^m y^n``."""
    cat = default_catalog() if cat is None else cat
    return cat._action(g)


# -- fixture -----------------------------------------------------------------


def format_catalog(cat: AutomorphismCatalog) -> str:
    t = cat.t_star
    return (
        f"boundary: {cat.boundary_word}\n"
        f"t*: a -> {t['a']}; b -> {t['b']}\n"
        f"y*: h = {cat.h}\n"
        f"epsilon = {cat.epsilon:+d}\n"
    )


def parse_catalog(text: str) -> AutomorphismCatalog:
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("boundary:"):
            fields["boundary"] = line.split(":", 1)[1].strip()
        elif line.startswith("t*:"):
            fields["t"] = line.split(":", 1)[1]
        elif line.startswith("y*:"):
            key, _, val = line.split(":", 1)[1].partition("=")
            if key.strip() != "h":
                raise ValueError(f"bad y* line {raw!r}")
            fields["h"] = val.strip()
        elif line.startswith("epsilon"):
            fields["epsilon"] = line.split("=", 1)[1].strip()
        else:
            raise ValueError(f"unrecognized catalog line {raw!r}")
    missing = {"boundary", "t", "h", "epsilon"} - set(fields)
    if missing:
        raise ValueError(f"catalog missing {sorted(missing)}")
    return AutomorphismCatalog(
        boundary_word=Word(fields["boundary"]),
        h=Word(fields["h"]),
        epsilon=int(fields["epsilon"]),
        t_star=parse_endomorphism(fields["t"], ALPHABET),
    )


def fixture_path() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    if env:
        return Path(env) / FIXTURE_NAME
    return Path(str(resources.files("obcalc") / "data" / FIXTURE_NAME))


def load_catalog(path: str | Path | None = None) -> AutomorphismCatalog:
    path = fixture_path() if path is None else Path(path)
    return parse_catalog(path.read_text())


def save_catalog(cat: AutomorphismCatalog, path: str | Path | None = None) -> Path:
    path = fixture_path() if path is None else Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_catalog(cat))
    return path


@functools.lru_cache(maxsize=None)
def _cached_catalog(path: str) -> AutomorphismCatalog:
    p = Path(path)
    if p.exists():
        return load_catalog(p)
    return derive_catalog()


def default_catalog() -> AutomorphismCatalog:
    """The fixture catalog, or a fresh derivation when the fixture is missing."""
    return _cached_catalog(str(fixture_path()))


# -- total spaces ------------------------------------------------------------


def classify_total_space(g: MCGElement) -> ManifoldExpression | None:
    """Total space of the open book with page K and monodromy ``g``; None if unknown.

    Looked up on the conjugacy representative: odd ``n`` gives P2xS1 or S2x~S1
    by the parity of ``m``; ``n = 0`` gives ``L(|m|) + S2x~S1``; ``m = 0`` with
    ``n = 2k`` gives a Seifert fibered space over the Klein bottle.
    """
    m, n = conjugacy_representative(g).m, conjugacy_representative(g).n
    if n % 2:
        return ManifoldExpression((Prime("P2xS1"),)) if m == 0 else ManifoldExpression((Prime("S2xTwistedS1"),))
    if n == 0:
        return normalize_expression(ManifoldExpression((Prime("Lens", m), Prime("S2xTwistedS1"))))
    if m == 0:
        k = abs(n) // 2
        return ManifoldExpression((Prime("KBTwistedS1"),)) if k == 1 else ManifoldExpression((Prime("SFSOverKB", k),))
    return None
