"""Formal connected sums of a few prime 3-manifolds, and Murasugi-sum bookkeeping.

Primes and their literal syntax::

    S2xS1        S^2 x S^1
    S2x~S1       the nonorientable S^2-bundle over S^1
    L(n)         lens space L(n, 1), stored unoriented as L(|n|)
    P2xS1        P^2 x S^1
    Kx~S1        twisted Klein bottle bundle over S^1
    SFS_K(n)     Seifert fibered over the Klein bottle, one singular fiber of order n >= 2

An expression is a multiset of primes; the empty multiset is ``S3``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass

from obcalc.pages import ANNULUS, KLEIN, MOBIUS, PageDescriptor
from obcalc.presentation import AbelianInvariants

__all__ = [
    "Prime",
    "ManifoldExpression",
    "UnsupportedPrime",
    "PlumbingError",
    "PageDescriptor",
    "PagePlumbing",
    "OpenBookSummary",
    "S3",
    "connected_sum",
    "normalize_expression",
    "h1_expression",
    "plumb_pages",
    "ob_murasugi",
    "ob_identity_monodromy",
    "parse_expression",
    "ANNULUS",
    "MOBIUS",
    "KLEIN",
]

KINDS = ("S2xS1", "S2xTwistedS1", "Lens", "P2xS1", "KBTwistedS1", "SFSOverKB")
NONORIENTABLE = {"S2xTwistedS1", "P2xS1", "KBTwistedS1", "SFSOverKB"}
_LITERAL = {
    "S2xS1": "S2xS1",
    "S2xTwistedS1": "S2x~S1",
    "P2xS1": "P2xS1",
    "KBTwistedS1": "Kx~S1",
}


class UnsupportedPrime(ValueError):
    pass


class PlumbingError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Prime:
    kind: str
    param: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown prime {self.kind!r}")
        if self.kind == "SFSOverKB" and self.param < 2:
            raise ValueError("SFSOverKB needs a singular fiber of order >= 2")

    def sort_key(self):
        return (KINDS.index(self.kind), self.param)

    def __str__(self) -> str:
        if self.kind == "Lens":
            return f"L({self.param})"
        if self.kind == "SFSOverKB":
            return f"SFS_K({self.param})"
        return _LITERAL[self.kind]


def _canonical(primes: Iterable[Prime]) -> tuple[Prime, ...]:
    ps = [p if p.kind != "Lens" else Prime("Lens", abs(p.param)) for p in primes]
    # L(0, 1) = S2xS1, L(1, 1) = S3
    ps = [Prime("S2xS1") if p == Prime("Lens", 0) else p for p in ps]
    ps = [p for p in ps if p != Prime("Lens", 1)]
    if any(p.kind in NONORIENTABLE for p in ps):
        ps = [Prime("S2xTwistedS1") if p.kind == "S2xS1" else p for p in ps]
    return tuple(sorted(ps, key=Prime.sort_key))


@dataclass(frozen=True)
class ManifoldExpression:
    primes: tuple[Prime, ...] = ()

    @classmethod
    def of(cls, *primes: Prime | str) -> ManifoldExpression:
        ps = []
        for p in primes:
            ps.extend(parse_expression(p).primes if isinstance(p, str) else [p])
        return normalize_expression(cls(tuple(ps)))

    def __str__(self) -> str:
        if not self.primes:
            return "S3"
        return " + ".join(str(p) for p in self.primes)

    def __add__(self, other: ManifoldExpression) -> ManifoldExpression:
        return connected_sum(self, other)

    @property
    def is_orientable(self) -> bool:
        return not any(p.kind in NONORIENTABLE for p in self.primes)


S3 = ManifoldExpression()


def normalize_expression(e: ManifoldExpression) -> ManifoldExpression:
    """Canonical form: drop L(1), turn L(0) into S2xS1, and trade every S2xS1
    for S2x~S1 once a nonorientable prime is present.  Idempotent."""
    return ManifoldExpression(_canonical(e.primes))


def connected_sum(e1: ManifoldExpression, e2: ManifoldExpression) -> ManifoldExpression:
    return normalize_expression(ManifoldExpression(e1.primes + e2.primes))


def h1_expression(e: ManifoldExpression) -> AbelianInvariants:
    orders = []
    for p in e.primes:
        if p.kind in ("S2xS1", "S2xTwistedS1"):
            orders.append(0)
        elif p.kind == "Lens":
            orders.append(p.param)
        elif p.kind == "P2xS1":
            orders += [0, 2]
        else:
            raise UnsupportedPrime(f"no H1 on record for {p}")
    return AbelianInvariants.from_orders(orders)


_TOKEN = re.compile(
    r"^(?:(?P<s3>S3)|(?P<s2>S2xS1)|(?P<s2t>S2x~S1)|L\((?P<lens>-?\d+)\)|(?P<p2>P2xS1)"
    r"|(?P<kb>Kx~S1)|SFS_K\((?P<sfs>\d+)\))$"
)


def parse_expression(text: str) -> ManifoldExpression:
    """Parse ``S2xS1 + S2x~S1 + L(3) + P2xS1``; ``#`` also separates summands."""
    primes = []
    for tok in re.split(r"[+#]", text):
        tok = tok.strip()
        if not tok:
            continue
        m = _TOKEN.match(tok)
        if m is None:
            raise ValueError(f"unknown summand {tok!r}")
        if m["s3"]:
            continue
        if m["s2"]:
            primes.append(Prime("S2xS1"))
        elif m["s2t"]:
            primes.append(Prime("S2xTwistedS1"))
        elif m["lens"] is not None:
            primes.append(Prime("Lens", int(m["lens"])))
        elif m["p2"]:
            primes.append(Prime("P2xS1"))
        elif m["kb"]:
            primes.append(Prime("KBTwistedS1"))
        else:
            primes.append(Prime("SFSOverKB", int(m["sfs"])))
    return normalize_expression(ManifoldExpression(tuple(primes)))


# -- pages and plumbing ------------------------------------------------------


@dataclass(frozen=True)
class PagePlumbing:
    page1: PageDescriptor
    page2: PageDescriptor
    boundary: int


def plumb_pages(p: PagePlumbing) -> PageDescriptor:
    """The Murasugi sum of two pages along a square; the boundary count is the caller's.

    Euler characteristics add up to ``chi_1 + chi_2 - 1``.
    """
    r = p.boundary
    if not 1 <= r <= p.page1.boundary + p.page2.boundary:
        raise PlumbingError(f"boundary count {r} out of range")
    if p.page1.orientable and p.page2.orientable:
        raise PlumbingError("orientable result; only nonorientable pages are representable here")
    chi = p.page1.euler_characteristic + p.page2.euler_characteristic - 1
    genus = 2 - chi - r
    if genus < 1:
        raise PlumbingError(f"no nonorientable surface with chi={chi} and {r} boundary components")
    return PageDescriptor(genus, r)


@dataclass(frozen=True)
class OpenBookSummary:
    page: PageDescriptor
    total_space: ManifoldExpression


def ob_murasugi(ob1: OpenBookSummary, ob2: OpenBookSummary, boundary: int) -> OpenBookSummary:
    page = plumb_pages(PagePlumbing(ob1.page, ob2.page, boundary))
    return OpenBookSummary(page, connected_sum(ob1.total_space, ob2.total_space))


def ob_identity_monodromy(g: int, k: int) -> ManifoldExpression:
    """Total space of the open book with page ``N_{g,k}`` and trivial monodromy."""
    if g < 1:
        raise ValueError("page must be nonorientable (g >= 1)")
    if k < 1:
        raise ValueError("page needs a boundary component")
    return ManifoldExpression(tuple([Prime("S2xTwistedS1")] * (g + k - 1)))
