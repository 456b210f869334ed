"""Batch re-verification of the computations the package reproduces.

Every claim has a stable id and a location tag naming the result it checks.
Claims run in a fixed order; a claim that raises is reported as failed with
the exception text.
"""

from __future__ import annotations

import json
import random
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from itertools import product

from obcalc import klassen, mcg
from obcalc.mcg import MCGElement, T_ALPHA, T_BOUNDARY, U, Y
from obcalc.murasugi import ManifoldExpression, Prime, h1_expression, ob_identity_monodromy
from obcalc.openbook import (
    TWIST_PRODUCT,
    MonodromySpec,
    Verdict,
    destabilization_obstruction,
    h1_open_book,
    identify_presentation,
    identify_total_space,
    stable_equivalence_obstruction,
    total_space_presentation,
)
from obcalc.pages import KLEIN, PageDescriptor
from obcalc.presentation import AbelianInvariants, GroupPresentation
from obcalc.rewrite import count_normal_forms, knuth_bendix
from obcalc.words import Endomorphism, Word

__all__ = ["Claim", "ClaimResult", "VerificationReport", "CLAIMS", "verify_paper", "LOCATIONS"]


@dataclass(frozen=True)
class ClaimResult:
    claim_id: str
    location: str
    status: str  # pass | fail | skipped
    details: str


@dataclass(frozen=True)
class VerificationReport:
    results: tuple[ClaimResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    @property
    def exit_status(self) -> int:
        return 0 if self.ok else 1

    def to_json(self) -> str:
        rows = [r.__dict__ for r in self.results]
        return json.dumps({"ok": self.ok, "claims": rows}, indent=2)

    def table(self) -> str:
        w_id = max([len(r.claim_id) for r in self.results] + [5])
        w_loc = max([len(r.location) for r in self.results] + [8])
        lines = [f"{'claim':<{w_id}}  {'location':<{w_loc}}  status   details"]
        for r in self.results:
            lines.append(f"{r.claim_id:<{w_id}}  {r.location:<{w_loc}}  {r.status:<7}  {r.details}")
        n = {k: sum(r.status == k for r in self.results) for k in ("pass", "fail", "skipped")}
        lines.append(f"{n['pass']} passed, {n['fail']} failed, {n['skipped']} skipped")
        return "\n".join(lines)


@dataclass(frozen=True)
class Claim:
    claim_id: str
    location: str
    check: Callable[[], tuple[bool, str]]


# -- mapping class group -----------------------------------------------------


def _mcg_relations() -> tuple[bool, str]:
    rel = T_ALPHA * Y * T_ALPHA == Y
    central = all(T_BOUNDARY * g == g * T_BOUNDARY for g in (T_ALPHA, Y, U))
    rng = random.Random(0)
    bad = 0
    for _ in range(100_000):
        a, b, c = (MCGElement(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6)) for _ in range(3))
        if (a * b) * c != a * (b * c) or a * mcg.inv(a) != mcg.IDENTITY or mcg.IDENTITY * a != a:
            bad += 1
    return rel and central and not bad, f"tyt=y {rel}; y^2 central {central}; axiom failures {bad}/100000"


def _conjugacy_brute() -> tuple[bool, str]:
    letters = [MCGElement(1, 0), MCGElement(-1, 0), Y, MCGElement(0, -1)]
    conjugators = {mcg.IDENTITY}
    layer = {mcg.IDENTITY}
    for _ in range(8):
        layer = {g * x for g in layer for x in letters} - conjugators
        conjugators |= layer
    worst = []
    box = [MCGElement(m, n) for m in range(-3, 4) for n in range(-3, 4)]
    for g, h in product(box, box):
        brute = any(c * g * mcg.inv(c) == h for c in conjugators)
        if brute != mcg.is_conjugate(g, h):
            worst.append(f"{g}~{h}")
    return not worst, f"{len(box) ** 2} pairs, {len(conjugators)} conjugators; mismatches {worst[:3]}"


# -- catalog -----------------------------------------------------------------

_CONSTRAINT_TEXT = {
    "C1": "t* fixes the boundary word",
    "C2": "y* fixes the boundary word",
    "C3": "y* has the shape a -> baB, b -> h B h^-1",
    "C4": "y*^2 is conjugation by the boundary word",
    "C5": "t* y* t* = y*",
    "C6": "t* acts nontrivially on H1",
}


def _catalog_claim(key: str) -> Callable[[], tuple[bool, str]]:
    def check():
        ok = mcg.check_catalog(mcg.default_catalog())[key]
        return ok, f"{key}: {_CONSTRAINT_TEXT[key]}" + ("" if ok else " VIOLATED")

    return check


# -- open books --------------------------------------------------------------

P2XS1 = ManifoldExpression((Prime("P2xS1"),))
S2TS1 = ManifoldExpression((Prime("S2xTwistedS1"),))
Z_Z2 = AbelianInvariants(1, (2,))


def _family(odd: bool) -> tuple[bool, str]:
    target = S2TS1 if odd else P2XS1
    fails = []
    for m in range(-3, 4):
        g = MCGElement(2 * m + int(odd), 1)
        r = identify_total_space(KLEIN, g)
        want_rec = ("Z",) if odd else ("ZxZ2",)
        want_h1 = AbelianInvariants(1, ()) if odd else Z_Z2
        if r.manifold != target or r.recognition.tag not in want_rec or r.h1 != want_h1 or r.downgraded:
            fails.append(f"{g}: {r.manifold_name}/{r.recognition.name}")
    k = "2m+1" if odd else "2m"
    return not fails, f"t^({k}) y for m in -3..3 -> {target}; failures {fails}"


def _y_alone() -> tuple[bool, str]:
    r = identify_total_space(KLEIN, Y)
    ok = r.manifold == P2XS1 and r.recognition.tag == "ZxZ2" and r.h1 == Z_Z2
    return ok, f"OB(K, y) -> {r.manifold_name} via {r.recognition.name}, H1 {r.h1}"


def _lens() -> tuple[bool, str]:
    fails = []
    for n in range(-6, 7):
        if n == 0:
            continue
        lhs = h1_open_book(KLEIN, MCGElement(n, 0))
        rhs = h1_expression(ManifoldExpression.of(Prime("Lens", abs(n)), Prime("S2xTwistedS1")))
        want = AbelianInvariants(1, (abs(n),) if abs(n) >= 2 else ())
        if not lhs == rhs == want:
            fails.append(n)
    return not fails, f"H1(OB(K, t^n)) = H1(L(|n|) + S2x~S1) for 0 < |n| <= 6; failures {fails}"


def is_free_of_rank(rec, n: int) -> bool:
    """``Z`` and ``Trivial`` are the catalog's names for free groups of rank 1 and 0."""
    return (rec.tag, rec.param) == ("FreeOfRank", n) or (n, rec.tag) in ((1, "Z"), (0, "Trivial"))


def _identity_pages() -> tuple[bool, str]:
    fails = []
    for g, k in product(range(1, 4), range(1, 4)):
        page = PageDescriptor(g, k)
        r = identify_presentation(total_space_presentation(page, None))
        if not is_free_of_rank(r.recognition, g + k - 1) or r.h1 != AbelianInvariants(g + k - 1, ()):
            fails.append((g, k))
        if identify_total_space(page, None).manifold != ob_identity_monodromy(g, k):
            fails.append((g, k, "manifold"))
    return not fails, f"OB(N_g,k, id) free of rank g+k-1 for g, k in 1..3; failures {fails}"


def _h_independence() -> tuple[bool, str]:
    rng = random.Random(7)
    fails = []
    cat = mcg.default_catalog()
    page = PageDescriptor(2, 1, crosscap_word=cat.boundary_word.letters)
    for _ in range(20):
        h = Word("".join(rng.choice("aAbB") for _ in range(rng.randint(0, 6))))
        y = mcg.y_star_for(h)
        spec = MonodromySpec(page, Endomorphism(("a", "b", "c"), (y["a"], y["b"], Word("c"))))
        r = identify_presentation(total_space_presentation(page, spec, check=False))
        if r.h1 != Z_Z2 or r.recognition.tag != "ZxZ2":
            fails.append(str(h))
    return not fails, f"20 random h of length <= 6 give Z x Z2; failures {fails}"


def _rewriting() -> tuple[bool, str]:
    kb = knuth_bendix(GroupPresentation.make("ab", ["abAB", "bb"]))
    if not kb.confluent:
        return False, f"completion status {kb.status}"
    counts = count_normal_forms(kb, 8)
    # sphere sizes in Z x Z2 with generators a, b (a of infinite order, b of order 2)
    ball = {(0, 0)}
    sizes = [1]
    frontier = {(0, 0)}
    for _ in range(8):
        nxt = {((x + dx), (y + dy) % 2) for x, y in frontier for dx, dy in ((1, 0), (-1, 0), (0, 1))} - ball
        ball |= nxt
        sizes.append(len(nxt))
        frontier = nxt
    return counts == sizes, f"{len(kb.rules)} rules; normal forms by length {counts} vs Z x Z2 spheres {sizes}"


def _stable_equivalence() -> tuple[bool, str]:
    a = stable_equivalence_obstruction(Y, TWIST_PRODUCT)
    b = stable_equivalence_obstruction(U, mcg.IDENTITY)
    ok = a is Verdict.DISTINCT and b is Verdict.DISTINCT
    return ok, f"(y, twist product) {a}; (u, id) {b}"


def _destabilization() -> tuple[bool, str]:
    got = {str(g): destabilization_obstruction(KLEIN, g) for g in (Y, U, T_ALPHA)}
    ok = got == {str(Y): Verdict.BLOCKED, str(U): Verdict.BLOCKED, str(T_ALPHA): Verdict.INCONCLUSIVE}
    return ok, "; ".join(f"{k}: {v}" for k, v in got.items())


# -- Klassen numerics --------------------------------------------------------


def _klassen_components() -> tuple[bool, str]:
    got = [klassen.component_count(t, 256) for t in (0.25, 0.5, 0.75)]
    return got == [1, 2, 1], f"components at t = 0.25, 0.5, 0.75: {got}"


def _klassen_residuals() -> tuple[bool, str]:
    worst = max(klassen.cross_section(t, 256).max_residual for t in (0.0, 0.125, 0.25, 0.5, 0.75, 0.9, 1.0))
    return worst < klassen.RESIDUAL_TOL, f"max |p - 1| = {worst:.2e}"


def _klassen_translation() -> tuple[bool, str]:
    rng = random.Random(3)
    grid = [(rng.random(), rng.random()) for _ in range(64)]
    worst = max(klassen.translation_check(s, t, 256) for s, t in grid)
    tol = klassen.grid_tolerance(256)
    return worst < tol, f"8x8 random (s, t): max deviation {worst:.2e} < {tol:.2e}"


CLAIMS: tuple[Claim, ...] = (
    Claim("mcg-relations", "mapping-class-group", _mcg_relations),
    Claim("mcg-conjugacy", "mapping-class-group", _conjugacy_brute),
    *(Claim(f"catalog-{k}", "catalog", _catalog_claim(k)) for k in _CONSTRAINT_TEXT),
    Claim("p2xs1-y", "p2xs1", _y_alone),
    Claim("p2xs1-family", "p2xs1", lambda: _family(odd=False)),
    Claim("p2xs1-h-independence", "p2xs1", _h_independence),
    Claim("s2-bundle-family", "s2-bundle", lambda: _family(odd=True)),
    Claim("lens-h1", "lens", _lens),
    Claim("identity-pages", "identity-monodromy", _identity_pages),
    Claim("rewriting-zxz2", "rewriting", _rewriting),
    Claim("stable-equivalence", "obstructions", _stable_equivalence),
    Claim("destabilization", "obstructions", _destabilization),
    Claim("klassen-components", "klassen", _klassen_components),
    Claim("klassen-residuals", "klassen", _klassen_residuals),
    Claim("klassen-translation", "klassen", _klassen_translation),
)

LOCATIONS = tuple(dict.fromkeys(c.location for c in CLAIMS))


def _run(claim: Claim) -> ClaimResult:
    try:
        ok, details = claim.check()
    except Exception as exc:  # a broken fixture or input shows up as a failed claim
        return ClaimResult(claim.claim_id, claim.location, "fail", f"{type(exc).__name__}: {exc}")
    return ClaimResult(claim.claim_id, claim.location, "pass" if ok else "fail", details)


def verify_paper(only: Iterable[str] | None = None) -> VerificationReport:
    """Run every claim, or those whose id or location is in ``only``; the rest are skipped."""
    keys = set(only) if only else None
    if keys:
        unknown = keys - {c.claim_id for c in CLAIMS} - set(LOCATIONS)
        if unknown:
            raise KeyError(f"unknown claim or location {sorted(unknown)}")
    results = []
    for c in CLAIMS:
        if keys is None or c.claim_id in keys or c.location in keys:
            results.append(_run(c))
        else:
            results.append(ClaimResult(c.claim_id, c.location, "skipped", ""))
    return VerificationReport(tuple(results))
