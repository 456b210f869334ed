"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from itertools import product

import pytest

from obcalc import klassen, mcg
from obcalc.mcg import IDENTITY, T_ALPHA, T_BOUNDARY, U, Y, MCGElement, inv
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
from obcalc.presentation import AbelianInvariants, GroupPresentation, abelianize
from obcalc.rewrite import count_normal_forms, knuth_bendix
from obcalc.words import Endomorphism, Word

Z = AbelianInvariants(1)
Z_Z2 = AbelianInvariants(1, (2,))
P2XS1 = ManifoldExpression((Prime("P2xS1"),))
S2TS1 = ManifoldExpression((Prime("S2xTwistedS1"),))


def crit_mcg_arithmetic():
    ok = T_ALPHA * Y * T_ALPHA == Y and Y * Y == T_BOUNDARY
    ok &= all(T_BOUNDARY * g == g * T_BOUNDARY for g in (T_ALPHA, Y, U, inv(T_ALPHA)))
    rng = random.Random(1)
    for _ in range(100_000):
        a, b, c = (MCGElement(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6)) for _ in range(3))
        if (a * b) * c != a * (b * c) or a * inv(a) != IDENTITY or IDENTITY * a != a:
            ok = False
            break
    gens = [T_ALPHA, inv(T_ALPHA), Y, inv(Y)]
    conj, layer = {IDENTITY}, {IDENTITY}
    for _ in range(8):
        layer = {g * x for g in layer for x in gens} - conj
        conj |= layer
    box = [MCGElement(m, n) for m in range(-3, 4) for n in range(-3, 4)]
    mismatches = 0
    for g in box:
        orbit = {c * g * inv(c) for c in conj}
        for h in box:
            same_rep = mcg.conjugacy_representative(g) == mcg.conjugacy_representative(h)
            mismatches += (h in orbit) != same_rep
    return ok and mismatches == 0, f"relations/fuzz ok={ok}, conjugacy mismatches={mismatches}", 10.0


def crit_catalog():
    cat = mcg.derive_catalog(8)
    derived_ok = all(mcg.check_catalog(cat).values())
    t0 = time.perf_counter()
    fixture = mcg.load_catalog()
    checks = mcg.check_catalog(fixture)
    recheck = time.perf_counter() - t0
    ok = derived_ok and all(checks.values()) and fixture == cat and recheck < 1.0
    return ok, f"derived={derived_ok}, fixture {checks}, re-verify {recheck * 1e3:.1f} ms", None


def crit_p2xs1():
    fails = []
    for g in [Y] + [MCGElement(2 * m, 1) for m in range(-3, 4)]:
        r = identify_total_space(KLEIN, g)
        if not (r.manifold == P2XS1 and r.recognition.tag == "ZxZ2" and r.h1 == Z_Z2):
            fails.append(str(g))
    return not fails, f"y and t^(2m) y, m in [-3, 3]; failures {fails}", None


def crit_s2_bundle():
    fails = []
    for m in range(-3, 4):
        r = identify_total_space(KLEIN, MCGElement(2 * m + 1, 1))
        if r.downgraded or not (r.manifold == S2TS1 and r.h1 == Z and r.recognition.tag == "Z"):
            fails.append((m, r.recognition.name, r.downgraded))
    return not fails, f"t^(2m+1) y, m in [-3, 3]; failures {fails}", None


def crit_lens():
    fails = []
    for n in range(-6, 7):
        if n == 0:
            continue
        a = h1_open_book(KLEIN, MCGElement(n, 0))
        b = h1_expression(ManifoldExpression.of(Prime("Lens", abs(n)), Prime("S2xTwistedS1")))
        want = AbelianInvariants(1, (abs(n),) if abs(n) >= 2 else ())
        if not a == b == want:
            fails.append(n)
    return not fails, f"n in [-6, 6] minus 0; failures {fails}", None


def crit_identity_pages():
    fails = []
    for g, k in product(range(1, 4), range(1, 4)):
        n = g + k - 1
        page = PageDescriptor(g, k)
        p = total_space_presentation(page, None)
        rec = identify_presentation(p).recognition
        free = (rec.tag, rec.param) == ("FreeOfRank", n) or (n == 1 and rec.tag == "Z")
        manifold = identify_total_space(page, None).manifold
        if not (free and abelianize(p) == AbelianInvariants(n) and manifold == ob_identity_monodromy(g, k)):
            fails.append((g, k, rec.name))
    return not fails, f"g, k in [1, 3]; failures {fails}", None


def crit_h_independence():
    rng = random.Random(2024)
    cat = mcg.load_catalog()
    page = PageDescriptor(2, 1, crosscap_word=cat.boundary_word.letters)
    fails = []
    hs = []
    for _ in range(20):
        h = Word("".join(rng.choice("aAbB") for _ in range(rng.randint(1, 6))))
        hs.append(str(h))
        y = mcg.y_star_for(h)
        spec = MonodromySpec(page, Endomorphism(("a", "b", "c"), (y["a"], y["b"], Word("c"))))
        r = identify_presentation(total_space_presentation(page, spec, check=False))
        if r.h1 != Z_Z2 or r.recognition.tag != "ZxZ2":
            fails.append(str(h))
    return not fails, f"20 random h (length <= 6); failures {fails}", None


def crit_rewriting():
    kb = knuth_bendix(GroupPresentation.make("ab", ["abAB", "bb"]))
    if not kb.confluent:
        return False, f"status {kb.status}", 5.0
    counts = count_normal_forms(kb, 8)
    # breadth-first search in Z x Z2 with generators a^{+-1}, b
    seen, frontier, spheres = {(0, 0)}, {(0, 0)}, [1]
    for _ in range(8):
        frontier = {(x + dx, (y + dy) % 2) for x, y in frontier for dx, dy in ((1, 0), (-1, 0), (0, 1))} - seen
        seen |= frontier
        spheres.append(len(frontier))
    return counts == spheres, f"counts {counts} vs ball enumeration {spheres}", 5.0


def crit_obstructions():
    got = (
        stable_equivalence_obstruction(Y, TWIST_PRODUCT),
        stable_equivalence_obstruction(U, IDENTITY),
        destabilization_obstruction(KLEIN, Y),
        destabilization_obstruction(KLEIN, U),
        destabilization_obstruction(KLEIN, T_ALPHA),
    )
    want = (Verdict.DISTINCT, Verdict.DISTINCT, Verdict.BLOCKED, Verdict.BLOCKED, Verdict.INCONCLUSIVE)
    return got == want, "verdicts " + ", ".join(str(v) for v in got), None


def crit_klassen():
    counts = [klassen.component_count(t, 256) for t in (0.25, 0.5, 0.75)]
    residual = max(klassen.cross_section(t, 256).max_residual for t in (0.0, 0.25, 0.5, 0.75, 1.0))
    rng = random.Random(8)
    tol = klassen.grid_tolerance(256)
    dev = max(klassen.translation_check(rng.random(), rng.random(), 256) for _ in range(64))
    ok = counts == [1, 2, 1] and residual < 1e-9 and dev < tol
    return ok, f"components {counts}, max residual {residual:.1e}, translation {dev:.2e} < {tol:.2e}", 30.0


CRITERIA = [
    (1, "Map(K) arithmetic", crit_mcg_arithmetic),
    (2, "catalog derivation", crit_catalog),
    (3, "OB(K, t^2m y) = P2xS1", crit_p2xs1),
    (4, "OB(K, t^(2m+1) y) = S2x~S1", crit_s2_bundle),
    (5, "lens-space H1 cross-check", crit_lens),
    (6, "identity monodromy pages", crit_identity_pages),
    (7, "h-independence", crit_h_independence),
    (8, "rewriting Z x Z2", crit_rewriting),
    (9, "parity obstructions", crit_obstructions),
    (10, "Klassen numerics", crit_klassen),
]


def run_criterion(num, name, fn):
    t0 = time.perf_counter()
    ok, detail, budget = fn()
    elapsed = time.perf_counter() - t0
    if budget is not None and elapsed >= budget:
        ok = False
        detail += f"; over budget {budget:.0f} s"
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2} {name}: {detail} ({elapsed:.2f} s)"
    return ok, line


@pytest.mark.parametrize("num, name, fn", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, line = run_criterion(num, name, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
