import random

import pytest

import obcalc.openbook as ob

from obcalc import mcg
from obcalc.mcg import IDENTITY, T_ALPHA, U, Y, MCGElement
from obcalc.murasugi import ManifoldExpression, Prime, h1_expression, ob_identity_monodromy, parse_expression
from obcalc.openbook import (
    TWIST_PRODUCT,
    _kb_subsume,
    InvalidMonodromy,
    MonodromySpec,
    Verdict,
    check_monodromy,
    destabilization_obstruction,
    format_monodromy_spec,
    h1_open_book,
    heegaard_genus,
    identify_presentation,
    identify_total_space,
    mapping_torus_presentation,
    page_letters,
    parse_monodromy_spec,
    resolve_monodromy,
    stable_equivalence_obstruction,
    surface_word,
    total_space_presentation,
)
from obcalc.pages import ANNULUS, KLEIN, MOBIUS, PageDescriptor
from obcalc.presentation import AbelianInvariants, GroupPresentation, abelian_presentation, abelianize, match_catalog
from obcalc.rewrite import knuth_bendix
from obcalc.words import Endomorphism, Word

ZZ2 = AbelianInvariants(1, (2,))


def test_page_letters_skip_mu():
    assert page_letters(KLEIN) == (("a", "b"), ("c",))
    a, c = page_letters(PageDescriptor(11, 3))
    assert "m" not in a + c and len(a + c) == 14
    assert surface_word(PageDescriptor(2, 2)) == "aabbcd"
    with pytest.raises(ValueError):
        page_letters(ANNULUS)


def test_klein_y_presentation():
    p = total_space_presentation(KLEIN, Y)
    assert p == GroupPresentation.make("abc", ["abaBc", "abAB", "bAba"])
    assert abelianize(p) == ZZ2


def test_boundary_relations_do_not_change_group():
    for g in (Y, T_ALPHA, MCGElement(3, 1), MCGElement(-2, 0)):
        with_c = total_space_presentation(KLEIN, g)
        without = total_space_presentation(KLEIN, g, boundary_relations=False)
        assert abelianize(with_c) == abelianize(without)
        assert identify_presentation(with_c).recognition == identify_presentation(without).recognition


def test_mapping_torus():
    p = mapping_torus_presentation(KLEIN, Y)
    assert p.generators == ("a", "b", "c", "m")
    assert len(p.relators) == 4
    # killing the meridian gives back the total space group
    killed = GroupPresentation(p.generators, p.relators + (Word("m"),))
    assert abelianize(killed) == ZZ2
    assert abelianize(p) == AbelianInvariants(2, (2,))


@pytest.mark.parametrize("m", range(-3, 4))
def test_even_twist_family_is_p2xs1(m):
    r = identify_total_space(KLEIN, MCGElement(2 * m, 1))
    assert r.recognition.tag == "ZxZ2" and r.h1 == ZZ2 and not r.downgraded
    assert r.manifold == ManifoldExpression((Prime("P2xS1"),))


@pytest.mark.parametrize("m", range(-3, 4))
def test_odd_twist_family_is_s2_bundle(m):
    r = identify_total_space(KLEIN, MCGElement(2 * m + 1, 1))
    assert r.recognition.tag == "Z" and r.h1 == AbelianInvariants(1) and not r.downgraded
    assert r.manifold == ManifoldExpression((Prime("S2xTwistedS1"),))


@pytest.mark.parametrize("n", [n for n in range(-6, 7) if n])
def test_lens_h1(n):
    expected = h1_expression(ManifoldExpression.of(Prime("Lens", n), Prime("S2xTwistedS1")))
    assert h1_open_book(KLEIN, MCGElement(n, 0)) == expected
    assert h1_open_book(KLEIN, MCGElement(n, 0)) == h1_expression(mcg.classify_total_space(MCGElement(n, 0)))


@pytest.mark.parametrize("g, k", [(g, k) for g in range(1, 4) for k in range(1, 4)])
def test_identity_pages(g, k):
    page = PageDescriptor(g, k)
    r = identify_total_space(page, None)
    n = g + k - 1
    assert r.recognition.name == ("Z" if n == 1 else f"FreeOfRank({n})")
    assert r.h1 == AbelianInvariants(n)
    assert r.manifold == ob_identity_monodromy(g, k)
    assert heegaard_genus(page) == n


def test_mobius_identity():
    assert identify_total_space(MOBIUS, None).manifold == parse_expression("S2x~S1")


def test_h_independence():
    rng = random.Random(5)
    page = PageDescriptor(2, 1, crosscap_word="abaB")
    for _ in range(20):
        h = Word("".join(rng.choice("aAbB") for _ in range(rng.randint(0, 6))))
        y = mcg.y_star_for(h)
        spec = MonodromySpec(page, Endomorphism(("a", "b", "c"), (y["a"], y["b"], Word("c"))))
        r = identify_presentation(total_space_presentation(page, spec, check=False))
        assert r.h1 == ZZ2 and r.recognition.tag == "ZxZ2", h


def test_monodromy_validation():
    page = PageDescriptor(2, 1)
    bad = MonodromySpec(page, Endomorphism.from_mapping({"a": "b", "b": "b", "c": "c"}))
    with pytest.raises(InvalidMonodromy):
        check_monodromy(bad)
    moves_c = MonodromySpec(page, Endomorphism.from_mapping({"a": "a", "b": "b", "c": "ac"}))
    with pytest.raises(InvalidMonodromy):
        check_monodromy(moves_c)
    check_monodromy(MonodromySpec.identity(page))
    with pytest.raises(InvalidMonodromy):
        total_space_presentation(page, bad)
    with pytest.raises(InvalidMonodromy):
        resolve_monodromy(MOBIUS, Y)


def test_delta_loops():
    page = PageDescriptor(1, 2)
    spec = MonodromySpec(page, Endomorphism.identity("abc"), (Word("a"),))
    p = total_space_presentation(page, spec)
    assert abelianize(p) == AbelianInvariants(1)
    with pytest.raises(InvalidMonodromy):
        MonodromySpec(page, Endomorphism.identity("abc"), (Word("a"), Word("b")))


def test_spec_file_roundtrip():
    text = "page: genus=K boundary=1\ncrosscaps: abaB\na1 -> baB\na2 -> bABaB\n"
    spec = parse_monodromy_spec(text)
    assert spec.action == resolve_monodromy(KLEIN, Y).action
    assert parse_monodromy_spec(format_monodromy_spec(spec)) == spec
    assert identify_total_space(spec.page, spec).manifold == ManifoldExpression((Prime("P2xS1"),))
    two = parse_monodromy_spec("page: genus=1 boundary=2\na1 -> a\ndelta2 -> 1\n")
    assert two.is_identity
    for bad in ("a1 -> a\n", "page: genus=1 boundary=1\n", "page: genus=1 boundary=1\na1 -> a\nx1 -> a\n"):
        with pytest.raises(ValueError):
            parse_monodromy_spec(bad)


def test_downgrade_on_timeout(monkeypatch):
    monkeypatch.setattr(ob, "knuth_bendix", lambda p: knuth_bendix(p, max_rules=2))
    # Z * Z3 is not in the catalog, so the pipeline reaches rewriting
    r = identify_total_space(KLEIN, MCGElement(3, 0))
    assert r.downgraded and r.recognition.tag == "Unknown"
    assert r.h1 == AbelianInvariants(1, (3,))
    assert r.manifold is None


@pytest.mark.parametrize(
    "rels, name",
    [(["BabAB", "bAAbA"], "Zn(3)"), (["AAbb", "bbbbabA"], "Zn(10)"), (["bABabB", "aBBa"], "ZxZ2")],
)
def test_rewriting_proves_abelian(rels, name):
    # Tietze moves alone leave these unrecognized
    p = GroupPresentation.make("ab", rels)
    assert match_catalog(p).tag == "Unknown"
    r = identify_presentation(p)
    assert r.recognition.name == name and not r.downgraded
    assert r.recognition.witness == abelian_presentation(r.h1)


def test_rewriting_drops_implied_relators():
    p = GroupPresentation.make("ab", ["BBaBBa", "baba", "aa"])
    assert _kb_subsume(p) == GroupPresentation.make("ab", ["baba", "aa"])


def test_obstructions():
    assert stable_equivalence_obstruction(Y, TWIST_PRODUCT) is Verdict.DISTINCT
    assert stable_equivalence_obstruction(U, IDENTITY) is Verdict.DISTINCT
    assert stable_equivalence_obstruction(Y, U) is Verdict.INCONCLUSIVE
    assert stable_equivalence_obstruction("t", TWIST_PRODUCT) is Verdict.INCONCLUSIVE
    assert destabilization_obstruction(KLEIN, Y) is Verdict.BLOCKED
    assert destabilization_obstruction(KLEIN, U) is Verdict.BLOCKED
    assert destabilization_obstruction(KLEIN, T_ALPHA) is Verdict.INCONCLUSIVE
    with pytest.raises(ValueError):
        destabilization_obstruction(MOBIUS, Y)


def test_heegaard_genus():
    assert heegaard_genus(KLEIN) == 2
    assert heegaard_genus(MOBIUS) == 1
    with pytest.raises(ValueError):
        heegaard_genus(ANNULUS)
