"""Fundamental groups of nonorientable open books, and what they identify.

Page generators are single letters: crosscap loops ``a_1..a_k`` then boundary
loops ``c_1..c_r``, drawn from ``abcdefghijklnopq...`` in order (``m`` is
reserved for the binding meridian ``mu_1``).  For the Klein bottle with one
hole these are ``a, b, c``.

A monodromy is given by the images of the page generators under ``phi_*``
together with one loop per extra boundary component: ``delta_j -> w`` records
``phi_*(delta_j) = w * delta_j`` for the arc ``delta_j`` from ``p_1`` to
``p_j``, so the relation ``delta_j = phi_*(delta_j)`` reads ``w = 1``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from obcalc import mcg
from obcalc.mcg import AutomorphismCatalog, MCGElement, parse_mcg, twist_parity
from obcalc.murasugi import ManifoldExpression, Prime, ob_identity_monodromy
from obcalc.pages import KLEIN, MOBIUS, PageDescriptor
from obcalc.presentation import (
    AbelianInvariants,
    GroupPresentation,
    Recognition,
    abelian_presentation,
    abelianize,
    commutator,
    match_catalog,
    tietze_simplify,
)
from obcalc.rewrite import knuth_bendix, normal_form, prove_trivial
from obcalc.words import AlphabetError, Endomorphism, Word, parse_endomorphism

__all__ = [
    "InvalidMonodromy",
    "MonodromySpec",
    "Identification",
    "Verdict",
    "TWIST_PRODUCT",
    "page_letters",
    "surface_word",
    "resolve_monodromy",
    "check_monodromy",
    "mapping_torus_presentation",
    "total_space_presentation",
    "h1_open_book",
    "identify_presentation",
    "identify_total_space",
    "heegaard_genus",
    "stable_equivalence_obstruction",
    "destabilization_obstruction",
    "parse_monodromy_spec",
    "format_monodromy_spec",
]

_LETTERS = "abcdefghijklnopqrstuvwxyz"
MU = "m"


class InvalidMonodromy(ValueError):
    pass


def page_letters(page: PageDescriptor) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Letters of ``(a_1..a_k)`` and ``(c_1..c_r)``."""
    if page.orientable:
        raise ValueError("only nonorientable pages are supported")
    k, r = page.genus, page.boundary
    if k + r > len(_LETTERS):
        raise ValueError(f"page {page} needs more than {len(_LETTERS)} generators")
    return tuple(_LETTERS[:k]), tuple(_LETTERS[k : k + r])


def surface_word(page: PageDescriptor) -> Word:
    """``a_1^2 ... a_k^2 c_1 ... c_r``, or ``crosscap_word c_1 ... c_r`` if the page fixes one."""
    a, c = page_letters(page)
    head = Word(page.crosscap_word) if page.crosscap_word else Word("".join(x * 2 for x in a))
    if not head.generators() <= set(a):
        raise AlphabetError(f"crosscap word {head} must use only {a}")
    return head * Word("".join(c))


@dataclass(frozen=True)
class MonodromySpec:
    page: PageDescriptor
    action: Endomorphism
    delta_loops: tuple[Word, ...] = ()
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        a, c = page_letters(self.page)
        if self.action.alphabet != a + c:
            raise AlphabetError(f"monodromy alphabet {self.action.alphabet} does not match page {a + c}")
        loops = tuple(Word(w) for w in self.delta_loops) or tuple(Word() for _ in c[1:])
        if len(loops) != len(c) - 1:
            raise InvalidMonodromy(f"need {len(c) - 1} delta loops, got {len(loops)}")
        object.__setattr__(self, "delta_loops", loops)

    @classmethod
    def identity(cls, page: PageDescriptor) -> MonodromySpec:
        a, c = page_letters(page)
        return cls(page, Endomorphism.identity(a + c), label="id")

    @property
    def is_identity(self) -> bool:
        return self.action == Endomorphism.identity(self.action.alphabet) and not any(self.delta_loops)


def check_monodromy(spec: MonodromySpec) -> None:
    """Raise InvalidMonodromy unless ``phi_*`` fixes ``c_1`` and preserves the surface relation.

    The relation must map to a cyclic rotation of itself, as a word.
    """
    a, c = page_letters(spec.page)
    if spec.action[c[0]] != Word(c[0]):
        raise InvalidMonodromy(f"phi_*({c[0]}) = {spec.action[c[0]]}, expected {c[0]}")
    rel = surface_word(spec.page)
    image = spec.action(rel)
    if image not in rel.rotations():
        raise InvalidMonodromy(f"phi_* sends the surface relation {rel} to {image}")


def resolve_monodromy(
    page: PageDescriptor,
    monodromy: MonodromySpec | MCGElement | str | None,
    catalog: AutomorphismCatalog | None = None,
) -> MonodromySpec:
    """Turn a mapping class of K (element or ``t/y`` string) into generator images.

    Mapping classes of K act in the catalog's basis of ``pi_1``, so the page
    carries the catalog boundary word as its crosscap word.  ``None`` means
    the identity.
    """
    if monodromy is None:
        return MonodromySpec.identity(page)
    if isinstance(monodromy, MonodromySpec):
        if not monodromy.page.same_surface(page):
            raise InvalidMonodromy(f"monodromy lives on {monodromy.page}, not {page}")
        return monodromy
    if isinstance(monodromy, str):
        label, monodromy = monodromy, parse_mcg(monodromy)
    else:
        label = str(monodromy)
    if not page.same_surface(KLEIN):
        raise InvalidMonodromy("mapping classes are only resolved for the Klein bottle with one hole")
    cat = mcg.default_catalog() if catalog is None else catalog
    f = mcg.induced_automorphism(monodromy, cat)
    kpage = PageDescriptor(2, 1, crosscap_word=cat.boundary_word.letters)
    action = Endomorphism(("a", "b", "c"), (f["a"], f["b"], Word("c")))
    return MonodromySpec(kpage, action, label=label)


def mapping_torus_presentation(page: PageDescriptor, monodromy, check: bool = True) -> GroupPresentation:
    spec = resolve_monodromy(page, monodromy)
    if check:
        check_monodromy(spec)
    a, c = page_letters(spec.page)
    mu = Word(MU)
    rels = [surface_word(spec.page)]
    for x in a + c:
        rels.append(mu * Word(x) * ~mu * ~spec.action[x])
    return GroupPresentation(a + c + (MU,), tuple(rels))


def total_space_presentation(
    page: PageDescriptor,
    monodromy,
    boundary_relations: bool = True,
    check: bool = True,
) -> GroupPresentation:
    """Presentation of ``pi_1`` of the open book, based on the first boundary component.

    ``boundary_relations`` adds ``c_j = phi_*(c_j)``; these follow from
    ``mu_1 = 1`` in the mapping torus and never change the group.
    """
    spec = resolve_monodromy(page, monodromy)
    if check:
        check_monodromy(spec)
    a, c = page_letters(spec.page)
    rels = [surface_word(spec.page)]
    rels += [Word(x) * ~spec.action[x] for x in a]
    rels += [~w for w in spec.delta_loops]
    if boundary_relations:
        rels += [Word(x) * ~spec.action[x] for x in c]
    return GroupPresentation(a + c, tuple(rels))


def h1_open_book(page: PageDescriptor, monodromy, check: bool = True) -> AbelianInvariants:
    return abelianize(total_space_presentation(page, monodromy, check=check))


def heegaard_genus(page: PageDescriptor) -> int:
    """Rank of the free group ``pi_1(page)``, ``1 - chi``."""
    if page.orientable:
        raise ValueError("orientable pages are not handled")
    return 1 - page.euler_characteristic


# -- identification ----------------------------------------------------------


@dataclass(frozen=True)
class Identification:
    recognition: Recognition
    manifold: ManifoldExpression | None
    h1: AbelianInvariants
    downgraded: bool = False
    simplified: GroupPresentation | None = None

    @property
    def manifold_name(self) -> str:
        return "Unknown" if self.manifold is None else str(self.manifold)

    def to_json(self) -> dict:
        return {
            "recognition": self.recognition.name,
            "witness": None if self.recognition.witness is None else str(self.recognition.witness),
            "manifold": self.manifold_name,
            "h1": self.h1.to_json(),
            "downgraded": self.downgraded,
        }


def _kb_subsume(p: GroupPresentation) -> GroupPresentation:
    """Drop or shorten each relator using a completed system for the others."""
    rels = list(p.relators)
    i = 0
    while i < len(rels):
        others = GroupPresentation(p.generators, tuple(rels[:i] + rels[i + 1 :]))
        kb = knuth_bendix(others, max_rules=200, max_iterations=20_000)
        if kb.confluent:
            nf = normal_form(kb, rels[i])
            if not nf:
                del rels[i]
                continue
            if len(nf) < len(rels[i]):
                rels[i] = nf
        i += 1
    return GroupPresentation(p.generators, tuple(rels))


def identify_presentation(
    p: GroupPresentation,
    genus: int | None = None,
    identity_page: PageDescriptor | None = None,
) -> Identification:
    """Recognize ``p`` and, where a cited classification applies, name the manifold.

    Pipeline: Tietze simplification, syntactic catalog match, then
    Knuth-Bendix.  A confluent system that makes every pair of generators
    commute proves the group abelian, so it is the group of its invariant
    factors; otherwise relators implied by the others are removed and the match
    retried.  Without a confluent system the report keeps only ``H_1``.

    Manifold names come from the identity-monodromy rule (``identity_page``) or,
    for Heegaard genus two, from a recognized ``Z + Z2`` or ``Z``.
    """
    h1 = abelianize(p)
    simple = tietze_simplify(p)
    rec = match_catalog(simple)
    downgraded = False
    if rec.tag == "Unknown":
        kb = knuth_bendix(simple)
        if kb.confluent:
            gens = simple.generators
            if all(prove_trivial(kb, commutator(x, y)) for i, x in enumerate(gens) for y in gens[i + 1 :]):
                rec = match_catalog(abelian_presentation(h1))
            else:
                rec = match_catalog(_kb_subsume(simple))
        else:
            downgraded = True

    manifold = None
    if identity_page is not None:
        manifold = ob_identity_monodromy(identity_page.genus, identity_page.boundary)
    elif genus == 2 and rec.tag == "ZxZ2":
        manifold = ManifoldExpression((Prime("P2xS1"),))
    elif genus == 2 and rec.tag == "Z":
        manifold = ManifoldExpression((Prime("S2xTwistedS1"),))
    return Identification(rec, manifold, h1, downgraded, simple)


def identify_total_space(page: PageDescriptor, monodromy, check: bool = True) -> Identification:
    spec = resolve_monodromy(page, monodromy)
    p = total_space_presentation(page, spec, check=check)
    return identify_presentation(
        p,
        genus=heegaard_genus(spec.page),
        identity_page=spec.page if spec.is_identity else None,
    )


# -- obstructions ------------------------------------------------------------


class Verdict(str, enum.Enum):
    DISTINCT = "Distinct"
    INCONCLUSIVE = "Inconclusive"
    BLOCKED = "Blocked"

    def __str__(self) -> str:
        return self.value


class _TwistProduct:
    """Stand-in for a monodromy known only to be a product of Dehn twists
    about two-sided curves."""

    def __repr__(self) -> str:
        return "TWIST_PRODUCT"


TWIST_PRODUCT = _TwistProduct()


def _parity(g) -> int:
    if g is TWIST_PRODUCT:
        return 0
    if isinstance(g, str):
        g = parse_mcg(g)
    return twist_parity(g)


def stable_equivalence_obstruction(g1, g2) -> Verdict:
    """Different twist parities keep two open books out of one stable class.

    Stabilizing composes the monodromy with Dehn twists, which have parity 0.
    Equal parities prove nothing.
    """
    return Verdict.DISTINCT if _parity(g1) != _parity(g2) else Verdict.INCONCLUSIVE


def destabilization_obstruction(page: PageDescriptor, g) -> Verdict:
    """Odd parity needs a crosscap slide, which needs genus >= 2, so no genus-one destabilization."""
    if not page.same_surface(KLEIN):
        raise ValueError("destabilization obstruction is only stated for the Klein bottle with one hole")
    return Verdict.BLOCKED if _parity(g) == 1 else Verdict.INCONCLUSIVE


# -- spec file ---------------------------------------------------------------

_PAGE_RE = re.compile(r"page:\s*genus\s*=\s*(\d+|K)\s+boundary\s*=\s*(\d+)", re.IGNORECASE)


def parse_monodromy_spec(text: str) -> MonodromySpec:
    """Read a monodromy file.

    ::

        page: genus=2 boundary=1
        crosscaps: abaB          # optional basis choice
        a1 -> baB
        a2 -> bABaB
        c1 -> c
        delta2 -> 1              # only when boundary >= 2

    Missing ``c_j`` lines default to ``c_j -> c_j``; missing ``delta_j`` to ``1``.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not _PAGE_RE.match(lines[0]):
        raise ValueError("first line must be 'page: genus=K boundary=R'")
    m = _PAGE_RE.match(lines[0])
    genus = 2 if m.group(1).upper() == "K" else int(m.group(1))
    boundary = int(m.group(2))
    crosscaps = None
    entries: dict[str, Word] = {}
    for ln in lines[1:]:
        if ln.lower().startswith("crosscaps:"):
            crosscaps = ln.split(":", 1)[1].strip()
            continue
        if "->" not in ln:
            raise ValueError(f"expected 'name -> word', got {ln!r}")
        key, val = (s.strip() for s in ln.split("->", 1))
        if key in entries:
            raise ValueError(f"two entries for {key}")
        entries[key] = Word(val)
    page = PageDescriptor(genus, boundary, crosscap_word=crosscaps)
    a, c = page_letters(page)
    images = {}
    for i, x in enumerate(a, 1):
        if f"a{i}" not in entries:
            raise InvalidMonodromy(f"missing image of a{i}")
        images[x] = entries.pop(f"a{i}")
    for j, x in enumerate(c, 1):
        images[x] = entries.pop(f"c{j}", Word(x))
    loops = tuple(entries.pop(f"delta{j}", Word()) for j in range(2, boundary + 1))
    entries.pop("delta1", None)
    if entries:
        raise ValueError(f"unexpected entries {sorted(entries)}")
    action = parse_endomorphism("\n".join(f"{g} -> {w}" for g, w in images.items()), a + c)
    return MonodromySpec(page, action, loops)


def format_monodromy_spec(spec: MonodromySpec) -> str:
    a, c = page_letters(spec.page)
    out = [f"page: genus={spec.page.genus} boundary={spec.page.boundary}"]
    if spec.page.crosscap_word:
        out.append(f"crosscaps: {spec.page.crosscap_word}")
    out += [f"a{i} -> {spec.action[x]}" for i, x in enumerate(a, 1)]
    out += [f"c{j} -> {spec.action[x]}" for j, x in enumerate(c, 1)]
    out += [f"delta{j} -> {w}" for j, w in enumerate(spec.delta_loops, 2)]
    return "\n".join(out) + "\n"
