"""Finitely presented groups: abelianization, Tietze moves, catalog matching."""

from __future__ import annotations

import string
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from obcalc.words import AlphabetError, Word, cyclic_reduce, exponent_sums

__all__ = [
    "GroupPresentation",
    "AbelianInvariants",
    "Recognition",
    "relation_matrix",
    "smith_normal_form",
    "abelianize",
    "tietze_simplify",
    "abelian_presentation",
    "match_catalog",
    "parse_presentation",
    "format_presentation",
    "commutator",
]

DEFAULT_BUDGET = 1000


def commutator(x: str | Word, y: str | Word) -> Word:
    x, y = Word(x), Word(y)
    return x * y * ~x * ~y


def _cyclic_key(r: Word) -> str:
    """Canonical label of the cyclic word ``r`` up to rotation and inversion."""
    cands = [q.letters for q in r.rotations()] + [q.letters for q in (~r).rotations()]
    return min(cands, key=lambda s: (len(s), s))


@dataclass(frozen=True)
class GroupPresentation:
    """``<generators | relators>``; relators are stored cyclically reduced, never empty.

    ``partial`` marks the output of a simplification that ran out of budget;
    it plays no part in equality.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    partial: bool = field(default=False, compare=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise AlphabetError(f"repeated generator in {gens}")
        for g in gens:
            if len(g) != 1 or g not in string.ascii_lowercase:
                raise AlphabetError(f"bad generator name {g!r}")
        rels = []
        for r in self.relators:
            r = Word(r)
            if not r.generators() <= set(gens):
                raise AlphabetError(f"relator {r} leaves alphabet {gens}")
            core, _ = cyclic_reduce(r)
            if core:
                rels.append(core)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    @classmethod
    def make(cls, generators: Iterable[str] | str, relators: Iterable[Word | str] = ()) -> GroupPresentation:
        if isinstance(generators, str):
            generators = generators.split() if " " in generators else list(generators)
        return cls(tuple(generators), tuple(Word(r) for r in relators))

    def __str__(self) -> str:
        return f"<{', '.join(self.generators)} | {', '.join(str(r) for r in self.relators)}>"


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ...`` and every ``d_i >= 2``."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        if self.rank < 0:
            raise ValueError("negative rank")
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a canonical divisibility chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> AbelianInvariants:
        """Canonicalize a direct sum of cyclic groups ``Z/n`` (``n = 0`` means ``Z``)."""
        orders = [abs(int(n)) for n in orders]
        rank = sum(1 for n in orders if n == 0)
        finite = [n for n in orders if n > 1]
        diag = smith_normal_form([[n if i == j else 0 for j in range(len(finite))] for i, n in enumerate(finite)])
        return cls(rank, tuple(d for d in diag if d > 1))

    def direct_sum(self, other: AbelianInvariants) -> AbelianInvariants:
        return AbelianInvariants.from_orders([0] * (self.rank + other.rank) + list(self.torsion) + list(other.torsion))

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def relation_matrix(p: GroupPresentation) -> list[list[int]]:
    """Rows are relators, columns generators, entries exponent sums."""
    rows = []
    for r in p.relators:
        sums = exponent_sums(r, p.generators)
        rows.append([sums[g] for g in p.generators])
    return rows


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of an integer matrix.

    Exact arithmetic on Python ints.  An empty or zero matrix gives ``[]``.
    """
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    clean = False
            if not clean:
                # move the smallest remainder into the pivot slot
                best = min(
                    [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
                    + [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
                )
                _, i1, j1 = best
                if i1 != t:
                    a[t], a[i1] = a[i1], a[t]
                else:
                    for row in a:
                        row[t], row[j1] = row[j1], row[t]
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def abelianize(p: GroupPresentation) -> AbelianInvariants:
    diag = smith_normal_form(relation_matrix(p))
    return AbelianInvariants(len(p.generators) - len(diag), tuple(d for d in diag if d > 1))


# -- Tietze simplification -------------------------------------------------


def _dedupe(rels: list[Word]) -> list[Word]:
    seen, out = set(), []
    for r in rels:
        core, _ = cyclic_reduce(r)
        if not core:
            continue
        k = _cyclic_key(core)
        if k not in seen:
            seen.add(k)
            out.append(core)
    return out


def _find_elimination(gens: list[str], rels: list[Word]):
    order = sorted(range(len(rels)), key=lambda i: (len(rels[i]), i))
    for i in order:
        r = rels[i].letters
        for g in gens:
            hits = [k for k, c in enumerate(r) if c.lower() == g]
            if len(hits) == 1:
                return i, g, hits[0]
    return None


def _eliminate(gens: list[str], rels: list[Word], i: int, g: str, pos: int):
    r = rels[i].letters
    rot = r[pos:] + r[:pos]
    rest = Word(rot[1:])
    value = ~rest if rot[0] == g else rest
    table = {g: value.letters, g.upper(): (~value).letters}
    new = []
    for j, s in enumerate(rels):
        if j != i:
            new.append(Word("".join(table.get(c, c) for c in s.letters)))
    return [x for x in gens if x != g], new


def _pieces(rels: Sequence[Word]) -> list[tuple[str, str]]:
    """Length-reducing replacements ``u -> v`` with ``u v^-1`` a relator conjugate."""
    out = []
    for s in rels:
        L = len(s)
        for q in s.rotations() + (~s).rotations():
            qs = q.letters
            for k in range(L, L // 2, -1):
                out.append((qs[:k], (~Word(qs[k:])).letters))
    out.sort(key=lambda uv: (-(len(uv[0]) - len(uv[1])), uv[0], uv[1]))
    return out


def _shorten(r: Word, pieces: list[tuple[str, str]]) -> Word | None:
    """Best single-piece shortening of the cyclic word ``r``, or None."""
    s = r.letters
    best = None
    for u, v in pieces:
        if best is not None and len(u) - len(v) <= len(s) - len(best):
            break  # pieces are sorted by how much they can save
        for k in range(len(s)):
            rot = s[k:] + s[:k]
            if rot.startswith(u):
                core, _ = cyclic_reduce(Word(v + rot[len(u):]))
                if len(core) < len(s) and (best is None or len(core) < len(best)):
                    best = core
    return best


def tietze_simplify(p: GroupPresentation, budget: int = DEFAULT_BUDGET) -> GroupPresentation:
    """Simplify by safe Tietze moves until a fixed point or ``budget`` moves.

    Moves, in priority order: cyclic reduction and duplicate removal; elimination
    of a generator occurring exactly once in some relator (shortest relator
    first); shortening a relator by a piece of another relator longer than half
    of it, dropping it if it shrinks to the identity.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    gens = list(p.generators)
    rels = _dedupe(list(p.relators))
    steps = 0
    while True:
        if steps >= budget:
            return GroupPresentation(tuple(gens), tuple(rels), partial=True)
        hit = _find_elimination(gens, rels)
        if hit is not None:
            gens, rels = _eliminate(gens, rels, *hit)
            rels = _dedupe(rels)
            steps += 1
            continue
        moves = []
        for i in range(len(rels)):
            others = rels[:i] + rels[i + 1:]
            if others:
                shorter = _shorten(rels[i], _pieces(others))
                if shorter is not None:
                    moves.append((len(shorter) - len(rels[i]), -len(rels[i]), -i, shorter))
        if moves:
            _, _, neg_i, shorter = min(moves, key=lambda m: m[:3])
            i = -neg_i
            rels = _dedupe(rels[:i] + ([shorter] if shorter else []) + rels[i + 1:])
            steps += 1
            continue
        return GroupPresentation(tuple(gens), tuple(rels))


# -- recognition -------------------------------------------------------------

TAGS = ("Trivial", "Z", "FreeOfRank", "ZxZ2", "Zn", "ZplusZn", "Unknown")


@dataclass(frozen=True)
class Recognition:
    tag: str
    param: int | None = None
    witness: GroupPresentation | None = None

    @property
    def name(self) -> str:
        if self.tag in ("FreeOfRank", "Zn", "ZplusZn"):
            return f"{self.tag}({self.param})"
        return self.tag

    def __str__(self) -> str:
        return self.name


def abelian_presentation(inv: AbelianInvariants) -> GroupPresentation:
    """The canonical presentation of an abelian group: free letters first, then torsion."""
    n = inv.rank + len(inv.torsion)
    gens = tuple(string.ascii_lowercase[:n])
    rels = [commutator(gens[i], gens[j]) for i in range(n) for j in range(i + 1, n)]
    rels += [Word(gens[inv.rank + k] * d) for k, d in enumerate(inv.torsion)]
    return GroupPresentation(gens, tuple(rels))


def _power_of(r: Word) -> tuple[str, int] | None:
    s = r.letters
    if s and len(set(s)) == 1:
        return s[0].lower(), len(s)
    return None


def _is_commutator_of(r: Word, x: str, y: str) -> bool:
    targets = {commutator(x, y).letters, commutator(y, x).letters}
    return any(q.letters in targets for q in r.rotations())


def _syntactic_match(p: GroupPresentation) -> Recognition:
    gens, rels = p.generators, p.relators
    if not rels:
        if not gens:
            return Recognition("Trivial", witness=p)
        if len(gens) == 1:
            return Recognition("Z", 1, witness=p)
        return Recognition("FreeOfRank", len(gens), witness=p)
    if len(gens) == 1 and len(rels) == 1:
        pw = _power_of(rels[0])
        if pw is not None:
            n = pw[1]
            return Recognition("Trivial", witness=p) if n == 1 else Recognition("Zn", n, witness=p)
    if len(gens) == 2 and len(rels) == 2:
        x, y = gens
        for c, t in ((rels[0], rels[1]), (rels[1], rels[0])):
            pw = _power_of(t)
            if pw is not None and pw[1] >= 2 and _is_commutator_of(c, x, y):
                n = pw[1]
                return Recognition("ZxZ2", 2, witness=p) if n == 2 else Recognition("ZplusZn", n, witness=p)
    return Recognition("Unknown", witness=p)


_EXPECTED_H1 = {
    "Trivial": lambda n: AbelianInvariants(0),
    "Z": lambda n: AbelianInvariants(1),
    "FreeOfRank": lambda n: AbelianInvariants(n),
    "ZxZ2": lambda n: AbelianInvariants(1, (2,)),
    "Zn": lambda n: AbelianInvariants(0, (n,)),
    "ZplusZn": lambda n: AbelianInvariants(1, (n,)),
}


def match_catalog(p: GroupPresentation, budget: int = DEFAULT_BUDGET) -> Recognition:
    """Recognize ``p`` against a small list of presentation shapes, or say Unknown.

    Matching is syntactic after :func:`tietze_simplify`: a commutator is accepted
    in either letter order and any rotation.  Never guesses.
    """
    simple = tietze_simplify(p, budget)
    rec = _syntactic_match(simple)
    if rec.tag != "Unknown" and _EXPECTED_H1[rec.tag](rec.param) != abelianize(p):
        return Recognition("Unknown", witness=simple)
    return rec


# -- text format -------------------------------------------------------------


def parse_presentation(text: str) -> GroupPresentation:
    gens: list[str] | None = None
    rels: list[Word] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(":")
        key = key.strip().lower()
        if key == "generators":
            gens = value.split()
        elif key == "relator":
            rels.append(Word(value.strip()))
        else:
            raise ValueError(f"unrecognized line {raw!r}")
    if gens is None:
        raise ValueError("missing 'generators:' line")
    return GroupPresentation(tuple(gens), tuple(rels))


def format_presentation(p: GroupPresentation) -> str:
    lines = ["generators: " + " ".join(p.generators)]
    lines += [f"relator: {r}" for r in p.relators]
    return "\n".join(lines) + "\n"

