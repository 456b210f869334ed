"""Bounded shortlex Knuth-Bendix completion for group presentations.

Letters are generators and their formal inverses (``a`` and ``A``), ordered
``a < A < b < B < ...`` following the presentation's generator order.  The
free-reduction rules ``aA -> 1`` and ``Aa -> 1`` are always present.

A run that hits a limit is not an error: the partial system comes back with
``status == "timeout"`` and ``confluent == False``.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product

from obcalc.presentation import GroupPresentation
from obcalc.words import Word

__all__ = [
    "RewriteSystem",
    "NotConfluentError",
    "knuth_bendix",
    "normal_form",
    "prove_trivial",
    "count_normal_forms",
    "format_rules",
]

MAX_RULES = 500
MAX_RULE_LENGTH = 20
MAX_ITERATIONS = 100_000


class NotConfluentError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteSystem:
    letters: tuple[str, ...]
    rules: tuple[tuple[str, str], ...]
    confluent: bool
    status: str = "confluent"

    def __post_init__(self):
        key = _shortlex_key(self.letters)
        for lhs, rhs in self.rules:
            if not key(lhs) > key(rhs):
                raise ValueError(f"rule {lhs} -> {rhs} does not decrease shortlex")

    def rewrite(self, s: str) -> str:
        return _Rewriter(dict(self.rules)).reduce(s)


def _shortlex_key(letters: Sequence[str]):
    rank = {c: i for i, c in enumerate(letters)}
    return lambda s: (len(s), [rank[c] for c in s])


class _Rewriter:
    """Left-to-right stack rewriting; output stays irreducible as it grows."""

    def __init__(self, rules: dict[str, str]):
        self.rules = rules
        self.maxlen = max((len(k) for k in rules), default=0)

    def reduce(self, s: str) -> str:
        out: list[str] = []
        todo = list(reversed(s))
        rules, maxlen = self.rules, self.maxlen
        while todo:
            out.append(todo.pop())
            for k in range(1, min(maxlen, len(out)) + 1):
                tail = "".join(out[-k:])
                rhs = rules.get(tail)
                if rhs is not None:
                    del out[-k:]
                    todo.extend(reversed(rhs))
                    break
        return "".join(out)


def _letters_for(generators: Sequence[str]) -> tuple[str, ...]:
    out: list[str] = []
    for g in generators:
        out += [g, g.upper()]
    return tuple(out)


def knuth_bendix(
    p: GroupPresentation,
    max_rules: int = MAX_RULES,
    max_rule_length: int = MAX_RULE_LENGTH,
    max_iterations: int = MAX_ITERATIONS,
) -> RewriteSystem:
    """Complete ``p`` into a shortlex rewriting system, within the given limits."""
    if min(max_rules, max_rule_length, max_iterations) <= 0:
        raise ValueError("limits must be positive")
    letters = _letters_for(p.generators)
    key = _shortlex_key(letters)
    rules: dict[str, str] = {}
    rw = _Rewriter(rules)

    pending: deque[tuple[str, str]] = deque()
    for g in p.generators:
        pending.append((g + g.upper(), ""))
        pending.append((g.upper() + g, ""))
    for r in p.relators:
        pending.append((r.letters, ""))

    def overlaps(l1: str, r1: str, l2: str, r2: str):
        # suffix of l1 == prefix of l2
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] == l2[:k]:
                yield r1 + l2[k:], l1[:-k] + r2

    iterations = 0
    status = "confluent"
    while pending:
        iterations += 1
        if iterations > max_iterations:
            status = "timeout"
            break
        u, v = pending.popleft()
        u, v = rw.reduce(u), rw.reduce(v)
        if u == v:
            continue
        lhs, rhs = (u, v) if key(u) > key(v) else (v, u)
        if len(lhs) > max_rule_length:
            status = "timeout"
            break
        # interreduce: rules whose lhs contains the new lhs are retired and re-queued
        for old in sorted((k for k in rules if lhs in k), key=key):
            pending.append((old, rules.pop(old)))
        rules[lhs] = rhs
        rw.maxlen = max(rw.maxlen, len(lhs))
        for k in list(rules):
            if k != lhs and lhs in rules[k]:
                rules[k] = rw.reduce(rules[k])
        if len(rules) > max_rules:
            status = "timeout"
            break
        new_pairs = []
        for k in sorted(rules, key=key):
            new_pairs.extend(overlaps(lhs, rhs, k, rules[k]))
            if k != lhs:
                new_pairs.extend(overlaps(k, rules[k], lhs, rhs))
        pending.extend(new_pairs)

    final = tuple(sorted(rules.items(), key=lambda kv: key(kv[0])))
    return RewriteSystem(letters, final, status == "confluent", status)


def normal_form(s: RewriteSystem, w: Word | str) -> Word:
    return Word(s.rewrite(Word(w).letters))


def prove_trivial(s: RewriteSystem, w: Word | str) -> bool:
    if not s.confluent:
        raise NotConfluentError("word problem answers need a confluent system")
    return not normal_form(s, w)


def count_normal_forms(s: RewriteSystem, max_length: int) -> list[int]:
    """Number of irreducible words of each length ``0..max_length``."""
    if not s.confluent:
        raise NotConfluentError("counting normal forms needs a confluent system")
    lhs = {k for k, _ in s.rules}
    maxlen = max((len(k) for k in lhs), default=0)
    counts = [1]
    layer = [""]
    for _ in range(max_length):
        nxt = []
        for w, c in product(layer, s.letters):
            cand = w + c
            # prefix is irreducible, so only suffixes can match
            if not any(cand[-k:] in lhs for k in range(1, min(maxlen, len(cand)) + 1)):
                nxt.append(cand)
        counts.append(len(nxt))
        layer = nxt
    return counts


def format_rules(s: RewriteSystem) -> str:
    return "".join(f"{lhs or '1'} -> {rhs or '1'}\n" for lhs, rhs in s.rules)
