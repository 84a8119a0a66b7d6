"""Ground-truth membership oracles for the witness languages.

Each oracle implements its set definition literally (symbol counting,
palindrome check, decomposition properties, free-group reduction) so it can
serve as the independent side of a brute-force comparison against a machine.

Free-group generators are spelled ``g1 ... gk`` with uppercase ``G1 ... Gk``
for their inverses, so every symbol is a single token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from .automata import Word, WordLike, as_word


@dataclass(frozen=True)
class LanguageOracle:
    """A named total membership predicate over an alphabet."""

    name: str
    alphabet: tuple[str, ...]
    member: Callable[[Word], bool]

    def __call__(self, w: WordLike) -> bool:
        word = as_word(w)
        allowed = set(self.alphabet)
        for s in word:
            if s not in allowed:
                raise ValueError(f"symbol {s!r} not in alphabet of {self.name}")
        return self.member(word)


_GENERATOR_RE = re.compile(r"^[gG]([1-9][0-9]*)$")


def generator_alphabet(k: int) -> tuple[str, ...]:
    """Alphabet ``g1..gk, G1..Gk`` for the rank-k free group."""
    if k < 1:
        raise ValueError("rank must be positive")
    return tuple(f"g{i}" for i in range(1, k + 1)) + tuple(
        f"G{i}" for i in range(1, k + 1)
    )


def inverse_generator(sym: str) -> str:
    if not _GENERATOR_RE.match(sym):
        raise ValueError(f"malformed generator symbol {sym!r}")
    return ("G" if sym[0] == "g" else "g") + sym[1:]


def free_reduce(w: WordLike) -> Word:
    """Cancel adjacent inverse pairs until no more remain.

    The result is the unique reduced word: a stack scan removes a pair as
    soon as a symbol meets its own inverse on top.
    """
    word = as_word(w)
    stack: list[str] = []
    for sym in word:
        if not _GENERATOR_RE.match(sym):
            raise ValueError(f"malformed generator symbol {sym!r}")
        if stack and stack[-1] == inverse_generator(sym):
            stack.pop()
        else:
            stack.append(sym)
    return tuple(stack)


def _count(word: Word, sym: str) -> int:
    return sum(1 for s in word if s == sym)


def _eq_member(word: Word) -> bool:
    return _count(word, "a") == _count(word, "b")


def _lt_member(word: Word) -> bool:
    return _count(word, "a") < _count(word, "b")


def _eq_dot_b_member(word: Word) -> bool:
    # Balanced prefix followed by a nonempty run of b's, characterized by:
    # the word ends with b, has more b's than a's, and its longest prefix
    # ending with a (empty for pure-b words) has at least as many a's as b's.
    if not word or word[-1] != "b":
        return False
    if not _lt_member(word):
        return False
    last_a = max((i for i, s in enumerate(word) if s == "a"), default=-1)
    prefix = word[: last_a + 1]
    return not _lt_member(prefix)


def oracle(name: str, m: Optional[int] = None, k: Optional[int] = None) -> LanguageOracle:
    """Build the named witness-language oracle.

    Parametrized ids may carry their parameter inline (``mod-3``, ``wp-2``)
    or through the keyword arguments ``m`` and ``k``.
    """
    base = name
    if name.startswith("mod-") and name != "mod-m":
        if m is not None:
            raise ValueError("parameter m given twice")
        m = int(name[len("mod-"):])
        base = "mod-m"
    if name.startswith("wp-") and name != "wp-k":
        if k is not None:
            raise ValueError("parameter k given twice")
        k = int(name[len("wp-"):])
        base = "wp-k"

    if base == "eq":
        return LanguageOracle("eq", ("a", "b"), _eq_member)
    if base == "neq":
        return LanguageOracle("neq", ("a", "b"), lambda w: not _eq_member(w))
    if base == "mod-m":
        if m is None or m < 1:
            raise ValueError("mod-m oracle needs a positive m")
        mm = m
        return LanguageOracle(f"mod-{mm}", ("a",), lambda w: len(w) % mm != 0)
    if base == "pal":
        return LanguageOracle("pal", ("a", "b"), lambda w: w == w[::-1])
    if base == "lt":
        return LanguageOracle("lt", ("a", "b"), _lt_member)
    if base == "eq-dot-b":
        return LanguageOracle("eq-dot-b", ("a", "b"), _eq_dot_b_member)
    if base == "eq-prime":
        return LanguageOracle(
            "eq-prime", ("a", "b"), lambda w: _count(w, "a") + 1 == _count(w, "b")
        )
    if base == "wp-k":
        if k is None or k < 1:
            raise ValueError("wp-k oracle needs a positive rank k")
        kk = k
        return LanguageOracle(
            f"wp-{kk}", generator_alphabet(kk), lambda w: free_reduce(w) == ()
        )
    raise ValueError(f"unknown language id {name!r}")


def complement(base: LanguageOracle) -> LanguageOracle:
    return LanguageOracle(
        f"co-{base.name}", base.alphabet, lambda w: not base.member(w)
    )


def dfa_oracle(doc: Mapping) -> LanguageOracle:
    """Oracle from a deterministic automaton description.

    ``doc`` carries ``alphabet``, state count ``n``, ``start``, ``accepting``
    and a total ``transitions`` table mapping each state (as a string key)
    to a symbol -> state map.  1-based state indices throughout.
    """
    alphabet = tuple(doc["alphabet"])
    n = int(doc["n"])
    start = int(doc.get("start", 1))
    accepting = frozenset(int(q) for q in doc["accepting"])
    if not (1 <= start <= n):
        raise ValueError(f"start state {start} out of range")
    if not all(1 <= q <= n for q in accepting):
        raise ValueError("accepting state out of range")
    table: dict[tuple[int, str], int] = {}
    raw = doc["transitions"]
    for state_key, row in raw.items():
        q = int(state_key)
        for sym, target in row.items():
            table[(q, sym)] = int(target)
    for q in range(1, n + 1):
        for sym in alphabet:
            if (q, sym) not in table:
                raise ValueError(f"incomplete transition table: state {q}, symbol {sym!r}")
            if not (1 <= table[(q, sym)] <= n):
                raise ValueError(f"transition target out of range at state {q}, {sym!r}")

    def run(word: Word) -> bool:
        q = start
        for sym in word:
            q = table[(q, sym)]
        return q in accepting

    name = str(doc.get("name", "dfa"))
    return LanguageOracle(name, alphabet, run)
