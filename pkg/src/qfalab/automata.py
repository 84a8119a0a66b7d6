"""Machine types and their acceptance-value semantics.

Four automaton families share this module:

* ``Pfa``    -- probabilistic automaton with stochastic matrices over the
  input alphabet plus both end-markers; state distributions are row vectors
  and evolve as ``v @ A`` (row convention).
* ``Gpfa``   -- generalized automaton with arbitrary real matrices, an
  initial row vector and a final column vector, and no end-markers.
* ``Kwqfa``  -- measure-every-step quantum automaton: unitary matrices over
  the alphabet plus markers, disjoint accepting/rejecting state sets, and
  amplitudes that are measured out after each symbol.
* ``Mcqfa``  -- measure-once quantum automaton: unitary evolution over the
  marked input with a single observation at the end.

Quantum machines use the column convention (``U @ |u>``, so ``U[j][i]`` is
the amplitude from state ``i+1`` to state ``j+1``); probabilistic machines
use the row convention.  State indices in the public API are 1-based and the
start state is always state 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .numeric import (
    RATIONAL,
    ColVec,
    Matrix,
    RowVec,
    Scalar,
    is_stochastic,
    is_unitary_within,
    same_kind,
    zero_tolerance,
)

CENT = "¢"
DOLLAR = "$"
MARKERS = (CENT, DOLLAR)

Word = tuple[str, ...]
WordLike = Union[str, Sequence[str]]


def as_word(w: WordLike) -> Word:
    """Normalize a word to a tuple of symbol strings.

    A plain ``str`` is split into characters, so multi-character symbols
    (e.g. free-group generators ``g1``) must be passed as a sequence.
    """
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def _check_alphabet(sigma: Sequence[str]) -> tuple[str, ...]:
    alphabet = tuple(sigma)
    if not alphabet:
        raise ValueError("alphabet must be nonempty")
    if len(set(alphabet)) != len(alphabet):
        raise ValueError("alphabet symbols must be distinct")
    for s in alphabet:
        if not s or s in MARKERS:
            raise ValueError(f"invalid alphabet symbol {s!r}")
    return alphabet


def _check_word(sigma: Sequence[str], w: WordLike) -> Word:
    word = as_word(w)
    allowed = set(sigma)
    for s in word:
        if s not in allowed:
            raise ValueError(f"symbol {s!r} not in alphabet {tuple(sigma)}")
    return word


def _check_states(label: str, states, n: int) -> frozenset[int]:
    out = frozenset(states)
    for q in out:
        if not isinstance(q, int) or isinstance(q, bool) or not (1 <= q <= n):
            raise ValueError(f"{label} contains invalid state index {q!r} for n={n}")
    return out


def _check_trans(
    trans: Mapping[str, Matrix], symbols: Sequence[str], n: int, fill_markers: bool
) -> dict[str, Matrix]:
    table = dict(trans)
    if fill_markers:
        # Constructions that do not care about the end-markers may omit them.
        kind = next(iter(table.values())).kind if table else RATIONAL
        for marker in MARKERS:
            table.setdefault(marker, Matrix.identity(n, kind))
    expected = set(symbols)
    got = set(table)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        parts = []
        if missing:
            parts.append(f"missing matrices for {missing}")
        if extra:
            parts.append(f"unexpected matrices for {extra}")
        raise ValueError("; ".join(parts))
    for sym, m in table.items():
        if not isinstance(m, Matrix):
            raise TypeError(f"transition for {sym!r} is not a Matrix")
        if m.rows != n or m.cols != n:
            raise ValueError(
                f"transition matrix for {sym!r} is {m.rows}x{m.cols}, expected {n}x{n}"
            )
    return table


@dataclass(frozen=True)
class Pfa:
    """Probabilistic automaton over the marked input ``CENT w DOLLAR``."""

    n: int
    sigma: tuple[str, ...]
    trans: Mapping[str, Matrix]
    accepting: frozenset[int]

    start: int = field(default=1, init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("state count must be positive")
        object.__setattr__(self, "sigma", _check_alphabet(self.sigma))
        table = _check_trans(self.trans, self.sigma + MARKERS, self.n, True)
        for sym, m in table.items():
            if m.kind != RATIONAL:
                raise ValueError(f"pfa matrices must be rational; {sym!r} is {m.kind}")
            if not is_stochastic(m):
                bad = next(
                    i for i, row in enumerate(m.entries)
                    if sum(row) != 1 or any(v < 0 or v > 1 for v in row)
                )
                raise ValueError(
                    f"matrix for {sym!r} is not stochastic (row {bad + 1})"
                )
        object.__setattr__(self, "trans", table)
        object.__setattr__(
            self, "accepting", _check_states("accepting", self.accepting, self.n)
        )


@dataclass(frozen=True)
class Gpfa:
    """Generalized automaton: value is ``v0 @ A_{w_1} @ ... @ A_{w_k} @ f``."""

    n: int
    sigma: tuple[str, ...]
    trans: Mapping[str, Matrix]
    v0: RowVec
    f: ColVec

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("state count must be positive")
        object.__setattr__(self, "sigma", _check_alphabet(self.sigma))
        table = _check_trans(self.trans, self.sigma, self.n, False)
        kinds = [m.kind for m in table.values()] + [self.v0.kind, self.f.kind]
        same_kind(*kinds)
        if len(self.v0) != self.n or len(self.f) != self.n:
            raise ValueError("v0 and f must have length n")
        object.__setattr__(self, "trans", table)

    @property
    def kind(self) -> str:
        return self.v0.kind


@dataclass(frozen=True)
class Kwqfa:
    """Measure-every-step quantum automaton with accept/reject partitions."""

    n: int
    sigma: tuple[str, ...]
    trans: Mapping[str, Matrix]
    q_acc: frozenset[int]
    q_rej: frozenset[int]

    start: int = field(default=1, init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("state count must be positive")
        object.__setattr__(self, "sigma", _check_alphabet(self.sigma))
        table = _check_trans(self.trans, self.sigma + MARKERS, self.n, True)
        same_kind(*(m.kind for m in table.values()))
        tol = zero_tolerance()
        for sym, m in table.items():
            if not is_unitary_within(m, tol):
                raise ValueError(
                    f"matrix for {sym!r} fails the orthogonality tolerance {tol}"
                )
        acc = _check_states("q_acc", self.q_acc, self.n)
        rej = _check_states("q_rej", self.q_rej, self.n)
        if acc & rej:
            raise ValueError("q_acc and q_rej must be disjoint")
        object.__setattr__(self, "trans", table)
        object.__setattr__(self, "q_acc", acc)
        object.__setattr__(self, "q_rej", rej)

    @property
    def kind(self) -> str:
        return next(iter(self.trans.values())).kind


@dataclass(frozen=True)
class Mcqfa:
    """Measure-once quantum automaton; observation happens after DOLLAR."""

    n: int
    sigma: tuple[str, ...]
    trans: Mapping[str, Matrix]
    accepting: frozenset[int]

    start: int = field(default=1, init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("state count must be positive")
        object.__setattr__(self, "sigma", _check_alphabet(self.sigma))
        table = _check_trans(self.trans, self.sigma + MARKERS, self.n, True)
        same_kind(*(m.kind for m in table.values()))
        tol = zero_tolerance()
        for sym, m in table.items():
            if not is_unitary_within(m, tol):
                raise ValueError(
                    f"matrix for {sym!r} fails the orthogonality tolerance {tol}"
                )
        object.__setattr__(self, "trans", table)
        object.__setattr__(
            self, "accepting", _check_states("accepting", self.accepting, self.n)
        )

    @property
    def kind(self) -> str:
        return next(iter(self.trans.values())).kind


Machine = Union[Pfa, Gpfa, Kwqfa, Mcqfa]


@dataclass(frozen=True)
class RunTrace:
    """Record of a measure-every-step run.

    ``vectors`` holds the surviving (post-measurement) state vector after
    each processed tape symbol, in order.
    """

    accept_prob: Scalar
    reject_prob: Scalar
    vectors: tuple[ColVec, ...]

    def __post_init__(self):
        slack = 1 + zero_tolerance()
        if self.accept_prob + self.reject_prob > slack:
            raise ValueError("halting probabilities exceed 1")
        for v in self.vectors:
            if v.norm_sq() > slack:
                raise ValueError("state vector norm exceeds 1")


def pfa_accept_prob(p: Pfa, w: WordLike) -> Fraction:
    """Exact acceptance probability of ``w``: mass on accepting states after
    processing ``CENT w DOLLAR`` from the start state."""
    word = _check_word(p.sigma, w)
    v = RowVec(
        [Fraction(1)] + [Fraction(0)] * (p.n - 1), RATIONAL
    )
    for sym in (CENT, *word, DOLLAR):
        v = v @ p.trans[sym]
    return sum((v[q - 1] for q in p.accepting), Fraction(0))


def gpfa_value(g: Gpfa, w: WordLike) -> Scalar:
    """Value of ``w``; the empty word gives ``v0 @ f`` directly."""
    word = _check_word(g.sigma, w)
    v = g.v0
    for sym in word:
        v = v @ g.trans[sym]
    return v @ g.f


def _unit_column(n: int, kind: str) -> ColVec:
    one = Fraction(1) if kind == RATIONAL else 1.0
    zero = Fraction(0) if kind == RATIONAL else 0.0
    return ColVec([one] + [zero] * (n - 1), kind)


def _measure(
    v: ColVec, acc: frozenset[int], rej: frozenset[int]
) -> tuple[ColVec, Scalar, Scalar]:
    """Project out halting coordinates, returning the surviving vector and
    the measured accept/reject probability mass."""
    zero = Fraction(0) if v.kind == RATIONAL else 0.0
    gained_acc = zero
    gained_rej = zero
    out = list(v.entries)
    for q in acc:
        gained_acc += out[q - 1] * out[q - 1]
        out[q - 1] = zero
    for q in rej:
        gained_rej += out[q - 1] * out[q - 1]
        out[q - 1] = zero
    return ColVec(out, v.kind), gained_acc, gained_rej


def kwqfa_run(m: Kwqfa, w: WordLike) -> RunTrace:
    """Run the measure-every-step semantics on ``CENT w DOLLAR``.

    After each unitary step the accepting and rejecting coordinates are
    measured: their squared amplitudes accumulate into the respective
    probabilities and the coordinates are zeroed before the next symbol.
    """
    word = _check_word(m.sigma, w)
    kind = m.kind
    zero = Fraction(0) if kind == RATIONAL else 0.0
    v = _unit_column(m.n, kind)
    accept = zero
    reject = zero
    history = []
    for sym in (CENT, *word, DOLLAR):
        v = m.trans[sym] @ v
        v, acc_gain, rej_gain = _measure(v, m.q_acc, m.q_rej)
        accept += acc_gain
        reject += rej_gain
        history.append(v)
    return RunTrace(accept, reject, tuple(history))


def mcqfa_accept_prob(m: Mcqfa, w: WordLike) -> Scalar:
    """Apply the full unitary product to the start state, then observe once:
    the result is the squared amplitude mass on accepting coordinates."""
    word = _check_word(m.sigma, w)
    v = _unit_column(m.n, m.kind)
    for sym in (CENT, *word, DOLLAR):
        v = m.trans[sym] @ v
    zero = Fraction(0) if m.kind == RATIONAL else 0.0
    return sum((v[q - 1] * v[q - 1] for q in m.accepting), zero)


def acceptance_value(machine: Machine, w: WordLike) -> Scalar:
    """Uniform acceptance value used by cutpoint classification."""
    if isinstance(machine, Pfa):
        return pfa_accept_prob(machine, w)
    if isinstance(machine, Gpfa):
        return gpfa_value(machine, w)
    if isinstance(machine, Mcqfa):
        return mcqfa_accept_prob(machine, w)
    if isinstance(machine, Kwqfa):
        return kwqfa_run(machine, w).accept_prob
    raise TypeError(f"not a machine: {machine!r}")
