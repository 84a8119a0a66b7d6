"""Cutpoint classification and bounded recognition checks.

A cutpoint splits the word set into three cells (below, at, above the
threshold).  Rational comparisons are exact; float comparisons treat values
within the zero tolerance of the threshold as equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .automata import Gpfa, Kwqfa, Machine, Mcqfa, Pfa, Word, acceptance_value
from .numeric import (
    RATIONAL,
    KindMismatchError,
    Scalar,
    scalar_kind,
    zero_tolerance,
)

LESS = "less"
EQUAL = "equal"
GREATER = "greater"
NOT_EQUAL = "not-equal"
RELATIONS = (LESS, EQUAL, GREATER, NOT_EQUAL)


@dataclass(frozen=True)
class CutpointSpec:
    """A threshold plus the relation a member's value must satisfy."""

    lam: Scalar
    relation: str

    def __post_init__(self):
        scalar_kind(self.lam)
        if self.relation not in RELATIONS:
            raise ValueError(
                f"unknown relation {self.relation!r}; expected one of {RELATIONS}"
            )


def compare_to_cut(v: Scalar, lam: Scalar, eps: float | None = None) -> str:
    """Three-way comparison cell of ``v`` against ``lam``.

    Both values must be of the same scalar kind.  Floats within ``eps`` of
    the threshold land in the ``equal`` cell.
    """
    kv, kl = scalar_kind(v), scalar_kind(lam)
    if kv != kl:
        raise KindMismatchError(f"comparing {kv} value against {kl} cutpoint")
    if kv == RATIONAL:
        if v == lam:
            return EQUAL
        return LESS if v < lam else GREATER
    tol = zero_tolerance(eps)
    if abs(v - lam) <= tol:
        return EQUAL
    return LESS if v < lam else GREATER


def classify_value(v: Scalar, spec: CutpointSpec, eps: float | None = None) -> bool:
    """True iff ``v`` stands in the spec's relation to the threshold."""
    cell = compare_to_cut(v, spec.lam, eps)
    if spec.relation == NOT_EQUAL:
        return cell != EQUAL
    return cell == spec.relation


def check_cutpoint_range(machine: Machine, lam: Scalar) -> None:
    """Probability-valued machines only make sense with thresholds in [0,1];
    generalized machines may use any real threshold."""
    if isinstance(machine, (Pfa, Kwqfa, Mcqfa)) and not (0 <= lam <= 1):
        raise ValueError(f"cutpoint {lam!r} outside [0,1] for a probability machine")


def member_at_cutpoint(
    machine: Machine, spec: CutpointSpec, w, eps: float | None = None
) -> bool:
    """Evaluate the machine on ``w`` and classify the value.

    Measure-every-step machines are classified by their accumulated
    acceptance probability.
    """
    check_cutpoint_range(machine, spec.lam)
    return classify_value(acceptance_value(machine, w), spec, eps)


def one_sided_zero_check(g: Gpfa, maxlen: int) -> Optional[Word]:
    """Bounded audit that no word up to ``maxlen`` has a negative value.

    Returns the first offender in shortest-then-lexicographic order, or
    ``None``.  This checks the one-sided-cutpoint-0 property only up to the
    bound; it is not a proof about the whole language.
    """
    if g.kind != RATIONAL:
        raise KindMismatchError("one-sided audit requires a rational machine")
    frontier = [((), g.v0)]
    for length in range(maxlen + 1):
        for word, v in frontier:
            if (v @ g.f) < 0:
                return word
        if length == maxlen:
            break
        frontier = [
            (word + (sym,), v @ g.trans[sym])
            for word, v in frontier
            for sym in g.sigma
        ]
    return None


def equivalent_under_separation_bounded(
    a1: Machine,
    lam1: Scalar,
    a2: Machine,
    lam2: Scalar,
    maxlen: int = 8,
    eps: float | None = None,
) -> Optional[Word]:
    """Check that both machine/threshold pairs induce the same three-way
    split on every word up to ``maxlen``.

    Returns the first word (shortest-then-lexicographic) that lands in
    different cells, or ``None`` when the bounded partitions agree.
    """
    if tuple(a1.sigma) != tuple(a2.sigma):
        raise ValueError("machines must share one input alphabet")
    check_cutpoint_range(a1, lam1)
    check_cutpoint_range(a2, lam2)
    for length in range(maxlen + 1):
        for word in itertools.product(a1.sigma, repeat=length):
            cell1 = compare_to_cut(acceptance_value(a1, word), lam1, eps)
            cell2 = compare_to_cut(acceptance_value(a2, word), lam2, eps)
            if cell1 != cell2:
                return word
    return None
