"""Brute-force verifier tests."""

from fractions import Fraction

import pytest

from helpers import convolution_value, random_nonneg_gpfa
from qfalab.automata import Gpfa, gpfa_value
from qfalab.constructions import (
    coin_pfa,
    gpfa_concat,
    gpfa_reverse,
    gpfa_union,
    rotation_mcqfa,
    word_problem_gpfa,
)
from qfalab.cutpoint import CutpointSpec
from qfalab.languages import LanguageOracle, oracle
from qfalab.numeric import ColVec, Matrix, RowVec
from qfalab.verify import (
    check_value_identity,
    dieu_violation,
    enumerate_agreement,
    enumerate_values,
    words_up_to,
)
from random import Random


def test_enumeration_order_is_length_then_lex():
    got = list(words_up_to(("a", "b"), 2))
    assert got == [
        (),
        ("a",),
        ("b",),
        ("a", "a"),
        ("a", "b"),
        ("b", "a"),
        ("b", "b"),
    ]


def test_enumerate_values_matches_direct_evaluation():
    p = coin_pfa()
    from qfalab.automata import pfa_accept_prob

    for word, value in enumerate_values(p, 5):
        assert value == pfa_accept_prob(p, word)

    m = rotation_mcqfa(3)
    from qfalab.automata import mcqfa_accept_prob

    for word, value in enumerate_values(m, 5):
        assert abs(value - mcqfa_accept_prob(m, word)) < 1e-12


def test_enumerate_agreement_rotation_vs_mod():
    report = enumerate_agreement(
        rotation_mcqfa(3), CutpointSpec(0.0, "greater"), oracle("mod-3"), 12
    )
    assert report.agreed
    assert report.tested == 13


def test_enumerate_agreement_corrupted_machine():
    # deliberately wrong accepting set: state 1 fires on the empty word
    bad = rotation_mcqfa(3)
    corrupted = type(bad)(bad.n, bad.sigma, dict(bad.trans), frozenset({1}))
    report = enumerate_agreement(
        corrupted, CutpointSpec(0.0, "greater"), oracle("mod-3"), 6
    )
    assert report.first_disagreement == ()
    assert report.tested == 1


def test_enumerate_agreement_alphabet_mismatch():
    with pytest.raises(ValueError, match="alphabet mismatch"):
        enumerate_agreement(
            rotation_mcqfa(3), CutpointSpec(0.0, "greater"), oracle("eq"), 4
        )


def test_dieu_violation_of_anti_palindromes():
    co_pal = LanguageOracle("co-pal", ("a", "b"), lambda w: w != w[::-1])
    n = 3
    assert dieu_violation(co_pal, ("a",) * n + ("b",), ("a",), (), n, n) == n


def test_dieu_violation_lt_family():
    lt = oracle("lt")
    n = 4
    assert dieu_violation(lt, (), ("a",), ("b",) * n, n, n) == n


def test_dieu_no_violation_on_everything():
    sigma_star = LanguageOracle("all", ("a", "b"), lambda w: True)
    assert dieu_violation(sigma_star, ("a",), ("b",), (), 2, 9) is None


def test_dieu_premise_failure_returns_none():
    eq = oracle("eq")
    # premise words ab, ab ab are balanced but u v = "a" already fails
    assert dieu_violation(eq, ("a",), ("b",), (), 2, 5) is None


def test_dieu_requires_m_max_at_least_n():
    with pytest.raises(ValueError):
        dieu_violation(oracle("eq"), (), (), (), 3, 2)


def test_check_value_identity_reverse_twice():
    rng = Random(3)
    g = random_nonneg_gpfa(rng, 3, ("a", "b"))
    twice = gpfa_reverse(gpfa_reverse(g))
    assert check_value_identity(twice, lambda w: gpfa_value(g, w), 6) is None


def test_check_value_identity_concat_convolution():
    rng = Random(4)
    g1 = random_nonneg_gpfa(rng, 2, ("a", "b"))
    g2 = random_nonneg_gpfa(rng, 2, ("a", "b"))
    joined = gpfa_concat(g1, g2)
    assert (
        check_value_identity(joined, lambda w: convolution_value(g1, g2, w), 6)
        is None
    )


def test_check_value_identity_union_sum():
    rng = Random(6)
    g1 = random_nonneg_gpfa(rng, 2, ("a", "b"))
    g2 = random_nonneg_gpfa(rng, 3, ("a", "b"))
    merged = gpfa_union(g1, g2)
    reference = lambda w: gpfa_value(g1, w) + gpfa_value(g2, w)
    assert check_value_identity(merged, reference, 6) is None


def test_check_value_identity_reports_minimal_counterexample():
    g = Gpfa(
        1,
        ("a",),
        {"a": Matrix.rational([[2]])},
        RowVec([Fraction(1)]),
        ColVec([Fraction(1)]),
    )
    # reference disagrees from length 2 onward
    reference = lambda w: gpfa_value(g, w) if len(w) < 2 else Fraction(0)
    assert check_value_identity(g, reference, 4) == ("a", "a")


def test_word_problem_agreement_small():
    report = enumerate_agreement(
        word_problem_gpfa(2), CutpointSpec(Fraction(1), "equal"), oracle("wp-2"), 5
    )
    assert report.agreed
