"""Machine-type and acceptance-semantics tests."""

import math
from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_gpfa, random_pfa, words_up_to
from qfalab.automata import (
    CENT,
    DOLLAR,
    Gpfa,
    Kwqfa,
    Mcqfa,
    Pfa,
    gpfa_value,
    kwqfa_run,
    mcqfa_accept_prob,
    pfa_accept_prob,
)
from qfalab.constructions import coin_pfa, pfa_to_nqfa, rotation_mcqfa
from qfalab.numeric import ColVec, Matrix, RowVec


def test_pfa_always_accepting_single_state():
    p = Pfa(1, ("a",), {"a": Matrix.identity(1)}, frozenset({1}))
    for w in ["", "a", "aaaa"]:
        assert pfa_accept_prob(p, w) == 1


def test_coin_pfa_values():
    p = coin_pfa()
    assert pfa_accept_prob(p, "a") == Fraction(1, 2)
    assert pfa_accept_prob(p, "aa") == Fraction(3, 4)
    assert pfa_accept_prob(p, "") == 0


def test_pfa_rejects_unknown_symbol():
    with pytest.raises(ValueError):
        pfa_accept_prob(coin_pfa(), "ab")


def test_pfa_requires_stochastic_matrices():
    bad = Matrix.rational([[1, 1], [0, 1]])
    with pytest.raises(ValueError, match="not stochastic"):
        Pfa(2, ("a",), {"a": bad}, frozenset({1}))


def test_gpfa_scalar_weights():
    g = Gpfa(
        1,
        ("a",),
        {"a": Matrix.rational([[2]])},
        RowVec([Fraction(1)]),
        ColVec([Fraction(1)]),
    )
    assert gpfa_value(g, "") == 1
    assert gpfa_value(g, "aaa") == 8


def test_gpfa_word_problem_generator_value():
    from qfalab.constructions import word_problem_gpfa

    wp = word_problem_gpfa(2)
    assert gpfa_value(wp, ["g1"]) == Fraction(3, 5)


def test_kwqfa_nothing_halts_with_empty_sets():
    m = Kwqfa(
        2,
        ("a",),
        {"a": Matrix.identity(2)},
        frozenset(),
        frozenset(),
    )
    trace = kwqfa_run(m, "aa")
    assert trace.accept_prob == 0
    assert trace.reject_prob == 0


def test_kwqfa_full_measurement_on_left_marker():
    swap = Matrix.rational([[0, 1], [1, 0]])
    m = Kwqfa(
        2,
        ("a",),
        {CENT: swap, "a": Matrix.identity(2), DOLLAR: Matrix.identity(2)},
        frozenset({2}),
        frozenset(),
    )
    trace = kwqfa_run(m, "aa")
    assert trace.accept_prob == 1
    for v in trace.vectors:
        assert all(x == 0 for x in v.entries)


def test_kwqfa_pipeline_accepts_empty_word_of_coin():
    # the coin machine values the empty word at 0, away from one half
    q = pfa_to_nqfa(coin_pfa())
    assert kwqfa_run(q, "").accept_prob > 0


def test_kwqfa_rejects_overlapping_halting_sets():
    with pytest.raises(ValueError, match="disjoint"):
        Kwqfa(2, ("a",), {"a": Matrix.identity(2)}, frozenset({1}), frozenset({1}))


def test_kwqfa_requires_unitary_matrices():
    shear = Matrix.rational([[1, 1], [0, 1]])
    with pytest.raises(ValueError, match="orthogonality"):
        Kwqfa(2, ("a",), {"a": shear}, frozenset({1}), frozenset())


def test_mcqfa_all_identity():
    m = Mcqfa(2, ("a",), {"a": Matrix.identity(2)}, frozenset({1}))
    for w in ["", "a", "aaa"]:
        assert mcqfa_accept_prob(m, w) == 1


def test_rotation_mcqfa_values():
    assert abs(mcqfa_accept_prob(rotation_mcqfa(2), "a") - 1) < 1e-12
    assert abs(mcqfa_accept_prob(rotation_mcqfa(3), "aaa")) < 1e-12
    expected = math.sin(2 * math.pi / 5) ** 2
    assert abs(mcqfa_accept_prob(rotation_mcqfa(5), "aa") - expected) < 1e-9


def test_marker_matrices_default_to_identity():
    p = Pfa(1, ("a",), {"a": Matrix.identity(1)}, frozenset({1}))
    assert p.trans[CENT] == Matrix.identity(1)
    assert p.trans[DOLLAR] == Matrix.identity(1)


def test_pfa_probabilities_stay_in_unit_interval():
    rng = Random(5)
    for _ in range(8):
        p = random_pfa(rng, rng.choice([2, 3]), den=4)
        for w in words_up_to(p.sigma, 4):
            value = pfa_accept_prob(p, w)
            assert 0 <= value <= 1


def test_kwqfa_probability_conservation():
    q = pfa_to_nqfa(coin_pfa())
    for w in words_up_to(("a",), 6):
        trace = kwqfa_run(q, w)
        closing = sum(x * x for x in trace.vectors[-1].entries)
        assert abs(trace.accept_prob + trace.reject_prob + closing - 1) < 1e-9


def test_mcqfa_probability_within_unit_interval():
    for m in (2, 3, 5):
        machine = rotation_mcqfa(m)
        for w in words_up_to(("a",), 9):
            value = mcqfa_accept_prob(machine, w)
            assert -1e-9 <= value <= 1 + 1e-9


@given(st.integers(0, 6), st.data())
@settings(max_examples=40, deadline=None)
def test_gpfa_split_product_is_associative(cut_at, data):
    rng = Random(data.draw(st.integers(0, 10**6)))
    g = random_gpfa(rng, 3, ("a", "b"))
    word = tuple(data.draw(st.sampled_from(["a", "b"])) for _ in range(6))
    prefix, suffix = word[:cut_at], word[cut_at:]
    front = g.v0
    for sym in prefix:
        front = front @ g.trans[sym]
    back = g.f
    for sym in reversed(suffix):
        back = g.trans[sym] @ back
    assert front @ back == gpfa_value(g, word)


def test_run_trace_vector_norms_bounded():
    q = pfa_to_nqfa(coin_pfa())
    trace = kwqfa_run(q, "aaa")
    for v in trace.vectors:
        assert sum(x * x for x in v.entries) <= 1 + 1e-9


def _gpfa_to_float(g: Gpfa) -> Gpfa:
    return Gpfa(
        g.n,
        g.sigma,
        {sym: m.to_float() for sym, m in g.trans.items()},
        g.v0.to_float(),
        g.f.to_float(),
    )


def test_float_mirror_agrees_with_rational_to_length_8():
    """The same machine coded in both scalar kinds gives values within 1e-6
    on every word up to length 8."""
    from qfalab.constructions import word_problem_gpfa
    from qfalab.verify import enumerate_values

    rng = Random(9)
    machines = [word_problem_gpfa(2)] + [
        random_gpfa(rng, 2, ("a", "b"), lo=-2, hi=2, den=2) for _ in range(3)
    ]
    for exact in machines:
        approx = _gpfa_to_float(exact)
        mirrored = dict(enumerate_values(approx, 8))
        for word, value in enumerate_values(exact, 8):
            assert abs(float(value) - mirrored[word]) <= 1e-6
