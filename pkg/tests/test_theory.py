import random

import pytest
from hypothesis import given, strategies as st

from glob_coherator import coherator as co
from glob_coherator import theory as th
from glob_coherator.theta0 import Table, all_tables

import termgen

SMALL = th.Budget(max_table_len=1, max_entry=1)
P0, P1 = Table((0,)), Table((1,))
C1 = th.cell_term(P1, (1, 0))
S0, T0 = th.cell_term(P1, (0, 0)), th.cell_term(P1, (0, 1))


@pytest.fixture(scope="module")
def ic1():
    return co.ic(1, SMALL)


@pytest.fixture(scope="module")
def raw(ic1):
    return termgen.raw_terms(ic1, all_tables(1, 1), 2)


def test_budget_dict_is_stable():
    assert th.Budget().to_dict() == {"max_table_len": 5, "max_entry": 2, "max_depth": 3, "pair_depth": 1,
                                     "max_model": 4, "model_samples": 48}


def test_base_theory_has_no_lifts():
    T = th.base_theory()
    assert T.lifts == ()
    assert th.type_of(T, C1) == (P1, Table((1,)))


def test_first_stage_lifts(ic1):
    # both orientations of every height-0 pair, and the reflexive ones
    pairs = sorted((str(d.dom), th.show(d.f), th.show(d.g)) for d in ic1.lifts)
    assert pairs == [("(0)", "base(c0@0)", "base(c0@0)"),
                     ("(1)", "base(s0@0)", "base(s0@0)"), ("(1)", "base(s0@0)", "base(t0@0)"),
                     ("(1)", "base(t0@0)", "base(s0@0)"), ("(1)", "base(t0@0)", "base(t0@0)")]
    assert len(co.ic(1, th.Budget(max_table_len=3, max_entry=1)).lifts) == 14


def test_normal_form_counts_match_raw_term_classes(ic1):
    # classes of raw terms under normalize equal the enumerated normal forms
    R = termgen.raw_terms(ic1, all_tables(1, 1), 3)
    for (p, m), terms in R.items():
        classes = {th.normalize(ic1, t) for t in terms}
        assert classes == set(th.enumerate_terms(ic1, p, m, 3)), (p, m)
    counts = {(str(p), m): len(th.enumerate_terms(ic1, p, m, 3)) for p, m in R}
    assert counts == {("(0)", 0): 1, ("(0)", 1): 21, ("(1)", 0): 2, ("(1)", 1): 127}


def test_ill_typed_terms(ic1):
    with pytest.raises(th.IllTyped):
        th.type_of(ic1, th.SrcPost(S0))
    with pytest.raises(th.IllTyped):
        th.type_of(ic1, th.app("L0:(1)#1", [S0], P1))
    with pytest.raises(th.IllTyped):
        th.type_of(ic1, th.Gen("L9:(1)#0"))
    with pytest.raises(th.IllTyped):
        th.decide_equal(ic1, C1, S0)


def test_boundaries_of_a_lift(ic1):
    t = th.app("L0:(1)#2", [C1], P1)
    assert th.boundary(ic1, t, "s") == T0 and th.boundary(ic1, t, "t") == S0
    assert th.normalize(ic1, th.SrcPost(t)) == T0


def test_decide_equal_examples(ic1):
    inv = th.app("L0:(1)#2", [C1], P1)
    ii = th.app("L0:(1)#1", [inv], P1)
    assert isinstance(th.decide_equal(ic1, C1, C1), th.Equal)
    assert isinstance(th.decide_equal(ic1, th.SrcPost(inv), T0), th.Equal)
    # parallel but different generator trees
    assert isinstance(th.decide_equal(ic1, ii, C1), th.Distinct)
    assert isinstance(th.decide_equal(ic1, inv, th.app("L0:(1)#2", [C1], P1)), th.Equal)


def test_separate_finds_a_witness(ic1):
    ii = th.app("L0:(1)#1", [th.app("L0:(1)#2", [C1], P1)], P1)
    assert th.separate(ic1, ii, C1, SMALL) is not None
    assert th.separate(ic1, C1, C1, SMALL) is None


def test_quotient_identifies_parallel_top_cells():
    Q = co.ic_quotient(1, SMALL)
    terms = th.enumerate_terms(Q, P1, 1, 3)
    for a in terms:
        for b in terms:
            v = th.decide_equal(Q, a, b, SMALL)
            parallel = all(th.boundary(Q, a, w) == th.boundary(Q, b, w) for w in "st")
            assert isinstance(v, th.Equal) == parallel
            assert isinstance(v, (th.Equal, th.Distinct))


def test_user_identification_rewrites_nested_subterms(ic1):
    inv = th.app("L0:(1)#2", [C1], P1)
    ii = th.app("L0:(1)#2", [inv], P1)
    U = th.identify(ic1, C1, ii, 1)
    assert isinstance(th.decide_equal(U, ii, C1), th.Equal)
    assert isinstance(th.decide_equal(U, th.app("L0:(1)#2", [ii], P1), inv), th.Equal)
    with pytest.raises(th.IllTyped):
        th.identify(ic1, C1, inv, 1)


def test_theory_text_round_trip(ic1):
    text = th.write_theory(ic1)
    T = th.parse_theory(text)
    assert th.write_theory(T) == text
    assert len(T.lifts) == len(ic1.lifts)


def test_parse_theory_with_identification():
    text = ("lift i : (1) -> 2 with s=base(c1@0), t=base(c1@0)\n"
            "lift r : (1) -> 1 with s=base(t0@0), t=base(s0@0)\n"
            "identify base(c1@0) = comp(gen(r), tuple(comp(gen(r), tuple(base(c1@0))))) @height 1 on (1)\n")
    T = th.parse_theory(text)
    assert T.quotient_height == 1 and len(T.identifications) == 1
    assert th.parse_theory(th.write_theory(T)).identifications == T.identifications


@pytest.mark.parametrize("text,line", [("lift x : (1) -> 0 with s=base(s0@0), t=base(s0@0)", 1),
                                       ("\nbogus line", 2),
                                       ("lift x : (1,2,1) -> 1 with s=base(s0@0), t=base(s0@0)", 1),
                                       ("lift x : (1) -> 1 with s=base(q0@0), t=base(s0@0)", 1)])
def test_parse_theory_errors_carry_line_numbers(text, line):
    with pytest.raises(th.ParseError) as e:
        th.parse_theory(text)
    assert e.value.line == line


def _all_raw(raw):
    return [t for lst in raw.values() for t in lst]


@given(st.data())
def test_normalize_is_idempotent_and_typed(ic1, raw, data):
    t = data.draw(st.sampled_from(_all_raw(raw)))
    n = th.normalize(ic1, t)
    assert th.normalize(ic1, n) == n
    assert th.type_of(ic1, n) == th.type_of(ic1, t)


@given(st.data())
def test_show_parse_round_trip(ic1, raw, data):
    t = data.draw(st.sampled_from(_all_raw(raw)))
    p, _ = th.type_of(ic1, t)
    assert th.parse_term(ic1, th.show(t), p) == t


@given(st.data())
def test_face_identities_hold_for_two_cells(data):
    T = co.ic(2, th.Budget(max_table_len=1, max_entry=2))
    p = data.draw(st.sampled_from([P1, Table((2,))]))
    terms = th.enumerate_terms(T, p, 2, 1)
    t = data.draw(st.sampled_from(terms))
    s, tt = th.boundary(T, t, "s"), th.boundary(T, t, "t")
    assert th.boundary(T, s, "s") == th.boundary(T, tt, "s")
    assert th.boundary(T, s, "t") == th.boundary(T, tt, "t")


def test_package_evaluator_agrees_with_independent_one(ic1, raw):
    sig, models = termgen.signatures(ic1, raw, per_carrier=1)
    for X, ops in models:
        I = th.Interpretation(X, ops)
        for (p, _), terms in raw.items():
            for x in termgen.points(X, p):
                for t in terms:
                    assert (th.evaluate(ic1, I, t, x),) == termgen.value(ic1, ops, X, t, x)


def test_random_interpretations_respect_faces(ic1):
    rng = random.Random(3)
    X = th.complete_globular_set(2, 2, 1)
    I = th.random_interpretation(ic1, X, rng)
    for d in ic1.lifts:
        for x, c in I.ops[d.id].items():
            assert X.source(c) == th.evaluate(ic1, I, d.f, x)
            assert X.target(c) == th.evaluate(ic1, I, d.g, x)
