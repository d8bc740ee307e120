import pytest
from hypothesis import given, strategies as st

from glob_coherator import groups as gr
from glob_coherator import models as md
from glob_coherator import pushout as po
from glob_coherator.coherator import LevelUnsupported

from oracles import groupoid_axioms

SMALL = md.enumerate_groupoids(3, 8)
TARGETS = md.enumerate_groupoids(2, 6)


def _expected_size(X, b):
    out = sum(1 for _, s, _ in X.morphisms if s == b)
    inn = sum(1 for _, _, t in X.morphisms if t == b)
    loops = sum(1 for _, s, t in X.morphisms if s == t == b)
    return len(X.objects) + 1, len(X.morphisms) + out + inn + loops


@given(st.sampled_from([(X, b) for X in SMALL for b in X.objects]))
def test_attaching_a_zero_cell_glues_an_isomorphic_copy(case):
    X, b = case
    res = po.attach_cell(X, 0, b)
    Y = res.X_plus
    assert (len(Y.objects), len(Y.morphisms)) == _expected_size(X, b)
    assert groupoid_axioms(Y.objects, Y.morphisms, Y.comp, Y.ident, Y.inv)
    assert Y.src(res.new_cell) == b and Y.tgt(res.new_cell) == res.new_object


def test_attach_to_the_walking_iso():
    res = po.attach_cell(md.walking_iso(), 0, "x")
    assert res.new_object not in md.walking_iso().objects
    assert len(res.X_plus.objects) == 3 and len(res.X_plus.morphisms) == 9
    same = po.attach_cell(md.walking_iso(), 1, "a")
    assert same.X_plus is md.walking_iso() or same.X_plus.same_as(md.walking_iso())


def test_attach_rejects_bad_maps():
    with pytest.raises(md.NotAModelMap):
        po.attach_cell(md.point(), 0, "nope")
    with pytest.raises(md.NotAModelMap):
        po.attach_cell(md.point(), 1, "x")
    with pytest.raises(LevelUnsupported):
        po.attach_cell(md.two_model(md.walking_iso()), 0, "x")


@pytest.mark.parametrize("X", [md.point(), md.walking_iso(), md.group_as_groupoid(gr.cyclic(2)),
                               md.discrete_groupoid(["p", "q"])], ids=lambda X: X.name)
def test_universal_property_against_small_targets(X):
    for k in (0, 1):
        for f in po.attaching_maps(X, k):
            assert po.check_universal_property(X, k, f, TARGETS) is None


def test_pushout_condition_on_the_corpus():
    for X in po.corpus():
        rep = po.check_pushout_condition(X)
        assert rep["verdict"] == "pass" and not rep["vacuous"]
        assert all(r["verdict"] == "WeakEquivalence" for r in rep["rows"])


def test_small_sweep():
    rep = po.pushout_sweep(2, 6)
    assert rep["verdict"] == "pass" and len(rep["rows"]) > 0


def test_level_two_pushouts_are_unsupported():
    M = md.two_model(md.walking_iso())
    with pytest.raises(LevelUnsupported):
        po.check_pushout_condition(M)
    with pytest.raises(LevelUnsupported):
        po.check_free_pushout_condition(M)


@pytest.mark.parametrize("depth,verdict", [(1, "unknown"), (2, "unknown"), (3, "pass"), (4, "pass")])
def test_free_pushout_verdicts_by_saturation_depth(depth, verdict):
    for X in po.corpus():
        assert po.check_free_pushout_condition(X, 0, sat_depth=depth)["verdict"] == verdict, X.name


def test_free_pushout_mutation_is_caught():
    rep = po.check_free_pushout_condition(md.point(), 0, mutation="drop-inverse")
    assert rep["verdict"] == "fail"
    assert rep["rows"][0]["evidence"]["witness"]


def test_free_pushout_higher_k_is_identity():
    rep = po.check_free_pushout_condition(md.group_as_groupoid(gr.cyclic(3)), k=1)
    assert rep["verdict"] == "pass" and len(rep["rows"]) == 3


def test_saturated_normal_forms_are_unique():
    X = md.group_as_groupoid(gr.cyclic(2))
    R = po._free_rewriting(X, base="*")
    nf, ambiguous, long_irr = po._saturate(R, 4)
    assert not ambiguous and not long_irr
    for w, (n, s, t) in nf.items():
        assert not R.step(n)
        assert nf.get(n, (n,))[0] == n
