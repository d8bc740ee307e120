import pytest
from hypothesis import given, strategies as st

from glob_coherator import groups as gr
from glob_coherator import models as md
from glob_coherator.globset import disk, make_globular_set, sphere

from oracles import groupoid_axioms, reduce_by_stack, reduced_words

SMALL_GROUPOIDS = md.enumerate_groupoids(3, 12)


def _count_groupoids(max_objects, max_morphisms):
    """Multisets of connected pieces (m objects, a group of order n), from the known group counts."""
    kinds = [(m, m * m * n) for m in range(1, max_objects + 1) for n, c in gr.KNOWN_COUNTS.items()
             for _ in range(c) if m * m * n <= max_morphisms]

    def go(i, objs, mors):
        total = 1
        for j in range(i, len(kinds)):
            m, w = kinds[j]
            if m <= objs and w <= mors:
                total += go(j, objs - m, mors - w)
        return total

    return go(0, max_objects, max_morphisms)


def test_enumeration_count_matches_group_census():
    assert _count_groupoids(4, 20) == 3035
    assert len(md.enumerate_groupoids(3, 12)) == _count_groupoids(3, 12)
    # one object: the empty groupoid plus one per group of order <= 8
    assert len(md.enumerate_groupoids(1, 8)) == 1 + sum(gr.KNOWN_COUNTS[n] for n in range(1, 9))


def test_enumerated_groupoids_satisfy_the_axioms():
    for G in SMALL_GROUPOIDS:
        assert groupoid_axioms(G.objects, G.morphisms, G.comp, G.ident, G.inv), G.name
        md.validate_groupoid(G)


@given(st.sampled_from(SMALL_GROUPOIDS))
def test_groupoid_model_round_trip(G):
    M = md.validate_model(md.groupoid_to_model(G))
    assert md.model_to_groupoid(M, G.name).same_as(G)
    again = md.validate_model(md.parse_model(md.write_model(M)))
    assert again.same_tables(M)


@given(st.sampled_from(SMALL_GROUPOIDS))
def test_truncation_after_d_embed_is_identity(G):
    M = md.groupoid_to_model(G)
    D = md.validate_model(md.d_embed(M))
    assert D.level == 2 and len(D.cells(2)) == len(M.cells(1))
    assert md.truncate_model(D).same_tables(M)


def test_d_embed_of_a_set_is_discrete():
    S = md.set_model(["p", "q"])
    D = md.d_embed(S)
    assert D.X.counts == (2, 2)
    assert D.label(D.cells(1)[0]) == "id[p]"
    assert md.truncate_model(D).same_tables(S)


def test_model_file_format():
    text = md.write_model(md.groupoid_to_model(md.walking_iso()))
    assert text.splitlines()[:3] == ["level 1", "dim 0: x, y", "dim 1: 1x, a, a', 1y"]
    raw = md.parse_model(text)
    assert raw["level"] == 1 and raw["src"]["a"] == "x"


def _raw_iso():
    return md.groupoid_to_model(md.walking_iso()).to_raw()


def test_validation_missing_operation():
    raw = _raw_iso()
    del raw["ops"]["i1"]
    with pytest.raises(md.ModelError, match="missing designated operation i1"):
        md.validate_model(raw)


def test_validation_not_total():
    raw = _raw_iso()
    raw["ops"]["i1"]["table"] = raw["ops"]["i1"]["table"][1:]
    with pytest.raises(md.ModelError, match="not total"):
        md.validate_model(raw)


def test_validation_wrong_faces():
    raw = _raw_iso()
    raw["ops"]["i1"]["table"] = [[k, "a" if v == "a'" else v] for k, v in raw["ops"]["i1"]["table"]]
    with pytest.raises(md.RelationViolation) as e:
        md.validate_model(raw)
    assert e.value.relation == "i1:faces"


def test_validation_strict_top_relation():
    # Z3 with a broken multiplication that still has the right faces
    G = md.group_as_groupoid(gr.cyclic(3))
    raw = md.groupoid_to_model(G).to_raw()
    tab = raw["ops"]["c1_0"]["table"]
    raw["ops"]["c1_0"]["table"] = [[k, k[0] if k[1] == G.ident["*"] or k[0] == G.ident["*"] else k[1] if k[0] == k[1]
                                    else v] for k, v in tab]
    with pytest.raises(md.NotParallelRespecting):
        md.validate_model(raw)


def test_parse_model_errors():
    with pytest.raises(md.ModelError, match="level"):
        md.parse_model("dim 0: x\n")
    with pytest.raises(md.ModelError) as e:
        md.parse_model("level 1\nbanana\n")
    with pytest.raises(md.ModelError) as e:
        md.parse_model("level x\n")
    assert e.value.line == 1


def test_wrong_level():
    M = md.two_model(md.walking_iso())
    with pytest.raises(md.WrongLevel):
        md.model_to_groupoid(M)
    with pytest.raises(md.WrongLevel):
        md.truncate_model(md.set_model(["x"]))


def test_two_model_examples():
    assert md.two_model(md.walking_iso()).X.counts == (2, 4, 4)
    Z2 = md.group_as_groupoid(gr.cyclic(2))
    M = md.two_model(Z2, A=gr.cyclic(2))
    assert M.X.counts == (1, 2, 4)
    assert md.truncate_model(M).X.counts == (1, 2)
    with pytest.raises(md.NotParallelRespecting):
        md.two_model(Z2, A=_s3())
    with pytest.raises(md.ModelError):
        md.two_model(Z2, classes=[["e"]])


def _s3():
    return [G for G in gr.catalogue(6)[6] if not G.is_abelian()][0]


@pytest.mark.parametrize("G,H,n", [("Z2", "Z2", 2), ("Z3", "Z3", 3), ("iso", "pt", 1), ("pt", "iso", 2),
                                   ("Z2", "Z3", 1), ("iso", "Z2", 2)])
def test_functor_counts(G, H, n):
    named = {"Z2": md.group_as_groupoid(gr.cyclic(2)), "Z3": md.group_as_groupoid(gr.cyclic(3)),
             "iso": md.walking_iso(), "pt": md.point()}
    Fs = md.groupoid_functors(named[G], named[H])
    assert len(Fs) == n
    for F in Fs:
        md.functor_to_model_map(F).check()


def test_model_map_check_rejects_non_maps():
    F = md.identity_functor(md.walking_iso())
    f = md.functor_to_model_map(F)
    bad = dict(f.cells)
    a = f.dom.find("a")
    bad[a] = f.cod.find("a'")
    with pytest.raises(md.NotAModelMap):
        md.ModelMap(f.dom, f.cod, bad).check()
    with pytest.raises(md.LevelMismatch):
        md.ModelMap(f.dom, md.d_embed(f.cod), f.cells).check()


def test_free_groupoid_on_spheres_and_disks():
    P = md.free_groupoid(sphere(1))
    assert P.pi1_rank("s0") == 1 and not P.is_finite()
    assert md.realize_at_level(disk(2), 1).pi1_rank("s0") == 0
    assert len(md.realize_at_level(sphere(0), 0)) == 2
    assert len(md.realize_at_level(disk(1), 0)) == 1
    W = md.realize_at_level(disk(1), 1).to_fingroupoid()
    assert len(W.morphisms) == 4
    with pytest.raises(md.ModelError):
        md.realize_at_level(disk(1), 2)


GRAPH = make_globular_set([("x", "y"), ("a", "b", "l")], [(0, 0, 1)], [(1, 1, 1)])


@pytest.mark.parametrize("a,b", [("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")])
def test_hom_words_against_oracle(a, b):
    P = md.free_groupoid(GRAPH)
    got = sorted(w.letters for w in P.hom(a, b, 4))
    assert got == sorted(reduced_words(P.edges, a, b, 4))


@given(st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from([1, -1])), max_size=14))
def test_reduce_word_matches_stack_reduction(w):
    r = md.reduce_word(w)
    assert r == reduce_by_stack(w)
    assert md.reduce_word(r) == r


@given(st.lists(st.sampled_from([("a", 1), ("a", -1), ("b", 1), ("b", -1), ("l", 1), ("l", -1)]), max_size=8))
def test_free_groupoid_inverse_law(letters):
    P = md.free_groupoid(GRAPH)
    try:
        w = P.word("x", letters)
    except md.ModelError:
        return
    assert P.compose(w, P.inverse(w)) == P.identity("x")
    assert P.compose(P.inverse(w), w) == P.identity(w.tgt)


def test_induced_map_on_free_groupoids():
    from glob_coherator.globset import boundary_inclusion
    f = md.induced_map(boundary_inclusion(2), 1)
    assert f.cod.pi1_rank("s0") == 0
    w = f.word(f.dom.free_basis("s0")[0][1])
    assert w.letters == ()


def test_model_file_quotes_awkward_names():
    M = md.groupoid_to_model(md.discrete_groupoid(["a #b", 'q"x', "p,(1)"]))
    text = md.write_model(M) + "# a trailing comment\n"
    assert md.validate_model(md.parse_model(text)).same_tables(M)
