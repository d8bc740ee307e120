import pytest
from hypothesis import given, strategies as st

from glob_coherator.globset import (DanglingCell, GlobularSetError, RelationViolation, boundary_inclusion, disk,
                                    enumerate_maps, is_glob_map, make_globular_set, realize_table,
                                    source_inclusion, sphere, validate_globular_set)
from glob_coherator.theta0 import all_tables

from oracles import glued_cell_counts, globe_hom, naive_maps


def test_point_is_valid():
    X = validate_globular_set({"dims": [["x"]]})
    assert X.counts == (1,)


def test_two_globular_example():
    raw = {"dims": [["x", "y"], ["a", "b"], ["alpha"]],
           "src": [{"a": "x", "b": "x"}, {"alpha": "a"}],
           "tgt": [{"a": "y", "b": "y"}, {"alpha": "b"}]}
    X = validate_globular_set(raw)
    assert X.counts == (2, 2, 1)


def test_relation_violation_reports_dimension():
    raw = {"dims": [["x", "y"], ["a", "b"], ["alpha"]],
           "src": [{"a": "x", "b": "x"}, {"alpha": "a"}],
           "tgt": [{"a": "y", "b": "x"}, {"alpha": "b"}]}
    with pytest.raises(RelationViolation) as e:
        validate_globular_set(raw)
    assert e.value.dim == 1


def test_dangling_cell():
    with pytest.raises(DanglingCell):
        validate_globular_set({"dims": [["x"], ["a"]], "src": [{"a": "z"}], "tgt": [{"a": "x"}]})


def test_missing_face_is_an_error():
    with pytest.raises(GlobularSetError):
        validate_globular_set({"dims": [["x"], ["a"]], "src": [{"a": "x"}], "tgt": [{}]})


@pytest.mark.parametrize("k", range(7))
def test_disk_counts_match_globe_homs(k):
    assert disk(k).counts == tuple(globe_hom(i, k) for i in range(k + 1))


@pytest.mark.parametrize("m", range(-1, 7))
def test_sphere_counts(m):
    # S^m is D^{m+1} without its top cell
    expect = tuple(globe_hom(i, m + 1) for i in range(m + 1))
    assert sphere(m).counts == expect


def test_sphere_faces():
    S = sphere(2)
    assert S.label(S.source((2, 1))) == "s1" and S.label(S.target((2, 1))) == "t1"


@pytest.mark.parametrize("X,Y,n", [(disk(0), disk(1), 2), (disk(1), disk(1), 1), (disk(1), disk(0), 0)])
def test_enumerate_maps_examples(X, Y, n):
    assert len(enumerate_maps(X, Y)) == n


SMALL = [disk(0), disk(1), disk(2), sphere(0), sphere(1), realize_table((1, 0, 1)), realize_table((2, 1, 2)),
         make_globular_set([("x",), ("l",)], [(0,)], [(0,)])]


@pytest.mark.parametrize("i", range(len(SMALL)))
@pytest.mark.parametrize("j", range(len(SMALL)))
def test_enumerate_maps_against_naive(i, j):
    X, Y = SMALL[i], SMALL[j]
    if sum(X.counts) > 6 and sum(Y.counts) > 6:
        pytest.skip("oracle too slow")
    got = [m.maps for m in enumerate_maps(X, Y)]
    assert got == naive_maps(X, Y)
    assert len(set(got)) == len(got)


def test_boundary_and_source_inclusions():
    j0 = boundary_inclusion(0)
    assert j0.dom.counts == () and j0.cod.counts == (1,)
    j1 = boundary_inclusion(1)
    assert sorted(j1.maps[0]) == [0, 1]
    s0 = source_inclusion(0)
    assert s0.cod.label(s0((0, 0))) == "s0"
    for k in range(5):
        assert boundary_inclusion(k).is_injective()
        assert source_inclusion(k).is_injective()
        for f in (boundary_inclusion(k), source_inclusion(k)):
            assert is_glob_map(f.dom, f.cod, f.maps)


@pytest.mark.parametrize("t,counts", [((0,), (1,)), ((1, 0, 1), (3, 2)), ((2, 1, 2), (2, 3, 2))])
def test_realize_table_examples(t, counts):
    assert realize_table(t).counts == counts


@given(st.sampled_from(all_tables(5, 3)))
def test_realizations_are_valid_and_match_gluing(t):
    X = realize_table(t)
    validate_globular_set(X.to_raw())
    assert X.counts == glued_cell_counts(t.entries)
    assert X.dim == t.height
