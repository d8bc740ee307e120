import pytest
from hypothesis import given, strategies as st

from glob_coherator import theta0 as t0
from glob_coherator.globset import realize_table

from oracles import limit_hom_count

TABLES = t0.all_tables(3, 2)


@pytest.mark.parametrize("raw", [(0,), (1, 0, 1), (2, 1, 2, 0, 1), (3,)])
def test_valid_tables(raw):
    assert t0.validate_table(raw).entries == raw


def test_even_length():
    with pytest.raises(t0.EvenLength):
        t0.validate_table((1, 0))


@pytest.mark.parametrize("raw,index", [((1, 2, 1), 2), ((1, 1, 2), 2), ((2, 0, 1, 1, 3), 4)])
def test_zigzag_violation_index(raw, index):
    with pytest.raises(t0.ZigZagViolation) as e:
        t0.validate_table(raw)
    assert e.value.index == index


def test_parse_table():
    assert t0.parse_table("(1, 0, 1)").entries == (1, 0, 1)
    assert t0.parse_table("(2)").entries == (2,)
    with pytest.raises(t0.TableError):
        t0.parse_table("2")
    with pytest.raises(t0.TableError):
        t0.parse_table("(1,x)")


def test_all_tables_small():
    got = {t.entries for t in t0.all_tables(3, 1)}
    assert got == {(0,), (1,), (1, 0, 1)}


def test_hom_examples():
    assert len(t0.hom_set(t0.Table((1, 0, 1)), t0.Table((1,)))) == 2
    assert len(t0.hom_set(t0.Table((1,)), t0.Table((1, 0, 1)))) == 0
    assert len(t0.hom_set(t0.Table((0,)), t0.Table((1,)))) == 0
    assert len(t0.hom_set(t0.Table((1,)), t0.Table((0,)))) == 2


@pytest.mark.parametrize("p", TABLES, ids=str)
@pytest.mark.parametrize("q", TABLES, ids=str)
def test_hom_count_matches_limit_decomposition(p, q):
    assert len(t0.hom_set(p, q)) == limit_hom_count(realize_table(p.entries), q.entries)


@given(st.sampled_from(TABLES), st.sampled_from(TABLES), st.sampled_from(TABLES), st.data())
def test_composition_is_associative_and_unital(p, q, r, data):
    pq, qr = t0.hom_set(p, q), t0.hom_set(q, r)
    if not pq or not qr:
        return
    f = data.draw(st.sampled_from(pq))
    g = data.draw(st.sampled_from(qr))
    assert t0.compose(t0.identity(q), f) == f
    assert t0.compose(f, t0.identity(p)) == f
    rs = t0.hom_set(r, r)
    h = data.draw(st.sampled_from(rs))
    assert t0.compose(h, t0.compose(g, f)) == t0.compose(t0.compose(h, g), f)
    assert t0.compose(g, f) in t0.hom_set(p, r)


def test_compose_domain_mismatch():
    f = t0.identity(t0.Table((1,)))
    g = t0.identity(t0.Table((0,)))
    with pytest.raises(t0.DomainMismatch):
        t0.compose(g, f)


def test_cell_morphism():
    t = t0.Table((1, 0, 1))
    X = realize_table(t.entries)
    for c in X.cells():
        m = t0.cell_morphism(t, c)
        assert m.cod == t0.globe(c[0]) and m.cells == (c,)


@pytest.mark.parametrize("t,n,expect", [((2, 1, 2), 1, (1,)), ((2, 0, 2), 1, (1, 0, 1)),
                                         ((1, 0, 1), 0, (0,)), ((3, 1, 2), 5, (3, 1, 2))])
def test_truncate_table(t, n, expect):
    assert t0.truncate_table(t0.Table(t), n)[0].entries == expect


@given(st.sampled_from(t0.all_tables(5, 3)), st.integers(0, 3))
def test_truncation_is_idempotent_and_a_valid_table(t, n):
    u, where = t0.truncate_table(t, n)
    t0.validate_table(u.entries)
    assert u.height <= n
    assert t0.truncate_table(u, n)[0] == u
    assert len(where) == len(t.peaks)
    for c in realize_table(t.entries).cells():
        d = t0.truncate_cell(t, n, c)
        assert d[0] == min(c[0], n)
