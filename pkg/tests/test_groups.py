import pytest
from hypothesis import given, strategies as st

from glob_coherator import groups as gr

from oracles import is_group_table

BY_ORDER = gr.catalogue(20)
CAT = [G for n in sorted(BY_ORDER) for G in BY_ORDER[n]]


def test_catalogue_counts_match_known_table():
    for n, k in gr.KNOWN_COUNTS.items():
        assert len(BY_ORDER[n]) == k, n


def test_catalogue_entries_are_groups_and_pairwise_distinct():
    for G in CAT:
        assert is_group_table(G.mul)
        gr.validate_group(G)
    for n, gs in BY_ORDER.items():
        if n > 12:
            continue
        for i in range(len(gs)):
            for j in range(i + 1, len(gs)):
                assert not gr.is_isomorphic(gs[i], gs[j])


def test_small_examples():
    assert gr.cyclic(6).is_abelian()
    D = gr.dicyclic(2)
    assert D.order == 8 and not D.is_abelian()
    assert gr.is_isomorphic(gr.direct_product(gr.cyclic(2), gr.cyclic(3)), gr.cyclic(6))
    assert not gr.is_isomorphic(gr.direct_product(gr.cyclic(2), gr.cyclic(2)), gr.cyclic(4))


def test_homomorphism_counts():
    # |Hom(Z_m, Z_n)| = gcd(m, n)
    assert len(gr.homomorphisms(gr.cyclic(4), gr.cyclic(6))) == 2
    assert len(gr.homomorphisms(gr.cyclic(3), gr.cyclic(6))) == 3


@given(st.sampled_from([G for G in CAT if G.order <= 12]), st.randoms())
def test_isomorphism_found_after_relabelling(G, rnd):
    perm = list(range(G.order))
    rnd.shuffle(perm)
    inv = [0] * G.order
    for i, p in enumerate(perm):
        inv[p] = i
    mul = [[perm[G.mul[inv[a]][inv[b]]] for b in range(G.order)] for a in range(G.order)]
    H = gr.from_table([f"h{i}" for i in range(G.order)], mul)
    iso = gr.group_iso(G, H)
    assert iso is not None and len(set(iso.values())) == G.order
