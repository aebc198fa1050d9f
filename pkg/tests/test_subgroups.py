import random
from itertools import product

import pytest

from locisog.gl2 import GL2Element
from locisog.subgroups import (Subgroup, are_conjugate, closure, conjugacy_key,
                               conjugating_element, enumerate_subgroups, from_elements,
                               normalizer)


def _all_elements(ell):
    out = []
    for a, b, c, d in product(range(ell), repeat=4):
        if (a * d - b * c) % ell:
            out.append(GL2Element(a, b, c, d, ell))
    return out


def _brute_classes(ell):
    """Subgroup conjugacy classes of GL_2(F_ell) by plain table-driven BFS:
    extend every known subgroup by every element, close, dedupe, then fold
    the collection by conjugation.  No shortcuts shared with the library."""
    els = _all_elements(ell)
    index = {g: i for i, g in enumerate(els)}
    mul = [[index[g * h] for h in els] for g in els]
    conj = [[index[g * h * g.inverse()] for h in els] for g in els]
    ident = index[GL2Element.identity(ell)]

    def close(seed):
        group = set(seed)
        frontier = list(group)
        while frontier:
            nxt = []
            for x in frontier:
                for y in group.copy():
                    for z in (mul[x][y], mul[y][x]):
                        if z not in group:
                            group.add(z)
                            nxt.append(z)
            frontier = nxt
        return frozenset(group)

    subgroups = {frozenset({ident})}
    queue = [frozenset({ident})]
    while queue:
        S = queue.pop()
        for x in range(len(els)):
            if x in S:
                continue
            T = close(S | {x})
            if T not in subgroups:
                subgroups.add(T)
                queue.append(T)
    classes = []
    unseen = set(subgroups)
    while unseen:
        S = unseen.pop()
        orbit = {frozenset(conj[g][x] for x in S) for g in range(len(els))}
        unseen -= orbit
        classes.append(len(S))
    return sorted(classes)


def test_enumeration_matches_brute_force_ell2():
    reps = enumerate_subgroups(2)
    assert sorted(G.order for G in reps) == _brute_classes(2)


def test_enumeration_matches_brute_force_ell3():
    reps = enumerate_subgroups(3)
    assert sorted(G.order for G in reps) == _brute_classes(3)


def test_enumeration_class_counts():
    # regression pins from the first verified runs
    assert len(enumerate_subgroups(2)) == 4
    assert len(enumerate_subgroups(3)) == 16
    assert len(enumerate_subgroups(5)) == 48


def test_enumeration_rejects_out_of_range():
    with pytest.raises(ValueError):
        enumerate_subgroups(13)
    with pytest.raises(ValueError):
        enumerate_subgroups(11)  # expensive=True required
    with pytest.raises(ValueError):
        enumerate_subgroups(4)


def test_representatives_are_valid_and_distinct():
    for ell in (2, 3, 5):
        size = (ell * ell - 1) * (ell * ell - ell)
        reps = enumerate_subgroups(ell)
        for G in reps:
            assert size % G.order == 0
            assert len(G.generators) <= 3
            assert closure(G.generators, ell=ell).order == G.order
        keys = {conjugacy_key(G) for G in reps}
        assert len(keys) == len(reps)


def test_closure_anchors():
    # diag(3,3), diag(1,3^2), antidiag(1,1) generate the order-36 group mod 7
    gens3 = (GL2Element(3, 0, 0, 3, 7), GL2Element(1, 0, 0, 2, 7),
             GL2Element(0, 1, 1, 0, 7))
    assert closure(gens3).order == 36
    # dropping the scalar generator leaves entries in the squares {1, 2, 4}
    gens2 = (GL2Element(1, 0, 0, 2, 7), GL2Element(0, 1, 1, 0, 7))
    assert closure(gens2).order == 18
    # a primitive diagonal plus a transvection and the antidiagonal generate everything
    full = closure((GL2Element(3, 0, 0, 1, 7), GL2Element(1, 1, 0, 1, 7),
                    GL2Element(0, 1, 1, 0, 7)))
    assert full.order == 2016


def test_closure_edge_cases():
    assert closure((), ell=5).order == 1
    with pytest.raises(ValueError):
        closure(())
    with pytest.raises(ValueError):
        closure((GL2Element.identity(3), GL2Element.identity(5)))


def test_subgroup_queries():
    rng = random.Random(21)
    G = closure((GL2Element(3, 0, 0, 3, 7), GL2Element(1, 0, 0, 2, 7),
                 GL2Element(0, 1, 1, 0, 7)))
    for g in G.elements:
        assert G.contains(g)
        assert G.contains(g.inverse())
    assert not G.contains(GL2Element(1, 1, 0, 1, 7))
    assert not G.is_abelian()
    assert G.det_image_size() == 6
    orders = G.element_order_multiset()
    assert len(orders) == 36
    assert orders.count(1) == 1
    # element orders divide the group order
    assert all(36 % k == 0 for k in set(orders))


def test_from_elements_validation():
    C = closure((GL2Element(1, 0, 0, 2, 7),))
    G = from_elements(C.elements)
    assert G.order == C.order and G.ell == 7
    with pytest.raises(ValueError):
        from_elements([GL2Element(1, 0, 0, 2, 7)])  # not closed, no identity
    with pytest.raises(ValueError):
        from_elements(C.elements, generators=(GL2Element.identity(7),))


def test_conjugacy_detection():
    rng = random.Random(23)
    els5 = _all_elements(5)
    for _ in range(40):
        g = rng.choice(els5)
        h = rng.choice(els5)
        G = closure((g,))
        H = from_elements(tuple(x.conjugate_by(h) for x in G.elements))
        assert are_conjugate(G, H)
        w = conjugating_element(G, H)
        assert {x.conjugate_by(w) for x in G.elements} == set(H.elements)
    A = closure((GL2Element(1, 0, 0, 2, 7),))   # split torus piece, order 3
    B = closure((GL2Element(2, 0, 0, 4, 7),))
    if are_conjugate(A, B):
        assert A.element_order_multiset() == B.element_order_multiset()


def test_conjugacy_key_is_class_invariant():
    rng = random.Random(25)
    els = _all_elements(3)
    for _ in range(30):
        g, h = rng.choice(els), rng.choice(els)
        G = closure((g,))
        H = from_elements(tuple(x.conjugate_by(h) for x in G.elements))
        assert conjugacy_key(G) == conjugacy_key(H)


def test_normalizer_contains_and_normalizes():
    G = closure((GL2Element(1, 0, 0, 2, 7), GL2Element(0, 1, 1, 0, 7)))
    N = normalizer(G)
    assert N.order % G.order == 0
    gset = set(G.elements)
    for n in N.elements:
        assert all(g.conjugate_by(n) in gset for g in G.generators)
