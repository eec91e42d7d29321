import random
from itertools import islice
from math import comb, factorial

import pytest

from permatch import (
    IsDirectedCycleError,
    NotHamiltonError,
    NotInImageError,
    TooLargeError,
    UniquenessViolationError,
    apply_injection,
    choose_special_vertex,
    complete_graph,
    cycle_decomposition,
    directed_cycle,
    enumerate_permutations,
    first_minimal_forward_chord,
    forward_chords,
    hamilton_census,
    hamilton_cycles,
    invert_injection,
    new_digraph,
)
from permatch.counting import fixed_points
from permatch.errors import BadParamsError, NotDerangementError


def worked_example():
    # 8-cycle plus three chords; the walk-order chord analysis below is pinned
    # against hand computation
    arcs = [(i, (i + 1) % 8) for i in range(8)] + [(1, 4), (1, 5), (3, 6)]
    return new_digraph(8, arcs)


def test_cycle_decomposition():
    g = new_digraph(5, [(0, 1), (1, 0), (2, 3), (3, 4), (4, 2)])
    dec = cycle_decomposition(g, (1, 0, 3, 4, 2))
    assert dec.cycles == ((0, 1), (2, 3, 4))
    assert dec.fixed == ()
    dec2 = cycle_decomposition(g, (0, 1, 3, 4, 2))
    assert dec2.cycles == ((2, 3, 4),)
    assert dec2.fixed == (0, 1)


def test_forward_chords_on_worked_example():
    g = worked_example()
    cycle = tuple(range(8))
    recs = forward_chords(g, cycle)
    assert [(r.chord, r.skipped) for r in recs] == [
        ((1, 4), (2, 3)),
        ((1, 5), (2, 3, 4)),
        ((3, 6), (4, 5)),
    ]
    best = first_minimal_forward_chord(g, cycle)
    assert best.chord == (1, 4)
    # deleting the winning chord promotes the earliest remaining minimal one:
    # the two survivors have incomparable skipped sets
    best2 = first_minimal_forward_chord(g.without_arc(1, 4), cycle)
    assert best2.chord == (1, 5)


def test_forward_chords_respect_rooting():
    g = worked_example()
    # rooted at 4, the chord (1, 5) now walks past the root and stops counting
    recs = forward_chords(g, (4, 5, 6, 7, 0, 1, 2, 3))
    assert [r.chord for r in recs] == [(1, 4)]
    assert recs[0].skipped == (2, 3)
    assert recs[0].end == 0  # chord into the root closes the walk


def test_backward_chord_is_not_forward():
    # one chord pointing backwards over the root: no forward chord at all
    g = new_digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 1)])
    assert forward_chords(g, (0, 1, 2, 3)) == []
    # but rooting right after the chord target makes it forward
    recs = forward_chords(g, (2, 3, 0, 1))
    assert [r.chord for r in recs] == [(2, 1)]


def test_hamilton_validation():
    g = directed_cycle(4)
    with pytest.raises(NotHamiltonError):
        forward_chords(g, (0, 1, 2))
    with pytest.raises(NotHamiltonError):
        forward_chords(g, (0, 2, 1, 3))
    with pytest.raises(NotHamiltonError):
        forward_chords(g, (0, 1, 2, 2))


def test_apply_on_bare_cycle_dissolves():
    g = directed_cycle(5)
    d = (1, 2, 3, 4, 0)
    for v in range(5):
        assert apply_injection(g, d, v) == (0, 1, 2, 3, 4)
    assert invert_injection(g, (0, 1, 2, 3, 4), 2) == d


def test_apply_validates_input():
    g = directed_cycle(4)
    with pytest.raises(NotDerangementError):
        apply_injection(g, (0, 2, 3, 1), 0)
    with pytest.raises(BadParamsError):
        apply_injection(g, (1, 2, 3), 0)
    from permatch.errors import OutOfRangeError

    with pytest.raises(OutOfRangeError):
        apply_injection(g, (1, 2, 3, 0), 9)


def test_apply_worked_example():
    g = worked_example()
    d = tuple((i + 1) % 8 for i in range(8))
    img = apply_injection(g, d, 0)
    # chord (1, 4) shortcuts the tour, so 2 and 3 go fixed
    assert img == (1, 4, 2, 3, 5, 6, 7, 0)
    assert invert_injection(g, img, 0) == d
    # rooted at 2 the same derangement breaks at chord (3, 6)
    img2 = apply_injection(g, d, 2)
    assert fixed_points(img2) == (4, 5)
    assert invert_injection(g, img2, 2) == d


def test_invert_rejects_outside_image():
    g = directed_cycle(4)
    # identity on a directed cycle is the image of the full tour
    assert invert_injection(g, (0, 1, 2, 3), 1) == (1, 2, 3, 0)
    # a graph with several Hamilton tours: identity cannot be inverted
    two = complete_graph(4).to_digraph()
    assert len(hamilton_cycles(two)) > 1
    with pytest.raises(NotInImageError):
        invert_injection(two, (0, 1, 2, 3), 0)
    # permutations without fixed points are never images
    with pytest.raises(NotInImageError):
        invert_injection(g, (1, 2, 3, 0), 0)


def test_roundtrip_exhaustive_small():
    rng = random.Random(21)
    for trial in range(40):
        n = rng.randint(2, 5)
        g = new_digraph(
            n, [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.55]
        )
        derangements = list(enumerate_permutations(g, derangements_only=True))
        for v in range(n):
            images = {}
            for d in derangements:
                p = apply_injection(g, d, v)
                assert fixed_points(p), "image must keep a fixed point"
                assert p not in images, "two derangements collided"
                images[p] = d
                assert invert_injection(g, p, v) == d
            # everything outside the image is refused
            for p in enumerate_permutations(g):
                if p in images:
                    continue
                with pytest.raises(NotInImageError):
                    invert_injection(g, p, v)


def test_roundtrip_samples_midsize():
    rng = random.Random(22)
    for trial in range(10):
        n = rng.randint(6, 8)
        g = new_digraph(
            n, [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.5]
        )
        v = rng.randrange(n)
        for d in islice(enumerate_permutations(g, derangements_only=True), 30):
            p = apply_injection(g, d, v)
            assert invert_injection(g, p, v) == d


def test_hamilton_cycles_counts():
    k4 = complete_graph(4)
    cycles = hamilton_cycles(k4.to_digraph())
    assert len(cycles) == 6  # (n-1)! rooted tours
    assert all(c[0] == 0 for c in cycles)
    assert hamilton_cycles(directed_cycle(6)) == [tuple(range(6))]
    assert hamilton_cycles(new_digraph(3, [(0, 1), (1, 2)])) == []
    assert len(hamilton_cycles(k4.to_digraph(), limit=2)) == 2
    with pytest.raises(TooLargeError):
        hamilton_cycles(new_digraph(17, []))


def test_choose_special_vertex():
    with pytest.raises(IsDirectedCycleError):
        choose_special_vertex(directed_cycle(5))
    # unique tour with one chord (1, 3): the chord tail is the root
    g = new_digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)])
    assert len(hamilton_cycles(g)) == 1
    assert choose_special_vertex(g) == 1
    # several tours: default root
    assert choose_special_vertex(complete_graph(4)) == 0


def test_census_on_complete_digraph():
    g = complete_graph(4).to_digraph()
    census = hamilton_census(g)
    assert census.ham_count == 6
    # cycles through a fixed vertex, by length: 3 + 6 + 6
    assert census.through == (15, 15, 15, 15)
    total_cycles = sum(comb(4, k) * factorial(k - 1) for k in range(2, 5))
    # each cycle of length k contributes k vertex visits
    assert sum(census.through) == sum(
        comb(4, k) * factorial(k - 1) * k for k in range(2, 5)
    )
    assert total_cycles == 20


def test_census_matches_direct_enumeration_on_cycle():
    census = hamilton_census(directed_cycle(7))
    assert census.ham_count == 1
    assert census.through == (1,) * 7
