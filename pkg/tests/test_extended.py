import pytest
from hypothesis import given, strategies as st

from gnmalpha.extended import (
    CandidatePair, NotMaximumError, augmented_order, classify_pair, count_variables, count_x,
    extend_from_mis, is_augmented_ind_set, is_extended_ind_set, max_extended_order,
)
from gnmalpha.graph import InputError, make_graph, sample_gnp
from gnmalpha.rng import SeedSpec
from gnmalpha.solver import alpha_bruteforce, alpha_exact

a, b, c, d = range(4)
P3 = make_graph(3, [(a, b), (b, c)])
P4 = make_graph(4, [(a, b), (b, c), (c, d)])
EDGE = make_graph(2, [(0, 1)])
K3 = make_graph(3, [(0, 1), (1, 2), (0, 2)])
K4 = make_graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


def pair(K, M=()):
    return CandidatePair.of(K, M)


def test_candidate_pair_invariants():
    with pytest.raises(InputError):
        pair([0, 1], [(0, 2)])
    with pytest.raises(InputError):
        pair([0, 1, 2], [(0, 1), (1, 2)])
    cp = pair([0, 1, 2], [(1, 0)])
    assert (cp.k, cp.r) == (2, 1)


def test_extended_examples():
    assert is_extended_ind_set(P3, pair([a, c]))
    assert is_extended_ind_set(EDGE, pair([0, 1], [(0, 1)]))
    assert not is_extended_ind_set(P3, pair([a, b], [(a, b)]))
    # M must consist of edges
    assert not is_extended_ind_set(P3, pair([a, c], [(a, c)]))


def test_max_extended_examples():
    assert max_extended_order(P3)[0] == 2
    assert max_extended_order(K4)[0] == 1
    assert max_extended_order(make_graph(3, []))[0] == 3
    with pytest.raises(InputError):
        max_extended_order(make_graph(13, []))


def test_extend_from_mis_examples():
    assert extend_from_mis(P3, [a, c]) == pair([a, c])
    assert extend_from_mis(P4, [a, c]) == pair([a, b, c, d], [(a, b), (c, d)])
    got = extend_from_mis(K3, [0])
    assert got in (pair([0, 1], [(0, 1)]), pair([0, 2], [(0, 2)]))
    assert is_extended_ind_set(K3, got) and got.k == 1


def test_extend_from_non_maximum_raises_larger_set():
    # P5 with S = {1, 3}: vertex 0 sees only one isolated vertex and {0, 2, 4} is larger
    with pytest.raises(NotMaximumError) as err:
        extend_from_mis(make_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)]), [1, 3])
    big = err.value.larger
    assert len(big) == 3
    assert make_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).is_independent(big)


def test_augmented_examples():
    star = make_graph(4, [(0, 1), (0, 2), (0, 3)])
    assert is_augmented_ind_set(star, [1, 2, 3]) and augmented_order(star, [1, 2, 3]) == 3
    assert is_augmented_ind_set(P4, [a, b, d]) and augmented_order(P4, [a, b, d]) == 2
    assert not is_augmented_ind_set(P4, [a, d])


def test_classify_examples():
    f = classify_pair(P3, pair([a, c]))
    assert (f.U, f.W, f.X, f.Y, f.Z) == (True,) * 5
    f = classify_pair(P3, pair([a, b], [(a, b)]))
    assert (f.U, f.W, f.X, f.Y, f.Z) == (True, False, False, False, False)
    f = classify_pair(EDGE, pair([0, 1], [(0, 1)]))
    assert (f.U, f.W, f.X, f.Y, f.Z) == (True,) * 5


def test_count_examples():
    assert count_variables(P3, 2, 0) == dict(U=1, W=1, X=1, Y=1, Z=1)
    assert count_variables(P3, 1, 1) == dict(U=2, W=0, X=0, Y=0, Z=0)
    assert count_variables(EDGE, 1, 1) == dict(U=1, W=1, X=1, Y=1, Z=1)
    with pytest.raises(InputError):
        count_variables(P3, 0, 1)


graphs = st.builds(lambda n, p, s: sample_gnp(n, p, SeedSpec(s)),
                   st.integers(1, 9), st.floats(0, 1), st.integers(0, 2**32))


@given(graphs)
def test_extended_order_equals_alpha_random(g):
    assert max_extended_order(g)[0] == alpha_bruteforce(g).alpha


@given(graphs)
def test_construction_soundness(g):
    S = alpha_exact(g).witness
    cp = extend_from_mis(g, S)
    assert is_extended_ind_set(g, cp) and cp.k == len(S) and set(S) <= cp.K
    assert max_extended_order(g, mode="construct")[0] == len(S)


@given(graphs, st.data())
def test_flag_implications(g, data):
    size = data.draw(st.integers(0, g.n))
    K = data.draw(st.lists(st.integers(0, g.n - 1), min_size=size, max_size=size, unique=True))
    edges = [(u, v) for u, v in g.edges() if u in K and v in K]
    M, used = [], set()
    for u, v in data.draw(st.permutations(edges)):
        if u not in used and v not in used and data.draw(st.booleans()):
            M.append((u, v))
            used |= {u, v}
    assert classify_pair(g, pair(K, M)).consistent()


@given(st.integers(2, 8), st.floats(0, 1), st.integers(0, 2**32), st.data())
def test_counting_order(n, p, seed, data):
    g = sample_gnp(n, p, SeedSpec(seed))
    r = data.draw(st.integers(0, n // 2))
    k = data.draw(st.integers(r, n - r))
    cnt = count_variables(g, k, r)
    assert cnt["W"] <= cnt["X"] <= cnt["Z"] <= cnt["U"]
    assert cnt["W"] <= cnt["Y"] <= cnt["Z"]
    assert count_x(g, k, r) == cnt["X"]
