import pytest
from hypothesis import given, strategies as st

from gnmalpha.graph import InputError, make_graph, sample_gnm, sample_gnp
from gnmalpha.rng import SeedSpec
from gnmalpha.solver import BudgetExceeded, alpha_bruteforce, alpha_exact, greedy_independent_set
from oracles import alpha_by_cliques


def complete(n):
    return make_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


PETERSEN = make_graph(10, [(i, (i + 1) % 5) for i in range(5)]
                      + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
                      + [(i, i + 5) for i in range(5)])


@pytest.mark.parametrize("g, alpha", [
    (make_graph(5, []), 5),
    (complete(5), 1),
    (make_graph(5, [(i, (i + 1) % 5) for i in range(5)]), 2),
    (PETERSEN, 4),
    (make_graph(4, [(0, 1), (1, 2), (2, 3)]), 2),
    (make_graph(6, [(u, v) for u in range(3) for v in range(3, 6)]), 3),
    (make_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]), 2),
    (make_graph(0, []), 0),
    (make_graph(1, []), 1),
])
def test_known_values(g, alpha):
    for res in (alpha_exact(g), alpha_bruteforce(g)):
        assert res.alpha == alpha
        assert len(res.witness) == alpha and g.is_independent(res.witness)


@given(st.integers(1, 16), st.floats(0, 1), st.integers(0, 2**32))
def test_matches_bruteforce(n, p, seed):
    g = sample_gnp(n, p, SeedSpec(seed))
    a = alpha_exact(g)
    assert a.alpha == alpha_bruteforce(g).alpha
    assert len(a.witness) == a.alpha and g.is_independent(a.witness)


@given(st.integers(2, 12), st.integers(0, 2**32), st.data())
def test_adding_edge_never_increases_alpha(n, seed, data):
    g = sample_gnp(n, 0.3, SeedSpec(seed))
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
    if not missing:
        return
    e = data.draw(st.sampled_from(missing))
    h = make_graph(n, g.edges() + [e])
    assert alpha_exact(h).alpha <= alpha_exact(g).alpha


@given(st.integers(1, 10), st.integers(0, 2**32))
def test_complement_clique_duality(n, seed):
    g = sample_gnp(n, 0.5, SeedSpec(seed))
    assert alpha_exact(g).alpha == alpha_by_cliques(g)


def test_deterministic_node_count():
    g = sample_gnm(120, 500, SeedSpec(3))
    a, b = alpha_exact(g), alpha_exact(g)
    assert a == b


def test_budget_exceeded_carries_bound():
    g = sample_gnm(200, 981, SeedSpec(1))
    with pytest.raises(BudgetExceeded) as err:
        alpha_exact(g, budget=50)
    best = err.value.best
    assert err.value.lower_bound == len(best) and g.is_independent(best)
    assert err.value.lower_bound >= len(greedy_independent_set(g))


def test_bruteforce_size_limit():
    with pytest.raises(InputError):
        alpha_bruteforce(make_graph(27, []))
