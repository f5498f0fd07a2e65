import random
from fractions import Fraction

from graphring.exactlin import RatMatrix, vec
from graphring.homology import connectivity_matrix, h1_basis, kernel_surfaces
from graphring.plumbing import SeifertNode, CriticalFiber, graph_from, parse
from graphring.sampling import random_graph, random_orientable_tree
from oracles import h1_rank_by_relations


def test_two_node(two_node):
    conn = connectivity_matrix(two_node)
    assert conn.order == ("S", "P")
    assert conn.matrix == RatMatrix.from_rows([[2, 1], [1, "1/2"]])
    basis = h1_basis(two_node)
    assert basis.surviving == ("P",)
    (s,) = kernel_surfaces(two_node, basis)
    assert s.multiplicities == {"S": -1, "P": 2}
    assert s.scale == Fraction(1, 2) and not s.doubled


def test_chain(chain):
    conn = connectivity_matrix(chain)
    assert conn.matrix == RatMatrix.from_rows([["1/2", 1, 0], [1, 3, 1], [0, 1, 1]])
    basis = h1_basis(chain)
    assert basis.rank == 7 and basis.rank_parts == (0, 1, 6, 0)
    assert basis.fiber_expression == {"P": vec([2]), "Q": vec([-1]), "R": vec([1])}
    (s,) = kernel_surfaces(chain, basis)
    assert s.multiplicities == {"P": 2, "Q": -1, "R": 1}


def test_triangle_basis(triangle):
    basis = h1_basis(triangle)
    assert basis.names() == ["alpha1", "beta1", "alpha2", "beta2", "delta1", "delta2", "gamma", "t_R"]
    assert basis.rank_parts == (1, 1, 4, 2)
    assert basis.fiber_expression["Q"] == vec([-2])
    assert basis.fiber_expression["P"] == vec([0])
    (s,) = kernel_surfaces(triangle, basis)
    # R - 2Q leaves an odd boundary on the Klein-bottle side, so two copies are used
    assert s.doubled and s.multiplicities == {"Q": -4, "R": 2}
    assert s.klein_caps == {"P": 1}
    assert s.coefficients() == {"Q": -2, "R": 1}


def test_single_node_cases():
    bare = graph_from([SeifertNode("A", 1)], [])
    assert connectivity_matrix(bare).matrix == RatMatrix.from_rows([[0]])
    assert h1_basis(bare).rank_parts == (0, 1, 2, 0)
    fibered = graph_from([SeifertNode("A", 0, (CriticalFiber(3, 1),))], [])
    assert h1_basis(fibered).rank == 0
    assert kernel_surfaces(fibered) == []


def test_cancelling_edges():
    g = parse("node A\nnode B\nedge A B +\nedge A B -\n")
    assert connectivity_matrix(g).matrix.is_zero()
    assert h1_basis(g).rank_parts == (1, 2, 0, 0)


def test_nonorientable_only():
    g = parse("node K genus -2 fibers 1/3\n")
    basis = h1_basis(g)
    assert basis.names() == ["delta1"]
    assert connectivity_matrix(g).order == ()


def _check_invariants(g):
    basis = h1_basis(g)
    b, r, g2, gm = basis.rank_parts
    assert basis.rank == b + r + g2 + gm
    assert b == g.betti
    a = basis.connectivity.matrix
    order = basis.connectivity.order
    for f in range(r):
        column = [basis.fiber_expression[lab][f] for lab in order]
        assert not any(a @ column)
    for i, lab in enumerate(basis.surviving):
        assert basis.fiber_expression[lab] == tuple(Fraction(int(i == j)) for j in range(r))
    for n in g.nodes:
        if not n.orientable:
            assert not any(basis.fiber_expression[n.id])
    surfaces = kernel_surfaces(g, basis)
    assert len(surfaces) == r
    pairing = [[s.coefficients().get(lab, 0) for lab in basis.surviving] for s in surfaces]
    assert pairing == [[int(i == j) for j in range(r)] for i in range(r)]
    for s in surfaces:
        x = [s.multiplicities.get(lab, 0) for lab in order]
        assert all(isinstance(v, int) for v in x)
        assert not any(a @ x)
        assert all(c >= 0 for c in s.klein_caps.values())
    return basis


def test_invariants_random_graphs():
    rng = random.Random(21)
    for _ in range(100):
        _check_invariants(random_graph(rng))


def test_invariants_random_trees():
    rng = random.Random(22)
    seen_r = set()
    for _ in range(100):
        seen_r.add(_check_invariants(random_orientable_tree(rng)).rank_parts[1])
    assert {0, 1} <= seen_r


def test_rank_matches_relation_oracle():
    rng = random.Random(8)
    for _ in range(100):
        g = random_graph(rng, max_nodes=5, max_entry=3)
        assert h1_basis(g).rank == h1_rank_by_relations(g)
