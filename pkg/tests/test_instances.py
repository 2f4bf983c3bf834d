import math

import numpy as np
import pytest

from probound import instances as inst
from probound.instances import (
    BinaryMatrix,
    CnfFormula,
    GenerationError,
    Graph,
    Hypergraph,
    IntMatrix,
    ParseError,
    SetFamily,
    UnitVectors,
)


def test_graph_invariants():
    g = Graph(3, ((1, 0), (1, 2)))
    assert g.edges == ((0, 1), (1, 2))  # normalized
    with pytest.raises(ValueError):
        Graph(3, ((0, 0),))
    with pytest.raises(ValueError):
        Graph(3, ((0, 3),))
    with pytest.raises(ValueError):
        Graph(3, ((0, 1), (1, 0)))


def test_graph_weights():
    g = Graph(2, ((0, 1),), (2.5,))
    assert g.total_weight() == 2.5
    assert Graph(2, ((0, 1),)).weight_list() == (1.0,)
    with pytest.raises(ValueError):
        Graph(2, ((0, 1),), (-1.0,))


def test_hypergraph_invariants():
    h = Hypergraph(4, ((2, 0, 1), (1, 3)))
    assert h.edges[0] == (0, 1, 2)
    assert h.edge_sizes() == (2, 3)
    assert not h.is_uniform()
    with pytest.raises(ValueError):
        Hypergraph(3, ((),))
    with pytest.raises(ValueError):
        Hypergraph(3, ((0, 0, 1),))


def test_cnf_invariants():
    phi = CnfFormula(3, ((1, -2, 3),))
    assert phi.clause_vars() == [frozenset({1, 2, 3})]
    with pytest.raises(ValueError):
        CnfFormula(2, ((1, -1),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((1, 3),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((0,),))


def test_matrix_types():
    m = IntMatrix([[1, 2], [3, 4]])
    assert m.n == 2 and m.value_counts() == {1: 1, 2: 1, 3: 1, 4: 1}
    with pytest.raises(ValueError):
        IntMatrix([[1, 2, 3], [4, 5, 6]])
    b = BinaryMatrix([[0, 1], [1, 0]])
    assert b.n == 2
    with pytest.raises(ValueError):
        BinaryMatrix([[0, 2], [1, 0]])


def test_unit_vectors():
    UnitVectors(np.eye(3))
    with pytest.raises(ValueError):
        UnitVectors(2 * np.eye(3))


def test_set_family():
    s = SetFamily(3, ("101", "001"))
    assert s.members == ("001", "101")
    assert s.member_ints() == (1, 5)
    with pytest.raises(ValueError):
        SetFamily(3, ("10",))
    with pytest.raises(ValueError):
        SetFamily(2, ("10", "10"))


# --- parsers ---------------------------------------------------------------


def test_parse_dimacs_minimal():
    phi = inst.parse_dimacs("p cnf 3 1\n1 2 3 0")
    assert phi.num_vars == 3 and phi.clauses == ((1, 2, 3),)


def test_parse_dimacs_duplicate_variable():
    with pytest.raises(ParseError, match="appears twice"):
        inst.parse_dimacs("p cnf 2 1\n1 -1 0")


def test_parse_dimacs_figure_formula():
    # 3 clauses over 5 variables; first clause (x1 v x3 v -x5)
    text = "c sample\np cnf 5 3\n1 3 -5 0\n-1 2 -3 0\n-2 -4 -5 0\n"
    phi = inst.parse_dimacs(text)
    assert phi.m == 3 and phi.clauses[0] == (1, 3, -5)


def test_parse_dimacs_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        inst.parse_dimacs("p cnf 2 1\n1 x 0")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        inst.parse_dimacs("p cnf 2 2\n1 0")
    with pytest.raises(ParseError):
        inst.parse_dimacs("p cnf 1 1\n2 0")


def test_parse_edge_list():
    g = inst.parse_edge_list("3 2\n0 1\n1 2")
    assert g == Graph(3, ((0, 1), (1, 2)))
    gw = inst.parse_edge_list("2 1\n0 1 2.5")
    assert gw.weights == (2.5,)
    with pytest.raises(ParseError):
        inst.parse_edge_list("2 1\n0 0")
    with pytest.raises(ParseError):
        inst.parse_edge_list("2 2\n0 1")


def test_parse_hypergraph():
    h = inst.parse_hypergraph("3 1\n3 0 1 2")
    assert h.edges == ((0, 1, 2),)
    with pytest.raises(ParseError):
        inst.parse_hypergraph("3 1\n2 0 1 2")


def test_parse_matrix():
    m = inst.parse_int_matrix("2\n1,2\n3,4")
    assert m == IntMatrix([[1, 2], [3, 4]])
    with pytest.raises(ParseError):
        inst.parse_int_matrix("2\n1,2\n3")
    b = inst.parse_binary_matrix("2\n0,1\n1,0")
    assert b == BinaryMatrix([[0, 1], [1, 0]])
    with pytest.raises(ParseError):
        inst.parse_binary_matrix("2\n0,2\n1,0")


def test_parse_set_family():
    s = inst.parse_set_family("3 2\n101\n001")
    assert s.members == ("001", "101")


@pytest.mark.parametrize(
    "obj,serialize,parse",
    [
        (CnfFormula(5, ((1, 3, -5), (-1, 2, -3))), inst.serialize_dimacs, inst.parse_dimacs),
        (Graph(4, ((0, 1), (2, 3))), inst.serialize_edge_list, inst.parse_edge_list),
        (Graph(3, ((0, 1),), (1.5,)), inst.serialize_edge_list, inst.parse_edge_list),
        (Hypergraph(4, ((0, 1, 2), (1, 3))), inst.serialize_hypergraph, inst.parse_hypergraph),
        (IntMatrix([[1, 2], [3, 4]]), inst.serialize_matrix, inst.parse_int_matrix),
        (BinaryMatrix([[0, 1], [1, 1]]), inst.serialize_matrix, inst.parse_binary_matrix),
        (SetFamily(3, ("101", "001")), inst.serialize_set_family, inst.parse_set_family),
    ],
)
def test_round_trip(obj, serialize, parse):
    text = serialize(obj)
    again = parse(text)
    assert again == obj
    assert serialize(again) == text  # canonical


# --- generators ------------------------------------------------------------


def test_gen_kcnf_disjoint_partition():
    phi = inst.gen_random_kcnf(9, 3, 3, 0, seed=5)
    vars_per_clause = phi.clause_vars()
    assert all(len(v) == 3 for v in vars_per_clause)
    assert not (vars_per_clause[0] & vars_per_clause[1])
    assert not (vars_per_clause[0] & vars_per_clause[2])
    assert not (vars_per_clause[1] & vars_per_clause[2])


def test_gen_kcnf_bounded_intersections():
    phi = inst.gen_random_kcnf(6, 3, 3, 2, seed=1)
    cv = phi.clause_vars()
    for i in range(3):
        hits = sum(1 for j in range(3) if j != i and cv[i] & cv[j])
        assert hits <= 2


def test_gen_kcnf_infeasible():
    with pytest.raises(GenerationError):
        inst.gen_random_kcnf(3, 9, 3, 0, seed=0)


def test_gen_kcnf_deterministic():
    assert inst.gen_random_kcnf(12, 4, 3, 1, seed=9) == inst.gen_random_kcnf(12, 4, 3, 1, seed=9)


def test_gen_hypercube():
    g = inst.gen_hypercube(3)
    assert g.n == 8 and g.m == 12
    assert all(d == 3 for d in g.degrees())
    for u, v in g.edges:
        assert bin(u ^ v).count("1") == 1


def test_gen_random_regular():
    g = inst.gen_random_regular(4, 3, seed=2)
    # K4 is the only simple 3-regular graph on 4 vertices
    assert g == Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
    g8 = inst.gen_random_regular(8, 3, seed=2)
    assert all(d == 3 for d in g8.degrees())
    with pytest.raises(GenerationError):
        inst.gen_random_regular(5, 3, seed=0)


def test_gen_latin_matrix():
    m = inst.gen_latin_matrix(4, 4, seed=3)
    assert m.value_counts() == {0: 4, 1: 4, 2: 4, 3: 4}
    # odd cell count: one remainder value of lower multiplicity
    m33 = inst.gen_latin_matrix(33, 2, seed=3)
    counts = m33.value_counts()
    assert sorted(counts.values())[-1] == 2
    assert sum(1 for c in counts.values() if c == 1) == 1


def test_gen_gnm_and_binary_and_sets():
    g = inst.gen_gnm(10, 15, seed=4)
    assert g.n == 10 and g.m == 15
    b = inst.gen_random_binary_matrix(6, seed=4)
    assert b.n == 6
    s = inst.gen_set_family(8, 20, seed=4)
    assert s.size == 20 and s.universe_bits == 8
    v = inst.gen_unit_vectors(5, seed=4)
    assert np.allclose(np.linalg.norm(v.vectors, axis=1), 1.0)


def test_vertex_transitive_generators_and_certification():
    c6 = inst.gen_vertex_transitive("cycle", 6)
    q3 = inst.gen_vertex_transitive("hypercube", 3)
    k5 = inst.gen_vertex_transitive("complete", 5)
    assert inst.certified_transitive_kind(c6) == "cycle"
    assert inst.certified_transitive_kind(q3) == "hypercube"
    assert inst.certified_transitive_kind(k5) == "complete"
    path = Graph(3, ((0, 1), (1, 2)))
    assert inst.certified_transitive_kind(path) is None
    # K3 == C3: either certification is acceptable, but it must certify
    assert inst.certified_transitive_kind(inst.gen_vertex_transitive("cycle", 3)) is not None


def test_generators_are_pure_in_seed():
    assert inst.gen_gnm(12, 20, seed=7) == inst.gen_gnm(12, 20, seed=7)
    assert inst.gen_latin_matrix(6, 4, seed=7) == inst.gen_latin_matrix(6, 4, seed=7)
    assert inst.gen_set_family(6, 10, seed=7) == inst.gen_set_family(6, 10, seed=7)
