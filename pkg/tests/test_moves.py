import pytest

from lpa import graphs as G
from lpa import k0 as K
from lpa import moves as M

from conftest import make_rng, random_spi_graph


# -- single moves ----------------------------------------------------------


def test_cuntz_splice_r3():
    out = M.cuntz_splice(G.builtin("R3"), "u")
    assert len(out.vertices) == 3
    assert len(out.edges) == 9
    assert K.graph_determinant(out) == 2
    # the attached pair of opposite edges
    names = {e[0] for e in out.edges}
    assert {"d1", "d2"} <= names
    assert out.edge("d1")[1] == "u" and out.edge("d2")[2] == "u"


def test_cuntz_splice_unit_class():
    # Z/2 with unit 1 becomes Z/2 with unit 0
    before, _ = K.k0_presentation(G.builtin("R3"))
    after, _ = K.k0_presentation(M.cuntz_splice(G.builtin("R3"), "u"))
    assert (before.invariant_factors, before.unit_class) == ((2,), (1,))
    assert (after.invariant_factors, after.unit_class) == ((2,), (0,))


def test_splice_preconditions():
    with pytest.raises(M.MoveError, match="no vertex"):
        M.cuntz_splice(G.builtin("R3"), "z")
    with pytest.raises(M.MoveError, match="sink"):
        M.cuntz_splice(G.builtin("F_star"), "v1'")
    loop = G.parse_graph('{"vertices": ["a"], "edges": [["e", "a", "a"]]}')
    with pytest.raises(M.MoveError, match="two return paths"):
        M.cuntz_splice(loop, "a")


def test_splice_name_collisions():
    # splicing a graph that already uses v1/e1/d1 must not clash
    g = G.parse_graph('{"vertices": ["v1", "d1"],'
                      ' "edges": [["e1", "v1", "v1"], ["e2", "v1", "d1"],'
                      ' ["d2", "d1", "v1"], ["e3", "d1", "d1"]]}')
    out = M.cuntz_splice(g, "v1")
    assert len(out.vertices) == 4
    assert len(out.edges) == 10
    assert len({e[0] for e in out.edges}) == 10
    assert "v1_2" in out.vertices


def test_double_cuntz_splice():
    out = M.double_cuntz_splice(G.builtin("R3"), "u")
    assert len(out.vertices) == 5
    assert len(out.edges) == 15
    assert K.graph_determinant(out) == -2
    iterated = M.cuntz_splice(M.cuntz_splice(G.builtin("R3"), "u"), "v1")
    assert G.graph_isomorphic(out, iterated) is not None


def test_cohn_graph_builtins():
    out = M.cohn_graph(G.builtin("E_star"), {"v2"})
    assert out == G.builtin("F_star")
    out = M.cohn_graph(G.builtin("E_star_star"), {"w2", "w3", "w4"})
    assert out == G.builtin("F_star_star")
    # completing everywhere changes nothing
    assert M.cohn_graph(G.builtin("E_star"), {"v1", "v2"}) == G.builtin("E_star")


def test_cohn_graph_errors():
    with pytest.raises(M.MoveError, match="no vertex"):
        M.cohn_graph(G.builtin("E_star"), {"zz"})
    with pytest.raises(M.MoveError, match="sink"):
        M.cohn_graph(G.builtin("F_star"), {"v1'"})


def test_add_source():
    out = M.add_source(G.builtin("R3"), "u")
    assert out.vertices == ("u", "s0")
    assert ("d0", "s0", "u") in out.edges
    with pytest.raises(M.MoveError):
        M.add_source(G.builtin("R3"), "nope")
    # collision handling
    g = G.parse_graph('{"vertices": ["s0", "d0"],'
                      ' "edges": [["x", "s0", "d0"]]}')
    out = M.add_source(g, "d0")
    assert "s0_2" in out.vertices


# -- reports ---------------------------------------------------------------


def test_move_report_unknown_move():
    with pytest.raises(M.MoveError, match="unknown move"):
        M.apply_move_with_report(G.builtin("R3"), "shrink", "u")


def test_move_report_splice():
    rep = M.apply_move_with_report(G.builtin("R3"), "cuntz-splice", "u")
    assert rep.passed
    assert rep.before["det"] == -2 and rep.after["det"] == 2
    names = [n for n, _, _ in rep.checks]
    assert "determinant negated" in names
    assert "K0 invariant factors preserved" in names
    doc = rep.to_dict()
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_move_report_cohn():
    rep = M.apply_move_with_report(G.builtin("E_star"), "cohn", ["v2"])
    assert rep.passed
    assert rep.output_graph == G.builtin("F_star")
    assert rep.after["det"] is None


def test_move_report_add_source():
    rep = M.apply_move_with_report(G.builtin("R3"), "add-source", "u")
    assert rep.passed
    names = [n for n, _, _ in rep.checks]
    assert "unit class shifted by the target vertex class" in names


def test_move_report_splice_on_sink_graph():
    # determinant checks degrade gracefully when det is undefined
    g = G.parse_graph('{"vertices": ["a", "b"],'
                      ' "edges": [["e1", "a", "a"], ["e2", "a", "a"],'
                      ' ["e3", "a", "b"]]}')
    rep = M.apply_move_with_report(g, "cuntz-splice", "a")
    assert rep.passed
    assert rep.before["det"] is None


# -- invariant effects on a random corpus ----------------------------------


def test_move_properties_random_corpus():
    rng = make_rng(99)
    for _ in range(50):
        g, u = random_spi_graph(rng, max_vertices=6)
        det = K.graph_determinant(g)
        group, _ = K.k0_presentation(g)

        spliced = M.cuntz_splice(g, u)
        sg, _ = K.k0_presentation(spliced)
        assert K.graph_determinant(spliced) == -det
        assert (sg.free_rank, sg.invariant_factors) == (
            group.free_rank, group.invariant_factors)

        doubled = M.double_cuntz_splice(g, u)
        dg, _ = K.k0_presentation(doubled)
        assert K.graph_determinant(doubled) == det
        assert (dg.free_rank, dg.invariant_factors) == (
            group.free_rank, group.invariant_factors)

        # splice then add a source at the spliced vertex: pointed K0 returns
        # to that of the original graph
        chained, _ = K.k0_presentation(M.add_source(spliced, u))
        assert K.pointed_iso_exists(group, chained).kind == "yes"


def test_double_splice_is_iterated_random():
    rng = make_rng(111)
    for _ in range(10):
        g, u = random_spi_graph(rng, max_vertices=5)
        doubled = M.double_cuntz_splice(g, u)
        spliced = M.cuntz_splice(g, u)
        back = [v for v in spliced.vertices if v not in g.vertices][0]
        iterated = M.cuntz_splice(spliced, back)
        assert G.graph_isomorphic(doubled, iterated) is not None
