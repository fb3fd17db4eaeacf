"""Built-in verification suite: every identity the CLI can re-check on demand.

Each check returns (ok, details); checks are grouped into named blocks so the
CLI can run a filtered subset.
"""

from __future__ import annotations

from . import cohn
from . import graphs as G
from . import k0 as K
from . import moves as M


def _det_check(name, expected):
    def run():
        got = K.graph_determinant(G.builtin(name))
        return got == expected, "det(I - A^t) = %d, expected %d" % (got, expected)
    return run


def _det_splice_r3():
    got = K.graph_determinant(M.cuntz_splice(G.builtin("R3"), "u"))
    return got == 2, "det after splicing R3 = %d, expected 2" % got


def _k0_trivial(name):
    def run():
        group, _ = K.k0_presentation(G.builtin(name))
        ok = group.is_trivial()
        return ok, group.render()
    return run


def _k0_r3():
    group, classes = K.k0_presentation(G.builtin("R3"))
    ok = (group.free_rank == 0 and group.invariant_factors == (2,)
          and group.unit_class == (1,) and classes["u"].coords == (1,))
    return ok, group.render()


def _splice_is_double_star():
    spliced = M.cuntz_splice(G.builtin("E_star"), "v1")
    iso = G.graph_isomorphic(spliced, G.builtin("E_star_star"))
    return iso is not None, "splice of E_star at v1 vs E_star_star"


def _cohn_graph_exact(src, v_set, target):
    def run():
        out = M.cohn_graph(G.builtin(src), v_set)
        want = G.builtin(target)
        ok = out.vertices == want.vertices and out.edges == want.edges
        return ok, "Cohn graph of %s at %s vs %s" % (src, sorted(v_set), target)
    return run


def _fss_not_spliced_fstar():
    spliced = M.cuntz_splice(G.builtin("F_star"), "v1")
    iso = G.graph_isomorphic(G.builtin("F_star_star"), spliced)
    return iso is None, "F_star_star vs Cuntz splice of F_star at v1"


def _double_splice_r3_matches_example():
    out = M.double_cuntz_splice(G.builtin("R3"), "u")
    want_vertices = ("u", "w1", "w2", "w3", "w4")
    star2 = G.builtin("E_star_star")
    want_edges = G.builtin("R3").edges + star2.edges + (
        ("d1", "u", "w1"), ("d2", "w1", "u"))
    ok = out.vertices == want_vertices and set(out.edges) == set(want_edges)
    return ok, "vertices %s, %d edges" % (list(out.vertices), len(out.edges))


def _double_splice_is_iterated():
    r3 = G.builtin("R3")
    double = M.double_cuntz_splice(r3, "u")
    iterated = M.cuntz_splice(M.cuntz_splice(r3, "u"), "v1")
    iso = G.graph_isomorphic(double, iterated)
    return iso is not None, "double splice vs splice-twice on R3"


def _double_splice_det_r3():
    before = K.graph_determinant(G.builtin("R3"))
    after = K.graph_determinant(M.double_cuntz_splice(G.builtin("R3"), "u"))
    return (before, after) == (-2, -2), "det %d -> %d" % (before, after)


def _lemma44_block():
    return cohn.verify_class_identities()


def _family_check(src_name, v_set, target_name):
    def run():
        src = cohn.AlgebraContext.relative(G.builtin(src_name), v_set)
        target = cohn.AlgebraContext.leavitt(G.builtin(target_name))
        images = cohn.cohn_inclusion_images(src, target)
        check = cohn.check_relative_family(src, images)
        if not check.passed:
            return False, "failing instances: %s" % check.failures[:5]
        one = cohn.induced_map_apply(check, cohn.unit(src))
        ok = one == cohn.unit(target)
        return ok, "all relation families hold; image of 1 is 1"
    return run


def _endomorphism_block():
    ctx = cohn.AlgebraContext.leavitt(G.builtin("E_star"))
    one = cohn.unit(ctx)
    p = cohn.edge(ctx, "e1") + cohn.edge(ctx, "e2")
    q = cohn.edge(ctx, "e3") + cohn.edge(ctx, "e4")
    checks = []
    checks.append(("p* p = 1", p.star() * p == one))
    checks.append(("q* q = 1", q.star() * q == one))
    checks.append(("p* q = 0", (p.star() * q).is_zero()))
    images = cohn.conjugation_pair_endomorphism(ctx, p, q)
    check = cohn.check_relative_family(ctx, images)
    checks.append(("conjugation images satisfy all relations", check.passed))
    checks.append(("image of 1 is 1",
                   cohn.induced_map_apply(check, one) == one))
    identity = p.star() * p * q.star() * q
    checks.append(("1 = (e1+e2)*(e1+e2)(e3+e4)*(e3+e4)", identity == one))
    return checks


def _witness_block():
    ctx = cohn.AlgebraContext.leavitt(G.builtin("E_star"))
    one = cohn.unit(ctx)
    checks = []

    e = cohn.edge(ctx, "e1") * cohn.ghost(ctx, "e1") \
        + cohn.edge(ctx, "e4") * cohn.ghost(ctx, "e4")
    v = cohn.edge(ctx, "e1") + cohn.edge(ctx, "e4")
    _, _, sub = cohn.mvn_witnesses(ctx, e, one, v, v.star())
    checks.extend(("mvn (e1e1*+e4e4* ~ 1): %s" % n, ok) for n, ok in sub)

    v1 = cohn.vertex(ctx, "v1")
    v2 = cohn.vertex(ctx, "v2")
    u = cohn.edge(ctx, "e1") * cohn.ghost(ctx, "e3") \
        + cohn.edge(ctx, "e2") * cohn.ghost(ctx, "e4")
    x, y, sub = cohn.mvn_witnesses(ctx, v1, v2, u, u.star())
    checks.extend(("mvn (v1 ~ v2): %s" % n, ok) for n, ok in sub)
    checks.append(("x = u", x == u))
    checks.append(("y = u*", y == u.star()))

    a, b, sub = cohn.assemble_conjugator(
        ctx, [(u, u.star(), v1, v2), (u.star(), u, v2, v1)])
    checks.extend(("conjugator: %s" % n, ok) for n, ok in sub)
    checks.append(("b v1 a = v2", b * v1 * a == v2))
    return checks


def full_suite():
    """Ordered (block, name, outcome, details) rows for every verified identity."""
    rows = []

    def add(block, name, outcome):
        if isinstance(outcome, tuple):
            ok, details = outcome
        else:
            ok, details = outcome, ""
        rows.append((block, name, bool(ok), details))

    add("determinants", "det E_star = -1", _det_check("E_star", -1)())
    add("determinants", "det E_star_star = +1", _det_check("E_star_star", 1)())
    add("determinants", "det R3 = -2", _det_check("R3", -2)())
    add("determinants", "det cuntz_splice(R3) = +2", _det_splice_r3())

    add("k0", "K0(E_star) trivial", _k0_trivial("E_star")())
    add("k0", "K0(E_star_star) trivial", _k0_trivial("E_star_star")())
    add("k0", "K0(R3) = Z/2 with unit 1", _k0_r3())

    for name, ok in _lemma44_block():
        add("lemma44", name, ok)

    add("graphs", "cuntz_splice(E_star, v1) isomorphic to E_star_star",
        _splice_is_double_star())
    add("graphs", "Cohn graph of E_star at {v2} is F_star",
        _cohn_graph_exact("E_star", {"v2"}, "F_star")())
    add("graphs", "Cohn graph of E_star_star at {w2,w3,w4} is F_star_star",
        _cohn_graph_exact("E_star_star", {"w2", "w3", "w4"}, "F_star_star")())
    add("graphs", "F_star_star is NOT the Cuntz splice of F_star",
        _fss_not_spliced_fstar())
    add("graphs", "double splice of R3 matches the reference picture",
        _double_splice_r3_matches_example())
    add("graphs", "double splice is the iterated splice",
        _double_splice_is_iterated())
    add("graphs", "double splice preserves det on R3", _double_splice_det_r3())

    add("cohn-family", "relative family of (E_star, {v2}) maps into L(F_star)",
        _family_check("E_star", {"v2"}, "F_star")())
    add("cohn-family",
        "relative family of (E_star_star, {w2,w3,w4}) maps into L(F_star_star)",
        _family_check("E_star_star", {"w2", "w3", "w4"}, "F_star_star")())

    for name, ok in _endomorphism_block():
        add("endomorphism", name, ok)
    for name, ok in _witness_block():
        add("witnesses", name, ok)
    return rows


def blocks():
    return ["determinants", "k0", "lemma44", "graphs", "cohn-family",
            "endomorphism", "witnesses"]
