import itertools
from fractions import Fraction

import pytest

from lpa import cohn
from lpa import graphs as G

from conftest import make_rng


def lstar():
    return cohn.AlgebraContext.leavitt(G.builtin("E_star"))


def relstar():
    return cohn.AlgebraContext.relative(G.builtin("E_star"), {"v2"})


# -- contexts and generators -----------------------------------------------


def test_context_construction():
    ctx = lstar()
    assert ctx.completed == frozenset({"v1", "v2"})
    assert ctx.source("e2") == "v1" and ctx.range("e2") == "v2"
    assert ctx.special_edge("v1") == "e1" and ctx.special_edge("v2") == "e3"
    assert ctx.is_special("e1") and not ctx.is_special("e2")
    rel = relstar()
    assert rel.completed == frozenset({"v2"})
    assert not rel.is_special("e1")  # v1 is not completed
    with pytest.raises(cohn.AlgebraError):
        cohn.AlgebraContext.relative(G.builtin("F_star"), {"v1'"})


def test_generator_resolution():
    ctx = lstar()
    assert cohn.generator(ctx, "v1") == cohn.vertex(ctx, "v1")
    assert cohn.generator(ctx, "e2") == cohn.edge(ctx, "e2")
    assert cohn.generator(ctx, "e2*") == cohn.ghost(ctx, "e2")
    with pytest.raises(cohn.AlgebraError):
        cohn.generator(ctx, "zz")
    with pytest.raises(cohn.AlgebraError):
        cohn.generator(ctx, "v1*")
    with pytest.raises(cohn.AlgebraError):
        cohn.vertex(ctx, "e1")
    with pytest.raises(cohn.AlgebraError):
        cohn.edge(ctx, "v1")
    # identifier shared between a vertex and an edge is ambiguous
    shared = G.parse_graph('{"vertices": ["a"], "edges": [["a", "a", "a"],'
                           ' ["b", "a", "a"]]}')
    ctx2 = cohn.AlgebraContext.leavitt(shared)
    with pytest.raises(cohn.AlgebraError, match="ambiguous"):
        cohn.generator(ctx2, "a")


def test_formatting():
    ctx = lstar()
    assert cohn.format_element(cohn.Element.zero(ctx)) == "0"
    assert cohn.format_element(cohn.vertex(ctx, "v1")) == "v1"
    x = cohn.edge(ctx, "e2") * cohn.ghost(ctx, "e4")
    assert cohn.format_element(x) == "e2 e4*"
    y = cohn.vertex(ctx, "v1") - cohn.edge(ctx, "e2").scale(Fraction(3, 2))
    assert cohn.format_element(y) == "v1 - 3/2 e2"


# -- multiplication and rewriting ------------------------------------------


def test_basic_products():
    ctx = lstar()
    v1, v2 = cohn.vertex(ctx, "v1"), cohn.vertex(ctx, "v2")
    e1, e2 = cohn.edge(ctx, "e1"), cohn.edge(ctx, "e2")
    assert v1 * v1 == v1
    assert (v1 * v2).is_zero()
    assert v1 * e1 == e1 and e1 * v1 == e1
    assert (e1 * v2).is_zero()
    assert cohn.ghost(ctx, "e1") * e1 == v1
    assert cohn.ghost(ctx, "e2") * e2 == v2
    assert (cohn.ghost(ctx, "e1") * e2).is_zero()
    one = cohn.unit(ctx)
    assert one * e1 == e1 and e1 * one == e1 and one * one == one


def test_summation_relation_is_a_theorem():
    # v = sum of e e* over edges leaving v, at completed vertices only
    ctx = lstar()
    for v in ("v1", "v2"):
        total = cohn.Element.zero(ctx)
        for name, _, _ in ctx.graph.out_edges(v):
            total = total + cohn.edge(ctx, name) * cohn.ghost(ctx, name)
        assert total == cohn.vertex(ctx, v)
    rel = relstar()
    e1, e2 = cohn.edge(rel, "e1"), cohn.edge(rel, "e2")
    incomplete = e1 * e1.star() + e2 * e2.star()
    assert incomplete != cohn.vertex(rel, "v1")
    e3, e4 = cohn.edge(rel, "e3"), cohn.edge(rel, "e4")
    assert e3 * e3.star() + e4 * e4.star() == cohn.vertex(rel, "v2")


def test_special_edge_rewriting():
    # e3 is the designated edge at the completed vertex v2: e3 e3* rewrites
    rel = relstar()
    e3, e4 = cohn.edge(rel, "e3"), cohn.edge(rel, "e4")
    got = e3 * e3.star()
    want = cohn.vertex(rel, "v2") - e4 * e4.star()
    assert got == want
    # e1 e1* stays put since v1 is not completed
    e1 = cohn.edge(rel, "e1")
    x = e1 * e1.star()
    assert len(x.terms) == 1
    m = next(iter(x.terms))
    assert (m.alpha, m.beta) == (("e1",), ("e1",))


def test_normal_form_has_no_forbidden_pattern():
    rng = make_rng(13)
    for ctx in (lstar(), relstar()):
        alphabet = _alphabet(ctx)
        for _ in range(100):
            word = [rng.choice(alphabet) for _ in range(rng.randint(1, 5))]
            x = cohn.normalize(ctx, [(1, word)])
            for m in x.terms:
                _assert_normal(ctx, m)


def _alphabet(ctx):
    out = list(ctx.graph.vertices)
    for name, _, _ in ctx.graph.edges:
        out.append(name)
        out.append(name + "*")
    return out


def _assert_normal(ctx, m):
    # paths compose, ranges agree with the base, no special pair at the tip
    for path in (m.alpha, m.beta):
        for a, b in zip(path, path[1:]):
            assert ctx.range(a) == ctx.source(b)
        if path:
            assert ctx.range(path[-1]) == m.base
    if m.alpha and m.beta and m.alpha[-1] == m.beta[-1]:
        assert not ctx.is_special(m.alpha[-1])


def test_star_laws():
    ctx = lstar()
    rng = make_rng(17)
    alphabet = _alphabet(ctx)
    for _ in range(50):
        w1 = [rng.choice(alphabet) for _ in range(rng.randint(1, 4))]
        w2 = [rng.choice(alphabet) for _ in range(rng.randint(1, 4))]
        x = cohn.normalize(ctx, [(1, w1)])
        y = cohn.normalize(ctx, [(1, w2)])
        assert x.star().star() == x
        assert (x + y).star() == x.star() + y.star()
        assert (x * y).star() == y.star() * x.star()


def test_ring_axioms_random():
    rng = make_rng(19)
    for ctx in (cohn.AlgebraContext.leavitt(G.builtin("F_star")),
                relstar()):
        alphabet = _alphabet(ctx)

        def rand_elem():
            terms = []
            for _ in range(rng.randint(1, 3)):
                word = [rng.choice(alphabet) for _ in range(rng.randint(0, 3))]
                terms.append((Fraction(rng.randint(-2, 2)), word))
            return cohn.normalize(ctx, terms)

        one = cohn.unit(ctx)
        zero = cohn.Element.zero(ctx)
        for _ in range(25):
            x, y, z = rand_elem(), rand_elem(), rand_elem()
            assert (x + y) + z == x + (y + z)
            assert x + y == y + x
            assert x + zero == x
            assert x - x == zero
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert (x + y) * z == x * z + y * z
            assert one * x == x and x * one == x
            assert 2 * x == x + x
            assert x.scale(Fraction(1, 2)) + x.scale(Fraction(1, 2)) == x


def test_confluence_two_strategies():
    # fold-left and fold-right evaluation must agree on random words
    rng = make_rng(23)
    contexts = [cohn.AlgebraContext.leavitt(G.builtin("F_star")),
                cohn.AlgebraContext.leavitt(G.builtin("F_star_star"))]
    for _ in range(500):
        ctx = rng.choice(contexts)
        alphabet = _alphabet(ctx)
        word = [rng.choice(alphabet) for _ in range(rng.randint(0, 6))]
        left = cohn.normalize(ctx, [(1, word)], strategy="left")
        right = cohn.normalize(ctx, [(1, word)], strategy="right")
        assert left == right, word


def test_normalization_idempotent():
    rng = make_rng(29)
    ctx = relstar()
    alphabet = _alphabet(ctx)
    for _ in range(50):
        word = [rng.choice(alphabet) for _ in range(rng.randint(1, 5))]
        x = cohn.normalize(ctx, [(1, word)])
        # re-multiplying the normal form by the unit must not change it
        assert x * cohn.unit(ctx) == x
        assert cohn.unit(ctx) * x == x


# -- basis soundness -------------------------------------------------------


def _normal_monomials_up_to(ctx, max_degree):
    """All structurally valid normal-form monomials with |alpha|+|beta| <= d."""
    paths = {0: [((), v) for v in ctx.graph.vertices]}
    for d in range(1, max_degree + 1):
        nxt = []
        for path, end in paths[d - 1]:
            for name, _, rng in ctx.graph.out_edges(end):
                nxt.append((path + (name,), rng))
        paths[d] = nxt
    out = []
    for da in range(max_degree + 1):
        for db in range(max_degree + 1 - da):
            for alpha, enda in paths[da]:
                for beta, endb in paths[db]:
                    if enda != endb:
                        continue
                    if alpha and beta and alpha[-1] == beta[-1] \
                            and ctx.is_special(alpha[-1]):
                        continue
                    out.append(cohn.Monomial(alpha, beta, enda))
    return out


def test_basis_soundness_oracle():
    """Words of length <= 3 span exactly the degree <= 3 normal monomials.

    Every generator word is normalized and written in monomial coordinates;
    the rank of the resulting rational matrix must equal the number of valid
    normal-form monomials of degree <= 3, so the rewriting neither collapses
    independent elements nor escapes the claimed basis.
    """
    ctx = relstar()
    basis = _normal_monomials_up_to(ctx, 3)
    index = {m: i for i, m in enumerate(basis)}
    alphabet = _alphabet(ctx)

    rows = []
    for length in (1, 2, 3):
        for word in itertools.product(alphabet, repeat=length):
            x = cohn.normalize(ctx, [(1, list(word))])
            row = [Fraction(0)] * len(basis)
            for m, c in x.terms.items():
                assert m in index, "normal form escaped the degree bound"
                row[index[m]] = c
            if any(row):
                rows.append(row)

    # every row is inside the span by the assertion above, so the rank can
    # only fall short of len(basis), never exceed it: stop at full rank
    rank = gaussian_rank(rows, stop_at=len(basis))
    assert rank == len(basis)


def gaussian_rank(rows, stop_at=None):
    seen = set()
    unique = []
    for row in rows:
        key = tuple(row)
        if key not in seen:
            seen.add(key)
            unique.append(row)
    pivots = []
    for row in unique:
        row = row[:]
        for pcol, prow in pivots:
            if row[pcol]:
                f = row[pcol] / prow[pcol]
                row = [a - f * b for a, b in zip(row, prow)]
        nz = next((j for j, a in enumerate(row) if a), None)
        if nz is not None:
            pivots.append((nz, row))
            if stop_at is not None and len(pivots) >= stop_at:
                break
    return len(pivots)


def test_size_guard():
    ctx = lstar()
    old = cohn.MAX_MONOMIALS
    cohn.MAX_MONOMIALS = 3
    try:
        x = cohn.edge(ctx, "e1") + cohn.edge(ctx, "e2") + cohn.edge(ctx, "e3")
        with pytest.raises(cohn.ResourceError):
            x + cohn.edge(ctx, "e4")
    finally:
        cohn.MAX_MONOMIALS = old


# -- homomorphism machinery ------------------------------------------------


def test_identity_family_check():
    ctx = lstar()
    check = cohn.check_relative_family(ctx, cohn.identity_images(ctx))
    assert check.passed
    x = cohn.edge(ctx, "e2") * cohn.ghost(ctx, "e4") + cohn.vertex(ctx, "v2")
    assert cohn.induced_map_apply(check, x) == x


def test_family_check_missing_and_failing():
    ctx = lstar()
    images = cohn.identity_images(ctx)
    del images["e1"]
    with pytest.raises(cohn.AlgebraError, match="missing image"):
        cohn.check_relative_family(ctx, images)
    bad = cohn.identity_images(ctx)
    bad["e1"] = cohn.edge(ctx, "e2")  # wrong endpoints and cancellations
    check = cohn.check_relative_family(ctx, bad)
    assert not check.passed
    assert any(rel == "ghost-edge cancellation" for rel, _ in check.failures)
    with pytest.raises(cohn.PreconditionError):
        cohn.induced_map_apply(check, cohn.unit(ctx))


def test_cohn_inclusion_families():
    for src_name, v_set, target_name in [
            ("E_star", {"v2"}, "F_star"),
            ("E_star_star", {"w2", "w3", "w4"}, "F_star_star")]:
        src = cohn.AlgebraContext.relative(G.builtin(src_name), v_set)
        target = cohn.AlgebraContext.leavitt(G.builtin(target_name))
        images = cohn.cohn_inclusion_images(src, target)
        check = cohn.check_relative_family(src, images)
        assert check.passed, check.failures
        assert cohn.induced_map_apply(check, cohn.unit(src)) == cohn.unit(target)


def test_conjugation_endomorphism():
    ctx = lstar()
    one = cohn.unit(ctx)
    p = cohn.edge(ctx, "e1") + cohn.edge(ctx, "e2")
    q = cohn.edge(ctx, "e3") + cohn.edge(ctx, "e4")
    assert p.star() * p == one
    assert q.star() * q == one
    assert (p.star() * q).is_zero()
    assert p * p.star() == cohn.vertex(ctx, "v1")
    assert q * q.star() == cohn.vertex(ctx, "v2")
    images = cohn.conjugation_pair_endomorphism(ctx, p, q)
    check = cohn.check_relative_family(ctx, images)
    assert check.passed, check.failures
    assert cohn.induced_map_apply(check, one) == one
    with pytest.raises(cohn.PreconditionError):
        cohn.conjugation_pair_endomorphism(ctx, p, p)


def test_mvn_witnesses():
    ctx = lstar()
    one = cohn.unit(ctx)
    e = cohn.edge(ctx, "e1") * cohn.ghost(ctx, "e1") \
        + cohn.edge(ctx, "e4") * cohn.ghost(ctx, "e4")
    v = cohn.edge(ctx, "e1") + cohn.edge(ctx, "e4")
    x, y, checks = cohn.mvn_witnesses(ctx, e, one, v, v.star())
    assert all(ok for _, ok in checks)
    assert x * y == e and y * x == one
    with pytest.raises(cohn.PreconditionError):
        cohn.mvn_witnesses(ctx, e, one, v, v.star() * v.star())


def test_assemble_conjugator():
    ctx = lstar()
    one = cohn.unit(ctx)
    v1, v2 = cohn.vertex(ctx, "v1"), cohn.vertex(ctx, "v2")
    u = cohn.edge(ctx, "e1") * cohn.ghost(ctx, "e3") \
        + cohn.edge(ctx, "e2") * cohn.ghost(ctx, "e4")
    assert u * u.star() == v1
    assert u.star() * u == v2
    assert (u * u).is_zero()
    a, b, checks = cohn.assemble_conjugator(
        ctx, [(u, u.star(), v1, v2), (u.star(), u, v2, v1)])
    assert all(ok for _, ok in checks)
    assert a * b == one and b * a == one
    assert b * v1 * a == v2
    with pytest.raises(cohn.PreconditionError):
        cohn.assemble_conjugator(ctx, [(u, u.star(), v1, v2)])


def test_verify_class_identities():
    results = cohn.verify_class_identities()
    assert results and all(ok for _, ok in results)
