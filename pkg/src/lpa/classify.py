"""Classification decisions over the computable invariants.

Verdicts only ever cite invariant-level facts: a matching determinant plus a
pointed K0 isomorphism yields Isomorphic, a pointed obstruction yields
NotIsomorphicByInvariant, and a sign disagreement is tagged as an instance of
the open question rather than decided.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import graphs as G
from . import k0 as K
from . import moves as M

ISOMORPHIC = "Isomorphic"
NOT_ISOMORPHIC = "NotIsomorphicByInvariant"
AKP_INSTANCE = "AKPInstance"
UNDECIDED = "Undecided"
NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class GraphInvariants:
    k0: K.PointedAbelianGroup
    determinant: object  # int, or None when the graph has a sink
    spi: G.SpiReport
    vertex_classes: dict


def invariants(g: G.Graph) -> GraphInvariants:
    group, classes = K.k0_presentation(g)
    spi = G.is_spi(g)
    det = None
    if g.vertices and all(g.out_degree(v) > 0 for v in g.vertices):
        det = K.graph_determinant(g)
    return GraphInvariants(group, det, spi, classes)


@dataclass(frozen=True)
class ClassificationVerdict:
    tag: str
    justification: dict

    def to_dict(self):
        return {"tag": self.tag, "justification": self.justification}


def compare(g: G.Graph, h: G.Graph, cap=K.DEFAULT_GROUP_CAP) -> ClassificationVerdict:
    """Compare two graphs through the classification invariants."""
    ig, ih = invariants(g), invariants(h)
    for name, inv in (("first", ig), ("second", ih)):
        if not inv.spi.is_spi:
            return ClassificationVerdict(NOT_APPLICABLE, {
                "reason": "%s graph is not SPI" % name,
                "failures": [list(map(str, f)) for f in inv.spi.failures],
            })
    iso = K.pointed_iso_exists(ig.k0, ih.k0, cap=cap)
    base = {"k0_first": ig.k0.render(), "k0_second": ih.k0.render(),
            "det_first": ig.determinant, "det_second": ih.determinant}
    if iso.kind == "no":
        base["obstruction"] = iso.reason
        return ClassificationVerdict(NOT_ISOMORPHIC, base)
    if iso.kind == "undecided":
        base["reason"] = "pointed isomorphism search inconclusive"
        return ClassificationVerdict(UNDECIDED, base)
    base["pointed_iso_witness"] = iso.witness
    if ig.determinant == ih.determinant:
        base["criterion"] = ("pointed K0 isomorphism with equal determinants "
                             "decides isomorphism")
        return ClassificationVerdict(ISOMORPHIC, base)
    base["criterion"] = ("pointed K0 groups agree but the determinant signs "
                         "differ: this is exactly the open question")
    return ClassificationVerdict(AKP_INSTANCE, base)


@dataclass
class ChainReport:
    input_first: G.Graph
    input_second: G.Graph
    splice_vertex: str
    spliced: G.Graph = None
    double_spliced: G.Graph = None
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.checks)

    def to_dict(self):
        return {
            "splice_vertex": self.splice_vertex,
            "checks": [{"name": n, "status": "pass" if ok else "fail", "details": d}
                       for n, ok, d in self.checks],
        }


def _groups_isomorphic(p, q):
    return (p.free_rank, p.invariant_factors) == (q.free_rank, q.invariant_factors)


def reduction_chain(e: G.Graph, f: G.Graph, u) -> ChainReport:
    """Instantiate the determinant-fixing reduction at a mismatched-sign pair.

    Builds the double splice and the single splice of the first graph and
    verifies the invariant hypotheses under which the pair reduces to the
    equal-determinant case.  No ring isomorphism is claimed.
    """
    ie, iff = invariants(e), invariants(f)
    if not ie.spi.is_spi or not iff.spi.is_spi:
        raise M.MoveError("both graphs must be SPI")
    iso = K.pointed_iso_exists(ie.k0, iff.k0)
    if iso.kind != "yes":
        raise M.MoveError("pointed K0 groups must be isomorphic (%s)" % iso.kind)
    if ie.determinant is None or iff.determinant is None:
        raise M.MoveError("determinants must be defined")
    if (ie.determinant > 0) == (iff.determinant > 0):
        raise M.MoveError(
            "determinant signs agree; the equal-determinant criterion applies "
            "directly and no reduction is needed")

    report = ChainReport(e, f, u)
    report.double_spliced = M.double_cuntz_splice(e, u)
    report.spliced = M.cuntz_splice(e, u)

    k_double, _ = K.k0_presentation(report.double_spliced)
    k_single, _ = K.k0_presentation(report.spliced)
    det_double = K.graph_determinant(report.double_spliced)
    det_single = K.graph_determinant(report.spliced)

    report.checks = [
        ("K0(double splice) isomorphic to K0(first)",
         _groups_isomorphic(k_double, ie.k0),
         "%s vs %s" % (k_double.render(), ie.k0.render())),
        ("det(double splice) = det(first)",
         det_double == ie.determinant, "%s vs %s" % (det_double, ie.determinant)),
        ("K0(splice) isomorphic to K0(second)",
         _groups_isomorphic(k_single, iff.k0),
         "%s vs %s" % (k_single.render(), iff.k0.render())),
        ("det(splice) = det(second)",
         det_single == iff.determinant, "%s vs %s" % (det_single, iff.determinant)),
    ]
    return report


def sign_question_instance(g: G.Graph, h: G.Graph) -> dict:
    """Report the two determinant signs and flag open-question instances."""
    ig, ih = invariants(g), invariants(h)
    if not ig.spi.is_spi or not ih.spi.is_spi:
        raise M.MoveError("both graphs must be SPI")

    def sgn(d):
        return "+" if d > 0 else ("-" if d < 0 else "0")

    iso = K.pointed_iso_exists(ig.k0, ih.k0)
    flagged = iso.kind == "yes" and sgn(ig.determinant) != sgn(ih.determinant)
    return {
        "det_first": ig.determinant,
        "det_second": ih.determinant,
        "signs": (sgn(ig.determinant), sgn(ih.determinant)),
        "signs_equal": sgn(ig.determinant) == sgn(ih.determinant),
        "open_question_instance": flagged,
    }
