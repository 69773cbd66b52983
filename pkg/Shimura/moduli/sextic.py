"""
Singular points of the Shimura sextic in its k = 4 chart, found by an
exhaustive scan of P^3(F_p) and classified by their tangent cones. When the
scan comes up short the remaining points are looked for over F_{p^2} and
flagged as not rational.

A node has a rank 3 quadratic tangent cone. A cusp has no quadratic part and
a cubic tangent cone that splits into three independent planes, which is
detected by the cubic being proportional to its own Hessian.
"""

from collections import Counter
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from Shimura.algebra.cyclo import phi20_roots
from Shimura.algebra.domains import Domain, GF
from Shimura.algebra.linalg import ExactMatrix
from Shimura.algebra.multipoly import MultiPoly
from Shimura.algebra.projective import ConjugatePoint, normalize_point, scan_projective, singular_points_fp2
from Shimura.config import Verify
from Shimura.helper.exceptions import ResourceBudgetError
from Shimura.logger import LOGGER
from Shimura.moduli.charts import QuadricCensus, eigenspace_chart, restrict_quadrics
from Shimura.moduli.models import DerivedModel, derive_model

EXPECTED_KINDS = {"cusp": 5, "node": 24}
EXPECTED_TOTAL = sum(EXPECTED_KINDS.values())
NODE_TAGS = {"invariant": 1, "type10": 1, "type5": 5}


# ---------------- local geometry ----------------
def local_expansion(poly: MultiPoly, point: Sequence, domain: Domain) -> MultiPoly:
    """poly around point in the affine chart of its first nonzero coordinate, in n - 1 local variables."""
    n = poly.nvars
    pivot = next(i for i, x in enumerate(point) if not domain.is_zero(domain.convert(x)))
    local = MultiPoly.gens(n - 1, domain)
    images, k = [], 0
    for i in range(n):
        shift = MultiPoly.constant(n - 1, point[i], domain)
        if i == pivot:
            images.append(shift)
        else:
            images.append(shift + local[k])
            k += 1
    return poly.substitute(images)


def quadratic_form_matrix(form: MultiPoly) -> List[List]:
    dom = form.domain
    n = form.nvars
    half = dom.inv(dom.convert(2))
    m = [[dom.zero] * n for _ in range(n)]
    for exps, c in form.terms.items():
        idx = [i for i, e in enumerate(exps) for _ in range(e)]
        a, b = idx
        if a == b:
            m[a][a] = c
        else:
            m[a][b] = m[b][a] = dom.mul(c, half)
    return m


def quadratic_rank(form: MultiPoly) -> int:
    if form.is_zero():
        return 0
    return ExactMatrix(quadratic_form_matrix(form), form.domain).rank()


def hessian_determinant(form: MultiPoly) -> MultiPoly:
    """det of the 3 x 3 matrix of second partials of a ternary form."""
    h = [[form.diff(i).diff(j) for j in range(3)] for i in range(3)]
    return (
        h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
        - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
        + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0])
    )


def is_triangle(cubic: MultiPoly) -> bool:
    """A ternary cubic equal (up to a unit) to its Hessian is a product of three independent linear forms."""
    if cubic.nvars != 3 or cubic.degree() != 3:
        return False
    hess = hessian_determinant(cubic)
    return bool(hess) and hess.is_proportional(cubic)


class TangentCone(NamedTuple):
    lowest_degree: int
    quadratic_rank: int
    kind: str


def tangent_cone(poly: MultiPoly, point: Sequence, domain: Domain) -> TangentCone:
    local = local_expansion(poly, point, domain)
    degree = local.lowest_degree()
    quad = local.homogeneous_part(2)
    rank = quadratic_rank(quad)
    if degree == 2:
        kind = "node" if rank == 3 else f"rank{rank}-double"
    elif degree == 3:
        kind = "cusp" if is_triangle(local.homogeneous_part(3)) else "triple"
    else:
        kind = f"order{degree}"
    return TangentCone(degree, rank, kind)


# ---------------- scan ----------------
def conjugate_kind(point: ConjugatePoint) -> str:
    return {3: "node", 0: "order 3"}.get(point.hessian_rank, f"hessian rank {point.hessian_rank}")


class SingularPoint(NamedTuple):
    coords: Tuple[int, ...]
    prime: int
    lowest_degree: int
    kind: str
    incidence: Tuple[int, ...]

    def bits(self, nclasses: int) -> str:
        return "".join("1" if i in self.incidence else "0" for i in range(nclasses))


class SingularLocus(NamedTuple):
    prime: int
    root: int
    points: List[SingularPoint]
    kinds: Dict[str, int]
    incidence_counts: Dict[str, Dict[int, int]]
    node_tags: List[Dict[str, int]]
    cusp_missing_tags: List[Dict[str, int]]
    through_all_cusps: List[str]
    conjugate: Tuple[ConjugatePoint, ...] = ()

    @property
    def rational(self) -> bool:
        return not self.conjugate

    def all_kinds(self) -> Dict[str, int]:
        """Kinds over F_{p^2}; a conjugate point with zero Hessian is only known to have order 3."""
        extra = Counter(conjugate_kind(pt) for pt in self.conjugate)
        return dict(sorted((Counter(self.kinds) + extra).items()))

    @property
    def complete(self) -> bool:
        return self.all_kinds() == EXPECTED_KINDS

    def histogram(self) -> Dict[str, Dict[int, int]]:
        return self.incidence_counts


def _incidence(point: Tuple[int, ...], reduced: List[MultiPoly]) -> Tuple[int, ...]:
    return tuple(i for i, q in enumerate(reduced) if q.evaluate(point) == 0)


def sextic_singular_locus(model: Optional[DerivedModel] = None, p: Optional[int] = None,
                          budget: Optional[int] = None) -> SingularLocus:
    model = model or derive_model(4)
    p = p or Verify.MODULAR_PRIMES[0]
    root = phi20_roots(p)[0]
    dom = GF(p)
    sextic = model.reduced(p, root)
    census: QuadricCensus = restrict_quadrics(eigenspace_chart(4))
    reduced = [c.reduced(p, root) for c in census.classes]

    found = scan_projective([sextic] + sextic.gradient(), p, budget)
    points = []
    for row in found.tolist():
        coords = normalize_point(row, p)
        cone = tangent_cone(sextic, coords, dom)
        points.append(SingularPoint(coords, p, cone.lowest_degree, cone.kind, _incidence(coords, reduced)))

    kinds = dict(sorted(Counter(pt.kind for pt in points).items()))
    incidence_counts = {
        kind: dict(sorted(Counter(len(pt.incidence) for pt in points if pt.kind == kind).items()))
        for kind in kinds
    }
    node_tags = [
        dict(sorted(Counter(census.classes[i].tag for i in pt.incidence).items()))
        for pt in points if pt.kind == "node"
    ]
    cusps = [pt for pt in points if pt.kind == "cusp"]
    cusp_missing = [
        dict(sorted(Counter(census.classes[i].tag for i in range(len(reduced)) if i not in pt.incidence).items()))
        for pt in cusps
    ]
    through_all = sorted({census.classes[i].label() for i in range(len(reduced))
                          if cusps and all(i in pt.incidence for pt in cusps)})
    LOGGER.info(f"Sextic at p={p}: {len(points)} singular points {kinds}")
    conjugate: Tuple[ConjugatePoint, ...] = ()
    if len(points) < EXPECTED_TOTAL:
        conjugate = tuple(pt for pt in singular_points_fp2(sextic, p, budget) if not pt.rational)
        LOGGER.warning(f"Sextic at p={p}: {len(conjugate)} singular points are not rational, found over F_{p}^2")
    return SingularLocus(p, root, points, kinds, incidence_counts, node_tags, cusp_missing, through_all, conjugate)


def singular_census(model: Optional[DerivedModel] = None, primes: Sequence[int] = (),
                    budget: Optional[int] = None) -> List[SingularLocus]:
    """Scan each prime in turn; points not rational over a given F_p are reported as conjugate there."""
    out = []
    for p in primes or Verify.MODULAR_PRIMES:
        try:
            out.append(sextic_singular_locus(model, p, budget))
        except ResourceBudgetError as err:
            LOGGER.warning(f"Sextic scan skipped at p={p}: {err}")
    return out


def incidence_summary(locus: SingularLocus) -> Dict[str, object]:
    return {
        "prime": locus.prime,
        "kinds": locus.kinds,
        "incidence": {kind: {str(k): v for k, v in hist.items()} for kind, hist in locus.incidence_counts.items()},
        "node_tags_uniform": all(tags == NODE_TAGS for tags in locus.node_tags),
        "cusp_missing": locus.cusp_missing_tags,
        "through_all_cusps": locus.through_all_cusps,
        "rational": locus.rational,
        "over F_p^2": locus.all_kinds(),
    }
