"""
Raw point counts of the projective surface models and the resolution of S.

Counts are exhaustive scans of P^3(F_p). The singular points of S over F_p
are found with the Jacobian criterion and blown up until every chart of the
strict transform passes the Jacobian test again. A rational singular point
adds the F_p points of its exceptional locus minus one to the count. Nodes
resolve to a smooth conic and cusps to a triangle of lines in one step.
"""

from typing import Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from Shimura.algebra.domains import GF
from Shimura.algebra.multipoly import MultiPoly
from Shimura.algebra.projective import normalize_point, projective_size, scan_projective
from Shimura.config import Verify
from Shimura.helper.exceptions import BadPrimeError, ProfileMismatchError, ResourceBudgetError
from Shimura.logger import LOGGER
from Shimura.moduli.canonical import FIVE_CYCLE, TRANSPOSITION, Perm
from Shimura.moduli.sextic import is_triangle, local_expansion, quadratic_rank
from Shimura.surfaces.library import s_sextic_poly, x_quotient_poly

PROJECTIVE_MODELS = ("S_sextic", "X_quotient")
# z1 -> z2 -> z4 -> z3 -> z1 on 0-based indices
QUOTIENT_CYCLE: Perm = (1, 3, 0, 2)


def model_form(model: str, p: int) -> MultiPoly:
    if model not in PROJECTIVE_MODELS:
        raise ProfileMismatchError(f"{model} is not a projective model")
    form = s_sextic_poly() if model == "S_sextic" else x_quotient_poly()
    return form.map_coeffs(GF(p).convert, GF(p))


# ---------------- symmetry checksums ----------------
def _s5_image(point: Tuple[int, ...], perm: Perm, p: int) -> Tuple[int, ...]:
    """A permutation of x_1..x_5 acting on a point of s_1 = 0 written in x_1..x_4."""
    full = list(point) + [-sum(point) % p]
    moved = [0] * 5
    for i, image in enumerate(perm):
        moved[image] = full[i]
    return normalize_point(moved[:4], p)


def _cycle_image(point: Tuple[int, ...], perm: Perm, p: int) -> Tuple[int, ...]:
    moved = [0] * len(point)
    for i, image in enumerate(perm):
        moved[image] = point[i]
    return normalize_point(moved, p)


def symmetry_checksum(model: str, points: Set[Tuple[int, ...]], p: int) -> bool:
    """The point set is stable under the coordinate symmetries of the equation."""
    if model == "S_sextic":
        return all({_s5_image(pt, g, p) for pt in points} == points for g in (TRANSPOSITION, FIVE_CYCLE))
    return {_cycle_image(pt, QUOTIENT_CYCLE, p) for pt in points} == points


class ProjectiveCount(NamedTuple):
    model: str
    p: int
    count: int
    ambient: int
    symmetric: bool


def count_projective_model(model: str, p: int, budget: Optional[int] = None) -> ProjectiveCount:
    """#model(F_p) by a full scan of P^3(F_p)."""
    if p in (2, 5):
        raise BadPrimeError(f"{model} is not counted at p = {p}")
    budget = budget or Verify.SCAN_BUDGET
    ambient = projective_size(3, p)
    if ambient > budget:
        raise ResourceBudgetError(f"P^3(F_{p}) has {ambient} points, over the budget {budget}")
    rows = scan_projective([model_form(model, p)], p, budget)
    points = {tuple(int(v) for v in row) for row in rows}
    symmetric = symmetry_checksum(model, points, p)
    LOGGER.info(f"#{model}(F_{p}) = {len(points)} of {ambient}, symmetry checksum {symmetric}")
    return ProjectiveCount(model, p, len(points), ambient, symmetric)


# ---------------- resolution ----------------
MAX_BLOW_UPS = 8


class ExceptionalCurve(NamedTuple):
    """The exceptional locus over one rational singular point after it is resolved."""
    point: Tuple[int, ...]
    kind: str
    rational_points: int
    blow_ups: int = 1

    @property
    def correction(self) -> int:
        return self.rational_points - 1


def singular_points(form: MultiPoly, p: int, budget: Optional[int] = None) -> np.ndarray:
    return scan_projective([form] + form.gradient(), p, budget)


def strict_transform(local: MultiPoly, chart: int) -> MultiPoly:
    """Blow up the origin in the chart x_i -> x_c x_i (i != c) and divide out x_c^m, m the multiplicity."""
    m = local.lowest_degree()
    terms = {}
    for exps, c in local.terms.items():
        moved = list(exps)
        moved[chart] = sum(exps) - m
        terms[tuple(moved)] = c
    return MultiPoly(local.nvars, terms, local.domain, clean=False)


def translate(poly: MultiPoly, point: Sequence[int]) -> MultiPoly:
    gens = MultiPoly.gens(poly.nvars, poly.domain)
    return poly.substitute([g + MultiPoly.constant(poly.nvars, x, poly.domain) for g, x in zip(gens, point)])


def is_smooth_at(poly: MultiPoly, point: Sequence[int]) -> bool:
    """Jacobian criterion at a point of the zero set."""
    return any(d.evaluate(point) for d in poly.gradient())


def exceptional_points(local: MultiPoly, p: int, depth: int = 1) -> Tuple[int, int]:
    """
    F_p points of the exceptional locus over the origin of a local surface
    equation, and the number of blow-ups spent.

    Each rational point of the projectivised tangent cone is looked at in its
    own chart; where the strict transform is still singular the point is
    blown up again and replaced by its own exceptional locus. Singular points
    off F_p carry no rational points and are left alone.
    """
    if depth > MAX_BLOW_UPS:
        raise ProfileMismatchError(f"still singular after {MAX_BLOW_UPS} blow-ups over F_{p}")
    cone = local.homogeneous_part(local.lowest_degree())
    transforms: Dict[int, MultiPoly] = {}
    points, blow_ups = 0, 1
    for row in scan_projective([cone], p):
        direction = normalize_point(row, p)
        chart = next(i for i, x in enumerate(direction) if x)
        if chart not in transforms:
            transforms[chart] = strict_transform(local, chart)
        centre = list(direction)
        centre[chart] = 0
        if is_smooth_at(transforms[chart], centre):
            points += 1
            continue
        below, used = exceptional_points(translate(transforms[chart], centre), p, depth + 1)
        points += below
        blow_ups += used
    return points, blow_ups


def exceptional_curve(form: MultiPoly, point: Sequence[int], p: int) -> ExceptionalCurve:
    """Resolve one rational singular point and count its exceptional locus over F_p."""
    local = local_expansion(form, point, GF(p))
    degree = local.lowest_degree()
    cone = local.homogeneous_part(degree)
    if degree == 2 and quadratic_rank(cone) == 3:
        kind = "node"
    elif degree == 3 and is_triangle(cone):
        kind = "cusp"
    else:
        kind = f"order {degree}"
    points, blow_ups = exceptional_points(local, p)
    if blow_ups > 1:
        LOGGER.debug(f"{tuple(point)} over F_{p}: {blow_ups} blow-ups, {points} exceptional points")
    return ExceptionalCurve(tuple(int(v) for v in point), kind, points, blow_ups)


class Resolution(NamedTuple):
    p: int
    raw: int
    curves: List[ExceptionalCurve]

    @property
    def resolved(self) -> int:
        return self.raw + sum(curve.correction for curve in self.curves)

    def kinds(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for curve in self.curves:
            out[curve.kind] = out.get(curve.kind, 0) + 1
        return out


def resolve_sextic(p: int, budget: Optional[int] = None) -> Resolution:
    """Raw count of S plus the blow-up corrections at its rational singular points."""
    if p in (2, 3, 5):
        raise BadPrimeError(f"S has extra singularities or no cusp triangles at p = {p}")
    raw = count_projective_model("S_sextic", p, budget)
    if not raw.symmetric:
        raise ProfileMismatchError(f"point set of S over F_{p} fails the S_5 checksum")
    form = model_form("S_sextic", p)
    curves = [exceptional_curve(form, row, p) for row in singular_points(form, p, budget)]
    resolution = Resolution(p, raw.count, curves)
    LOGGER.info(f"S over F_{p}: raw {raw.count}, singular {resolution.kinds()}, resolved {resolution.resolved}")
    return resolution
