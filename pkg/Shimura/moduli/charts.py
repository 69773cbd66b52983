"""Eigenspace charts in P^15 and the restriction of the 136 quadrics Q[eps; eps'] to them."""

from collections import Counter
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from Shimura.algebra.cyclo import ZERO, CycloElement, reduce_mod_p
from Shimura.algebra.domains import CYCLO, GF
from Shimura.algebra.linalg import ExactMatrix
from Shimura.algebra.multipoly import MultiPoly
from Shimura.helper.exceptions import ProfileMismatchError
from Shimura.logger import LOGGER
from Shimura.theta.characteristics import Characteristic, even_characteristics, quadric_terms
from Shimura.theta.heisenberg import Chart, tensor_eigenspace


class EigenspaceChart(NamedTuple):
    k: int
    chart: Chart
    names: Tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.chart.dim

    def matrix(self) -> List[List[CycloElement]]:
        return self.chart.matrix()

    def linear_forms(self) -> List[MultiPoly]:
        """X_sigma as linear forms in the chart variables."""
        d = self.dim
        forms = []
        for row in self.matrix():
            terms = {}
            for j, c in enumerate(row):
                exps = [0] * d
                exps[j] = 1
                terms[tuple(exps)] = c
            forms.append(MultiPoly(d, terms, CYCLO))
        return forms

    def reduced_matrix(self, p: int, root: int) -> np.ndarray:
        return np.array([[reduce_mod_p(c, p, root) for c in row] for row in self.matrix()], dtype=np.int64)

    def reduced_forms(self, p: int, root: int) -> List[MultiPoly]:
        d = self.dim
        dom = GF(p)
        forms = []
        for row in self.reduced_matrix(p, root).tolist():
            terms = {}
            for j, c in enumerate(row):
                exps = [0] * d
                exps[j] = 1
                terms[tuple(exps)] = c
            forms.append(MultiPoly(d, terms, dom))
        return forms


@lru_cache(maxsize=None)
def eigenspace_chart(k: int) -> EigenspaceChart:
    chart = tensor_eigenspace(k)
    names = tuple(f"y{i}{j}" for i, j in chart.pairs)
    return EigenspaceChart(k, chart, names)


class QuadricClass(NamedTuple):
    """Restriction of a group of characteristics' quadrics, normalised to a leading 1."""
    matrix: Tuple[Tuple[CycloElement, ...], ...]
    members: Tuple[Characteristic, ...]
    rank: int
    tag: str

    @property
    def multiplicity(self) -> int:
        return len(self.members)

    def poly(self) -> MultiPoly:
        d = len(self.matrix)
        terms = {}
        for a in range(d):
            for b in range(a, d):
                c = self.matrix[a][b] if a == b else self.matrix[a][b] * 2
                if c:
                    exps = [0] * d
                    exps[a] += 1
                    exps[b] += 1
                    terms[tuple(exps)] = c
        return MultiPoly(d, terms, CYCLO)

    def reduced(self, p: int, root: int) -> MultiPoly:
        return self.poly().map_coeffs(lambda c: reduce_mod_p(c, p, root), GF(p))

    def label(self) -> str:
        return f"{self.tag}:{self.members[0].label()}"


def restricted_matrix(c: Characteristic, columns: Sequence[Sequence[CycloElement]]) -> List[List[CycloElement]]:
    """Symmetric d x d matrix of Q_c(C y)."""
    d = len(columns)
    m = [[ZERO] * d for _ in range(d)]
    for sign, i, j in quadric_terms(c):
        for a in range(d):
            ca = columns[a][i]
            if not ca:
                continue
            for b in range(d):
                cb = columns[b][j]
                if cb:
                    value = ca * cb * sign
                    m[a][b] = m[a][b] + value
    # Q(Cy) = y^T M y with M the symmetrisation
    return [[(m[a][b] + m[b][a]) / 2 for b in range(d)] for a in range(d)]


def _normalize(m: List[List[CycloElement]]) -> Optional[Tuple[Tuple[CycloElement, ...], ...]]:
    lead = next((x for row in m for x in row if x), None)
    if lead is None:
        return None
    inv = lead.inverse()
    return tuple(tuple(x * inv for x in row) for row in m)


def _tag(k: int, multiplicity: int, rank: int) -> str:
    if k == 4:
        return {10: "type10", 5: "type5", 1: "invariant"}.get(multiplicity, f"mult{multiplicity}")
    return {2: "conic-reducible", 3: "conic-irreducible"}.get(rank, f"rank{rank}")


class QuadricCensus(NamedTuple):
    k: int
    classes: List[QuadricClass]
    zero_members: Tuple[Characteristic, ...]

    def of_tag(self, tag: str) -> List[QuadricClass]:
        return [c for c in self.classes if c.tag == tag]

    def multiplicity_profile(self) -> Dict[int, int]:
        return dict(sorted(Counter(c.multiplicity for c in self.classes).items()))

    def rank_profile(self) -> Dict[int, int]:
        return dict(sorted(Counter(c.rank for c in self.classes).items()))

    def dump(self) -> List[dict]:
        return [{"tag": c.tag, "multiplicity": c.multiplicity, "rank": c.rank,
                 "members": [m.label() for m in c.members]} for c in self.classes]


def restrict_quadrics(chart: EigenspaceChart, strict: bool = True) -> QuadricCensus:
    groups: Dict[tuple, List[Characteristic]] = {}
    zero = []
    for c in even_characteristics(4):
        key = _normalize(restricted_matrix(c, chart.chart.columns))
        if key is None:
            zero.append(c)
        else:
            groups.setdefault(key, []).append(c)
    classes = []
    for key, members in groups.items():
        rank = ExactMatrix([list(row) for row in key], CYCLO).rank()
        classes.append(QuadricClass(key, tuple(members), rank, _tag(chart.k, len(members), rank)))
    classes.sort(key=lambda cls: (-cls.multiplicity, cls.members[0]))
    census = QuadricCensus(chart.k, classes, tuple(zero))
    LOGGER.info(f"k={chart.k}: {len(classes)} quadric classes, profile {census.multiplicity_profile()}, {len(zero)} restrict to zero")
    if strict:
        check_profile(census)
    return census


def check_profile(census: QuadricCensus):
    if census.k == 4:
        expected = {10: 6, 5: 15, 1: 1}
        ok = census.multiplicity_profile() == expected and not census.zero_members
    else:
        ok = len(census.zero_members) == 1 and census.multiplicity_profile() == {5: 27}
    if not ok:
        raise ProfileMismatchError(f"k={census.k} census {census.multiplicity_profile()} zero={len(census.zero_members)}: {census.dump()}")
