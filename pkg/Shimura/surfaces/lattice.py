"""
The configuration of 51 rational curves on the resolved Shimura surface.

Curves, in Gram order: 24 exceptional (-2)-curves over the nodes (six Galois
orbits of four), 5 triangles of (-3)-curves over the cusps, and 12 twisted
cubics in 6 conjugate pairs. At every cusp each conjugate pair meets one
triangle component, every component is met by two pairs, so the data at a
cusp is a partition of the six pairs into three duads. Such a partition is a
syntheme of {0..5}; an assignment is one syntheme per cusp, and relabelling
pairs, cusps or components does not change the lattice, so the search runs
over S_6 orbits of syntheme multisets.
"""

from itertools import combinations, combinations_with_replacement, permutations, product
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from Shimura.algebra.linalg import bareiss_det, bareiss_rank
from Shimura.helper.exceptions import DomainError, ProfileMismatchError
from Shimura.helper.executor import map_ordered
from Shimura.logger import LOGGER
from Shimura.surfaces.zeta import NSModule, NSSummand

NODES, CUSPS, PAIRS = 24, 5, 6
COMPONENTS = 3 * CUSPS
CUBICS = 2 * PAIRS
SIZE = NODES + COMPONENTS + CUBICS

RANK_TARGET = 46
DET_WITHOUT_CUBICS = -(2 ** 45) * 3
DET_WITH_HYPERPLANE = -(2 ** 33) * 3
INCIDENCE_MODELS = ("disjoint", "orbit-nodes")

Duad = FrozenSet[int]
Syntheme = Tuple[Duad, Duad, Duad]


# ---------------- labels ----------------
class CurveLabel(NamedTuple):
    kind: str
    index: Tuple[int, ...]
    square: int


def node_index(orbit: int, k: int) -> int:
    return 4 * orbit + k


def component_index(cusp: int, c: int) -> int:
    return NODES + 3 * cusp + c


def cubic_index(pair: int, side: int) -> int:
    return NODES + COMPONENTS + 2 * pair + side


def curve_labels() -> List[CurveLabel]:
    labels = [CurveLabel("node", (o, k), -2) for o in range(PAIRS) for k in range(4)]
    labels += [CurveLabel("cusp-component", (i, c), -3) for i in range(CUSPS) for c in range(3)]
    labels += [CurveLabel("cubic", (k, side), -3) for k in range(PAIRS) for side in range(2)]
    return labels


# ---------------- assignments ----------------
def all_synthemes() -> List[Syntheme]:
    out = []
    for first in range(1, 6):
        rest = [x for x in range(1, 6) if x != first]
        for second in ((rest[0], other) for other in rest[1:]):
            third = tuple(x for x in rest if x not in second)
            out.append(tuple(sorted((frozenset((0, first)), frozenset(second), frozenset(third)), key=sorted)))
    return out


class IncidenceAssignment(NamedTuple):
    """For each cusp, the duad of pairs meeting each of its three components."""
    synthemes: Tuple[Syntheme, ...]

    def component_of(self, cusp: int, pair: int) -> int:
        return next(c for c, duad in enumerate(self.synthemes[cusp]) if pair in duad)

    def validate(self):
        if len(self.synthemes) != CUSPS:
            raise DomainError(f"need {CUSPS} cusps, got {len(self.synthemes)}")
        for syntheme in self.synthemes:
            if sorted(x for duad in syntheme for x in duad) != list(range(PAIRS)):
                raise DomainError(f"{syntheme} does not split the six pairs into duads")


def build_gram(assignment: IncidenceAssignment, model: str = "disjoint") -> List[List[int]]:
    """Intersection matrix of the 51 curves."""
    assignment.validate()
    if model not in INCIDENCE_MODELS:
        raise DomainError(f"unknown incidence model {model!r}")
    gram = [[0] * SIZE for _ in range(SIZE)]
    for i, label in enumerate(curve_labels()):
        gram[i][i] = label.square
    for cusp in range(CUSPS):
        for a, b in combinations(range(3), 2):
            i, j = component_index(cusp, a), component_index(cusp, b)
            gram[i][j] = gram[j][i] = 1
        for pair, side in product(range(PAIRS), range(2)):
            i, j = cubic_index(pair, side), component_index(cusp, assignment.component_of(cusp, pair))
            gram[i][j] = gram[j][i] = 1
    if model == "orbit-nodes":
        # cubic (k, side) passes through the nodes 4k + side and 4k + side + 2
        for pair, side in product(range(PAIRS), range(2)):
            for k in (side, side + 2):
                i, j = cubic_index(pair, side), node_index(pair, k)
                gram[i][j] = gram[j][i] = 1
    return gram


def with_hyperplane(gram: List[List[int]]) -> List[List[int]]:
    """Adjoin H: H^2 = 6, H.cubic = 3, zero against nodes and cusp components."""
    out = [row[:] + [0] for row in gram]
    h_row = [0] * SIZE + [6]
    for pair, side in product(range(PAIRS), range(2)):
        i = cubic_index(pair, side)
        h_row[i] = out[i][SIZE] = 3
    out.append(h_row)
    return out


def principal_minor(gram: List[List[int]], keep: Sequence[int]) -> int:
    return bareiss_det([[gram[i][j] for j in keep] for i in keep])


# ---------------- orbit enumeration ----------------
def _act(perm: Sequence[int], syntheme: Syntheme) -> Syntheme:
    return tuple(sorted((frozenset(perm[x] for x in duad) for duad in syntheme), key=sorted))


def _key(synthemes: Sequence[Syntheme]) -> Tuple:
    return tuple(sorted(tuple(tuple(sorted(d)) for d in s) for s in synthemes))


def orbit_representatives() -> List[IncidenceAssignment]:
    """One syntheme multiset per S_6 orbit."""
    synthemes = all_synthemes()
    perms = list(permutations(range(PAIRS)))
    seen, reps = set(), []
    for multiset in combinations_with_replacement(synthemes, CUSPS):
        key = _key(multiset)
        if key in seen:
            continue
        orbit = {_key([_act(perm, s) for s in multiset]) for perm in perms}
        seen |= orbit
        reps.append(IncidenceAssignment(tuple(multiset)))
    LOGGER.info(f"{len(reps)} assignment orbits out of {len(seen)} syntheme multisets")
    return reps


def synthematic_total() -> IncidenceAssignment:
    """Five synthemes covering all fifteen duads, the orbit picked out by the S_5 symmetry."""
    synthemes = all_synthemes()
    for five in combinations(synthemes, CUSPS):
        duads = {d for s in five for d in s}
        if len(duads) == 15:
            return IncidenceAssignment(five)
    raise ProfileMismatchError("no synthematic total")


# ---------------- certificates ----------------
class LatticeCertificate(NamedTuple):
    assignment: IncidenceAssignment
    model: str
    rank: int
    det_without_cubics: Optional[int]
    omitted_cubics: Tuple[int, ...]
    det_with_hyperplane: Optional[int]
    omitted_nodes: Tuple[int, ...]

    @property
    def passed(self) -> bool:
        return (self.rank == RANK_TARGET and self.det_without_cubics == DET_WITHOUT_CUBICS
                and self.det_with_hyperplane == DET_WITH_HYPERPLANE)

    def fingerprint(self) -> Tuple:
        return self.rank, self.det_without_cubics, self.det_with_hyperplane


def _cubic_omissions():
    """Five cubics from five different pairs; the cubics of a pair are interchangeable in the lattice."""
    for kept_pair in range(PAIRS):
        yield tuple(cubic_index(k, 0) for k in range(PAIRS) if k != kept_pair)


def certify(assignment: IncidenceAssignment, model: str) -> LatticeCertificate:
    gram = build_gram(assignment, model)
    rank = bareiss_rank(gram)
    det1, omitted1 = None, ()
    for omitted in _cubic_omissions():
        keep = [i for i in range(SIZE) if i not in omitted]
        det = principal_minor(gram, keep)
        if det1 is None or det == DET_WITHOUT_CUBICS:
            det1, omitted1 = det, omitted
        if det == DET_WITHOUT_CUBICS or rank != RANK_TARGET:
            break
    extended = with_hyperplane(gram)
    omitted2 = tuple(node_index(orbit, 0) for orbit in range(PAIRS))
    keep = [i for i in range(SIZE + 1) if i not in omitted2]
    det2 = principal_minor(extended, keep)
    return LatticeCertificate(assignment, model, rank, det1, omitted1, det2, omitted2)


class SearchResult(NamedTuple):
    certificates: List[LatticeCertificate]
    candidates: int

    @property
    def found(self) -> Optional[LatticeCertificate]:
        return next((c for c in self.certificates if c.passed), None)

    def consistent(self) -> bool:
        """Every passing assignment gives the same fingerprint."""
        return len({c.fingerprint() for c in self.certificates if c.passed}) <= 1


def search_assignment(models: Sequence[str] = INCIDENCE_MODELS,
                      candidates: Optional[List[IncidenceAssignment]] = None) -> SearchResult:
    """Certify every orbit under each incidence model; the targets are rank 46 and the two determinants."""
    candidates = candidates or orbit_representatives()
    jobs = [(assignment, model) for model in models for assignment in candidates]
    certificates = map_ordered(lambda job: certify(*job), jobs)
    result = SearchResult(certificates, len(candidates))
    best = result.found
    if best is None:
        ranked = sorted(certificates, key=lambda c: abs(c.rank - RANK_TARGET))[:3]
        LOGGER.warning(f"no assignment meets the lattice fingerprint; closest {[c.fingerprint() for c in ranked]}")
    else:
        LOGGER.info(f"lattice fingerprint met under the {best.model} model")
    return result


# ---------------- Galois structure and adjunction ----------------
def galois_permutation() -> List[int]:
    """Frobenius generator: rotates each node orbit, swaps the cubics of each pair, fixes cusp data."""
    image = list(range(SIZE))
    for orbit, k in product(range(PAIRS), range(4)):
        image[node_index(orbit, k)] = node_index(orbit, (k + 1) % 4)
    for pair, side in product(range(PAIRS), range(2)):
        image[cubic_index(pair, side)] = cubic_index(pair, 1 - side)
    return image


def is_invariant(gram: List[List[int]], image: Sequence[int]) -> bool:
    return all(gram[image[i]][image[j]] == gram[i][j] for i in range(SIZE) for j in range(SIZE))


def galois_module(assignment: IncidenceAssignment, model: str = "disjoint") -> NSModule:
    """Split the span into rational classes, Q(sqrt 5) pairs and Q(zeta_5) orbits."""
    gram = build_gram(assignment, model)
    if not is_invariant(gram, galois_permutation()):
        raise ProfileMismatchError(f"the {model} configuration is not Galois stable")
    rank = bareiss_rank(gram)
    rational = rank - 2 * PAIRS - 4 * PAIRS
    return NSModule(summands=[
        NSSummand(field="Q", multiplicity=rational),
        NSSummand(field="Q(sqrt5)", multiplicity=PAIRS),
        NSSummand(field="Q(zeta5)", multiplicity=PAIRS),
    ])


def canonical_vector() -> List[int]:
    """K = 2H - sum of the cusp triangles, in the basis of the 51 curves and H."""
    vector = [0] * (SIZE + 1)
    for cusp, c in product(range(CUSPS), range(3)):
        vector[component_index(cusp, c)] = -1
    vector[SIZE] = 2
    return vector


def pairing(gram: List[List[int]], u: Sequence[int], v: Sequence[int]) -> int:
    return sum(u[i] * gram[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j])


class Adjunction(NamedTuple):
    k_squared: int
    genera: Dict[str, int]

    @property
    def passed(self) -> bool:
        return self.k_squared == 9 and all(value == -2 for value in self.genera.values())


def adjunction(assignment: IncidenceAssignment, model: str = "disjoint") -> Adjunction:
    """K^2 and C^2 + K.C for every curve of the configuration."""
    extended = with_hyperplane(build_gram(assignment, model))
    k = canonical_vector()
    genera = {}
    for i, label in enumerate(curve_labels()):
        unit = [0] * (SIZE + 1)
        unit[i] = 1
        genera[f"{label.kind}{label.index}"] = extended[i][i] + pairing(extended, k, unit)
    return Adjunction(pairing(extended, k, k), genera)


def triangle_block() -> List[List[int]]:
    return [[-3 if i == j else 1 for j in range(3)] for i in range(3)]
