from functools import lru_cache

from Shimura.algebra.linalg import bareiss_det
from Shimura.helper.modal import Outcome, SuiteConfig
from Shimura.helper.report import Suite
from Shimura.surfaces.lattice import (
    DET_WITH_HYPERPLANE, DET_WITHOUT_CUBICS, RANK_TARGET, SearchResult, adjunction, all_synthemes, galois_module,
    search_assignment, synthematic_total, triangle_block,
)
from Shimura.surfaces.zeta import shimura_ns_module

suite = Suite("lattice")

LATTICE_TARGET = {"rank": RANK_TARGET, "without cubics": DET_WITHOUT_CUBICS, "with hyperplane": DET_WITH_HYPERPLANE}


@lru_cache(maxsize=1)
def _search() -> SearchResult:
    return search_assignment()


def _witness():
    found = _search().found
    if found is None:
        return synthematic_total(), "disjoint"
    return found.assignment, found.model


@suite.check("intersection-lattice", "rank 46; determinants -2^45 3 and -2^33 3", expected=LATTICE_TARGET)
def intersection_lattice(config: SuiteConfig) -> Outcome:
    result = _search()
    found = result.found
    inputs = {"synthemes": len(all_synthemes()), "orbits": result.candidates,
              "certified": len(result.certificates)}
    if found is None:
        return Outcome(observed=None, passed=False, inputs=inputs)
    observed = {"rank": found.rank, "without cubics": found.det_without_cubics,
                "with hyperplane": found.det_with_hyperplane}
    outcome = Outcome(observed=observed, passed=result.consistent(),
                      inputs={**inputs, "model": found.model, "omitted cubics": list(found.omitted_cubics),
                              "omitted nodes": list(found.omitted_nodes)})
    if found.model != "disjoint":
        outcome.flags.append(f"the fingerprint needs the {found.model} incidence between nodes and cubics")
    return outcome


@suite.check("galois-module", "N = Q^10 + Q(sqrt5)^6 + Q(zeta5)^6",
             expected={"Q": 10, "Q(sqrt5)": 6, "Q(zeta5)": 6})
def galois_structure(config: SuiteConfig) -> Outcome:
    assignment, model = _witness()
    module = galois_module(assignment, model)
    expected = shimura_ns_module()
    return Outcome(expected=expected.multiplicities(), observed=module.multiplicities(),
                   passed=module.multiplicities() == expected.multiplicities() and module.rank == expected.rank,
                   inputs={"model": model})


@suite.check("adjunction", "K^2 = 9; every curve of the configuration is rational",
             expected={"K^2": 9, "C^2 + K.C != -2": {}})
def adjunction_check(config: SuiteConfig) -> Outcome:
    assignment, model = _witness()
    result = adjunction(assignment, model)
    bad = {name: value for name, value in result.genera.items() if value != -2}
    return Outcome(observed={"K^2": result.k_squared, "C^2 + K.C != -2": bad}, passed=result.passed)


@suite.check("triangle-block", "three (-3)-curves meeting pairwise once", expected=-16)
def triangle(config: SuiteConfig) -> Outcome:
    det = bareiss_det(triangle_block())
    return Outcome(observed=det, passed=det == -16)
