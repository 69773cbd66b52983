"""
Polynomial relations among the second order theta constants in genus 4.

F_J is the Schottky form with every theta^2 replaced by its quadric. The two
degree 32 relations come from genus 2 quartic identities
r1 + s2 r2 + s3 r3 + s4 r4 = 0 among fourth powers of thetanulls: after the
substitution theta[c]^4 -> prod_{a,b} theta[00 eps; a b eps'] each r_i is a
square root of a product R_i of four quadrics, and the product over all
eight sign patterns is a polynomial in the R_i.
"""

from functools import lru_cache
from typing import Callable, List, Tuple

from Shimura.algebra.circuit import EvalCircuit
from Shimura.algebra.domains import QQ
from Shimura.algebra.multipoly import MultiPoly
from Shimura.helper.modal import Outcome
from Shimura.logger import LOGGER
from Shimura.theta.characteristics import Characteristic, embed_genus2, even_characteristics, quadric_poly, quadric_terms
from Shimura.theta.series import schottky_value
from Shimura.theta.siegel import SiegelMatrix

# theta[00;00]^4 - theta[00;10]^4 - theta[10;00]^4 - theta[11;11]^4
RIEMANN_FIRST = (
    (Characteristic((0, 0), (0, 0)), 1),
    (Characteristic((0, 0), (1, 0)), -1),
    (Characteristic((1, 0), (0, 0)), -1),
    (Characteristic((1, 1), (1, 1)), -1),
)
# The printed second identity carries the odd [10;10], whose thetanull vanishes, and then
# fails. With [10;01] in its place the four fourth powers cancel as quartics in the second
# order constants (both sides are 16 X00 X01 X10 X11); quartic_identity checks it exactly.
RIEMANN_SECOND = (
    (Characteristic((0, 1), (0, 0)), 1),
    (Characteristic((0, 1), (1, 0)), -1),
    (Characteristic((1, 0), (0, 0)), -1),
    (Characteristic((1, 0), (0, 1)), 1),
)
SECOND_RELATION_FLAG = "second genus 2 quartic identity uses [10;01] in place of the odd [10;10]"
DEGREE_FLAG = "relations built in degree 32; no degree 16 factorisation is attempted"


def _quadric_node(circuit: EvalCircuit, c: Characteristic) -> int:
    ids, coeffs = [], []
    seen = {}
    for sign, i, j in quadric_terms(c):
        key = (min(i, j), max(i, j))
        if key in seen:
            coeffs[seen[key]] += sign
            continue
        seen[key] = len(ids)
        ids.append(circuit.mul([circuit.var(i), circuit.var(j)]))
        coeffs.append(sign)
    return circuit.add(ids, coeffs)


@lru_cache(maxsize=None)
def schottky_circuit() -> EvalCircuit:
    """F_J = 16 sum Q_c^8 - (sum Q_c^4)^2 over the 136 even characteristics."""
    circuit = EvalCircuit(16, "F_J")
    fourth, eighth = [], []
    for c in even_characteristics(4):
        q4 = circuit.pow(_quadric_node(circuit, c), 4)
        fourth.append(q4)
        eighth.append(circuit.pow(q4, 2))
    s8 = circuit.add(eighth)
    s4 = circuit.add(fourth)
    out = circuit.add([s8, circuit.pow(s4, 2)], [16, -1])
    circuit.set_output(out, 16)
    return circuit


def schottky_forms() -> Tuple[Callable[[SiegelMatrix, float], complex], EvalCircuit]:
    return schottky_value, schottky_circuit()


def _relation_circuit(relation, label: str) -> EvalCircuit:
    circuit = EvalCircuit(16, label)
    products = []
    for c, _ in relation:
        quadrics = [_quadric_node(circuit, embed_genus2(c, a, b)) for a in (0, 1) for b in (0, 1)]
        products.append(circuit.mul(quadrics))
    r1, r2, r3, r4 = products
    # prod over signs of (r1 +- r2 +- r3 +- r4) = (u^2 - 4(R1R2 + R3R4))^2 - 64 R1R2R3R4
    u = circuit.add([r1, r2, r3, r4], [1, 1, -1, -1])
    cross = circuit.add([circuit.mul([r1, r2]), circuit.mul([r3, r4])])
    inner = circuit.add([circuit.pow(u, 2), cross], [1, -4])
    out = circuit.add([circuit.pow(inner, 2), circuit.mul([r1, r2, r3, r4])], [1, -64])
    circuit.set_output(out, 32)
    return circuit


@lru_cache(maxsize=None)
def eqmod_circuits() -> Tuple[EvalCircuit, EvalCircuit]:
    LOGGER.info("Building the two degree 32 relation circuits; " + DEGREE_FLAG)
    return _relation_circuit(RIEMANN_FIRST, "relation-1"), _relation_circuit(RIEMANN_SECOND, "relation-2")


def quartic_identity(relation) -> MultiPoly:
    """sum sign theta[c]^4 as a quartic in the genus 2 second order constants; zero exactly when the identity holds."""
    total = MultiPoly(4, {}, QQ)
    for c, sign in relation:
        # odd thetanulls vanish identically
        if c.is_even:
            total = total + (quadric_poly(c) ** 2).scale(sign)
    return total


def relation_flags() -> List[str]:
    return [SECOND_RELATION_FLAG, DEGREE_FLAG]


def flagged(outcome: Outcome) -> Outcome:
    outcome.flags.extend(flag for flag in relation_flags() if flag not in outcome.flags)
    return outcome
