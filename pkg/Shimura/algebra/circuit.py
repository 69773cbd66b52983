"""Evaluation circuits: straight-line programs for the large theta invariants."""

from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

from Shimura.algebra.multipoly import MultiPoly
from Shimura.helper.exceptions import DomainError


class Node(NamedTuple):
    kind: str  # input | const | sum | prod | pow
    args: Tuple
    degree: int


class EvalCircuit:
    """Nodes only reference earlier nodes, so the graph is acyclic by construction."""

    def __init__(self, ninputs: int, label: str = ""):
        self.ninputs = ninputs
        self.label = label
        self.nodes: List[Node] = []
        self.output: Optional[int] = None
        self.declared_degree: Optional[int] = None
        self._inputs = [self._push(Node("input", (i,), 1)) for i in range(ninputs)]

    def _push(self, node: Node) -> int:
        refs = node.args[0] if node.kind in ("sum", "prod") else (node.args[0],) if node.kind == "pow" else ()
        if any(ref >= len(self.nodes) for ref in refs):
            raise DomainError("circuit node references a later node")
        self.nodes.append(node)
        return len(self.nodes) - 1

    def var(self, i: int) -> int:
        return self._inputs[i]

    def const(self, value) -> int:
        return self._push(Node("const", (value,), 0))

    def add(self, ids: Sequence[int], coeffs: Optional[Sequence] = None) -> int:
        coeffs = tuple(coeffs) if coeffs is not None else (1,) * len(ids)
        deg = max(self.nodes[i].degree for i in ids)
        return self._push(Node("sum", (tuple(ids), coeffs), deg))

    def mul(self, ids: Sequence[int]) -> int:
        return self._push(Node("prod", (tuple(ids),), sum(self.nodes[i].degree for i in ids)))

    def pow(self, node: int, exponent: int) -> int:
        return self._push(Node("pow", (node, exponent), self.nodes[node].degree * exponent))

    def set_output(self, node: int, declared_degree: int):
        if self.nodes[node].degree > declared_degree:
            raise DomainError(f"declared degree {declared_degree} below the structural bound {self.nodes[node].degree}")
        self.output = node
        self.declared_degree = declared_degree

    def degree_bound(self) -> int:
        return self.nodes[self.output].degree

    def evaluate(self, values: Sequence, modulus: Optional[int] = None, convert: Optional[Callable] = None):
        """Evaluate over any commutative ring the values live in (complex, numpy arrays, MultiPoly, F_p ints)."""
        if len(values) != self.ninputs:
            raise DomainError(f"{len(values)} values for {self.ninputs} inputs")
        convert = convert or (lambda c: c)
        reduce = (lambda x: x % modulus) if modulus else (lambda x: x)
        cache = [None] * len(self.nodes)
        for idx, node in enumerate(self.nodes[: self.output + 1]):
            if node.kind == "input":
                cache[idx] = values[node.args[0]]
            elif node.kind == "const":
                cache[idx] = convert(node.args[0])
            elif node.kind == "sum":
                ids, coeffs = node.args
                acc = None
                for ref, c in zip(ids, coeffs):
                    term = cache[ref] if c == 1 else cache[ref] * convert(c)
                    acc = term if acc is None else acc + term
                cache[idx] = reduce(acc)
            elif node.kind == "prod":
                acc = None
                for ref in node.args[0]:
                    acc = cache[ref] if acc is None else reduce(acc * cache[ref])
                cache[idx] = acc
            else:
                ref, exponent = node.args
                cache[idx] = _power(cache[ref], exponent, reduce)
        return cache[self.output]

    def substitute_linear(self, images: Sequence[MultiPoly]) -> MultiPoly:
        """Expand the circuit after substituting polynomials for the inputs (the restriction to a chart)."""
        if len(images) != self.ninputs:
            raise DomainError(f"{len(images)} images for {self.ninputs} inputs")
        target = images[0]
        return self.evaluate(list(images), convert=lambda c: MultiPoly.constant(target.nvars, c, target.domain))


def _power(base, exponent: int, reduce):
    result = None
    while exponent:
        if exponent & 1:
            result = base if result is None else reduce(result * base)
        exponent >>= 1
        if exponent:
            base = reduce(base * base)
    return result
