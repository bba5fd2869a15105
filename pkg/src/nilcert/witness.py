"""Derivation DAGs for membership in the ideals Nil U and sqrt U.

A witness is a DAG of constructor applications.  Node ids are dense
integers, children always precede parents, and every node carries a
conclusion, the ring element whose membership it derives:

    Intro(i)                 the i-th generator element
    IntroFamily(j, r)        left_j * r * right_j for the j-th family
    Zero                     0
    Add(l, r)                sum of the two child conclusions
    Mult(z, n, w)            z * conclusion(n) * w
    Red(n, c)                c, provided conclusion(n) = c*c  (nil only)
    Semiprime(b, n, c)       c, provided conclusion(n) = c*b*c for a
                             schematic b foreign to c and the
                             generators  (sqrt only)

Red and Semiprime store their conclusions because a premise does not
determine them (s and -s share a square).  DagBuilder verifies each
side condition at insertion time, so a complete WitnessDag is valid by
construction; the separate checker module re-verifies serialized
certificates from scratch without trusting any of this.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from nilcert.ring import Poly, Symbol, fresh_schematic

__all__ = [
    "NIL",
    "SQRT",
    "DEFAULT_MAX_NODES",
    "WitnessError",
    "BudgetExceededError",
    "Intro",
    "IntroFamily",
    "Zero",
    "Add",
    "Mult",
    "Red",
    "Semiprime",
    "Node",
    "GeneratorSet",
    "WitnessDag",
    "DagBuilder",
    "conclusion_of",
    "substitute_schematic",
]

NIL = "nil"
SQRT = "sqrt"

DEFAULT_MAX_NODES = 10**6


class WitnessError(Exception):
    """A constructor application violates its side condition."""


class BudgetExceededError(WitnessError):
    """The node arena outgrew the configured limit."""


@dataclass(frozen=True)
class Intro:
    gen_index: int


@dataclass(frozen=True)
class IntroFamily:
    family_index: int
    instance: Poly


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Add:
    left: int
    right: int


@dataclass(frozen=True)
class Mult:
    left: Poly
    inner: int
    right: Poly


@dataclass(frozen=True)
class Red:
    premise: int
    conclusion: Poly


@dataclass(frozen=True)
class Semiprime:
    bound: Symbol
    premise: int
    conclusion: Poly


Node = Union[Intro, IntroFamily, Zero, Add, Mult, Red, Semiprime]


class GeneratorSet:
    """The generating data of an ideal: finitely many elements plus,
    in the sqrt setting, families {left*r*right : r in the ring}."""

    __slots__ = ("elements", "families")

    def __init__(
        self,
        elements: Iterable[Poly] = (),
        families: Iterable[tuple[Poly, Poly]] = (),
    ):
        self.elements = tuple(elements)
        self.families = tuple((l, r) for l, r in families)

    def validate_concrete(self) -> None:
        """Reject schematic symbols; generators describe fixed elements."""
        for poly in self.all_polys():
            for sym in poly.symbols():
                if sym.is_schematic:
                    raise WitnessError(
                        f"schematic symbol {sym.encode()} in generator set"
                    )

    def all_polys(self) -> Iterable[Poly]:
        yield from self.elements
        for left, right in self.families:
            yield left
            yield right

    def mentions(self, sym: Symbol) -> bool:
        return any(p.mentions(sym) for p in self.all_polys())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratorSet):
            return NotImplemented
        return self.elements == other.elements and self.families == other.families

    def __hash__(self) -> int:
        return hash((self.elements, self.families))

    def __repr__(self) -> str:
        return f"GeneratorSet({list(self.elements)!r}, {list(self.families)!r})"


@dataclass(frozen=True)
class WitnessDag:
    """An immutable, valid-by-construction derivation.

    Only DagBuilder creates these; every invariant (reference order,
    side conditions, cached conclusions) was checked during building.
    """

    setting: str
    generators: GeneratorSet
    nodes: tuple[Node, ...]
    conclusions: tuple[Poly, ...]
    root: int

    @property
    def conclusion(self) -> Poly:
        return self.conclusions[self.root]

    def __len__(self) -> int:
        return len(self.nodes)


def conclusion_of(dag: WitnessDag, node_id: int) -> Poly:
    if not 0 <= node_id < len(dag.nodes):
        raise WitnessError(f"dangling node id {node_id}")
    return dag.conclusions[node_id]


class DagBuilder:
    """Arena for growing a witness one verified node at a time.

    Structurally equal nodes are shared: adding a node that already
    exists returns the old id.  Exceeding ``max_nodes`` raises
    BudgetExceededError rather than thrashing memory.
    """

    def __init__(
        self,
        setting: str,
        generators: GeneratorSet,
        max_nodes: int = DEFAULT_MAX_NODES,
    ):
        if setting not in (NIL, SQRT):
            raise WitnessError(f"unknown setting {setting!r}")
        if setting == NIL and generators.families:
            raise WitnessError("families require the sqrt setting")
        if max_nodes < 1:
            raise WitnessError("max_nodes must be positive")
        generators.validate_concrete()
        self.setting = setting
        self.generators = generators
        self.max_nodes = max_nodes
        self._nodes: list[Node] = []
        self._conclusions: list[Poly] = []
        self._index: dict[Node, int] = {}

    @classmethod
    def from_dag(cls, dag: WitnessDag, max_nodes: int = DEFAULT_MAX_NODES) -> "DagBuilder":
        """Resume building on top of an existing (trusted) witness."""
        builder = cls(dag.setting, dag.generators, max_nodes)
        builder._nodes = list(dag.nodes)
        builder._conclusions = list(dag.conclusions)
        builder._index = {node: i for i, node in enumerate(dag.nodes)}
        if len(builder._nodes) > max_nodes:
            raise BudgetExceededError(
                f"witness already has {len(builder._nodes)} nodes, budget {max_nodes}"
            )
        return builder

    def __len__(self) -> int:
        return len(self._nodes)

    def conclusion(self, node_id: int) -> Poly:
        return self._conclusions[node_id]

    def _ref(self, node_id: int) -> Poly:
        if not isinstance(node_id, int) or not 0 <= node_id < len(self._nodes):
            raise WitnessError(f"reference to unknown node {node_id}")
        return self._conclusions[node_id]

    def add_node(self, node: Node) -> int:
        existing = self._index.get(node)
        if existing is not None:
            return existing
        conclusion = self._admit(node)
        if len(self._nodes) >= self.max_nodes:
            raise BudgetExceededError(f"node budget {self.max_nodes} exceeded")
        node_id = len(self._nodes)
        self._nodes.append(node)
        self._conclusions.append(conclusion)
        self._index[node] = node_id
        return node_id

    def _admit(self, node: Node) -> Poly:
        """Verify the node's side conditions; return its conclusion."""
        if isinstance(node, Intro):
            if not 0 <= node.gen_index < len(self.generators.elements):
                raise WitnessError(f"generator index {node.gen_index} out of range")
            return self.generators.elements[node.gen_index]
        if isinstance(node, IntroFamily):
            if self.setting != SQRT:
                raise WitnessError("IntroFamily requires the sqrt setting")
            if not 0 <= node.family_index < len(self.generators.families):
                raise WitnessError(f"family index {node.family_index} out of range")
            left, right = self.generators.families[node.family_index]
            return left * node.instance * right
        if isinstance(node, Zero):
            return Poly.zero()
        if isinstance(node, Add):
            return self._ref(node.left) + self._ref(node.right)
        if isinstance(node, Mult):
            return node.left * self._ref(node.inner) * node.right
        if isinstance(node, Red):
            if self.setting != NIL:
                raise WitnessError("Red requires the nil setting")
            premise = self._ref(node.premise)
            if premise != node.conclusion * node.conclusion:
                raise WitnessError(
                    "Red premise is not the square of its conclusion"
                )
            return node.conclusion
        if isinstance(node, Semiprime):
            if self.setting != SQRT:
                raise WitnessError("Semiprime requires the sqrt setting")
            if not node.bound.is_schematic:
                raise WitnessError("Semiprime bound must be schematic")
            premise = self._ref(node.premise)
            c = node.conclusion
            if premise != c * Poly.symbol(node.bound) * c:
                raise WitnessError(
                    "Semiprime premise is not conclusion*bound*conclusion"
                )
            if c.mentions(node.bound):
                raise WitnessError("Semiprime bound occurs in its conclusion")
            # generators were checked schematic-free at construction, so
            # the bound cannot occur there
            return c
        raise WitnessError(f"unknown node kind {type(node).__name__}")

    # Convenience wrappers; transforms read much better with these.

    def intro(self, gen_index: int) -> int:
        return self.add_node(Intro(gen_index))

    def intro_family(self, family_index: int, instance: Poly) -> int:
        return self.add_node(IntroFamily(family_index, instance))

    def zero(self) -> int:
        return self.add_node(Zero())

    def add(self, left: int, right: int) -> int:
        return self.add_node(Add(left, right))

    def mult(self, left: Poly, inner: int, right: Poly) -> int:
        return self.add_node(Mult(left, inner, right))

    def red(self, premise: int, conclusion: Poly) -> int:
        return self.add_node(Red(premise, conclusion))

    def semiprime(self, bound: Symbol, premise: int, conclusion: Poly) -> int:
        return self.add_node(Semiprime(bound, premise, conclusion))

    def build(self, root: int) -> WitnessDag:
        self._ref(root)
        return WitnessDag(
            setting=self.setting,
            generators=self.generators,
            nodes=tuple(self._nodes),
            conclusions=tuple(self._conclusions),
            root=root,
        )


def substitute_schematic(
    dag: WitnessDag,
    sym: Symbol,
    value: Poly,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> WitnessDag:
    """Instantiate a schematic symbol throughout a witness.

    Every Poly field is rewritten under sym -> value.  Semiprime bounds
    are renamed to fresh symbols whenever the incoming substitution
    touches them or could capture a symbol of its values, so the result
    never captures and conclusion_of commutes with the substitution.
    The node count of the tree unfolding is preserved.
    """
    if not sym.is_schematic:
        raise WitnessError("only schematic symbols can be substituted in a witness")
    builder = DagBuilder(dag.setting, dag.generators, max_nodes)
    root = _subst_node(dag, dag.root, {sym: value}, builder, {})
    return builder.build(root)


def _subst_node(
    dag: WitnessDag,
    node_id: int,
    env: Mapping[Symbol, Poly],
    builder: DagBuilder,
    memo: dict,
) -> int:
    key = (node_id, frozenset(env.items()))
    hit = memo.get(key)
    if hit is not None:
        return hit
    node = dag.nodes[node_id]
    if isinstance(node, (Intro, Zero)):
        out = builder.add_node(node)
    elif isinstance(node, IntroFamily):
        out = builder.intro_family(node.family_index, node.instance.substitute(env))
    elif isinstance(node, Add):
        left = _subst_node(dag, node.left, env, builder, memo)
        right = _subst_node(dag, node.right, env, builder, memo)
        out = builder.add(left, right)
    elif isinstance(node, Mult):
        inner = _subst_node(dag, node.inner, env, builder, memo)
        out = builder.mult(node.left.substitute(env), inner, node.right.substitute(env))
    elif isinstance(node, Red):
        premise = _subst_node(dag, node.premise, env, builder, memo)
        out = builder.red(premise, node.conclusion.substitute(env))
    elif isinstance(node, Semiprime):
        bound = node.bound
        inner_env = env
        shadowed = bound in env
        captured = any(image.mentions(bound) for image in env.values())
        if shadowed or captured:
            fresh = fresh_schematic(bound.name)
            inner_env = {**env, bound: Poly.symbol(fresh)}
            bound = fresh
        premise = _subst_node(dag, node.premise, inner_env, builder, memo)
        out = builder.semiprime(bound, premise, node.conclusion.substitute(inner_env))
    else:
        raise WitnessError(f"unknown node kind {type(node).__name__}")
    memo[key] = out
    return out
