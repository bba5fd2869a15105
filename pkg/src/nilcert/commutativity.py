"""Commutativity from membership certificates.

The pivot fact: for any integer c, the commutator x*y - y*x equals
(x-c)*y - y*(x-c), so it lies in Nil(x-c) for every c at once.
Intersecting over several constants places it in Nil of the product of
the linear factors; with the factors of x^n - x this certifies that a
reduced ring satisfying x^n = x is commutative.  Two inferences stay
outside the certificate (that x^n = x forces reducedness, and that the
free-ring certificate instantiates into any such ring); they appear in
the proof log as explicitly flagged narrative steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from nilcert.certio import Certificate, certificate_from_dag, _topological
from nilcert.checker import check_certificate
from nilcert.lang import print_poly
from nilcert.ring import Poly, Symbol, base_symbol
from nilcert.witness import (
    Add,
    DagBuilder,
    GeneratorSet,
    Intro,
    IntroFamily,
    Mult,
    NIL,
    Red,
    Semiprime,
    WitnessDag,
    WitnessError,
)
from nilcert.transforms import nil_intersect

__all__ = [
    "CentralConstants",
    "UnsupportedExponentError",
    "ProofStep",
    "ProofLog",
    "commutator_factor_witness",
    "central_roots_witness",
    "xn_demo",
    "emit_proof_log",
]


@dataclass(frozen=True)
class CentralConstants:
    """Distinct integers c_1..c_n; integers are central in the free ring."""

    constants: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        if not self.constants:
            raise ValueError("need at least one constant")
        if len(set(self.constants)) != len(self.constants):
            raise ValueError("constants must be pairwise distinct")
        if not all(isinstance(c, int) for c in self.constants):
            raise ValueError("constants must be integers")


class UnsupportedExponentError(ValueError):
    pass


@dataclass(frozen=True)
class ProofStep:
    statement: str
    kind: str  # "certified" or "narrative"
    cert_ref: tuple[int, int] | None = None


@dataclass(frozen=True)
class ProofLog:
    steps: tuple[ProofStep, ...]

    def render(self, style: str = "text") -> str:
        if style not in ("text", "markdown"):
            raise ValueError(f"unknown style {style!r}")
        lines = []
        for step in self.steps:
            ref = ""
            if step.cert_ref is not None:
                lo, hi = step.cert_ref
                ref = f" (node {lo})" if lo == hi else f" (nodes {lo}..{hi})"
            if style == "markdown":
                lines.append(f"- **{step.kind}.** {step.statement}{ref}")
            else:
                lines.append(f"[{step.kind}] {step.statement}{ref}")
        return "\n".join(lines) + "\n"


def commutator_factor_witness(c: int, x: Symbol, y: Symbol) -> WitnessDag:
    """Witness that x*y - y*x lies in Nil(x - c).

    (x-c)*y - y*(x-c) collapses to the commutator because the constant
    cancels, so two Mult nodes and one Add over Intro(x-c) suffice.
    """
    xp = Poly.symbol(x)
    yp = Poly.symbol(y)
    factor = xp - Poly.constant(c)
    builder = DagBuilder(NIL, GeneratorSet((factor,)))
    gen = builder.intro(0)
    left = builder.mult(Poly.one(), gen, yp)
    right = builder.mult(-yp, gen, Poly.one())
    return builder.build(builder.add(left, right))


def central_roots_witness(cs: CentralConstants) -> Certificate:
    """Certificate that x*y - y*x lies in Nil((x-c_1)*...*(x-c_n)).

    Folds nil_intersect left to right over the per-factor witnesses;
    the fold order is fixed only so output bytes are reproducible.
    """
    x, y = base_symbol("x"), base_symbol("y")
    dag = commutator_factor_witness(cs.constants[0], x, y)
    for c in cs.constants[1:]:
        dag = nil_intersect(dag, commutator_factor_witness(c, x, y))
    return certificate_from_dag(dag, symbols=("x", "y"))


_DEMOS = {2: (0, 1), 3: (0, 1, -1)}


def xn_demo(n: int) -> tuple[Certificate, ProofLog]:
    """Certificate and proof log for: rings with x^n = x are commutative.

    Only n = 2 and n = 3 are offered; those are the exponents for which
    x^n - x splits into linear factors with integer roots, which the
    construction needs.  (Already x^5 - x carries the factor x^2 + 1.)
    """
    if n not in _DEMOS:
        raise UnsupportedExponentError(
            f"no all-integer linear factorization of x^{n} - x; supported: 2, 3"
        )
    cert = central_roots_witness(CentralConstants(_DEMOS[n]))
    generator = print_poly(cert.generators.elements[0], cert.symbols)
    claim = print_poly(cert.claim, cert.symbols)
    if n == 3:
        reduced = (
            "In a ring where z^3 = z for every z, suppose z^2 = 0; "
            "then z = z^3 = z*z^2 = 0. So the ring is reduced."
        )
    else:
        reduced = (
            "In a ring where z^2 = z for every z, suppose z^2 = 0; "
            "then z = z^2 = 0. So the ring is reduced."
        )
    steps = (
        ProofStep(reduced, "narrative"),
        *_replay_steps(cert),
        ProofStep(
            f"{claim} is in Nil({generator}) by the intersection rule "
            "Nil(U,a) & Nil(U,b) <= Nil(U,a*b), folded over the linear factors "
            f"of {generator}.",
            "certified",
            (cert.root, cert.root),
        ),
        ProofStep(
            f"In a ring where z^{n} = z for every element z, the generator "
            f"{generator} vanishes at every element, so Nil({generator}) "
            f"instantiates to the zero ideal and {claim} = 0: "
            "any two elements commute.",
            "narrative",
        ),
    )
    return cert, ProofLog(steps)


def emit_proof_log(cert: Certificate, style: str = "text") -> str:
    """Render the step-by-step replay of a valid certificate."""
    verdict = check_certificate(cert)
    if not verdict:
        raise WitnessError(str(verdict))
    return ProofLog(_replay_steps(cert)).render(style)


def _replay_steps(cert: Certificate) -> tuple[ProofStep, ...]:
    ideal = "Nil" if cert.setting == "nil" else "sqrt"
    concl = _conclusions(cert)
    steps = []
    for i, node in enumerate(cert.nodes):
        if isinstance(node, Intro):
            rule = f"introduction of generator {node.gen_index}"
        elif isinstance(node, IntroFamily):
            rule = (
                f"introduction from family {node.family_index} at instance "
                f"{print_poly(node.instance, cert.symbols)}"
            )
        elif isinstance(node, Add):
            rule = f"sum of nodes {node.left} and {node.right}"
        elif isinstance(node, Mult):
            rule = f"two-sided multiple of node {node.inner}"
        elif isinstance(node, Red):
            rule = f"reduced-ideal rule on node {node.premise}, whose conclusion is the square"
        elif isinstance(node, Semiprime):
            rule = (
                f"semiprime rule on node {node.premise}, quantified over "
                f"the schematic bound {node.bound.encode()}"
            )
        else:
            rule = "zero is in every ideal"
        statement = f"{print_poly(concl[i], cert.symbols)} is in {ideal}(U): {rule}."
        steps.append(ProofStep(statement, "certified", (i, i)))
    return tuple(steps)


def _conclusions(cert: Certificate) -> list[Poly]:
    gens = cert.generators
    concl: list[Poly] = [Poly.zero()] * len(cert.nodes)
    for i in _topological(cert.nodes):
        node = cert.nodes[i]
        if isinstance(node, Intro):
            concl[i] = gens.elements[node.gen_index]
        elif isinstance(node, IntroFamily):
            left, right = gens.families[node.family_index]
            concl[i] = left * node.instance * right
        elif isinstance(node, Add):
            concl[i] = concl[node.left] + concl[node.right]
        elif isinstance(node, Mult):
            concl[i] = node.left * concl[node.inner] * node.right
        elif isinstance(node, (Red, Semiprime)):
            concl[i] = node.conclusion
    return concl
