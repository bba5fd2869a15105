"""The trusted kernel: re-verify a certificate from raw data.

Everything here is deliberately independent of DagBuilder and the
transform layer; the only shared code is ring arithmetic.  A
certificate is accepted only if every constructor application is
re-verified from scratch, so transforms are free to be clever and
wrong, because a bad output simply fails here.

Reason codes, in the order the phases can report them:

    WRONG_SETTING          node kind (or family data) in the wrong setting
    GEN_INDEX              Intro/IntroFamily index out of range
    BAD_REF                reference or root outside the node array
    SEMIPRIME_SHAPE        bound not schematic, or premise != c*bound*c
    CYCLE                  reference cycle (smallest node id on it)
    RED_SQUARE_MISMATCH    Red premise is not the conclusion's square
    SEMIPRIME_CAPTURE      bound occurs in the conclusion or generators
    CLAIM_MISMATCH         claim differs from the root conclusion

A schematic symbol occurring in a generator is rejected only when it is
some Semiprime node's bound (the capture condition); a never-bound
schematic generator is semantically just another indeterminate and
cannot make an accepted claim unsound.
"""

from __future__ import annotations

from dataclasses import dataclass

from nilcert.certio import Certificate
from nilcert.ring import Poly
from nilcert.witness import Add, Intro, IntroFamily, Mult, Red, Semiprime, Zero

__all__ = [
    "BAD_REF",
    "CYCLE",
    "RED_SQUARE_MISMATCH",
    "SEMIPRIME_SHAPE",
    "SEMIPRIME_CAPTURE",
    "WRONG_SETTING",
    "CLAIM_MISMATCH",
    "GEN_INDEX",
    "Verdict",
    "check_certificate",
]

BAD_REF = "BAD_REF"
CYCLE = "CYCLE"
RED_SQUARE_MISMATCH = "RED_SQUARE_MISMATCH"
SEMIPRIME_SHAPE = "SEMIPRIME_SHAPE"
SEMIPRIME_CAPTURE = "SEMIPRIME_CAPTURE"
WRONG_SETTING = "WRONG_SETTING"
CLAIM_MISMATCH = "CLAIM_MISMATCH"
GEN_INDEX = "GEN_INDEX"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    node: int | None = None
    reason: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        where = f"node {self.node}" if self.node is not None else "certificate"
        return f"invalid: {where}: {self.reason}: {self.detail}"


_VALID = Verdict(True)


def _invalid(node: int | None, reason: str, detail: str) -> Verdict:
    return Verdict(False, node, reason, detail)


def check_certificate(cert: Certificate) -> Verdict:
    """Decide validity of untrusted certificate data.

    Pure and deterministic: the verdict (including which node is
    blamed) is a function of the certificate content alone.  Structural
    problems are reported in ascending node order, then the first
    semantic offender in ascending node order, then the claim.
    """
    nodes = cert.nodes
    n = len(nodes)
    setting = cert.setting
    gens = cert.generators

    if setting not in ("nil", "sqrt"):
        return _invalid(None, WRONG_SETTING, f"unknown setting {setting!r}")
    if setting == "nil" and gens.families:
        return _invalid(None, WRONG_SETTING, "families present in the nil setting")

    # structural pass: kinds vs setting, index ranges, reference ranges
    for i, node in enumerate(nodes):
        if isinstance(node, Intro):
            if not 0 <= node.gen_index < len(gens.elements):
                return _invalid(i, GEN_INDEX, f"generator index {node.gen_index}")
        elif isinstance(node, IntroFamily):
            if setting != "sqrt":
                return _invalid(i, WRONG_SETTING, "IntroFamily outside sqrt setting")
            if not 0 <= node.family_index < len(gens.families):
                return _invalid(i, GEN_INDEX, f"family index {node.family_index}")
        elif isinstance(node, Zero):
            pass
        elif isinstance(node, Add):
            for ref in (node.left, node.right):
                if not 0 <= ref < n:
                    return _invalid(i, BAD_REF, f"reference {ref}")
        elif isinstance(node, Mult):
            if not 0 <= node.inner < n:
                return _invalid(i, BAD_REF, f"reference {node.inner}")
        elif isinstance(node, Red):
            if setting != "nil":
                return _invalid(i, WRONG_SETTING, "Red outside nil setting")
            if not 0 <= node.premise < n:
                return _invalid(i, BAD_REF, f"reference {node.premise}")
        elif isinstance(node, Semiprime):
            if setting != "sqrt":
                return _invalid(i, WRONG_SETTING, "Semiprime outside sqrt setting")
            if not 0 <= node.premise < n:
                return _invalid(i, BAD_REF, f"reference {node.premise}")
            if not node.bound.is_schematic:
                return _invalid(i, SEMIPRIME_SHAPE, "bound symbol is not schematic")
        else:
            return _invalid(i, WRONG_SETTING, f"unknown node kind {type(node).__name__}")

    if not 0 <= cert.root < n:
        return _invalid(None, BAD_REF, f"root {cert.root} out of range")

    # acyclicity, by counting resolved children (Kahn)
    children = [_children(node) for node in nodes]
    pending = [len(refs) for refs in children]
    parents: list[list[int]] = [[] for _ in range(n)]
    for i, refs in enumerate(children):
        for ref in refs:
            parents[ref].append(i)
    ready = [i for i in range(n) if pending[i] == 0]
    order: list[int] = []
    while ready:
        i = ready.pop()
        order.append(i)
        for parent in parents[i]:
            pending[parent] -= 1
            if pending[parent] == 0:
                ready.append(parent)
    if len(order) != n:
        stuck = min(i for i in range(n) if pending[i] > 0)
        return _invalid(stuck, CYCLE, "node depends on itself")

    # conclusions, children first
    concl: list[Poly] = [Poly.zero()] * n
    for i in order:
        node = nodes[i]
        if isinstance(node, Intro):
            concl[i] = gens.elements[node.gen_index]
        elif isinstance(node, IntroFamily):
            left, right = gens.families[node.family_index]
            concl[i] = left * node.instance * right
        elif isinstance(node, Zero):
            concl[i] = Poly.zero()
        elif isinstance(node, Add):
            concl[i] = concl[node.left] + concl[node.right]
        elif isinstance(node, Mult):
            concl[i] = node.left * concl[node.inner] * node.right
        else:  # Red | Semiprime carry their conclusion
            concl[i] = node.conclusion

    # semantic side conditions
    for i, node in enumerate(nodes):
        if isinstance(node, Red):
            c = node.conclusion
            if concl[node.premise] != c * c:
                return _invalid(i, RED_SQUARE_MISMATCH, "premise is not conclusion^2")
        elif isinstance(node, Semiprime):
            c = node.conclusion
            if concl[node.premise] != c * Poly.symbol(node.bound) * c:
                return _invalid(
                    i, SEMIPRIME_SHAPE, "premise is not conclusion*bound*conclusion"
                )
            if c.mentions(node.bound):
                return _invalid(i, SEMIPRIME_CAPTURE, "bound occurs in the conclusion")
            if gens.mentions(node.bound):
                return _invalid(i, SEMIPRIME_CAPTURE, "bound occurs in the generators")

    if concl[cert.root] != cert.claim:
        return _invalid(cert.root, CLAIM_MISMATCH, "claim differs from root conclusion")
    return _VALID


def _children(node) -> tuple[int, ...]:
    if isinstance(node, Add):
        return (node.left, node.right)
    if isinstance(node, Mult):
        return (node.inner,)
    if isinstance(node, (Red, Semiprime)):
        return (node.premise,)
    return ()
