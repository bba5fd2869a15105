"""Certificate files: the on-disk form of a witness.

A certificate is a single JSON object::

    {"version": 1, "setting": "nil" | "sqrt", "symbols": [name, ...],
     "generators": [poly, ...], "families": [{"left": poly, "right": poly}, ...],
     "claim": poly, "nodes": [node, ...], "root": id}

where poly = [[coeff, [symbol, ...]], ...] with decimal-string
coefficients in graded-lex order, and each node is {"id", "op", ...}
with dense ids.  Schematic symbols are written "name#uid".

deserialize validates structure only; whether the derivation itself
holds is the checker's job, so reference targets, cycles, and side
conditions all pass through untouched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from nilcert.ring import Poly, Symbol, reserve_uids, sorted_terms
from nilcert.witness import (
    Add,
    DEFAULT_MAX_NODES,
    DagBuilder,
    GeneratorSet,
    Intro,
    IntroFamily,
    Mult,
    Node,
    Red,
    Semiprime,
    WitnessDag,
    WitnessError,
    Zero,
)

__all__ = [
    "FORMAT_VERSION",
    "Certificate",
    "MalformedCertificateError",
    "UnsupportedVersionError",
    "serialize",
    "deserialize",
    "certificate_from_dag",
    "dag_from_certificate",
]

FORMAT_VERSION = 1


class MalformedCertificateError(ValueError):
    """Structurally invalid certificate data.

    ``offset`` is the byte position for JSON-level errors and None for
    shape errors, where ``where`` names the offending JSON path instead.
    """

    def __init__(self, message: str, offset: int | None = None, where: str = ""):
        prefix = f"{where}: " if where else ""
        suffix = f" (byte {offset})" if offset is not None else ""
        super().__init__(f"{prefix}{message}{suffix}")
        self.offset = offset
        self.where = where


class UnsupportedVersionError(MalformedCertificateError):
    def __init__(self, version: Any):
        super().__init__(f"unsupported certificate version {version!r}", where="version")
        self.version = version


@dataclass(frozen=True)
class Certificate:
    """Parsed certificate data, still untrusted until checked."""

    setting: str
    symbols: tuple[str, ...]
    generators: GeneratorSet
    claim: Poly
    nodes: tuple[Node, ...]
    root: int
    version: int = FORMAT_VERSION


# -- writing ----------------------------------------------------------


def _poly_json(p: Poly, order: tuple[str, ...]) -> list:
    return [
        [str(coeff), [sym.encode() for sym in word]]
        for word, coeff in sorted_terms(p, order)
    ]


def _node_json(node: Node, ident: int, order: tuple[str, ...]) -> dict:
    if isinstance(node, Intro):
        return {"id": ident, "op": "intro", "gen": node.gen_index}
    if isinstance(node, IntroFamily):
        return {
            "id": ident,
            "op": "intro_family",
            "family": node.family_index,
            "instance": _poly_json(node.instance, order),
        }
    if isinstance(node, Zero):
        return {"id": ident, "op": "zero"}
    if isinstance(node, Add):
        return {"id": ident, "op": "add", "left": node.left, "right": node.right}
    if isinstance(node, Mult):
        return {
            "id": ident,
            "op": "mult",
            "left": _poly_json(node.left, order),
            "inner": node.inner,
            "right": _poly_json(node.right, order),
        }
    if isinstance(node, Red):
        return {
            "id": ident,
            "op": "red",
            "premise": node.premise,
            "conclusion": _poly_json(node.conclusion, order),
        }
    if isinstance(node, Semiprime):
        return {
            "id": ident,
            "op": "semiprime",
            "bound": node.bound.encode(),
            "premise": node.premise,
            "conclusion": _poly_json(node.conclusion, order),
        }
    raise TypeError(f"unknown node kind {type(node).__name__}")


def serialize(cert: Certificate) -> bytes:
    if cert.version != FORMAT_VERSION:
        raise UnsupportedVersionError(cert.version)
    order = cert.symbols
    obj = {
        "version": cert.version,
        "setting": cert.setting,
        "symbols": list(cert.symbols),
        "generators": [_poly_json(p, order) for p in cert.generators.elements],
        "families": [
            {"left": _poly_json(l, order), "right": _poly_json(r, order)}
            for l, r in cert.generators.families
        ],
        "claim": _poly_json(cert.claim, order),
        "nodes": [_node_json(n, i, order) for i, n in enumerate(cert.nodes)],
        "root": cert.root,
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode() + b"\n"


# -- reading ----------------------------------------------------------


class _Reader:
    """Shape validation with JSON-path error reporting."""

    def __init__(self) -> None:
        self.max_uid = -1

    def fail(self, message: str, where: str) -> MalformedCertificateError:
        return MalformedCertificateError(message, where=where)

    def get(self, obj: dict, key: str, where: str) -> Any:
        if key not in obj:
            raise self.fail(f"missing key {key!r}", where)
        return obj[key]

    def intval(self, value: Any, where: str) -> int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise self.fail("expected an integer", where)
        return value

    def symbol(self, value: Any, declared: frozenset, where: str) -> Symbol:
        if not isinstance(value, str):
            raise self.fail("expected a symbol string", where)
        try:
            sym = Symbol.decode(value)
        except ValueError as err:
            raise self.fail(str(err), where) from None
        if sym.is_schematic:
            self.max_uid = max(self.max_uid, sym.uid)
        elif sym.name not in declared:
            raise self.fail(f"symbol {sym.name!r} not declared", where)
        return sym

    def poly(self, value: Any, declared: frozenset, where: str) -> Poly:
        if not isinstance(value, list):
            raise self.fail("expected a polynomial term list", where)
        terms: dict = {}
        for i, item in enumerate(value):
            here = f"{where}[{i}]"
            if not (isinstance(item, list) and len(item) == 2):
                raise self.fail("expected a [coefficient, word] pair", here)
            coeff_raw, word_raw = item
            if not isinstance(coeff_raw, str):
                raise self.fail("coefficient must be a decimal string", here)
            digits = coeff_raw[1:] if coeff_raw.startswith("-") else coeff_raw
            if not digits.isdigit() or (len(digits) > 1 and digits[0] == "0"):
                raise self.fail(f"bad coefficient {coeff_raw!r}", here)
            coeff = int(coeff_raw)
            if coeff == 0:
                raise self.fail("zero coefficient stored", here)
            if not isinstance(word_raw, list):
                raise self.fail("word must be a list of symbols", here)
            word = tuple(
                self.symbol(s, declared, f"{here}[1][{j}]")
                for j, s in enumerate(word_raw)
            )
            if word in terms:
                raise self.fail("duplicate word in polynomial", here)
            terms[word] = coeff
        return Poly(terms)

    def node(self, value: Any, index: int, declared: frozenset) -> Node:
        where = f"nodes[{index}]"
        if not isinstance(value, dict):
            raise self.fail("expected a node object", where)
        if self.intval(self.get(value, "id", where), f"{where}.id") != index:
            raise self.fail(f"node id must be {index} (dense ids)", f"{where}.id")
        op = self.get(value, "op", where)
        known = {
            "intro": ("gen",),
            "intro_family": ("family", "instance"),
            "zero": (),
            "add": ("left", "right"),
            "mult": ("left", "inner", "right"),
            "red": ("premise", "conclusion"),
            "semiprime": ("bound", "premise", "conclusion"),
        }
        if op not in known:
            raise self.fail(f"unknown op {op!r}", f"{where}.op")
        extra = set(value) - {"id", "op", *known[op]}
        if extra:
            raise self.fail(f"unexpected keys {sorted(extra)!r}", where)
        if op == "intro":
            return Intro(self.intval(self.get(value, "gen", where), f"{where}.gen"))
        if op == "intro_family":
            return IntroFamily(
                self.intval(self.get(value, "family", where), f"{where}.family"),
                self.poly(self.get(value, "instance", where), declared, f"{where}.instance"),
            )
        if op == "zero":
            return Zero()
        if op == "add":
            return Add(
                self.intval(self.get(value, "left", where), f"{where}.left"),
                self.intval(self.get(value, "right", where), f"{where}.right"),
            )
        if op == "mult":
            return Mult(
                self.poly(self.get(value, "left", where), declared, f"{where}.left"),
                self.intval(self.get(value, "inner", where), f"{where}.inner"),
                self.poly(self.get(value, "right", where), declared, f"{where}.right"),
            )
        if op == "red":
            return Red(
                self.intval(self.get(value, "premise", where), f"{where}.premise"),
                self.poly(self.get(value, "conclusion", where), declared, f"{where}.conclusion"),
            )
        return Semiprime(
            self.symbol(self.get(value, "bound", where), declared, f"{where}.bound"),
            self.intval(self.get(value, "premise", where), f"{where}.premise"),
            self.poly(self.get(value, "conclusion", where), declared, f"{where}.conclusion"),
        )


def deserialize(data: bytes) -> Certificate:
    """Parse certificate bytes, validating shape but not semantics.

    Raises MalformedCertificateError (with a byte offset for JSON-level
    problems) or UnsupportedVersionError.  Fresh-uid generation is
    advanced past every uid seen, so symbols created later never
    collide with the loaded certificate.
    """
    try:
        obj = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as err:
        raise MalformedCertificateError("not valid UTF-8", offset=err.start) from None
    except json.JSONDecodeError as err:
        raise MalformedCertificateError(err.msg, offset=err.pos) from None
    if not isinstance(obj, dict):
        raise MalformedCertificateError("top level must be an object")

    reader = _Reader()
    expected = {"version", "setting", "symbols", "generators", "families", "claim", "nodes", "root"}
    extra = set(obj) - expected
    if extra:
        raise reader.fail(f"unexpected keys {sorted(extra)!r}", "$")

    version = reader.intval(reader.get(obj, "version", "$"), "version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(version)

    setting = reader.get(obj, "setting", "$")
    if setting not in ("nil", "sqrt"):
        raise reader.fail(f"setting must be 'nil' or 'sqrt', got {setting!r}", "setting")

    symbols_raw = reader.get(obj, "symbols", "$")
    if not isinstance(symbols_raw, list):
        raise reader.fail("expected a list of names", "symbols")
    symbols: list[str] = []
    for i, name in enumerate(symbols_raw):
        if not isinstance(name, str):
            raise reader.fail("expected a symbol name", f"symbols[{i}]")
        try:
            sym = Symbol.decode(name)
        except ValueError as err:
            raise reader.fail(str(err), f"symbols[{i}]") from None
        if sym.is_schematic:
            raise reader.fail("declared symbols must be base symbols", f"symbols[{i}]")
        symbols.append(sym.name)
    if len(set(symbols)) != len(symbols):
        raise reader.fail("duplicate symbol declaration", "symbols")
    declared = frozenset(symbols)

    gens_raw = reader.get(obj, "generators", "$")
    if not isinstance(gens_raw, list):
        raise reader.fail("expected a list of polynomials", "generators")
    elements = [
        reader.poly(p, declared, f"generators[{i}]") for i, p in enumerate(gens_raw)
    ]

    fams_raw = reader.get(obj, "families", "$")
    if not isinstance(fams_raw, list):
        raise reader.fail("expected a list of {left, right} pairs", "families")
    families = []
    for i, pair in enumerate(fams_raw):
        where = f"families[{i}]"
        if not isinstance(pair, dict) or set(pair) != {"left", "right"}:
            raise reader.fail("expected an object with keys left, right", where)
        families.append(
            (
                reader.poly(pair["left"], declared, f"{where}.left"),
                reader.poly(pair["right"], declared, f"{where}.right"),
            )
        )

    claim = reader.poly(reader.get(obj, "claim", "$"), declared, "claim")

    nodes_raw = reader.get(obj, "nodes", "$")
    if not isinstance(nodes_raw, list):
        raise reader.fail("expected a list of nodes", "nodes")
    nodes = tuple(reader.node(n, i, declared) for i, n in enumerate(nodes_raw))

    root = reader.intval(reader.get(obj, "root", "$"), "root")

    reserve_uids(reader.max_uid + 1)
    return Certificate(
        setting=setting,
        symbols=tuple(symbols),
        generators=GeneratorSet(elements, families),
        claim=claim,
        nodes=nodes,
        root=root,
        version=version,
    )


# -- bridges to the DAG layer -----------------------------------------


def certificate_from_dag(
    dag: WitnessDag,
    symbols: tuple[str, ...] | None = None,
    claim: Poly | None = None,
) -> Certificate:
    """Package a built witness for serialization.

    The claim defaults to the root conclusion and must equal it.  The
    symbol list fixes the serialization order; base symbols in use but
    missing from it are appended in name order, so the output always
    declares everything it mentions and can be read back.
    """
    if claim is None:
        claim = dag.conclusion
    elif claim != dag.conclusion:
        raise WitnessError("claim differs from the root conclusion")
    seen: set[str] = set()
    for poly in _all_polys(dag):
        seen.update(s.name for s in poly.symbols() if not s.is_schematic)
    if symbols is None:
        symbols = tuple(sorted(seen))
    else:
        symbols = symbols + tuple(sorted(seen.difference(symbols)))
    return Certificate(
        setting=dag.setting,
        symbols=symbols,
        generators=dag.generators,
        claim=claim,
        nodes=dag.nodes,
        root=dag.root,
    )


def _all_polys(dag: WitnessDag):
    yield from dag.generators.all_polys()
    yield dag.conclusion
    for node in dag.nodes:
        if isinstance(node, IntroFamily):
            yield node.instance
        elif isinstance(node, Mult):
            yield node.left
            yield node.right
        elif isinstance(node, (Red, Semiprime)):
            yield node.conclusion


def dag_from_certificate(
    cert: Certificate, max_nodes: int = DEFAULT_MAX_NODES
) -> WitnessDag:
    """Rebuild a trusted WitnessDag from certificate data.

    Nodes are re-inserted in dependency order through DagBuilder, which
    re-verifies every side condition; WitnessError is raised if the
    certificate does not describe a valid witness.  Structural sharing
    may renumber ids, which transforms never rely on.
    """
    builder = DagBuilder(cert.setting, cert.generators, max_nodes)
    order = _topological(cert.nodes)
    mapping: dict[int, int] = {}
    for ident in order:
        node = cert.nodes[ident]
        if isinstance(node, Add):
            node = Add(mapping[node.left], mapping[node.right])
        elif isinstance(node, Mult):
            node = Mult(node.left, mapping[node.inner], node.right)
        elif isinstance(node, Red):
            node = Red(mapping[node.premise], node.conclusion)
        elif isinstance(node, Semiprime):
            node = Semiprime(node.bound, mapping[node.premise], node.conclusion)
        mapping[ident] = builder.add_node(node)
    if cert.root not in mapping:
        raise WitnessError(f"root {cert.root} is not a node id")
    dag = builder.build(mapping[cert.root])
    if dag.conclusion != cert.claim:
        raise WitnessError("claim differs from the root conclusion")
    return dag


def _node_children(node: Node) -> tuple[int, ...]:
    if isinstance(node, Add):
        return (node.left, node.right)
    if isinstance(node, Mult):
        return (node.inner,)
    if isinstance(node, (Red, Semiprime)):
        return (node.premise,)
    return ()


def _topological(nodes: tuple[Node, ...]) -> list[int]:
    n = len(nodes)
    children: list[tuple[int, ...]] = []
    for i, node in enumerate(nodes):
        refs = _node_children(node)
        for ref in refs:
            if not 0 <= ref < n:
                raise WitnessError(f"node {i} references unknown node {ref}")
        children.append(refs)
    pending = [len(refs) for refs in children]
    parents: dict[int, list[int]] = {}
    for i, refs in enumerate(children):
        for ref in refs:
            parents.setdefault(ref, []).append(i)
    ready = [i for i in range(n) if pending[i] == 0]
    out: list[int] = []
    while ready:
        i = ready.pop()
        out.append(i)
        for parent in parents.get(i, ()):
            pending[parent] -= 1
            if pending[parent] == 0:
                ready.append(parent)
    if len(out) != n:
        stuck = min(i for i in range(n) if pending[i] > 0)
        raise WitnessError(f"reference cycle through node {stuck}")
    return out
