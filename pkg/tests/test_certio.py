"""Certificate wire format: round-trips, shape validation, DAG bridges."""

from __future__ import annotations

import json
import random

import pytest

import witgen
from nilcert import (
    Certificate,
    DagBuilder,
    GeneratorSet,
    MalformedCertificateError,
    NIL,
    Poly,
    SQRT,
    UnsupportedVersionError,
    WitnessError,
    base_symbol,
    certificate_from_dag,
    dag_from_certificate,
    deserialize,
    fresh_schematic,
    serialize,
)

x = Poly.symbol(base_symbol("x"))
y = Poly.symbol(base_symbol("y"))


def small_cert() -> Certificate:
    b = DagBuilder(NIL, GeneratorSet((x ** 3 - x,)))
    prem = b.mult(x * y * x, b.mult(y, b.intro(0), Poly.one()), Poly.one())
    dag = b.build(b.add(prem, b.zero()))
    return certificate_from_dag(dag)


def sqrt_cert() -> Certificate:
    z = fresh_schematic("z")
    b = DagBuilder(SQRT, GeneratorSet((x,), [(x, y)]))
    fam = b.intro_family(0, y + Poly.one())
    prem = b.mult(x * Poly.symbol(z), b.intro(0), Poly.one())
    dag = b.build(b.add(fam, b.semiprime(z, prem, x)))
    return certificate_from_dag(dag)


def test_serialize_is_canonical_json():
    data = serialize(small_cert())
    assert data.endswith(b"\n")
    obj = json.loads(data)
    assert set(obj) == {
        "version", "setting", "symbols", "generators", "families",
        "claim", "nodes", "root",
    }
    assert obj["version"] == 1
    # compact separators, sorted keys, one line
    assert data.count(b"\n") == 1
    assert json.dumps(obj, sort_keys=True, separators=(",", ":")).encode() + b"\n" == data


def test_round_trip_preserves_everything():
    for cert in (small_cert(), sqrt_cert()):
        data = serialize(cert)
        back = deserialize(data)
        assert back == cert
        assert serialize(back) == data


def test_round_trip_random_witnesses():
    rng = random.Random(37)
    names = ("x", "y")
    for _ in range(40):
        p, q = witgen.nil_pair(rng, names, rng.randint(0, 4))
        for dag in (p, q):
            cert = certificate_from_dag(dag)
            assert deserialize(serialize(cert)) == cert


def test_deserialize_rejects_bad_bytes():
    with pytest.raises(MalformedCertificateError) as info:
        deserialize(b"\xff\xfe not json")
    assert info.value.offset == 0
    with pytest.raises(MalformedCertificateError) as info:
        deserialize(b'{"version": 1,')
    assert info.value.offset is not None
    assert "byte" in str(info.value)
    truncated = serialize(small_cert())[:-10]
    with pytest.raises(MalformedCertificateError):
        deserialize(truncated)
    with pytest.raises(MalformedCertificateError, match="top level"):
        deserialize(b"[1, 2]\n")


def test_deserialize_rejects_unsupported_version():
    obj = json.loads(serialize(small_cert()))
    obj["version"] = 2
    with pytest.raises(UnsupportedVersionError):
        deserialize(json.dumps(obj).encode())


def mutate(field_path, value) -> bytes:
    obj = json.loads(serialize(small_cert()))
    target = obj
    for step in field_path[:-1]:
        target = target[step]
    target[field_path[-1]] = value
    return json.dumps(obj).encode()


@pytest.mark.parametrize(
    "path, value, fragment",
    [
        (("setting",), "radical", "setting must be"),
        (("symbols",), ["x", "x"], "duplicate symbol"),
        (("symbols",), ["z#0"], "base symbols"),
        (("symbols", 0), "3x", "symbol"),
        (("generators", 0, 0, 0), "0", "zero coefficient"),
        (("generators", 0, 0, 0), "007", "bad coefficient"),
        (("generators", 0, 0, 0), 7, "decimal string"),
        (("generators", 0, 0, 1), ["q"], "not declared"),
        (("claim",), [["1", []], ["2", []]], "duplicate word"),
        (("nodes", 0, "id"), 5, "dense ids"),
        (("nodes", 0, "op"), "frobnicate", "unknown op"),
        (("nodes", 0, "gen"), "zero", "expected an integer"),
        (("root",), "0", "expected an integer"),
        (("extra",), 1, "unexpected keys"),
    ],
)
def test_deserialize_rejects_bad_shapes(path, value, fragment):
    with pytest.raises(MalformedCertificateError, match=fragment):
        deserialize(mutate(path, value))


def test_deserialize_rejects_stray_node_keys():
    obj = json.loads(serialize(small_cert()))
    obj["nodes"][0]["bonus"] = 1
    with pytest.raises(MalformedCertificateError, match="unexpected keys"):
        deserialize(json.dumps(obj).encode())


def test_deserialize_keeps_semantic_problems_for_the_checker():
    # dangling references and wrong claims are not shape errors
    obj = json.loads(serialize(small_cert()))
    obj["root"] = 99
    deserialize(json.dumps(obj).encode())
    obj = json.loads(serialize(small_cert()))
    obj["claim"] = [["5", []]]
    deserialize(json.dumps(obj).encode())


def test_fresh_uids_never_collide_with_loaded_certificates():
    cert = sqrt_cert()
    data = serialize(cert)
    loaded = deserialize(data)
    bounds = [n.bound for n in loaded.nodes if type(n).__name__ == "Semiprime"]
    assert bounds
    newer = fresh_schematic(bounds[0].name)
    assert newer.uid > max(n.uid for n in bounds)


# -- bridges ---------------------------------------------------------------


def test_certificate_from_dag_defaults():
    b = DagBuilder(NIL, GeneratorSet((y * x,)))
    dag = b.build(b.intro(0))
    cert = certificate_from_dag(dag)
    assert cert.symbols == ("x", "y")
    assert cert.claim == y * x
    with pytest.raises(WitnessError, match="claim differs"):
        certificate_from_dag(dag, claim=x)


def test_certificate_from_dag_completes_symbol_list():
    b = DagBuilder(NIL, GeneratorSet((x,)))
    dag = b.build(b.mult(y, b.intro(0), Poly.one()))
    cert = certificate_from_dag(dag, symbols=("x",))
    assert cert.symbols == ("x", "y")
    # and the written file reads back
    assert deserialize(serialize(cert)) == cert


def test_dag_from_certificate_reverifies():
    cert = small_cert()
    dag = dag_from_certificate(cert)
    assert dag.conclusion == cert.claim
    assert dag.setting == cert.setting

    broken = Certificate(
        setting=cert.setting,
        symbols=cert.symbols,
        generators=cert.generators,
        claim=cert.claim + Poly.one(),
        nodes=cert.nodes,
        root=cert.root,
    )
    with pytest.raises(WitnessError, match="claim differs"):
        dag_from_certificate(broken)


def test_dag_from_certificate_rejects_cycles_and_dangling_refs():
    cert = small_cert()
    obj = json.loads(serialize(cert))
    obj["nodes"][2]["inner"] = 2  # self reference
    looped = deserialize(json.dumps(obj).encode())
    with pytest.raises(WitnessError, match="cycle"):
        dag_from_certificate(looped)
    obj = json.loads(serialize(cert))
    obj["nodes"][2]["inner"] = 40
    dangling = deserialize(json.dumps(obj).encode())
    with pytest.raises(WitnessError, match="unknown node"):
        dag_from_certificate(dangling)


def test_dag_round_trip_preserves_conclusions():
    rng = random.Random(41)
    for _ in range(25):
        p, _ = witgen.sqrt_pair(rng, ("x", "y"), rng.randint(0, 4))
        cert = certificate_from_dag(p)
        back = dag_from_certificate(cert)
        assert back.conclusion == p.conclusion
        assert back.generators == p.generators
