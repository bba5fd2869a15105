"""Arithmetic in the free ring: exact values, laws, canonical printing."""

from __future__ import annotations

import random

import pytest

import oracle
from nilcert import (
    Poly,
    Symbol,
    base_symbol,
    commutator,
    print_poly,
    fresh_schematic,
    substitute,
)

x = Poly.symbol(base_symbol("x"))
y = Poly.symbol(base_symbol("y"))
one = Poly.one()


def rand_poly(rng, names=("x", "y"), max_terms=4, max_word=3):
    total = Poly.zero()
    for _ in range(rng.randint(0, max_terms)):
        term = Poly.constant(rng.choice((-3, -2, -1, 1, 2, 3)))
        for _ in range(rng.randint(0, max_word)):
            term = term * Poly.symbol(base_symbol(rng.choice(names)))
        total = total + term
    return total


# -- fixed values --------------------------------------------------------


def test_product_of_linear_factors():
    p = (x + one) * (x - one)
    assert oracle.terms_of(p) == {("x", "x"): 1, (): -1}
    q = (x + one) * x * (x - one)
    assert oracle.terms_of(q) == {("x", "x", "x"): 1, ("x",): -1}


def test_noncommutativity_is_visible():
    assert x * y != y * x
    assert oracle.terms_of(x * y - y * x) == {("x", "y"): 1, ("y", "x"): -1}
    assert commutator(x, y) == x * y - y * x


def test_sums_cancel_termwise():
    assert (x + (-1) * x).is_zero
    assert (x + one) + (x - one) == 2 * x
    assert x - x == Poly.zero()
    assert oracle.terms_of(x * y + y * x) == {("x", "y"): 1, ("y", "x"): 1}


def test_integers_embed_centrally():
    assert 3 * x == x * 3
    assert Poly.constant(6) == 2 * Poly.constant(3)
    assert 0 * x == Poly.zero()
    assert one * x == x == x * one


def test_power():
    assert x ** 0 == one
    assert x ** 1 == x
    assert (x + y) ** 2 == x * x + x * y + y * x + y * y
    p = x * y - one
    assert p ** 3 == p * p * p


def test_commutator_ignores_central_shifts():
    for c in range(-5, 6):
        assert commutator(x - Poly.constant(c), y) == commutator(x, y)


# -- substitution --------------------------------------------------------


def test_substitute_single_slot():
    z = fresh_schematic("z")
    p = x * Poly.symbol(z) * x
    assert substitute(p, {z: y}) == x * y * x
    assert substitute(p, {z: Poly.zero()}).is_zero


def test_substitute_absent_symbol_is_identity():
    z = fresh_schematic("z")
    p = x * y - y * x
    assert substitute(p, {z: Poly.constant(7)}) is p


def test_substitute_kills_x_cubed_minus_x_at_units():
    p = x ** 3 - x
    sx = base_symbol("x")
    for value in (Poly.zero(), one, -1 * one):
        assert substitute(p, {sx: value}).is_zero


def test_substitute_is_a_homomorphism():
    rng = random.Random(11)
    z = fresh_schematic("z")
    zp = Poly.symbol(z)
    for _ in range(50):
        p = rand_poly(rng) + zp * rand_poly(rng, max_terms=2)
        q = rand_poly(rng) + rand_poly(rng, max_terms=2) * zp
        value = rand_poly(rng, max_terms=2)
        assert substitute(p * q, {z: value}) == substitute(p, {z: value}) * substitute(
            q, {z: value}
        )
        assert substitute(p + q, {z: value}) == substitute(p, {z: value}) + substitute(
            q, {z: value}
        )


# -- ring laws on random elements ----------------------------------------


def test_ring_laws():
    rng = random.Random(7)
    for _ in range(60):
        p, q, r = (rand_poly(rng) for _ in range(3))
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert (p + q) * r == p * r + q * r
        assert p + q == q + p
        assert (p - q) + q == p


def test_multiplication_matches_naive_expansion():
    rng = random.Random(13)
    for _ in range(80):
        p, q = rand_poly(rng), rand_poly(rng)
        assert oracle.terms_of(p * q) == oracle.expand(
            oracle.terms_of(p), oracle.terms_of(q)
        )
        assert oracle.terms_of(p + q) == oracle.add_terms(
            oracle.terms_of(p), oracle.terms_of(q)
        )


def test_equal_polys_share_hash():
    p = (x + y) * (x - y)
    q = x * x - x * y + y * x - y * y
    assert p == q
    assert hash(p) == hash(q)
    assert len({p, q}) == 1


# -- canonical printing ---------------------------------------------------


@pytest.mark.parametrize(
    "poly, text",
    [
        (Poly.zero(), "0"),
        (Poly.constant(-7), "-7"),
        (2 * x, "2*x"),
        (x ** 3 - x, "x^3 - x"),
        (x * y - y * x, "x*y - y*x"),
        ((x + y) ** 2, "x^2 + x*y + y*x + y^2"),
        (x - 3 * one, "x - 3"),
        (-1 * x * y * x, "-x*y*x"),
    ],
)
def test_format_fixed_cases(poly, text):
    assert print_poly(poly) == text


def test_format_orders_by_degree_then_position():
    # degree descends first, then words compare by symbol order
    p = one + x + x * x * x + y * x
    assert print_poly(p) == "x^3 + y*x + x + 1"
    assert print_poly(x + x * x) == "x^2 + x"
    assert print_poly(y * x + x * y) == "x*y + y*x"


def test_format_is_stable_under_reordering():
    rng = random.Random(3)
    for _ in range(30):
        p = rand_poly(rng)
        q = Poly.zero()
        items = list(p.terms.items())
        rng.shuffle(items)
        for word, coeff in items:
            term = Poly.constant(coeff)
            for sym in word:
                term = term * Poly.symbol(sym)
            q = q + term
        assert print_poly(p) == print_poly(q)


# -- symbols ---------------------------------------------------------------


def test_symbol_identity_rules():
    assert base_symbol("x") == base_symbol("x")
    assert base_symbol("x") != base_symbol("y")
    a, b = fresh_schematic("z"), fresh_schematic("z")
    assert a != b
    assert a == a
    assert len({a, b, base_symbol("z")}) == 3


def test_symbol_wire_round_trip():
    s = base_symbol("alpha_3")
    assert Symbol.decode(s.encode()) == s
    z = fresh_schematic("z")
    assert Symbol.decode(z.encode()) == z


def test_symbol_name_validation():
    for bad in ("", "3x", "a-b", "a#b", "a b"):
        with pytest.raises(ValueError):
            base_symbol(bad)
