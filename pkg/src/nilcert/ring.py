"""Exact arithmetic in the free unital noncommutative ring Z<X>.

An element is a finite integer combination of words over a symbol
alphabet.  Words multiply by concatenation and do not commute; the
empty word is the unit.  Coefficients are arbitrary-precision integers
and are central.  Every value here is immutable and safe to share
between threads.
"""

from __future__ import annotations

import itertools
import re
import threading
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "BASE",
    "SCHEMATIC",
    "Symbol",
    "Word",
    "Poly",
    "base_symbol",
    "fresh_schematic",
    "reserve_uids",
    "commutator",
    "substitute",
    "sorted_terms",
    "format_poly",
]

BASE = "base"
SCHEMATIC = "schematic"

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class Symbol:
    """An indeterminate of the free ring.

    Base symbols form the declared alphabet of a problem and compare by
    name.  Schematic symbols stand for an arbitrary ring element (a
    universally quantified slot, a family middle, a bound variable) and
    compare by uid; their name is display-only.
    """

    __slots__ = ("name", "kind", "uid")

    def __init__(self, name: str, kind: str = BASE, uid: int = 0):
        if not _NAME_RE.match(name):
            raise ValueError(f"invalid symbol name: {name!r}")
        if kind not in (BASE, SCHEMATIC):
            raise ValueError(f"invalid symbol kind: {kind!r}")
        if uid < 0:
            raise ValueError("symbol uid must be nonnegative")
        self.name = name
        self.kind = kind
        self.uid = uid

    @property
    def is_schematic(self) -> bool:
        return self.kind == SCHEMATIC

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Symbol):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == SCHEMATIC:
            return self.uid == other.uid
        return self.name == other.name

    def __hash__(self) -> int:
        if self.kind == SCHEMATIC:
            return hash((SCHEMATIC, self.uid))
        return hash((BASE, self.name))

    def sort_key(self) -> tuple:
        # base symbols before schematic ones; deterministic across runs
        if self.kind == SCHEMATIC:
            return (1, self.name, self.uid)
        return (0, self.name, 0)

    def encode(self) -> str:
        """Wire form: plain name for base, ``name#uid`` for schematic."""
        if self.kind == SCHEMATIC:
            return f"{self.name}#{self.uid}"
        return self.name

    @classmethod
    def decode(cls, text: str) -> "Symbol":
        if "#" in text:
            name, _, uid = text.partition("#")
            if not uid.isdigit():
                raise ValueError(f"invalid schematic symbol: {text!r}")
            return cls(name, SCHEMATIC, int(uid))
        return cls(text)

    def __repr__(self) -> str:
        return f"Symbol({self.encode()!r})"


def base_symbol(name: str) -> Symbol:
    return Symbol(name, BASE)


_uid_counter = itertools.count()
_uid_lock = threading.Lock()


def fresh_schematic(name: str = "z") -> Symbol:
    """A schematic symbol with a process-globally unique uid."""
    with _uid_lock:
        uid = next(_uid_counter)
    return Symbol(name, SCHEMATIC, uid)


def reserve_uids(floor: int) -> None:
    """Ensure future fresh uids are >= ``floor`` (after loading files)."""
    global _uid_counter
    with _uid_lock:
        current = next(_uid_counter)
        if floor > current + 1:
            _uid_counter = itertools.count(floor)
        else:
            _uid_counter = itertools.count(current + 1)


# A word is a tuple of symbols; the empty tuple is the unit 1.
Word = tuple

_word_table: dict[Word, Word] = {}
_word_lock = threading.Lock()


def _intern_word(word: Word) -> Word:
    # hash-consing: equal words share one tuple, so dict lookups on Poly
    # terms short-circuit on identity
    with _word_lock:
        return _word_table.setdefault(word, word)


def _word_sort_key(word: Word) -> tuple:
    return tuple(sym.sort_key() for sym in word)


class Poly:
    """Element of Z<X>: a mapping word -> nonzero integer coefficient."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, int] = {}
        for word, coeff in items:
            if not isinstance(coeff, int):
                raise TypeError("coefficients must be int")
            word = _intern_word(tuple(word))
            coeff = acc.get(word, 0) + coeff
            if coeff:
                acc[word] = coeff
            else:
                acc.pop(word, None)
        self._terms = acc
        self._hash = hash(frozenset(acc.items()))

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return _ZERO

    @classmethod
    def one(cls) -> "Poly":
        return _ONE

    @classmethod
    def constant(cls, value: int) -> "Poly":
        return cls({(): value} if value else {})

    @classmethod
    def symbol(cls, sym: Symbol) -> "Poly":
        return cls({(sym,): 1})

    @classmethod
    def word(cls, symbols: Iterable[Symbol], coeff: int = 1) -> "Poly":
        return cls({tuple(symbols): coeff})

    # -- structure ---------------------------------------------------

    @property
    def terms(self) -> Mapping[Word, int]:
        return self._terms

    def items(self) -> Iterator[tuple[Word, int]]:
        return iter(self._terms.items())

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def symbols(self) -> set[Symbol]:
        out: set[Symbol] = set()
        for word in self._terms:
            out.update(word)
        return out

    def mentions(self, sym: Symbol) -> bool:
        return any(sym in word for word in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        if not self._terms:
            return other
        if not other._terms:
            return self
        acc = dict(self._terms)
        for word, coeff in other._terms.items():
            coeff = acc.get(word, 0) + coeff
            if coeff:
                acc[word] = coeff
            else:
                del acc[word]
        return _wrap(acc)

    def __neg__(self) -> "Poly":
        return _wrap({word: -coeff for word, coeff in self._terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: object) -> "Poly":
        if isinstance(other, int):
            if other == 0:
                return _ZERO
            if other == 1:
                return self
            return _wrap({w: c * other for w, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        acc: dict[Word, int] = {}
        for wa, ca in self._terms.items():
            for wb, cb in other._terms.items():
                word = _intern_word(wa + wb)
                coeff = acc.get(word, 0) + ca * cb
                if coeff:
                    acc[word] = coeff
                else:
                    del acc[word]
        return _wrap(acc)

    def __rmul__(self, other: object) -> "Poly":
        if isinstance(other, int):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ValueError("negative exponent in Z<X>")
        result = _ONE
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def substitute(self, bindings: Mapping[Symbol, "Poly"]) -> "Poly":
        """Apply the ring homomorphism sending bound symbols to their
        images and fixing everything else."""
        if not bindings or not any(self.mentions(s) for s in bindings):
            return self
        total = _ZERO
        for word, coeff in self._terms.items():
            factor = Poly.constant(coeff)
            for sym in word:
                image = bindings.get(sym)
                factor = factor * (image if image is not None else Poly.symbol(sym))
            total = total + factor
        return total

    # -- comparison ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"


def _wrap(terms: dict) -> Poly:
    # internal: terms already normalized (no zeros, interned keys)
    poly = Poly.__new__(Poly)
    poly._terms = terms
    poly._hash = hash(frozenset(terms.items()))
    return poly


_ZERO = Poly()
_ONE = Poly({(): 1})


def commutator(p: Poly, q: Poly) -> Poly:
    """[p, q] = p*q - q*p; zero exactly when p and q commute."""
    return p * q - q * p


def substitute(p: Poly, bindings: Mapping[Symbol, Poly]) -> Poly:
    return p.substitute(bindings)


def sorted_terms(
    p: Poly, order: Sequence[str] | None = None
) -> list[tuple[Word, int]]:
    """Terms in graded-lexicographic order: degree descending, then the
    word order induced by the declared symbol order (name order when no
    declaration is given).  Serialization-only; never affects semantics."""
    if order is None:
        rank = {}
    else:
        rank = {name: i for i, name in enumerate(order)}

    def sym_key(sym: Symbol) -> tuple:
        if sym.kind == SCHEMATIC:
            return (2, 0, sym.name, sym.uid)
        return (0, rank[sym.name], sym.name, 0) if sym.name in rank else (1, 0, sym.name, 0)

    def key(item: tuple[Word, int]) -> tuple:
        word = item[0]
        return (-len(word), tuple(sym_key(s) for s in word))

    return sorted(p.terms.items(), key=key)


def format_poly(p: Poly, order: Sequence[str] | None = None) -> str:
    """Deterministic text form; re-parseable when only base symbols occur."""
    terms = sorted_terms(p, order)
    if not terms:
        return "0"
    chunks: list[str] = []
    for i, (word, coeff) in enumerate(terms):
        body = _format_term(word, abs(coeff))
        if i == 0:
            chunks.append(body if coeff > 0 else "-" + body)
        else:
            chunks.append((" + " if coeff > 0 else " - ") + body)
    return "".join(chunks)


def _format_term(word: Word, magnitude: int) -> str:
    if not word:
        return str(magnitude)
    factors: list[str] = [] if magnitude == 1 else [str(magnitude)]
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        name = word[i].encode()
        factors.append(name if j - i == 1 else f"{name}^{j - i}")
        i = j
    return "*".join(factors)
