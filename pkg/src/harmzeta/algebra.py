"""The word algebra over Q[h, 1/h] with concatenation and harmonic products.

Letters are plain integers: ``B = 0`` stands for e_1 - g_1 and ``k >= 1``
stands for g_k.  A word is a tuple of letters; the empty tuple is the unit.
Elements keep their coefficients flattened as ``{(word, h_exponent): Fraction}``
which keeps the hot loops free of nested Laurent arithmetic.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .exact import LaurentPoly, _join_signed
from .stirling import stirling2

B = 0

Word = tuple


def letter_name(letter: int) -> str:
    if letter < 0:
        raise ValueError(f"invalid letter {letter}")
    return "b" if letter == B else f"g{letter}"


def word_key(word: Word):
    """Length-lexicographic order on letter tags (b < g1 < g2 < ...)."""
    return (len(word), word)


class AlgebraElement:
    """Finite Q[h, 1/h]-linear combination of words.  Immutable value."""

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Mapping[tuple, object] | None = None):
        clean = {}
        if data:
            for (word, e), c in data.items():
                c = Fraction(c)
                if c:
                    for letter in word:
                        if not isinstance(letter, int) or letter < 0:
                            raise ValueError(f"invalid letter {letter!r}")
                    clean[(tuple(word), int(e))] = c
        self._data = clean
        self._hash = None

    @classmethod
    def _raw(cls, data: dict) -> "AlgebraElement":
        # trusted constructor: data already clean
        obj = cls.__new__(cls)
        obj._data = data
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls._raw({})

    @classmethod
    def one(cls) -> "AlgebraElement":
        return cls._raw({((), 0): Fraction(1)})

    @classmethod
    def word(cls, word: Iterable[int], coeff=1, h: int = 0) -> "AlgebraElement":
        return cls({(tuple(word), h): coeff})

    @classmethod
    def letter(cls, letter: int) -> "AlgebraElement":
        return cls.word((letter,))

    @classmethod
    def from_terms(cls, terms: Mapping[Word, LaurentPoly]) -> "AlgebraElement":
        data = {}
        for w, lp in terms.items():
            for e, c in LaurentPoly(lp.terms if isinstance(lp, LaurentPoly) else {0: lp}).items():
                data[(tuple(w), e)] = c
        return cls(data)

    # views
    def items(self):
        return self._data.items()

    def terms(self) -> dict[Word, LaurentPoly]:
        grouped: dict[Word, dict[int, Fraction]] = {}
        for (w, e), c in self._data.items():
            grouped.setdefault(w, {})[e] = c
        return {w: LaurentPoly(t) for w, t in grouped.items()}

    def coefficient(self, word: Iterable[int]) -> LaurentPoly:
        word = tuple(word)
        return LaurentPoly({e: c for (w, e), c in self._data.items() if w == word})

    def words(self) -> list[Word]:
        return sorted({w for w, _ in self._data}, key=word_key)

    def is_in_zspan(self) -> bool:
        return all(len(w) == 1 for w, _ in self._data)

    def is_in_H0(self) -> bool:
        return all(not w or w[-1] != B for w, _ in self._data)

    def max_length(self) -> int:
        return max((len(w) for w, _ in self._data), default=0)

    # arithmetic
    def __bool__(self):
        return bool(self._data)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraElement.one() * other
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement.one() * other
        out = dict(self._data)
        for k, c in other._data.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return AlgebraElement._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._raw({k: -c for k, c in self._data.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "AlgebraElement":
        """Multiply by a rational or by a LaurentPoly in h."""
        if isinstance(c, LaurentPoly):
            out: dict = {}
            for (w, e), x in self._data.items():
                for f, y in c.terms.items():
                    key = (w, e + f)
                    out[key] = out.get(key, 0) + x * y
            return AlgebraElement(out)
        c = Fraction(c)
        if not c:
            return AlgebraElement.zero()
        return AlgebraElement._raw({k: x * c for k, x in self._data.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            raise TypeError("ambiguous product: use concat_mul or harmonic_mul")
        return self.scale(other)

    __rmul__ = __mul__

    def h_shift(self, k: int) -> "AlgebraElement":
        """Multiply by h**k."""
        return AlgebraElement._raw({(w, e + k): c for (w, e), c in self._data.items()})

    def sorted_items(self):
        return sorted(self._data.items(), key=lambda kv: (word_key(kv[0][0]), kv[0][1]))

    def to_text(self) -> str:
        return render(self)

    def __repr__(self):
        return f"AlgebraElement({render(self)})"


# ---------------------------------------------------------------------------
# the contraction on single letters


def _circ_letters(u: int, v: int) -> tuple[int, int]:
    """Return (letter, h_exponent) with u o v = h**exponent * letter."""
    if u == B and v == B:
        return B, 1
    if u == B:
        return v, 1
    if v == B:
        return u, 1
    return u + v, 0


def circ(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """Bilinear contraction on the span of single letters."""
    if not u.is_in_zspan() or not v.is_in_zspan():
        raise ValueError("circ is only defined on linear combinations of single letters")
    out: dict = {}
    for ((a,), e), c in u.items():
        for ((b,), f), d in v.items():
            letter, s = _circ_letters(a, b)
            key = ((letter,), e + f + s)
            out[key] = out.get(key, 0) + c * d
    return AlgebraElement(out)


def circ_power(u: AlgebraElement, n: int) -> AlgebraElement:
    if n < 1:
        raise ValueError("circ_power needs n >= 1")
    if not u.is_in_zspan():
        raise ValueError("circ_power is only defined on linear combinations of single letters")
    out = u
    for _ in range(n - 1):
        out = circ(out, u)
    return out


# ---------------------------------------------------------------------------
# products


def concat_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    out: dict = {}
    for (w1, e1), c1 in a.items():
        for (w2, e2), c2 in b.items():
            key = (w1 + w2, e1 + e2)
            out[key] = out.get(key, 0) + c1 * c2
    return AlgebraElement(out)


def concat_power(a: AlgebraElement, n: int) -> AlgebraElement:
    if n < 0:
        raise ValueError("concat_power needs n >= 0")
    out = AlgebraElement.one()
    for _ in range(n):
        out = concat_mul(out, a)
    return out


@lru_cache(maxsize=None)
def _hmul_words(a: Word, b: Word) -> tuple:
    """Harmonic product of two words as a tuple of ((word, h_exp), int coefficient)."""
    if not a:
        return (((b, 0), 1),)
    if not b:
        return (((a, 0), 1),)
    if b < a:
        return _hmul_words(b, a)
    u, v = a[-1], b[-1]
    out: dict = {}
    for (w, e), c in _hmul_words(a[:-1], b):
        key = (w + (u,), e)
        out[key] = out.get(key, 0) + c
    for (w, e), c in _hmul_words(a, b[:-1]):
        key = (w + (v,), e)
        out[key] = out.get(key, 0) + c
    letter, s = _circ_letters(u, v)
    for (w, e), c in _hmul_words(a[:-1], b[:-1]):
        key = (w + (letter,), e + s)
        out[key] = out.get(key, 0) + c
    return tuple((k, c) for k, c in out.items() if c)


def harmonic_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Quasi-shuffle (harmonic) product, bilinear over Q[h, 1/h]."""
    out: dict = {}
    for (w1, e1), c1 in x.items():
        for (w2, e2), c2 in y.items():
            c = c1 * c2
            for (w, e), k in _hmul_words(w1, w2):
                key = (w, e + e1 + e2)
                out[key] = out.get(key, 0) + c * k
    return AlgebraElement(out)


def harmonic_power(w: AlgebraElement, n: int) -> AlgebraElement:
    if n < 1:
        raise ValueError("harmonic_power needs n >= 1")
    out = w
    for _ in range(n - 1):
        out = harmonic_mul(out, w)
    return out


# ---------------------------------------------------------------------------
# distinguished elements


def make_g(k: int) -> AlgebraElement:
    if k < 1:
        raise ValueError("g_k needs k >= 1")
    return AlgebraElement.letter(k)


def make_e(k: int) -> AlgebraElement:
    """e_1 = b + g_1 and e_k = g_k + h g_{k-1} for k >= 2."""
    if k < 1:
        raise ValueError("e_k needs k >= 1")
    if k == 1:
        return AlgebraElement({((B,), 0): 1, ((1,), 0): 1})
    return AlgebraElement({((k,), 0): 1, ((k - 1,), 1): 1})


def make_phi(k: int) -> AlgebraElement:
    """phi_k = sum_j (j-1)! {k j} h^(k-j) g_j."""
    if k < 1:
        raise ValueError("phi_k needs k >= 1")
    return AlgebraElement(
        {((j,), k - j): math.factorial(j - 1) * stirling2(k, j) for j in range(1, k + 1)}
    )


def psi(coefficients: Mapping[int, object]) -> AlgebraElement:
    """Image of P(z) = sum c_j z^j under z^n -> (-h)^(-n) g_n.

    ``coefficients`` maps degree to coefficient; P must vanish at 0 and 1.
    """
    coeffs = {int(j): Fraction(c) for j, c in coefficients.items() if Fraction(c)}
    if coeffs.get(0):
        raise ValueError("P(0)=0 violated")
    if sum(coeffs.values()) != 0:
        raise ValueError("P(1)=0 violated")
    return AlgebraElement({((j,), -j): c * (-1) ** j for j, c in coeffs.items()})


# ---------------------------------------------------------------------------
# text rendering and parsing: tokens h, b, gK, eK joined by '*'


def render(x: AlgebraElement) -> str:
    if not x:
        return "0"
    parts = []
    for (w, e), c in x.sorted_items():
        factors = []
        if e:
            factors.append("h" if e == 1 else f"h^{e}")
        factors.extend(letter_name(l) for l in w)
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        elif c == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return _join_signed(parts)


_TERM_SPLIT = re.compile(r"(?<!\^)([+-])")
_FACTOR = re.compile(r"^(?:(?P<num>\d+(?:/\d+)?)|h(?:\^(?P<hexp>-?\d+))?|(?P<kind>[bge])(?P<idx>\d*))$")


def parse_element(text: str) -> AlgebraElement:
    """Parse e.g. ``"2*h^-1*g2*g1 - e3 + 1/3"``.  ``eK`` expands on parse."""
    src = text.strip()
    if not src:
        raise ValueError("empty element text")
    if src[0] not in "+-":
        src = "+" + src
    pieces = _TERM_SPLIT.split(src)
    # split yields ['', sign, term, sign, term, ...]
    if pieces[0] != "":
        raise ValueError(f"cannot parse {text!r}")
    total = AlgebraElement.zero()
    for sign, term in zip(pieces[1::2], pieces[2::2]):
        total = total + _parse_term(term.strip()).scale(-1 if sign == "-" else 1)
    return total


def _parse_term(term: str) -> AlgebraElement:
    if not term:
        raise ValueError("dangling sign in element text")
    acc = AlgebraElement.one()
    for raw in term.split("*"):
        tok = raw.strip()
        m = _FACTOR.match(tok)
        if not m:
            raise ValueError(f"bad token {tok!r}")
        if m.group("num"):
            acc = acc.scale(Fraction(m.group("num")))
        elif m.group("kind"):
            kind, idx = m.group("kind"), m.group("idx")
            if kind == "b":
                if idx:
                    raise ValueError(f"bad token {tok!r}")
                factor = AlgebraElement.letter(B)
            else:
                if not idx or int(idx) < 1:
                    raise ValueError(f"bad token {tok!r}")
                factor = make_g(int(idx)) if kind == "g" else make_e(int(idx))
            acc = concat_mul(acc, factor)
        else:
            acc = acc.h_shift(int(m.group("hexp") or 1))
    return acc
