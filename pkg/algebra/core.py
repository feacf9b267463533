"""
Free magma monomials and polynomials over the rationals.

Monomial format:
    leaf      int k >= 1            the generator x_k
    node      (left, right) tuple   the product left*right
Multidegrees are tuples of generator counts with trailing zeros stripped.
Polynomial coefficients are sympy QQ elements; zero coefficients are never stored.
"""

import math
from enum import Enum, IntEnum
from functools import lru_cache
from itertools import product

from sympy import QQ

from .errors import InputError


class TermOrder(str, Enum):
    DEG_LEX = 'deg-lex'
    RIGHT_DEG_LEX = 'right-deg-lex'


class Sign(str, Enum):
    """Product of a derived algebra: [a,b] = ab - ba or {a,b} = ab + ba."""
    MINUS = 'minus'
    PLUS = 'plus'


class Cmp(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------

def is_leaf(m):
    return isinstance(m, int)


@lru_cache(maxsize=None)
def degree(m):
    if is_leaf(m):
        return 1
    return degree(m[0]) + degree(m[1])


def leaves(m):
    """Leaf labels from left to right."""
    if is_leaf(m):
        return [m]
    return leaves(m[0]) + leaves(m[1])


@lru_cache(maxsize=None)
def multidegree(m):
    counts = [0] * max(leaves(m))
    for k in leaves(m):
        counts[k - 1] += 1
    return tuple(counts)


def as_multidegree(counts):
    counts = [int(c) for c in counts]
    if any(c < 0 for c in counts):
        raise InputError(f"negative entry in multidegree {counts}")
    while counts and counts[-1] == 0:
        counts.pop()
    return tuple(counts)


def parse_multidegree(text):
    try:
        return as_multidegree(part.strip() for part in text.split(',') if part.strip())
    except ValueError:
        raise InputError(f"malformed multidegree: {text!r}")


def multilinear(n):
    return (1,) * n


def format_multidegree(d):
    return ','.join(str(c) for c in d)


def relabel(m, mapping):
    """Rename leaves through mapping (a dict or a sequence indexed by k-1)."""
    if is_leaf(m):
        return mapping[m] if isinstance(mapping, dict) else mapping[m - 1]
    return (relabel(m[0], mapping), relabel(m[1], mapping))


def render(m, names=None):
    """Fully parenthesized text, e.g. ((x1*x2)*x3)."""
    if is_leaf(m):
        return names[m - 1] if names else f"x{m}"
    return f"({render(m[0], names)}*{render(m[1], names)})"


def left_normed(letters):
    letters = list(letters)
    m = letters[0]
    for k in letters[1:]:
        m = (m, k)
    return m


def spine(m):
    """Split m as (...((h r1) r2)...) rk into (h, [r1, ..., rk])."""
    rights = []
    while not is_leaf(m):
        rights.append(m[1])
        m = m[0]
    rights.reverse()
    return m, rights


def is_left_normed(m):
    _, rights = spine(m)
    return all(is_leaf(r) for r in rights)


# ---------------------------------------------------------------------------
# Term orders
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _deglex_key(m):
    if is_leaf(m):
        return (1, m)
    return (degree(m), _deglex_key(m[0]), _deglex_key(m[1]))


@lru_cache(maxsize=None)
def _right_deglex_key(m):
    if is_leaf(m):
        return (1, m)
    return (degree(m), _right_deglex_key(m[1]), _right_deglex_key(m[0]))


def sort_key(order):
    """Key function whose tuple comparison realizes the given order."""
    order = TermOrder(order)
    if order is TermOrder.DEG_LEX:
        return _deglex_key
    return _right_deglex_key


def compare(order, u, v):
    key = sort_key(order)
    ku, kv = key(u), key(v)
    if ku < kv:
        return Cmp.LT
    if ku > kv:
        return Cmp.GT
    return Cmp.EQ


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def sub_multidegrees(d):
    """Nonzero proper sub-multidegrees e < d, as full-length tuples."""
    full = tuple(d)
    for e in product(*(range(c + 1) for c in full)):
        if any(e) and e != full:
            yield e


def difference(d, e):
    return as_multidegree(a - b for a, b in zip(d, list(e) + [0] * (len(d) - len(e))))


@lru_cache(maxsize=None)
def _enumerate(d):
    if sum(d) == 1:
        return (d.index(1) + 1,)
    out = []
    for e in sub_multidegrees(d):
        lefts = _enumerate(as_multidegree(e))
        rights = _enumerate(difference(d, e))
        out.extend((u, v) for u in lefts for v in rights)
    out.sort(key=_deglex_key)
    return tuple(out)


def enumerate_monomials(d):
    """All monomials of multidegree d, each once, in deg-lex order."""
    d = as_multidegree(d)
    if sum(d) < 1:
        raise InputError("multidegree must have degree >= 1")
    return list(_enumerate(d))


def monomial_count(d):
    d = as_multidegree(d)
    n = sum(d)
    catalan = math.comb(2 * (n - 1), n - 1) // n
    arrangements = math.factorial(n)
    for c in d:
        arrangements //= math.factorial(c)
    return catalan * arrangements


def multidegrees_of_degree(n, letters):
    """Every multidegree of total degree n over the given number of letters."""
    out = set()
    for counts in product(range(n + 1), repeat=letters):
        if sum(counts) == n:
            out.add(as_multidegree(counts))
    return sorted(out, reverse=True)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def as_coefficient(c):
    if isinstance(c, QQ.dtype):
        return c
    if isinstance(c, str):
        num, _, den = c.partition('/')
        return QQ(int(num), int(den or 1))
    return QQ(c)


class Polynomial:
    """Finite linear combination of monomials with exact rational coefficients."""

    __slots__ = ('terms',)

    def __init__(self, terms=None):
        clean = {}
        for m, c in (terms or {}).items():
            c = as_coefficient(c)
            if c:
                clean[m] = c
        self.terms = clean

    @classmethod
    def monomial(cls, m, coefficient=1):
        return cls({m: coefficient})

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Polynomial({self.render()})"

    def items(self, order=TermOrder.DEG_LEX):
        key = sort_key(order)
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]))

    def coefficient(self, m):
        return self.terms.get(m, QQ(0))

    def _combine(self, other, sign):
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, QQ(0)) + sign * c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def scale(self, c):
        c = as_coefficient(c)
        if not c:
            return Polynomial()
        return Polynomial._raw({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        return multiply(self, other)

    def substitute(self, mapping):
        """Replace each generator k by the polynomial mapping[k]."""
        out = Polynomial()
        for m, c in self.terms.items():
            out = out + _substitute_monomial(m, mapping).scale(c)
        return out

    def multidegrees(self):
        return {multidegree(m) for m in self.terms}

    def homogeneous_multidegree(self):
        degrees = self.multidegrees()
        if len(degrees) != 1:
            raise InputError("polynomial is not homogeneous")
        return degrees.pop()

    def render(self, names=None):
        if not self.terms:
            return '0'
        parts = []
        for m, c in self.items():
            text = render(m, names)
            sign = '-' if c < 0 else '+'
            mag = abs(c)
            if mag != 1:
                text = f"{format_coefficient(mag)}*{text}"
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ('-' if first_sign == '-' else '') + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out


def format_coefficient(c):
    c = QQ(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _substitute_monomial(m, mapping):
    if is_leaf(m):
        return mapping[m]
    return multiply(_substitute_monomial(m[0], mapping), _substitute_monomial(m[1], mapping))


def multiply(p, q):
    """Bilinear extension of the free magma product."""
    out = {}
    for u, a in p.terms.items():
        for v, b in q.terms.items():
            m = (u, v)
            c = out.get(m, QQ(0)) + a * b
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return Polynomial._raw(out)


def leading_monomial(p, order):
    if not p:
        raise InputError("empty support")
    return max(p.terms, key=sort_key(order))
