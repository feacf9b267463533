"""
Rule-based normal forms for perm and binary perm monomials.

Perm words flatten by associativity and then sort their tails by right commutativity.
Binary perm monomials of degree >= 5 are rewritten bottom-up: each factor is first brought
to a left-normed (or degree-4 basis) shape, then the product of two such factors is
expanded by one of

    (v1)   (ab)(cd) = -((ca)d)b + (a(cd))b + ((cd)a)b
    (v3)   a((bc)d) = ((ac)b)d
    (v5)   ((a(bc))d)e = (((ab)c)d)e
    (2)    (a,b,c) + (b,a,c) = 0, for x(xx) times xx

until every term is left-normed, and tails are sorted with (v4) and (v2). Degree-4
factors that are neither left-normed nor (x(xx))x are replaced by their coordinates in the
published degree-4 basis, which needs the variety engine.
"""

import logging
from collections import Counter

from .core import (
    Polynomial, degree, is_leaf, is_left_normed, leaves, left_normed, multidegree,
)
from .errors import InputError
from .variety import coordinates_to_polynomial, published_basis

logger = logging.getLogger('nas.rewrite')

VARIETIES = ('perm', 'binary-perm')


def _is_q4(m):
    """(x(xx))x."""
    if is_leaf(m) or not is_leaf(m[1]) or is_leaf(m[0]):
        return False
    a, bc = m[0]
    return is_leaf(a) and not is_leaf(bc) and is_leaf(bc[0]) and is_leaf(bc[1])


class Rewriter:

    def __init__(self, variety_name, engine=None):
        if variety_name not in VARIETIES:
            raise InputError(f"no rewrite rules for {variety_name!r}; expected one of {', '.join(VARIETIES)}")
        if variety_name == 'binary-perm' and engine is None:
            raise InputError("binary-perm rewriting needs an engine for degree-4 normal forms")
        self.variety_name = variety_name
        self.engine = engine
        self.fired = Counter()

    def fire(self, rule, times=1):
        self.fired[rule] += times

    def rewrite(self, m):
        if self.variety_name == 'perm':
            out = Polynomial.monomial(self._sorted(self._flatten(m)))
        elif degree(m) <= 4:
            out = self._small_nf(m)
        else:
            out = Polynomial()
            for w, c in self._reduce(m).terms.items():
                out = out + Polynomial.monomial(self._sorted(leaves(w)), c)
        logger.debug('Rewrote %r with %s', m, dict(self.fired))
        return out

    # -- perm

    def _flatten(self, m):
        if is_leaf(m):
            return [m]
        return self._append(self._flatten(m[0]), m[1])

    def _append(self, word, v):
        if is_leaf(v):
            return word + [v]
        # w(ab) = (wa)b
        self.fire('associativity')
        return self._append(self._append(word, v[0]), v[1])

    # -- tails

    def _sorted(self, letters):
        """Bubble sort of positions 2..n; each swap is one rule application."""
        letters = list(letters)
        for end in range(len(letters) - 1, 1, -1):
            for i in range(1, end):
                if letters[i] > letters[i + 1]:
                    letters[i], letters[i + 1] = letters[i + 1], letters[i]
                    self._swap_rule(i)
        return left_normed(letters)

    def _swap_rule(self, i):
        if self.variety_name == 'perm':
            self.fire('right-commutativity')
        else:
            # (v4) swaps positions k, k+1 for k >= 4; earlier swaps go through (v2)
            self.fire('v4' if i >= 3 else 'v2')

    # -- binary perm

    def _small_nf(self, m):
        if degree(m) <= 2:
            return Polynomial.monomial(m)
        basis = published_basis('binary-perm', multidegree(m))
        if m in basis:
            return Polynomial.monomial(m)
        self.fire('degree-4 basis' if degree(m) == 4 else 'degree-3 basis')
        coords = self.engine.normal_form(Polynomial.monomial(m), basis)
        return coordinates_to_polynomial(coords, basis)

    def _factor(self, w):
        """w as a combination of left-normed or degree <= 4 basis monomials."""
        d = degree(w)
        if d >= 5:
            return self._reduce(w)
        if d <= 3 or is_left_normed(w) or _is_q4(w):
            return Polynomial.monomial(w)
        return self._small_nf(w)

    def _reduce(self, m):
        """Left-normed combination equal to m, for degree(m) >= 5."""
        left, right = self._factor(m[0]), self._factor(m[1])
        out = Polynomial()
        for u, a in left.terms.items():
            for v, b in right.terms.items():
                out = out + self._combine(u, v).scale(a * b)
        return out

    def _combine(self, u, v):
        if is_leaf(v):
            if is_left_normed(u):
                return Polynomial.monomial((u, v))
            # ((a(bc))d)e = (((ab)c)d)e
            self.fire('v5')
            (a, (b, c)), d = u
            return Polynomial.monomial(((((a, b), c), d), v))

        p, q = v
        if not is_leaf(p):
            # a((bc)d) = ((ac)b)d
            self.fire('v3')
            b, c = p
            return self._reduce((((u, c), b), q))

        a1, a2 = u
        if degree(v) == 2 and not is_leaf(a2):
            # (a B) C = a(BC) - (Ba)C + B(aC)
            self.fire('left-alternative')
            return (self._reduce((a1, (a2, v)))
                    - self._reduce(((a2, a1), v))
                    + self._reduce((a2, (a1, v))))

        # (ab)(cd) = -((ca)d)b + (a(cd))b + ((cd)a)b
        self.fire('v1')
        c, d = p, q
        return (self._reduce(((a1, v), a2))
                - self._reduce((((c, a1), d), a2))
                + self._reduce((((c, d), a1), a2)))


def rewrite_nf(variety_name, m, engine=None):
    """Normal form of m as a combination of the published basis monomials."""
    return Rewriter(variety_name, engine).rewrite(m)
