"""
Derived algebras A(-) and A(+): the same space with product [a,b] = ab - ba or
{a,b} = ab + ba.

A bracket word is a free magma monomial read with the derived product, so the identities
of host(sign) at a multidegree d are exactly the kernel of the evaluation map

    w  ->  class of expand_bracket(w, sign) in the host component at d

from the free magma component at d. Kernel vectors are rendered with bracket sugar.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .core import (
    Polynomial, Sign, TermOrder, as_multidegree, difference, enumerate_monomials,
    format_coefficient, is_leaf, leading_monomial, multidegree, multilinear, sort_key, spine,
    sub_multidegrees,
)
from .errors import InputError
from .linalg import SparseMatrix, in_rowspace, nullspace, rref
from .parser import Identity
from .variety import Variety, VarietyEngine

logger = logging.getLogger('nas.derived')


# ---------------------------------------------------------------------------
# Polarization
# ---------------------------------------------------------------------------

def _fresh_names(name, count, taken):
    out = []
    for i in range(1, count + 1):
        candidate = f"{name}{i}"
        while candidate in taken:
            candidate += '_'
        taken.add(candidate)
        out.append(candidate)
    return out


def linearize(f):
    """Full multilinearization of each multihomogeneous component of f."""
    components = {}
    for m, c in f.poly.terms.items():
        d = multidegree(m) + (0,) * (len(f.variables) - len(multidegree(m)))
        components.setdefault(d, {})[m] = c

    out = []
    for d in sorted(components, reverse=True):
        taken = set(f.variables)
        names = []
        copies = {}
        for v, count in enumerate(d, start=1):
            if count == 0:
                continue
            if count == 1:
                copies[v] = [len(names) + 1]
                names.append(f.variables[v - 1])
            else:
                fresh = _fresh_names(f.variables[v - 1], count, taken)
                copies[v] = list(range(len(names) + 1, len(names) + count + 1))
                names.extend(fresh)

        # a -> a1 + ... + ak, then keep the terms using every copy once
        mapping = {v: Polynomial({k: 1 for k in copies[v]}) for v in copies}
        expanded = Polynomial(components[d]).substitute(mapping)
        target = multilinear(len(names))
        linear = Polynomial({m: c for m, c in expanded.terms.items() if multidegree(m) == target})
        if linear:
            out.append(Identity(linear, tuple(names), f"linearization of {f.text}".strip()))
    return out


# ---------------------------------------------------------------------------
# Bracket words
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _expand(w, sign):
    if is_leaf(w):
        return Polynomial.monomial(w)
    u, v = _expand(w[0], sign), _expand(w[1], sign)
    if sign is Sign.MINUS:
        return u * v - v * u
    return u * v + v * u


def expand_bracket(w, sign):
    return _expand(w, Sign(sign))


def expand_polynomial(p, sign):
    """Linear extension of expand_bracket to polynomials in the derived product."""
    out = Polynomial()
    for w, c in p.terms.items():
        out = out + expand_bracket(w, sign).scale(c)
    return out


def tilde(w):
    """The bracket word read as a plain monomial."""
    return w


def render_bracket(w, sign, names=None):
    if is_leaf(w):
        return names[w - 1] if names else f"x{w}"
    open_, close = ('[', ']') if Sign(sign) is Sign.MINUS else ('{', '}')
    return f"{open_}{render_bracket(w[0], sign, names)},{render_bracket(w[1], sign, names)}{close}"


def render_bracket_polynomial(p, sign, names=None):
    if not p:
        return '0'
    parts = []
    for w, c in p.items():
        body = render_bracket(w, sign, names)
        mag = abs(c)
        if mag != 1:
            body = f"{format_coefficient(mag)}*{body}"
        parts.append(('-' if c < 0 else '+', body))
    text = ('-' if parts[0][0] == '-' else '') + parts[0][1]
    for s, body in parts[1:]:
        text += f" {s} {body}"
    return text


# ---------------------------------------------------------------------------
# Good words and the NAP basis
# ---------------------------------------------------------------------------

def is_good(w, order=TermOrder.DEG_LEX):
    if is_leaf(w):
        return True
    key = sort_key(order)
    v, u = w
    return is_good(v, order) and is_good(u, order) and key(v) < key(u)


@lru_cache(maxsize=None)
def _good_words(d, order):
    if sum(d) == 1:
        return (d.index(1) + 1,)
    key = sort_key(order)
    out = []
    for e in sub_multidegrees(d):
        left, right = as_multidegree(e), difference(d, e)
        for a in _good_words(left, order):
            for b in _good_words(right, order):
                if key(a) < key(b):
                    out.append((a, b))
    out.sort(key=sort_key(TermOrder.DEG_LEX))
    return tuple(out)


def good_words(alphabet_size, d, order=TermOrder.DEG_LEX):
    """Good words of multidegree d in deg-lex order; goodness compares children by order."""
    d = as_multidegree(d)
    if len(d) > alphabet_size:
        raise InputError(f"multidegree {d} uses more than {alphabet_size} letters")
    return list(_good_words(d, TermOrder(order)))


def is_nap_basis(m):
    """(...((x_i w1) w2)...) wn with w1 <= ... <= wn in deg-lex, each wk a basis monomial."""
    _, rights = spine(m)
    key = sort_key(TermOrder.DEG_LEX)
    if any(key(a) > key(b) for a, b in zip(rights, rights[1:])):
        return False
    return all(is_nap_basis(r) for r in rights)


def nap_basis(d):
    return [m for m in enumerate_monomials(d) if is_nap_basis(m)]


def leading_word(w):
    return leading_monomial(expand_bracket(w, Sign.MINUS), TermOrder.RIGHT_DEG_LEX)


def leading_word_check(w):
    """The right deg-lex leading monomial of the commutator expansion is the word itself."""
    t = tilde(w)
    return leading_word(w) == t and is_nap_basis(t)


def distinct_leading_words(words):
    leads = [leading_word(w) for w in words]
    return len(set(leads)) == len(leads)


# ---------------------------------------------------------------------------
# Kernels and generation
# ---------------------------------------------------------------------------

@dataclass
class KernelSpace:
    multidegree: tuple
    monomials: list
    echelon: object
    evaluation_rank: int

    @property
    def dimension(self):
        return self.echelon.rank

    def contains(self, p):
        index = {m: i for i, m in enumerate(self.monomials)}
        holds, _ = in_rowspace(self.echelon, {index[m]: c for m, c in p.terms.items()})
        return holds

    def basis_polynomials(self):
        return [Polynomial({self.monomials[j]: c for j, c in row.items()})
                for row in self.echelon.rows]


@dataclass
class GenerationReport:
    generates: bool
    contained: bool
    kernel_dimension: int
    consequence_dimension: int
    extra: list = field(default_factory=list)

    @property
    def gap(self):
        return self.kernel_dimension - self.consequence_dimension


def _evaluation_row(space, position, w, sign):
    residue = space.reduce(expand_bracket(w, sign))
    return {position[j]: c for j, c in residue.items()}


def derived_kernel(host, sign, d):
    """Identities of host(sign) at multidegree d, as a subspace of the free magma component."""
    sign = Sign(sign)
    space = host.component(d)
    monomials = enumerate_monomials(as_multidegree(d))
    position = {j: i for i, j in enumerate(space.echelon.nonpivots())}
    if host.threads > 1:
        with ThreadPoolExecutor(max_workers=host.threads) as pool:
            rows = list(pool.map(lambda w: _evaluation_row(space, position, w, sign), monomials))
    else:
        rows = [_evaluation_row(space, position, w, sign) for w in monomials]
    evaluation = SparseMatrix(tuple(rows), len(position))
    kernel = nullspace(evaluation.transpose(), host.method)
    echelon = rref(SparseMatrix(tuple(kernel), len(monomials)), host.method)
    logger.info('Kernel of %s(%s) at %s: %d monomials, evaluation rank %d, kernel %d',
                host.variety.name, sign.value, ','.join(map(str, space.multidegree)),
                len(monomials), len(monomials) - echelon.rank, echelon.rank)
    return KernelSpace(space.multidegree, monomials, echelon, len(monomials) - echelon.rank)


def is_derived_identity(host, sign, f):
    """True when every multilinear piece of f vanishes in host(sign)."""
    pieces = [f] if f.multilinear else linearize(f)
    for piece in pieces:
        if not piece.poly:
            continue
        image = expand_polynomial(piece.poly, sign)
        space = host.component(image.homogeneous_multidegree())
        if space.reduce(image):
            return False
    return True


def _outside(kernel, closure, method):
    """Kernel identities independent modulo the closure, one per missing dimension."""
    residues = tuple(closure.echelon.reduce(row) for row in kernel.echelon.rows)
    reduced = rref(SparseMatrix(residues, len(kernel.monomials)), method)
    return [Polynomial({kernel.monomials[j]: c for j, c in row.items()}) for row in reduced.rows]


def generates_all(candidates, host, sign, d, kernel=None, method=None):
    """Compare the consequence span of candidates in the free magma with the kernel at d.

    When the candidates are identities but fall short, the report lists kernel identities
    that do not follow from them.
    """
    method = method or host.method
    kernel = kernel or derived_kernel(host, sign, d)
    variety = Variety.from_identities('candidates', candidates)
    closure = VarietyEngine(variety, threads=host.threads, method=method).component(d)
    contained = all(in_rowspace(kernel.echelon, row)[0] for row in closure.echelon.rows)
    report = GenerationReport(contained and closure.rank == kernel.dimension, contained,
                              kernel.dimension, closure.rank)
    if contained and report.gap:
        report.extra = _outside(kernel, closure, method)
    logger.info('Generation at %s: kernel %d, consequences %d, contained=%s',
                ','.join(map(str, kernel.multidegree)), report.kernel_dimension,
                report.consequence_dimension, contained)
    return report
