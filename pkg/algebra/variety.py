"""
Graded components of free algebras of varieties.

A component at multidegree d is the span of free magma monomials of multidegree d
(columns, in deg-lex order) modulo the consequence space of the variety's identities:
all substitution instances of the identities placed in all monomial contexts. Rows come
from two sources:

    instances   f(m1, ..., mk) for monomials mi whose multidegrees sum to d
    lifts       r*w and w*r for echelon rows r of a smaller component and monomials w

Components only depend on the nonzero counts of d up to an order-preserving renaming of
letters, so they are built once per compressed multidegree and relabeled on demand.
"""

import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from .core import (
    Polynomial, as_multidegree, difference, enumerate_monomials,
    left_normed, multidegree, relabel, sub_multidegrees,
)
from .errors import BasisError, InputError, RegistryError
from .linalg import FIELD, SparseMatrix, empty_echelon, in_rowspace, normalize, rref, stack
from .parser import Identity, parse_variety_file

logger = logging.getLogger('nas.variety')

REGISTRY_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'registry.var')


# ---------------------------------------------------------------------------
# Varieties and the registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Variety:
    """A named set of multilinear identities."""
    name: str
    identities: tuple
    source: tuple = ()

    @classmethod
    def from_identities(cls, name, identities):
        from .derived import linearize

        source = tuple(identities)
        stored = []
        for identity in source:
            if not identity.poly:
                continue
            pieces = [identity] if identity.multilinear else linearize(identity)
            stored.extend(p for p in pieces if p.poly)
        return cls(name, tuple(stored), source)

    @classmethod
    def from_def(cls, vdef):
        return cls.from_identities(vdef.name, vdef.identities)

    @property
    def min_degree(self):
        if not self.identities:
            return None
        return min(identity.degree for identity in self.identities)

    def canonical_text(self):
        """Order-independent rendering of the identity set, used for cache keys."""
        return '\n'.join(sorted(identity.poly.render() for identity in self.identities))


def load_registry(paths=()):
    """Built-in varieties, then each extra file in order; later files win."""
    registry = {}
    with open(REGISTRY_PATH) as fh:
        for vdef in parse_variety_file(fh.read()):
            registry[vdef.name] = vdef
    for path in paths:
        with open(path) as fh:
            text = fh.read()
        for vdef in parse_variety_file(text):
            if vdef.name in registry:
                logger.warning('Variety %s from %s replaces an earlier definition', vdef.name, path)
            registry[vdef.name] = vdef
    return registry


def get_variety(name, registry=None):
    registry = registry if registry is not None else load_registry()
    if name not in registry:
        raise RegistryError(f"unknown variety {name!r}; known: {', '.join(sorted(registry))}")
    return Variety.from_def(registry[name])


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------

@dataclass
class ComponentSpace:
    multidegree: tuple
    monomials: list
    echelon: object
    spanning_rows: int = 0
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {m: i for i, m in enumerate(self.monomials)}

    @property
    def total(self):
        return len(self.monomials)

    @property
    def rank(self):
        return self.echelon.rank

    @property
    def dimension(self):
        return self.total - self.rank

    def vector(self, p):
        try:
            return {self.index[m]: c for m, c in p.terms.items()}
        except KeyError as exc:
            raise InputError(f"monomial {exc.args[0]!r} is not of multidegree {self.multidegree}")

    def polynomial(self, v):
        return Polynomial({self.monomials[j]: c for j, c in v.items()})

    def reduce(self, p):
        """Residue of p modulo the consequence space."""
        return self.echelon.reduce(self.vector(p))

    def canonical_basis(self):
        return [self.monomials[j] for j in self.echelon.nonpivots()]

    def relabeled(self, letters, d):
        return ComponentSpace(d, [relabel(m, letters) for m in self.monomials],
                              self.echelon, self.spanning_rows)


@dataclass
class ComponentReport:
    variety: str
    multidegree: tuple
    total: int
    rank: int
    dimension: int
    basis: list = None


@dataclass
class ConsequenceResult:
    holds: bool
    multidegree: tuple
    residue: Polynomial


@dataclass
class BasisVerdict:
    ok: bool
    reason: str
    expected: int
    given: int
    independent: int


def compress(d):
    """Nonzero counts of d and the letters they belong to."""
    letters = [k + 1 for k, c in enumerate(d) if c]
    return tuple(c for c in d if c), letters


def ordered_splits(d, k):
    """Tuples of k nonzero full-length multidegrees summing to d."""
    d = tuple(d)
    if k == 1:
        if any(d):
            yield (d,)
        return
    for e in sub_multidegrees(d):
        rest = tuple(a - b for a, b in zip(d, e))
        if sum(rest) < k - 1:
            continue
        for tail in ordered_splits(rest, k - 1):
            yield (e,) + tail


def _freeze(row):
    row = normalize({j: c for j, c in row.items() if c})
    return tuple(row.items())


class VarietyEngine:
    """Builds and caches the components of one variety."""

    def __init__(self, variety, threads=1, method=FIELD):
        self.variety = variety
        self.threads = max(1, int(threads or 1))
        self.method = method
        self._spaces = {}
        self._views = {}
        self._coordinates = {}
        self._lock = threading.RLock()

    # -- construction

    @property
    def components_built(self):
        return len(self._spaces)

    def component(self, d):
        d = as_multidegree(d)
        if not d:
            raise InputError("multidegree must have degree >= 1")
        view = self._views.get(d)
        if view is not None:
            return view
        with self._lock:
            key, letters = compress(d)
            space = self._spaces.get(key)
            if space is None:
                space = self._build(key)
                self._spaces[key] = space
            view = space if key == d else space.relabeled(letters, d)
            self._views[d] = view
        return view

    def _build(self, key):
        started = time.perf_counter()
        monomials = enumerate_monomials(key)
        min_degree = self.variety.min_degree
        if min_degree is None or sum(key) < min_degree:
            return ComponentSpace(key, monomials, empty_echelon(len(monomials)))

        # Smaller components first so the row jobs below never recurse.
        lowers = []
        for e in sorted(sub_multidegrees(key), key=sum):
            if sum(e) >= min_degree:
                lower = self.component(e)
                if lower.rank:
                    lowers.append((e, lower))

        index = {m: i for i, m in enumerate(monomials)}
        jobs = [(self._instance_rows, identity) for identity in self.variety.identities]
        jobs += [(self._lift_rows, lower_pair) for lower_pair in lowers]

        rows = set()
        if self.threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                for part in pool.map(lambda job: job[0](job[1], key, index), jobs):
                    rows |= part
        else:
            for fn, arg in jobs:
                rows |= fn(arg, key, index)
        rows.discard(())

        matrix = SparseMatrix(tuple(dict(r) for r in sorted(rows)), len(monomials))
        echelon = rref(matrix, self.method)
        logger.info('Component %s of %s: %d monomials, %d rows, rank %d (%.2fs)',
                    ','.join(map(str, key)), self.variety.name, len(monomials), len(rows),
                    echelon.rank, time.perf_counter() - started)
        return ComponentSpace(key, monomials, echelon, spanning_rows=len(rows))

    def _instance_rows(self, identity, d, index):
        rows = set()
        k = len(identity.variables)
        if sum(d) < identity.degree:
            return rows
        terms = list(identity.poly.terms.items())
        for parts in ordered_splits(d, k):
            choices = [enumerate_monomials(as_multidegree(p)) for p in parts]
            for subs in product(*choices):
                row = {}
                for m, c in terms:
                    col = index[relabel(m, subs)]
                    row[col] = row.get(col, QQ(0)) + c
                rows.add(_freeze(row))
        logger.debug('%d instance rows of %s at %s', len(rows), identity.text or 'identity', d)
        return rows

    def _lift_rows(self, lower_pair, d, index):
        e, lower = lower_pair
        rows = set()
        others = enumerate_monomials(difference(d, e))
        for row in lower.echelon.rows:
            for w in others:
                rows.add(_freeze({index[(lower.monomials[j], w)]: c for j, c in row.items()}))
                rows.add(_freeze({index[(w, lower.monomials[j])]: c for j, c in row.items()}))
        return rows

    # -- operations

    def consequences(self, d):
        return self.component(d)

    def dimension(self, d, with_basis=False):
        space = self.component(d)
        basis = space.canonical_basis() if with_basis else None
        return ComponentReport(self.variety.name, space.multidegree, space.total,
                               space.rank, space.dimension, basis)

    def is_consequence(self, f):
        poly = f.poly if isinstance(f, Identity) else f
        if isinstance(f, Identity) and not f.multilinear:
            raise InputError("identity is not multilinear; linearize it first")
        if not poly:
            return ConsequenceResult(True, (), Polynomial())
        d = poly.homogeneous_multidegree()
        space = self.component(d)
        holds, residue = in_rowspace(space.echelon, space.vector(poly))
        return ConsequenceResult(holds, d, space.polynomial(residue))

    def verify_basis(self, d, candidates):
        d = as_multidegree(d)
        for m in candidates:
            if multidegree(m) != d:
                raise InputError(f"candidate {m!r} does not have multidegree {d}")
        space = self.component(d)
        if len(candidates) != space.dimension:
            return BasisVerdict(False, 'wrong_count', space.dimension, len(candidates), 0)
        units = [{space.index[m]: QQ(1)} for m in candidates]
        independent = stack(space.echelon, units, self.method).rank - space.rank
        if independent != len(candidates):
            return BasisVerdict(False, 'dependent', space.dimension, len(candidates), independent)
        return BasisVerdict(True, 'ok', space.dimension, len(candidates), independent)

    def normal_form(self, p, basis):
        """Coordinates of p's class in the given basis of its component."""
        if not p:
            return [QQ(0)] * len(basis)
        d = p.homogeneous_multidegree()
        coords = self._coordinate_map(d, tuple(basis))
        space = self.component(d)
        residue = space.reduce(p)
        return coords(residue)

    def _coordinate_map(self, d, basis):
        key = (as_multidegree(d), basis)
        if key in self._coordinates:
            return self._coordinates[key]
        verdict = self.verify_basis(d, list(basis))
        if not verdict.ok:
            raise BasisError(f"basis fails verification at {d}: {verdict.reason}")
        space = self.component(d)
        free_cols = space.echelon.nonpivots()
        position = {j: i for i, j in enumerate(free_cols)}
        k = len(basis)
        residues = {}
        for i, m in enumerate(basis):
            r = space.echelon.reduce({space.index[m]: QQ(1)})
            residues[i] = {position[j]: c for j, c in r.items()}
        inverse = SDM(residues, (k, k), QQ).inv() if k else None

        def coords(residue):
            out = [QQ(0)] * k
            for j, c in residue.items():
                for i, a in inverse.get(position[j], {}).items():
                    out[i] += c * a
            return out

        self._coordinates[key] = coords
        return coords


def coordinates_to_polynomial(coords, basis):
    return Polynomial({m: c for m, c in zip(basis, coords) if c})


# ---------------------------------------------------------------------------
# Published bases
# ---------------------------------------------------------------------------

def _sorted_tail_words(d):
    """Left-normed words x_h x_i2 ... x_in with i2 <= ... <= in, one per head letter."""
    letters = [k + 1 for k, c in enumerate(d) for _ in range(c)]
    out = []
    for head in sorted(set(letters)):
        rest = list(letters)
        rest.remove(head)
        out.append(left_normed([head] + sorted(rest)))
    return out


def _pattern_letters(d):
    """Group letters of d by multiplicity, each group ascending."""
    groups = {}
    for k, c in enumerate(d):
        if c:
            groups.setdefault(c, []).append(k + 1)
    return groups


def _degree3_basis(d):
    g = _pattern_letters(d)
    if g.get(1) and len(g[1]) == 3:
        i, j, k = g[1]
        return [((i, j), k), ((i, k), j), ((j, i), k), ((k, i), j), (k, (i, j))]
    if g.get(2):
        i, j = g[2][0], g[1][0]
        return [((j, i), i), ((i, i), j)]
    i = g[3][0]
    return [((i, i), i)]


def _degree4_basis(d):
    g = _pattern_letters(d)
    if g.get(1) and len(g[1]) == 4:
        i, j, k, l = g[1]
        return [(((i, j), k), l), (((i, j), l), k), (((j, i), k), l),
                (((k, i), j), l), (((l, i), j), k), ((k, (i, j)), l)]
    if g.get(3):
        i, j = g[3][0], g[1][0]
        return [(((j, i), i), i), (((i, i), i), j)]
    if g.get(2) and len(g[2]) == 2:
        i, j = g[2]
        return [(((j, i), i), j), (((i, i), j), j)]
    if g.get(2):
        i = g[2][0]
        j, k = g[1]
        return [(((k, i), i), j), (((j, i), i), k), (((i, i), j), k)]
    i = g[4][0]
    return [(((i, i), i), i)]


def published_basis(variety_name, d):
    """The published monomial bases of the free perm and binary perm algebras."""
    d = as_multidegree(d)
    n = sum(d)
    if variety_name == 'perm':
        return _sorted_tail_words(d)
    if variety_name != 'binary-perm':
        raise InputError(f"no published basis for {variety_name!r}")
    if n == 1:
        return [d.index(1) + 1]
    if n == 2:
        return enumerate_monomials(d)
    if n == 3:
        return _degree3_basis(d)
    if n == 4:
        return _degree4_basis(d)
    return _sorted_tail_words(d)
