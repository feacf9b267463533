"""
Exact sparse linear algebra over QQ on top of sympy's SDM.

Sparse vectors are dicts {column: QQ}; no stored zeros. Reduced row echelon forms are
canonical for a row space, so results never depend on the order rows were produced in.
Text dump format (1-based, one entry per line):

    %%exact-rational
    <nrows> <ncols> <nnz>
    <row> <col> <numerator>/<denominator>
"""

import logging
from dataclasses import dataclass, field
from math import lcm

from sympy import QQ, ZZ
from sympy.polys.matrices.sdm import SDM

from .core import as_coefficient
from .errors import InputError

logger = logging.getLogger('nas.linalg')

FIELD = 'field'
FRACTION_FREE = 'fraction-free'
METHODS = (FIELD, FRACTION_FREE)


@dataclass(frozen=True)
class SparseMatrix:
    rows: tuple
    ncols: int

    @classmethod
    def from_rows(cls, rows, ncols):
        clean = []
        for row in rows:
            row = {j: as_coefficient(c) for j, c in row.items()}
            row = {j: c for j, c in row.items() if c}
            if any(j < 0 or j >= ncols for j in row):
                raise InputError(f"column index outside 0..{ncols - 1}")
            clean.append(row)
        return cls(tuple(clean), ncols)

    @property
    def nrows(self):
        return len(self.rows)

    def transpose(self):
        cols = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, c in row.items():
                cols[j][i] = c
        return SparseMatrix(tuple(cols), self.nrows)

    def to_sdm(self):
        elems = {i: dict(row) for i, row in enumerate(self.rows) if row}
        return SDM(elems, (self.nrows, self.ncols), QQ)


@dataclass
class EchelonForm:
    """Reduced rows in pivot order; every pivot entry is 1."""
    rows: list
    pivots: tuple
    ncols: int
    pivot_row: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.pivot_row = {p: i for i, p in enumerate(self.pivots)}

    @property
    def rank(self):
        return len(self.pivots)

    def nonpivots(self):
        return [j for j in range(self.ncols) if j not in self.pivot_row]

    def reduce(self, v):
        """Residue of v modulo the row space; supported on non-pivot columns."""
        residue = dict(v)
        for p in [j for j in v if j in self.pivot_row]:
            c = residue.pop(p, None)
            if not c:
                continue
            for j, a in self.rows[self.pivot_row[p]].items():
                if j == p:
                    continue
                value = residue.get(j, QQ(0)) - c * a
                if value:
                    residue[j] = value
                else:
                    residue.pop(j, None)
        return residue

    def __eq__(self, other):
        if not isinstance(other, EchelonForm):
            return NotImplemented
        return (self.ncols, self.pivots, self.rows) == (other.ncols, other.pivots, other.rows)


def empty_echelon(ncols):
    return EchelonForm([], (), ncols)


def _integer_rows(rows):
    """Scale each row by the lcm of its denominators so SDM can work over ZZ."""
    out = {}
    for i, row in enumerate(rows):
        if not row:
            continue
        scale = lcm(*(int(c.denominator) for c in row.values()))
        out[i] = {j: ZZ(int(c.numerator) * (scale // int(c.denominator))) for j, c in row.items()}
    return out


def rref(m, method=FIELD):
    """Reduced row echelon form over QQ; fraction-free elimination runs over ZZ instead."""
    if method not in METHODS:
        raise InputError(f"unknown elimination method {method!r}; expected one of {', '.join(METHODS)}")
    if not any(m.rows):
        return empty_echelon(m.ncols)
    if method == FRACTION_FREE:
        elems = _integer_rows(m.rows)
        reduced, _, pivots = SDM(elems, (m.nrows, m.ncols), ZZ).rref_den()
        rows = []
        for i, p in enumerate(pivots):
            row = reduced[i]
            lead = row[p]
            rows.append({j: QQ(int(c), int(lead)) for j, c in row.items()})
    else:
        reduced, pivots = m.to_sdm().rref()
        rows = [dict(reduced[i]) for i in range(len(pivots))]
    logger.debug('rref %dx%d -> rank %d', m.nrows, m.ncols, len(pivots))
    return EchelonForm(rows, tuple(pivots), m.ncols)


def rank(m, method=FIELD):
    return rref(m, method).rank


def normalize(v):
    """Scale v so its lowest-column entry is 1."""
    if not v:
        return {}
    lead = v[min(v)]
    return {j: c / lead for j, c in sorted(v.items())}


def nullspace(m, method=FIELD):
    """Basis of the right kernel, each vector normalized by its first nonzero entry."""
    echelon = rref(m, method)
    return nullspace_from_echelon(echelon)


def nullspace_from_echelon(echelon):
    reduced = SDM(dict(enumerate(echelon.rows)), (echelon.rank, echelon.ncols), QQ)
    kernel, _ = reduced.nullspace_from_rref(list(echelon.pivots))
    return [normalize(dict(kernel[i])) for i in sorted(kernel)]


def in_rowspace(echelon, v):
    """(True, {}) when v reduces to zero, else (False, residue)."""
    if any(j >= echelon.ncols for j in v):
        raise InputError("vector has more columns than the echelon form")
    residue = echelon.reduce(v)
    return not residue, residue


def stack(echelon, vectors, method=FIELD):
    """Echelon form of the span of echelon rows plus extra vectors."""
    return rref(SparseMatrix(tuple(echelon.rows) + tuple(vectors), echelon.ncols), method)


# ---------------------------------------------------------------------------
# Text dumps
# ---------------------------------------------------------------------------

def dump_matrix(m, stream):
    entries = [(i, j, c) for i, row in enumerate(m.rows) for j, c in sorted(row.items())]
    stream.write('%%exact-rational\n')
    stream.write(f"{m.nrows} {m.ncols} {len(entries)}\n")
    for i, j, c in entries:
        c = QQ(c)
        stream.write(f"{i + 1} {j + 1} {int(c.numerator)}/{int(c.denominator)}\n")


def echelon_matrix(echelon):
    return SparseMatrix(tuple(echelon.rows), echelon.ncols)
