"""Exact linear algebra over Q and over residue domains R/P.

Matrices here are plain lists of rows.  Over Q the entries are Fractions;
over a domain the caller supplies a reduction map and the zero test is
"reduces to zero".
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional, Sequence


def rank_rational(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    sparse = [{j: v for j, v in enumerate(r) if v} for r in rows]
    pivots, _ = _rref(sparse, len(rows[0]))
    return len(pivots)


def rank_over_domain(rows, reduce: Callable) -> int:
    """Rank over the fraction field of a domain D, computed without division.

    Elimination cross-multiplies rows (row_i <- p*row_i - a*row_pivot),
    reducing every entry with ``reduce``; an entry counts as zero when it
    reduces to zero.
    """
    m = [[reduce(e) for e in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for i in range(rank + 1, len(m)):
            a = m[i][c]
            if a:
                m[i] = [reduce(p * x - a * y) for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def _rref(rows, ncols: int):
    """Sparse reduced row echelon form.

    ``rows`` are dicts column -> Fraction; column ``ncols`` (if present) is
    an augmented right-hand side and never chosen as a pivot.  Returns
    (pivots, inconsistent) where pivots maps pivot column -> reduced row.
    """
    pivots = {}
    inconsistent = False
    for raw in rows:
        r = {c: Fraction(v) for c, v in raw.items() if v}
        for c in [c for c in r if c in pivots]:
            v = r.get(c)
            if v:
                for k, pv in pivots[c].items():
                    nv = r.get(k, 0) - v * pv
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        cols = [c for c in r if c != ncols]
        if not cols:
            if r:
                inconsistent = True
            continue
        pc = min(cols)
        inv = 1 / r[pc]
        r = {k: v * inv for k, v in r.items()}
        for c, prow in pivots.items():
            v = prow.get(pc)
            if v:
                for k, rv in r.items():
                    nv = prow.get(k, 0) - v * rv
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        pivots[pc] = r
    return pivots, inconsistent


def solve_rational(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One solution of A x = b over Q (free variables set to 0), or None."""
    ncols = len(rows[0]) if rows else 0
    sparse = []
    for r, b in zip(rows, rhs):
        d = {j: v for j, v in enumerate(r) if v}
        if b:
            d[ncols] = b
        sparse.append(d)
    return solve_sparse(sparse, ncols)


def solve_sparse(rows, ncols: int) -> Optional[List[Fraction]]:
    """Like solve_rational, for dict rows with the right-hand side stored
    under key ``ncols``."""
    pivots, bad = _rref(rows, ncols)
    if bad:
        return None
    x = [Fraction(0)] * ncols
    for c, r in pivots.items():
        x[c] = r.get(ncols, Fraction(0))
    return x


def nullspace_rational(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """A basis of {x : A x = 0} over Q."""
    sparse = [{j: v for j, v in enumerate(r) if v} for r in rows]
    return nullspace_sparse(sparse, ncols)


def nullspace_sparse(rows, ncols: int) -> List[List[Fraction]]:
    pivots, _ = _rref(rows, ncols)
    basis = []
    for fc in range(ncols):
        if fc in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for pc, r in pivots.items():
            if fc in r:
                v[pc] = -r[fc]
        basis.append(v)
    return basis
