"""Exact Gaussian elimination over Q, Q(t) or a number field.

Rows are sparse dicts {column: value}; that keeps the local-algebra and
implicitization systems (mostly zeros) cheap.
"""

from ..budget import checkpoint


def _reduce(rows, ncols):
    """Row-reduce in place; returns list of (pivot column, normalized row)."""
    pivots = []
    work = [dict(r) for r in rows if r]
    for col in range(ncols):
        if not work:
            break
        idx = None
        best = None
        for i, r in enumerate(work):
            v = r.get(col)
            if v is not None:
                size = len(r)
                if best is None or size < best:
                    idx, best = i, size
        if idx is None:
            continue
        row = work.pop(idx)
        inv = 1 / row[col]
        row = {c: v * inv for c, v in row.items()}
        checkpoint(len(work) * len(row))
        nxt = []
        for r in work:
            f = r.get(col)
            if f is not None:
                for c, v in row.items():
                    s = r.get(c)
                    s = -f * v if s is None else s - f * v
                    if s == 0:
                        r.pop(c, None)
                    else:
                        r[c] = s
            if r:
                nxt.append(r)
        work = nxt
        for _, prow in pivots:
            f = prow.get(col)
            if f is not None:
                for c, v in row.items():
                    s = prow.get(c)
                    s = -f * v if s is None else s - f * v
                    if s == 0:
                        prow.pop(c, None)
                    else:
                        prow[c] = s
        pivots.append((col, row))
    return pivots


def rank(rows, ncols):
    return len(_reduce(rows, ncols))


def nullspace(rows, ncols, field):
    """Basis of {v : row . v = 0 for all rows}, as dense lists of field elements."""
    pivots = _reduce(rows, ncols)
    pcols = {c for c, _ in pivots}
    basis = []
    for free in range(ncols):
        if free in pcols:
            continue
        v = [field.zero] * ncols
        v[free] = field.one
        for c, row in pivots:
            f = row.get(free)
            if f is not None:
                v[c] = -f
        basis.append(v)
    return basis


def solve(rows, rhs, ncols, field):
    """One solution of rows . v = rhs, or None if inconsistent."""
    aug = []
    for r, b in zip(rows, rhs):
        r = dict(r)
        if b != 0:
            r[ncols] = b
        aug.append(r)
    pivots = _reduce(aug, ncols + 1)
    v = [field.zero] * ncols
    for c, row in pivots:
        if c == ncols:
            return None
        v[c] = row.get(ncols, field.zero)
    return v


def determinant(matrix, field):
    """Determinant of a square matrix (list of lists) by elimination."""
    n = len(matrix)
    m = [list(r) for r in matrix]
    det = field.one
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return field.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det = det * p
        inv = 1 / p
        for i in range(col + 1, n):
            f = m[i][col]
            if f != 0:
                f = f * inv
                for j in range(col, n):
                    m[i][j] = m[i][j] - f * m[col][j]
    return det
