"""Dense exact linear algebra over Q(sqrt2, sqrt3).

Matrices are plain lists of rows of Scalar.  Reduced row echelon form is
the canonical representative of a row space, so subspace equality is
matrix equality.  Everything is exact; no floating point enters here.
"""

from __future__ import annotations

from .exactfield import Scalar, ZERO, ONE, as_scalar

__all__ = [
    "zeros", "eye", "mat", "mat_mul", "mat_add", "mat_sub", "mat_scale",
    "mat_neg", "mat_eq", "is_zero_mat", "transpose", "mat_vec", "dot",
    "commutator", "rref", "kernel", "linear_solve", "LinearSolution",
    "Subspace", "to_float_matrix",
]


def zeros(rows, cols):
    return [[ZERO] * cols for _ in range(rows)]


def eye(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def mat(entries):
    """Coerce a nested list of ints/strings/Scalars to a Scalar matrix."""
    return [[as_scalar(x) for x in row] for row in entries]


def mat_mul(a, b):
    n, k = len(a), len(b)
    cols = len(b[0]) if k else 0
    out = zeros(n, cols)
    for i in range(n):
        ai, oi = a[i], out[i]
        for t in range(k):
            x = ai[t]
            if not x:
                continue
            bt = b[t]
            for j in range(cols):
                y = bt[j]
                if y:
                    oi[j] = oi[j] + x * y
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        acc = ZERO
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def dot(u, v):
    acc = ZERO
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, s):
    s = as_scalar(s)
    return [[s * x if x else x for x in row] for row in a]


def mat_neg(a):
    return [[-x for x in row] for row in a]


def mat_eq(a, b):
    if len(a) != len(b):
        return False
    return all(ra == rb for ra, rb in zip(a, b))


def is_zero_mat(a):
    return all(not x for row in a for x in row)


def transpose(a):
    return [list(col) for col in zip(*a)]


def commutator(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def to_float_matrix(a):
    import numpy as np
    return np.array([[float(x) for x in row] for row in a], dtype=float)


def rref(rows_in):
    """Reduced row echelon form.  Returns (rows, pivot_columns).

    Zero rows are dropped; the result is the canonical basis of the row
    space (pivot entries 1, pivot columns cleared above and below).
    """
    rows = [list(r) for r in rows_in]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        if piv != ONE:
            inv = piv.inverse()
            row = rows[r]
            for j in range(c, ncols):
                if row[j]:
                    row[j] = inv * row[j]
        prow = rows[r]
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                row = rows[i]
                row[c] = ZERO
                for j in range(c + 1, ncols):
                    pj = prow[j]
                    if pj:
                        row[j] = row[j] - f * pj
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def kernel(a):
    """Nullspace {x : a x = 0} as a Subspace of R^(ncols)."""
    if not a:
        raise ValueError("kernel of an empty matrix is ambiguous")
    ncols = len(a[0])
    red, pivots = rref(a)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            coeff = red[r][fc]
            if coeff:
                v[pc] = -coeff
        basis.append(v)
    return Subspace(ncols, basis)


class LinearSolution:
    """Result of an exact linear solve a x = b."""

    def __init__(self, ok, particular=None, nullspace=None):
        self.ok = ok
        self.particular = particular
        self.nullspace = nullspace

    def __bool__(self):
        return self.ok


def linear_solve(a, b):
    """Solve a X = b exactly for matrix (or vector) right-hand sides.

    Returns LinearSolution with the canonical particular solution (free
    variables zero in the echelon parametrization) and the nullspace of a,
    or ok=False when the system is inconsistent.
    """
    vector_rhs = b and not isinstance(b[0], list)
    bm = [[x] for x in b] if vector_rhs else b
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    nrhs = len(bm[0]) if bm else 0
    aug = [list(a[i]) + list(bm[i]) for i in range(nrows)]
    red, pivots = rref(aug)
    for r, c in zip(red, pivots):
        if c >= ncols:
            return LinearSolution(False)
    part = zeros(ncols, nrhs)
    for r, c in enumerate(pivots):
        part[c] = list(red[r][ncols:])
    if vector_rhs:
        part = [row[0] for row in part]
    return LinearSolution(True, part, kernel(a) if ncols else None)


class Subspace:
    """Subspace of R^ambient_dim with canonical reduced-echelon basis."""

    def __init__(self, ambient_dim, vectors=()):
        self.ambient_dim = ambient_dim
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("vector length mismatch")
        self.basis, self.pivots = rref(vecs) if vecs else ([], [])

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, vec):
        v = list(vec)
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                for j in range(self.ambient_dim):
                    if row[j]:
                        v[j] = v[j] - f * row[j]
        return not any(v)

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, vec):
        """Coefficients of vec in the canonical basis (None if outside)."""
        v = list(vec)
        coeffs = [ZERO] * self.dim
        for i, (row, c) in enumerate(zip(self.basis, self.pivots)):
            f = v[c]
            if f:
                coeffs[i] = f
                for j in range(self.ambient_dim):
                    if row[j]:
                        v[j] = v[j] - f * row[j]
        if any(v):
            return None
        return coeffs

    def sum(self, other):
        assert self.ambient_dim == other.ambient_dim
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def intersect(self, other):
        assert self.ambient_dim == other.ambient_dim
        if not self.basis or not other.basis:
            return Subspace(self.ambient_dim)
        # x = a^t U = b^t V  <=>  (a, -b) in kernel of [U^t | V^t]
        cols = transpose(self.basis) if self.basis else []
        cols2 = transpose(other.basis)
        stacked = [cu + cv for cu, cv in zip(cols, cols2)]
        ker = kernel(stacked)
        vecs = []
        for kv in ker.basis:
            coeffs = kv[: self.dim]
            v = [ZERO] * self.ambient_dim
            for coef, bas in zip(coeffs, self.basis):
                if coef:
                    for j in range(self.ambient_dim):
                        if bas[j]:
                            v[j] = v[j] + coef * bas[j]
            vecs.append(v)
        return Subspace(self.ambient_dim, vecs)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim
                and mat_eq(self.basis, other.basis))

    def __hash__(self):
        return hash((self.ambient_dim, tuple(tuple(r) for r in self.basis)))

    def __repr__(self):
        return "Subspace(dim=%d, ambient=%d)" % (self.dim, self.ambient_dim)
