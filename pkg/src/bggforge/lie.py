"""Lie-algebra core: structure-constant algebras and the block model of
so(p+1, q+1).

The orthogonal algebra is realized on R^(n+2), n = p+q, preserving the
anti-diagonal block form bform.  Its frozen basis ordering is: the n
translation generators (u, v, w block rows), then the co(p, q) part
(dilation a, then the blocks A, B, C, D, E, F in lexicographic entry
order), then the n covector generators.  Every table built downstream
(codifferentials, gradings, dual pairings) relies on this ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .exactfield import Scalar, ZERO, ONE
from .linalg import (
    zeros, eye, mat_mul, mat_sub, mat_eq, is_zero_mat, commutator, Subspace,
)

__all__ = ["SoConformal", "build_so", "so_bracket", "LieAlgebraData",
           "check_lie_algebra"]


def so_bracket(x, y):
    """Matrix commutator xy - yx (the bracket of the orthogonal algebra)."""
    if len(x) != len(y):
        raise ValueError("size mismatch in bracket")
    return commutator(x, y)


@dataclass
class SoConformal:
    """The algebra so(p+1, q+1) in its conformal block realization."""

    p: int
    q: int
    n: int
    dim: int
    basis: list                 # dim matrices of size (n+2) x (n+2)
    names: list                 # parallel labels like 'u0', 'a', 'A00', 'Z3'
    part_index: list            # 'rn' | 'co' | 'rnstar' per basis vector
    bform: list                 # (n+2) x (n+2) scalar product
    nu: list                    # n x n model scalar product
    grading_element: list       # matrix E = diag(1, 0...0, -1)
    coord_pos: list             # (row, col) whose entry recovers each coordinate

    def coordinates(self, m) -> list:
        """Coordinates of a matrix in the frozen basis (exact, positional)."""
        v = [m[r][c] for (r, c) in self.coord_pos]
        return v

    def from_coordinates(self, v) -> list:
        n2 = self.n + 2
        out = zeros(n2, n2)
        for coef, b in zip(v, self.basis):
            if coef:
                for i in range(n2):
                    bi = b[i]
                    oi = out[i]
                    for j in range(n2):
                        if bi[j]:
                            oi[j] = oi[j] + coef * bi[j]
        return out

    def in_algebra(self, m) -> bool:
        return mat_eq(m, self.from_coordinates(self.coordinates(m)))

    # block slices of the coordinate vector --------------------------------
    def rn_coords(self, v):
        return v[: self.n]

    def co_coords(self, v):
        return v[self.n: self.dim - self.n]

    def rnstar_coords(self, v):
        return v[self.dim - self.n:]

    def project_part(self, v, part):
        out = [ZERO] * self.dim
        for i, x in enumerate(v):
            if self.part_index[i] == part:
                out[i] = x
        return out

    def rn_element(self, x):
        """Translation generator with (u, v, w)-coordinates x."""
        v = [ZERO] * self.dim
        v[: self.n] = list(x)
        return self.from_coordinates(v)

    def rnstar_element(self, z):
        """Covector generator with (b, c, d)-coordinates z."""
        v = [ZERO] * self.dim
        v[self.dim - self.n:] = list(z)
        return self.from_coordinates(v)

    def nu_permutation(self, i):
        """Index permutation realizing the block flip u <-> w of nu."""
        p, q = self.p, self.q
        if i < p:
            return q + i
        if i < q:
            return i
        return i - q

    def co_action_on_rn(self, m):
        """n x n action of a co(p, q) element on the translation slot.

        The middle block acts by matrix multiplication and the dilation
        coordinate a acts as -a * id.
        """
        n = self.n
        a = m[0][0]
        out = [[m[1 + i][1 + j] for j in range(n)] for i in range(n)]
        if a:
            for i in range(n):
                out[i][i] = out[i][i] - a
        return out

    def co_element_from_gl(self, g):
        """Embed an n x n conformal-orthogonal matrix as a co(p, q) element.

        g must satisfy g^t nu + nu g = 2 lam nu; the dilation part becomes
        -lam and the remaining nu-antisymmetric part fills the middle block.
        Raises ValueError if g is not conformal-orthogonal for nu.
        """
        n = self.n
        lam_n = ZERO
        for i in range(n):
            lam_n = lam_n + g[i][i]
        lam = lam_n * Scalar(1) / Scalar(n)
        m0 = [[g[i][j] for j in range(n)] for i in range(n)]
        for i in range(n):
            m0[i][i] = m0[i][i] - lam
        # check m0^t nu + nu m0 = 0
        t = mat_mul([list(r) for r in zip(*m0)], self.nu)
        s = mat_mul(self.nu, m0)
        if not is_zero_mat([[t[i][j] + s[i][j] for j in range(n)] for i in range(n)]):
            raise ValueError("matrix is not conformal-orthogonal for nu")
        n2 = n + 2
        out = zeros(n2, n2)
        out[0][0] = -lam
        out[n + 1][n + 1] = lam
        for i in range(n):
            for j in range(n):
                out[1 + i][1 + j] = m0[i][j]
        assert self.in_algebra(out)
        return out


def _block_identity(rows, cols, out, r0, c0, size):
    for i in range(size):
        out[r0 + i][c0 + i] = ONE


def build_so(p: int, q: int) -> SoConformal:
    """Assemble so(p+1, q+1) with its frozen basis and block data."""
    if not (0 <= p <= q) or p + q < 3:
        raise ValueError("signature out of range: need p <= q and p+q >= 3")
    n = p + q
    n2 = n + 2
    dim = (n + 2) * (n + 1) // 2

    bform = zeros(n2, n2)
    bform[0][n + 1] = ONE
    bform[n + 1][0] = ONE
    for i in range(p):
        bform[1 + i][1 + q + i] = ONE
        bform[1 + q + i][1 + i] = ONE
    for j in range(q - p):
        bform[1 + p + j][1 + p + j] = ONE

    nu = zeros(n, n)
    for i in range(p):
        nu[i][q + i] = ONE
        nu[q + i][i] = ONE
    for j in range(q - p):
        nu[p + j][p + j] = ONE

    o_u, o_v, o_w = 1, 1 + p, 1 + q

    def sigma(i):
        if i < p:
            return q + i
        if i < q:
            return i
        return i - q

    basis, names, part, coord_pos = [], [], [], []

    def add(mtx, name, prt, pos):
        basis.append(mtx)
        names.append(name)
        part.append(prt)
        coord_pos.append(pos)

    # translations
    for i in range(n):
        m = zeros(n2, n2)
        m[1 + i][0] = ONE
        m[n + 1][1 + sigma(i)] = -ONE
        add(m, "u%d" % i, "rn", (1 + i, 0))
    # dilation
    m = zeros(n2, n2)
    m[0][0] = ONE
    m[n + 1][n + 1] = -ONE
    add(m, "a", "co", (0, 0))
    grading_element = m
    # A block: gl(p)
    for i in range(p):
        for j in range(p):
            m = zeros(n2, n2)
            m[o_u + i][o_u + j] = ONE
            m[o_w + j][o_w + i] = -ONE
            add(m, "A%d%d" % (i, j), "co", (o_u + i, o_u + j))
    # B block: so(q-p)
    for i in range(q - p):
        for j in range(i + 1, q - p):
            m = zeros(n2, n2)
            m[o_v + i][o_v + j] = ONE
            m[o_v + j][o_v + i] = -ONE
            add(m, "B%d%d" % (i, j), "co", (o_v + i, o_v + j))
    # C block: Hom(R^p, R^(q-p))
    for i in range(q - p):
        for j in range(p):
            m = zeros(n2, n2)
            m[o_v + i][o_u + j] = ONE
            m[o_w + j][o_v + i] = -ONE
            add(m, "C%d%d" % (i, j), "co", (o_v + i, o_u + j))
    # D block: so(p) at (w, u)
    for i in range(p):
        for j in range(i + 1, p):
            m = zeros(n2, n2)
            m[o_w + i][o_u + j] = ONE
            m[o_w + j][o_u + i] = -ONE
            add(m, "D%d%d" % (i, j), "co", (o_w + i, o_u + j))
    # E block: Hom(R^(q-p), R^p)
    for i in range(p):
        for j in range(q - p):
            m = zeros(n2, n2)
            m[o_u + i][o_v + j] = ONE
            m[o_v + j][o_w + i] = -ONE
            add(m, "E%d%d" % (i, j), "co", (o_u + i, o_v + j))
    # F block: so(p) at (u, w)
    for i in range(p):
        for j in range(i + 1, p):
            m = zeros(n2, n2)
            m[o_u + i][o_w + j] = ONE
            m[o_u + j][o_w + i] = -ONE
            add(m, "F%d%d" % (i, j), "co", (o_u + i, o_w + j))
    # covectors
    for i in range(n):
        m = zeros(n2, n2)
        m[0][1 + i] = ONE
        m[1 + sigma(i)][n + 1] = -ONE
        add(m, "Z%d" % i, "rnstar", (0, 1 + i))

    if len(basis) != dim:
        raise AssertionError("basis count %d != dim %d" % (len(basis), dim))

    so = SoConformal(p=p, q=q, n=n, dim=dim, basis=basis, names=names,
                     part_index=part, bform=bform, nu=nu,
                     grading_element=grading_element, coord_pos=coord_pos)

    # invariants: X^t b + b X = 0 and the grading eigenvalues
    bt = bform
    for m, prt in zip(basis, part):
        xt = [list(r) for r in zip(*m)]
        if not is_zero_mat(mat_sub(mat_mul(xt, bt), mat_neg_mul(bt, m))):
            raise AssertionError("basis matrix does not preserve bform")
        br = so_bracket(grading_element, m)
        want = {"rn": -1, "co": 0, "rnstar": 1}[prt]
        expect = [[Scalar(want) * x for x in row] for row in m]
        if not mat_eq(br, expect):
            raise AssertionError("grading eigenvalue violated for a basis matrix")
    return so


def mat_neg_mul(a, b):
    return [[-x for x in row] for row in mat_mul(a, b)]


@dataclass
class LieAlgebraData:
    """Finite-dimensional Lie algebra given by structure constants.

    bracket_table[i][j] is the coordinate vector of [x_i, x_j].  h_indices
    span the isotropy subalgebra, c_indices the chosen complement.  An
    optional matrix realization must be a Lie algebra homomorphism for the
    stored bracket (this is what check_lie_algebra verifies).
    """

    dim: int
    bracket_table: list
    h_indices: list
    c_indices: list
    matrix_realization: Optional[list] = None
    lan_split: Optional[dict] = None    # {'l': [...], 'a': [...], 'n': [...]}

    def bracket(self, x, y):
        """Bracket of coordinate vectors."""
        out = [ZERO] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.bracket_table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                cij = row[j]
                f = xi * yj
                for k, ck in enumerate(cij):
                    if ck:
                        out[k] = out[k] + f * ck
        return out

    def basis_vector(self, i):
        v = [ZERO] * self.dim
        v[i] = ONE
        return v

    def h_projection(self, v):
        out = [ZERO] * self.dim
        for i in self.h_indices:
            out[i] = v[i]
        return out

    def c_projection(self, v):
        out = [ZERO] * self.dim
        for i in self.c_indices:
            out[i] = v[i]
        return out


def check_lie_algebra(k: LieAlgebraData) -> dict:
    """Verify antisymmetry, Jacobi, closure of h, and the realization.

    Returns a report dict; report['ok'] is True when no violation was
    found, and the individual lists name every violating index tuple.
    """
    report = {"antisymmetry": [], "jacobi": [], "h_closure": [],
              "realization": [], "ok": True}
    d = k.dim
    tb = k.bracket_table
    for i in range(d):
        for j in range(i, d):
            lhs = tb[i][j]
            rhs = tb[j][i]
            if any((x + y) for x, y in zip(lhs, rhs)):
                report["antisymmetry"].append((i, j))
    for i in range(d):
        ei = k.basis_vector(i)
        for j in range(i + 1, d):
            ej = k.basis_vector(j)
            bij = tb[i][j]
            for l in range(j + 1, d):
                el = k.basis_vector(l)
                s = k.bracket(bij, el)
                t = k.bracket(tb[j][l], ei)
                u = k.bracket(tb[l][i], ej)
                if any((x + y + z) for x, y, z in zip(s, t, u)):
                    report["jacobi"].append((i, j, l))
    hset = set(k.h_indices)
    for i in k.h_indices:
        for j in k.h_indices:
            v = tb[i][j]
            if any(v[m] for m in range(d) if m not in hset):
                report["h_closure"].append((i, j))
    if k.matrix_realization is not None:
        mats = k.matrix_realization
        for i in range(d):
            for j in range(i + 1, d):
                lhs = commutator(mats[i], mats[j])
                rhs = zeros(len(mats[0]), len(mats[0][0]))
                for m, cm in enumerate(tb[i][j]):
                    if cm:
                        rhs = mat_addscale(rhs, mats[m], cm)
                if not mat_eq(lhs, rhs):
                    report["realization"].append((i, j))
    report["ok"] = not (report["antisymmetry"] or report["jacobi"]
                        or report["h_closure"] or report["realization"])
    return report


def mat_addscale(a, b, s):
    return [[x + s * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
