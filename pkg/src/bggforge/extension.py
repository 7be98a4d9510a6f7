"""Normal conformal extension of a homogeneous pair (k, h).

Given the structure constants of k, an isotropy subalgebra h, and a frame
isomorphism alpha_minus1 from the chosen complement c onto R^n, the solver
produces the linear map alpha: k -> so(p+1, q+1) fixed by three successive
exact linear solves: the covector completion of the isotropy embedding,
the co(p, q) component (equivariance plus the trace normalization of the
curvature), and finally the covector component of the normalization.  The
dilation coordinate of the middle stage is gauge-fixed to zero when the
system allows it, and otherwise released with the canonical echelon
representative (this happens on non-reductive pairs).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactfield import Scalar, ZERO, ONE
from .linalg import (
    zeros, eye, mat_mul, mat_sub, mat_eq, is_zero_mat, linear_solve,
    mat_vec, Subspace, transpose,
)
from .lie import LieAlgebraData, SoConformal, so_bracket, check_lie_algebra

__all__ = ["ExtensionSpec", "ConformalExtension", "Curvature",
           "solve_extension", "curvature", "check_normal",
           "ExtensionError", "NonInjectiveIsotropy", "InconsistentSystem"]


class ExtensionError(Exception):
    pass


class NonInjectiveIsotropy(ExtensionError):
    """The isotropy representation has a kernel: the geometry is flat and
    the construction is refused rather than carried out."""


class InconsistentSystem(ExtensionError):
    def __init__(self, stage, msg=""):
        self.stage = stage
        super().__init__("inconsistent linear system at stage %r %s" % (stage, msg))


@dataclass
class ExtensionSpec:
    k: LieAlgebraData
    so: SoConformal
    alpha_minus1: list                 # n x len(c_indices) matrix
    diota0: list | None = None         # optional co-part matrices per h basis
    gauge: str = "a_zero"              # 'a_zero' | 'a_minimal'
    # Optional covector coordinates pinning the completion of the isotropy
    # embedding, one n-vector per h basis vector.  Normal extensions of a
    # non-reductive pair are unique only modulo a gauge that moves this
    # part, so a fixture may record the intended representative here.
    diota_rnstar: list | None = None


@dataclass
class ConformalExtension:
    spec: ExtensionSpec
    alpha_coords: list                 # per k-basis vector: so-coordinates
    alpha_mats: list                   # per k-basis vector: (n+2)x(n+2) matrix
    freedom: dict                      # stage -> nullspace dimension
    gauge_used: str

    @property
    def so(self):
        return self.spec.so

    @property
    def k(self):
        return self.spec.k

    def alpha_of(self, kvec):
        """Image matrix of a k-coordinate vector."""
        so = self.so
        out = [ZERO] * so.dim
        for i, x in enumerate(kvec):
            if x:
                for j, y in enumerate(self.alpha_coords[i]):
                    if y:
                        out[j] = out[j] + x * y
        return so.from_coordinates(out)

    def alpha_coords_of(self, kvec):
        out = [ZERO] * self.so.dim
        for i, x in enumerate(kvec):
            if x:
                for j, y in enumerate(self.alpha_coords[i]):
                    if y:
                        out[j] = out[j] + x * y
        return out

    def kappa_value(self, xvec, yvec):
        """Curvature {alpha x, alpha y} - alpha([x, y]) as an so-matrix."""
        ax, ay = self.alpha_of(xvec), self.alpha_of(yvec)
        br = so_bracket(ax, ay)
        al = self.alpha_of(self.k.bracket(xvec, yvec))
        return mat_sub(br, al)

    def frame_preimages(self):
        """c-coordinate vectors X_i with alpha_minus1(X_i) = e_i."""
        n = self.so.n
        sol = linear_solve(self.spec.alpha_minus1, eye(n))
        if not sol.ok:
            raise ExtensionError("alpha_minus1 is not surjective")
        cols = transpose(sol.particular)
        return cols  # row i = c-coords of X_i


@dataclass
class Curvature:
    ext: ConformalExtension
    table: list                       # table[i][j] so-coords, i<j over c-basis
    weyl_part: list                   # co-coordinates per pair
    cotton_part: list                 # covector coordinates per pair

    def pair_value(self, i, j):
        if i == j:
            return [ZERO] * self.ext.so.dim
        if i < j:
            return self.table[i][j]
        return [-x for x in self.table[j][i]]


def _embed_isotropy(spec: ExtensionSpec):
    """Derive (or validate) the co(p, q) embedding of the isotropy algebra."""
    k, so = spec.k, spec.so
    n = so.n
    nc = len(k.c_indices)
    if nc != n:
        raise ExtensionError("complement dimension %d != n = %d" % (nc, n))
    amat = spec.alpha_minus1
    inv = linear_solve(amat, eye(n))
    if not inv.ok or inv.nullspace.dim:
        raise ExtensionError("alpha_minus1 must be invertible on the complement")
    ainv = inv.particular
    if spec.diota0 is not None:
        return [m for m in spec.diota0]
    mats = []
    for h in k.h_indices:
        hv = k.basis_vector(h)
        cols = []
        for cj in k.c_indices:
            br = k.bracket(hv, k.basis_vector(cj))
            ccoords = [br[ci] for ci in k.c_indices]
            cols.append(mat_vec(amat, ccoords))
        adm = transpose(cols)                      # columns were ad(h) images
        m = mat_mul(adm, ainv)
        try:
            mats.append(so.co_element_from_gl(m))
        except ValueError as exc:
            raise ExtensionError(
                "isotropy action is not conformal for nu: %s" % exc) from exc
    return mats


def _solve_affine(probe, n_unknowns, stage):
    """Assemble and solve the affine system eq(u) = 0 from a probe function.

    probe(vector_of_unknowns) returns a list of Scalars, affine in the
    unknowns.  Returns (solution, nullspace_dim).
    """
    base = probe([ZERO] * n_unknowns)
    cols = []
    for t in range(n_unknowns):
        unit = [ZERO] * n_unknowns
        unit[t] = ONE
        col = probe(unit)
        cols.append([x - y for x, y in zip(col, base)])
    a = transpose(cols) if cols else [[] for _ in base]
    rhs = [-x for x in base]
    if n_unknowns == 0:
        if any(rhs):
            raise InconsistentSystem(stage, "(no unknowns, nonzero residual)")
        return [], 0
    sol = linear_solve(a, rhs)
    if not sol.ok:
        raise InconsistentSystem(stage)
    return sol.particular, sol.nullspace.dim


def solve_extension(spec: ExtensionSpec) -> ConformalExtension:
    """Construct the normal conformal extension of (k, h) for alpha_minus1."""
    k, so = spec.k, spec.so
    rep_check = check_lie_algebra(k)
    if not rep_check["ok"]:
        raise ExtensionError("Lie algebra data invalid: %r" % rep_check)
    n = so.n
    c_idx, h_idx = list(k.c_indices), list(k.h_indices)
    nh, nc = len(h_idx), len(c_idx)
    dim_k = k.dim

    diota0_mats = _embed_isotropy(spec)
    if nh:
        rows = [so.coordinates(m) for m in diota0_mats]
        if Subspace(so.dim, rows).dim < nh:
            raise NonInjectiveIsotropy(
                "isotropy embedding has a kernel; the geometry is flat")

    amat = spec.alpha_minus1
    # translation images of the complement basis
    alpha_m1_mats = []
    for j in range(nc):
        col = [amat[r][j] for r in range(n)]
        alpha_m1_mats.append(so.rn_element(col))

    co_names = [i for i, p in enumerate(so.part_index) if p == "co"]
    a_coord_index = so.n                     # position of the dilation coordinate
    rnstar_offset = so.dim - n

    def split_hc(vec):
        cc = [vec[ci] for ci in c_idx]
        hc = [vec[hi] for hi in h_idx]
        return cc, hc

    # frame preimages X_i with alpha_minus1 X_i = e_i, as c-coordinates
    inv = linear_solve(amat, eye(n))
    xi_ccoords = transpose(inv.particular)

    def kvec_from_ccoords(cc):
        v = [ZERO] * dim_k
        for jj, ci in enumerate(c_idx):
            v[ci] = cc[jj]
        return v

    xi_kvecs = [kvec_from_ccoords(cc) for cc in xi_ccoords]
    z_mats = [so.basis[rnstar_offset + i] for i in range(n)]

    # The defining equations triangularize by the grading of their target
    # component, not by the unknown they involve: the co(p, q) component of
    # the equivariance couples alpha0 with the covector completion delta of
    # the isotropy embedding, so those two are one joint level-0 solve, and
    # alpha1 is the level-1 solve on top of it.

    # ---- level 0: (delta, alpha0) jointly ---------------------------------
    # unknown layout: delta (nh * n), alpha0 without the dilation coordinate,
    # then all dilation coordinates last so that the canonical echelon pick
    # zeroes as much of the dilation part as the system allows.
    co_nz = [m for m in co_names if m != a_coord_index]
    pinned_delta = spec.diota_rnstar
    n_delta = 0 if pinned_delta is not None else nh * n
    n_alpha0 = nc * len(co_nz)
    n_level0 = n_delta + n_alpha0 + nc

    def delta_mat(unk, hj):
        if pinned_delta is not None:
            return so.rnstar_element(pinned_delta[hj])
        return so.rnstar_element(unk[hj * n:(hj + 1) * n])

    def diota_mat(unk, hj):
        m = diota0_mats[hj]
        dm = delta_mat(unk, hj)
        return [[x + y for x, y in zip(rm, rd)] for rm, rd in zip(m, dm)]

    def alpha0_mat(unk, jc):
        v = [ZERO] * so.dim
        for t, m in enumerate(co_nz):
            v[m] = unk[n_delta + jc * len(co_nz) + t]
        v[a_coord_index] = unk[n_delta + n_alpha0 + jc]
        return so.from_coordinates(v)

    def alpha_prime_of(unk, kvec):
        """(alpha_minus1 + alpha0 + diota) applied to a k vector."""
        cc, hc = split_hc(kvec)
        m = zeros(n + 2, n + 2)
        for t, coef in enumerate(hc):
            if coef:
                dm = diota_mat(unk, t)
                m = [[x + coef * y for x, y in zip(rm, rd)]
                     for rm, rd in zip(m, dm)]
        for jj, coef in enumerate(cc):
            if coef:
                a0 = alpha0_mat(unk, jj)
                base = alpha_m1_mats[jj]
                m = [[x + coef * (y + z) for x, y, z in zip(rm, rb, ra)]
                     for rm, rb, ra in zip(m, base, a0)]
        return m

    def nor_sum(unk, yvec, alpha_fn):
        """sum_i {Z_i, kappa(y, X_i)} as an so-matrix, kappa for alpha_fn."""
        ay = alpha_fn(unk, yvec)
        total = zeros(n + 2, n + 2)
        for i in range(n):
            axi = alpha_fn(unk, xi_kvecs[i])
            br = so_bracket(ay, axi)
            kb = k.bracket(yvec, xi_kvecs[i])
            akb = alpha_fn(unk, kb)
            kap = mat_sub(br, akb)
            term = so_bracket(z_mats[i], kap)
            total = [[x + y for x, y in zip(rt, rr)]
                     for rt, rr in zip(total, term)]
        return total

    def probe_level0(unk, gauge_a_zero):
        eqs = []
        # equivariance, translation and co components, pairs (c, h)
        for jc in range(nc):
            yc = k.basis_vector(c_idx[jc])
            for jh in range(nh):
                br = so_bracket(alpha_prime_of(unk, yc), diota_mat(unk, jh))
                kb = k.bracket(yc, k.basis_vector(h_idx[jh]))
                resid = mat_sub(br, alpha_prime_of(unk, kb))
                eqs.extend(so.coordinates(resid)[:rnstar_offset])
        # homomorphism property of diota, pairs (h, h): covector component
        # (its lower components hold because diota0 is a homomorphism)
        for ja in range(nh):
            for jb in range(ja + 1, nh):
                br = so_bracket(diota_mat(unk, ja), diota_mat(unk, jb))
                kb = k.bracket(k.basis_vector(h_idx[ja]),
                               k.basis_vector(h_idx[jb]))
                _, hc = split_hc(kb)
                tgt = zeros(n + 2, n + 2)
                for t, coef in enumerate(hc):
                    if coef:
                        dm = diota_mat(unk, t)
                        tgt = [[x + coef * y for x, y in zip(rt, rd)]
                               for rt, rd in zip(tgt, dm)]
                resid = mat_sub(br, tgt)
                eqs.extend(so.coordinates(resid)[rnstar_offset:])
        # normalization, co component
        for jc in range(nc):
            yc = k.basis_vector(c_idx[jc])
            total = nor_sum(unk, yc, alpha_prime_of)
            eqs.extend(so.coordinates(total)[n:rnstar_offset])
        if gauge_a_zero:
            for jc in range(nc):
                eqs.append(unk[n_delta + n_alpha0 + jc])
        return eqs

    gauge_used = spec.gauge
    if spec.gauge == "a_zero":
        try:
            level0_sol, free0 = _solve_affine(
                lambda u: probe_level0(u, True), n_level0, "alpha0")
        except InconsistentSystem:
            gauge_used = "a_minimal"
            level0_sol, free0 = _solve_affine(
                lambda u: probe_level0(u, False), n_level0, "alpha0")
    else:
        gauge_used = "a_minimal"
        level0_sol, free0 = _solve_affine(
            lambda u: probe_level0(u, False), n_level0, "alpha0")

    diota_mats = [diota_mat(level0_sol, jh) for jh in range(nh)]
    alpha0_mats = [alpha0_mat(level0_sol, jc) for jc in range(nc)]

    def diota_of_hcoords(hc):
        m = zeros(n + 2, n + 2)
        for t, coef in enumerate(hc):
            if coef:
                dm = diota_mats[t]
                m = [[x + coef * y for x, y in zip(rm, rd)]
                     for rm, rd in zip(m, dm)]
        return m

    # ---- level 1: alpha1 ---------------------------------------------------
    n_alpha1 = nc * n

    def alpha1_mat(unk, jc):
        return so.rnstar_element(unk[jc * n:(jc + 1) * n])

    def alpha_full_of(unk, kvec):
        cc, hc = split_hc(kvec)
        m = diota_of_hcoords(hc)
        for jj, coef in enumerate(cc):
            if coef:
                s = [[x + y + z for x, y, z in zip(r1, r2, r3)]
                     for r1, r2, r3 in zip(alpha_m1_mats[jj], alpha0_mats[jj],
                                           alpha1_mat(unk, jj))]
                m = [[x + coef * y for x, y in zip(rm, rs)]
                     for rm, rs in zip(m, s)]
        return m

    def probe_level1(unk):
        eqs = []
        for jc in range(nc):
            yc = k.basis_vector(c_idx[jc])
            total = nor_sum(unk, yc, alpha_full_of)
            eqs.extend(so.coordinates(total)[rnstar_offset:])
        for jc in range(nc):
            yc = k.basis_vector(c_idx[jc])
            for jh in range(nh):
                br = so_bracket(alpha_full_of(unk, yc), diota_mats[jh])
                kb = k.bracket(yc, k.basis_vector(h_idx[jh]))
                resid = mat_sub(br, alpha_full_of(unk, kb))
                eqs.extend(so.coordinates(resid)[rnstar_offset:])
        return eqs

    alpha1_sol, free3 = _solve_affine(probe_level1, n_alpha1, "alpha1")
    free1, free2 = 0, free0

    # ---- assemble and verify ----------------------------------------------
    alpha_coords, alpha_mats = [], []
    for i in range(dim_k):
        m = alpha_full_of(alpha1_sol, k.basis_vector(i))
        alpha_mats.append(m)
        alpha_coords.append(so.coordinates(m))

    ext = ConformalExtension(spec=spec, alpha_coords=alpha_coords,
                             alpha_mats=alpha_mats,
                             freedom={"level0": free0, "alpha1": free3},
                             gauge_used=gauge_used)
    _verify_extension(ext)
    return ext


def _verify_extension(ext: ConformalExtension):
    k, so = ext.k, ext.so
    # condition (1): equivariance against the isotropy algebra
    for i in range(k.dim):
        for hj in k.h_indices:
            br = so_bracket(ext.alpha_mats[i], ext.alpha_mats[hj])
            tgt = ext.alpha_of(k.bracket(k.basis_vector(i), k.basis_vector(hj)))
            if not mat_eq(br, tgt):
                raise ExtensionError("equivariance failed at (%d, %d)" % (i, hj))
    # condition (2): the translation part restricted to c is alpha_minus1
    for jj, ci in enumerate(k.c_indices):
        rn = so.rn_coords(ext.alpha_coords[ci])
        col = [ext.spec.alpha_minus1[r][jj] for r in range(so.n)]
        if rn != col:
            raise ExtensionError("frame compatibility failed at c index %d" % ci)
    for hi in k.h_indices:
        if any(so.rn_coords(ext.alpha_coords[hi])):
            raise ExtensionError("isotropy image must lie in the parabolic")
    # normalization
    rep = check_normal(ext)
    if not rep["ok"]:
        raise ExtensionError("normalization residuals nonzero: %r"
                             % rep["nonzero"])


def curvature(ext: ConformalExtension) -> Curvature:
    """Exact curvature table over pairs of complement basis vectors."""
    k, so = ext.k, ext.so
    c_idx = k.c_indices
    nc = len(c_idx)
    table = [[None] * nc for _ in range(nc)]
    weyl, cotton = {}, {}
    for i in range(nc):
        for j in range(i + 1, nc):
            kv = ext.kappa_value(k.basis_vector(c_idx[i]),
                                 k.basis_vector(c_idx[j]))
            coords = so.coordinates(kv)
            if any(so.rn_coords(coords)):
                raise ExtensionError(
                    "curvature has a translation part at pair (%d, %d)" % (i, j))
            table[i][j] = coords
            weyl[(i, j)] = so.co_coords(coords)
            cotton[(i, j)] = so.rnstar_coords(coords)
    return Curvature(ext=ext, table=table, weyl_part=weyl, cotton_part=cotton)


def check_normal(ext: ConformalExtension) -> dict:
    """Evaluate the curvature-trace normalization for every basis vector."""
    k, so = ext.k, ext.so
    n = so.n
    rnstar_offset = so.dim - n
    z_mats = [so.basis[rnstar_offset + i] for i in range(n)]
    xi = ext.frame_preimages()

    def kvec_from_ccoords(cc):
        v = [ZERO] * k.dim
        for jj, ci in enumerate(k.c_indices):
            v[ci] = cc[jj]
        return v

    xi_kvecs = [kvec_from_ccoords(cc) for cc in xi]
    nonzero = []
    residuals = []
    for y in range(k.dim):
        yv = k.basis_vector(y)
        total = zeros(n + 2, n + 2)
        for i in range(n):
            kap = ext.kappa_value(yv, xi_kvecs[i])
            term = so_bracket(z_mats[i], kap)
            total = [[a + b for a, b in zip(ra, rb)]
                     for ra, rb in zip(total, term)]
        coords = so.coordinates(total)
        residuals.append(coords)
        if any(coords):
            nonzero.append(y)
    return {"ok": not nonzero, "nonzero": nonzero, "residuals": residuals}
