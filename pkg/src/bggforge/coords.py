"""Charts, Maurer-Cartan pullbacks, frames, solution evaluation.

A chart is an ordered product of exponentials of (abelian) generator
blocks of the symmetry algebra, realized through the stored faithful
matrix realization; the Maurer-Cartan pullback is computed without any
finite differencing by conjugating the constant factor generators with
the suffix product, so samples carry only rounding error.  Optional
coordinate premaps express the same chart in other coordinates (their
Jacobian is the only finite-difference ingredient).

Solutions of the first BGG operators are evaluated by the factored
exponential formula and verified to be parallel by central differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .exactfield import Scalar, ZERO, ONE, to_float
from .linalg import to_float_matrix, mat_mul, is_zero_mat
from .lie import LieAlgebraData
from .extension import ConformalExtension
from .specfile import GeometrySpec

__all__ = ["Chart", "chart_from_spec", "FrameSample", "mc_pullback",
           "metric_at", "evaluate_solution", "verify_parallel",
           "weyl_data", "WeylData"]


@dataclass
class Chart:
    name: str
    k: LieAlgebraData
    factors: list                       # (coord_indices, generator_kvecs)
    dim_coords: int
    premap: object = None               # callable point -> base coordinates
    fd_step: float = 1e-6

    def __post_init__(self):
        mats = self.k.matrix_realization
        if mats is None:
            raise ValueError("charts require a matrix realization")
        self.amb = len(mats[0])
        self.real_float = [to_float_matrix(m) for m in mats]
        # flattened realization basis, pseudo-inverse for coordinate reads
        b = np.array([m.reshape(-1) for m in self.real_float]).T
        self.coord_reader = np.linalg.pinv(b)
        # per factor: float generator matrices; abelian check is exact
        self.factor_gens = []
        for coords, gens in self.factors:
            fg = []
            for g in gens:
                m = np.zeros((self.amb, self.amb))
                for t, c in enumerate(g):
                    if c:
                        m = m + to_float(c) * self.real_float[t]
                fg.append(m)
            for a in range(len(gens)):
                for bidx in range(a + 1, len(gens)):
                    br = self.k.bracket(gens[a], gens[bidx])
                    if any(br):
                        raise ValueError("chart factor is not abelian")
            self.factor_gens.append((list(coords), fg))

    def base_point(self, point):
        if self.premap is None:
            return list(point)
        return list(self.premap(*point))

    def factor_matrices(self, base):
        out = []
        for coords, fg in self.factor_gens:
            a = np.zeros((self.amb, self.amb))
            for c, g in zip(coords, fg):
                a = a + base[c] * g
            out.append(expm(a))
        return out

    def group_element(self, point):
        base = self.base_point(point)
        m = np.eye(self.amb)
        for f in self.factor_matrices(base):
            m = m @ f
        return m

    def mc_coords_base(self, base):
        """Maurer-Cartan values in algebra coordinates, one per base coord."""
        facs = self.factor_matrices(base)
        nfac = len(facs)
        # suffix products S_k = F_(k+1) ... F_m and their inverses
        suffix = [np.eye(self.amb)]
        for f in reversed(facs):
            suffix.append(f @ suffix[-1])
        suffix.reverse()    # suffix[k] = F_k ... F_m ; suffix[nfac] = id
        out = [None] * self.dim_coords
        for kf, (coords, fg) in enumerate(self.factor_gens):
            s = suffix[kf + 1]
            sinv = np.linalg.inv(s)
            for c, g in zip(coords, fg):
                omega = sinv @ g @ s
                out[c] = self.coord_reader @ omega.reshape(-1)
        return out

    def mc_coords(self, point):
        """Algebra coordinates of the pullback along each coordinate axis."""
        if self.premap is None:
            return self.mc_coords_base(list(point))
        base = self.base_point(point)
        base_mc = self.mc_coords_base(base)
        jac = _jacobian(self.premap, point, self.fd_step)
        out = []
        for i in range(len(point)):
            acc = np.zeros(self.k.dim)
            for j in range(len(base)):
                if jac[j][i]:
                    acc = acc + jac[j][i] * base_mc[j]
            out.append(acc)
        return out

    def mc_along(self, point, velocity):
        mc = self.mc_coords(point)
        acc = np.zeros(self.k.dim)
        for vi, m in zip(velocity, mc):
            acc = acc + vi * m
        return acc


def _jacobian(fn, point, h):
    base = np.array(fn(*point), dtype=float)
    cols = []
    for i in range(len(point)):
        hp = h * (1.0 + abs(point[i]))
        up = list(point)
        dn = list(point)
        up[i] += hp
        dn[i] -= hp
        cols.append((np.array(fn(*up)) - np.array(fn(*dn))) / (2 * hp))
    return np.array(cols).T


def chart_from_spec(spec: GeometrySpec, name: str, premaps=None) -> Chart:
    premaps = premaps or {}
    descs = {c["name"]: c for c in spec.charts}
    if name not in descs:
        raise KeyError("chart %r not registered for %s" % (name, spec.name))
    desc = descs[name]
    k = spec.lie_algebra()
    if "factors" in desc:
        factors = [(f["coords"], f["gens"]) for f in desc["factors"]]
        dimc = len(spec.c_indices)
        return Chart(name=name, k=k, factors=factors, dim_coords=dimc)
    base = chart_from_spec(spec, desc["base"], premaps)
    pm = premaps[desc["premap"]]
    return Chart(name=name, k=k, factors=base.factors,
                 dim_coords=base.dim_coords, premap=pm)


@dataclass
class FrameSample:
    point: list
    estar: np.ndarray        # n x n, columns are coordinate directions
    h_parts: list            # isotropy-valued components per direction
    omega_k: list            # full algebra coordinates per direction


def mc_pullback(ext: ConformalExtension, chart: Chart, point) -> FrameSample:
    k = ext.k
    n = ext.so.n
    amat = to_float_matrix(ext.spec.alpha_minus1)
    mc = chart.mc_coords(point)
    cols = []
    hparts = []
    for m in mc:
        cpart = np.array([m[ci] for ci in k.c_indices])
        cols.append(amat @ cpart)
        hparts.append(np.array([m[hi] for hi in k.h_indices]))
    estar = np.array(cols).T
    return FrameSample(point=list(point), estar=estar, h_parts=hparts,
                       omega_k=mc)


def metric_at(ext: ConformalExtension, chart: Chart, point) -> np.ndarray:
    fs = mc_pullback(ext, chart, point)
    nu = to_float_matrix(ext.so.nu)
    return fs.estar.T @ nu @ fs.estar


# -- solution evaluation -----------------------------------------------------

def _factor_phi_float(conn, chart):
    """Per chart factor: float matrices of the connection on the generators."""
    cache = getattr(conn, "_factor_phi_cache", None)
    if cache is not None and cache[0] is chart:
        return cache[1]
    out = []
    for coords, gens in chart.factors:
        mats = []
        for g in gens:
            m = conn.phi_of(g)
            mats.append((to_float_matrix(m), _exact_nilpotent_order(m)))
        out.append((list(coords), mats))
    conn._factor_phi_cache = (chart, out)
    return out


def _exact_nilpotent_order(m):
    """Smallest k with m^k = 0 exactly, or None."""
    dim = len(m)
    power = m
    for k in range(1, dim + 2):
        if is_zero_mat(power):
            return k
        power = mat_mul(power, m)
    return None


def _exp_factor(mats, values, dim):
    """exp(-sum v_i Phi_i) for one factor, exact series when nilpotent."""
    a = np.zeros((dim, dim))
    nilpotent = True
    for (mf, order), v in zip(mats, values):
        a = a - v * mf
        if order is None:
            nilpotent = False
    if not nilpotent:
        return expm(a)
    out = np.eye(dim)
    term = np.eye(dim)
    for k in range(1, 2 * dim + 2):
        term = term @ a / k
        if not term.any():
            break
        out = out + term
    return out


def evaluate_solution(sol, v, chart: Chart, point):
    """Value of the solution with initial tractor v at a chart point.

    Returns (slot_value, full_tractor_value) as float arrays: the factored
    exponential of the negative connection applied right-to-left.
    """
    conn = sol.conn if hasattr(sol, "conn") else sol
    rep = conn.rep
    dim = rep.dim
    base = chart.base_point(point)
    factor_phis = _factor_phi_float(conn, chart)
    w = np.array([float(x) for x in v], dtype=float)
    for coords, mats in reversed(factor_phis):
        values = [base[c] for c in coords]
        w = _exp_factor(mats, values, dim) @ w
    slot = np.array([w[i] for i in rep.slot_indices])
    return slot, w


def verify_parallel(sol, v, conn, chart: Chart, sample_points, fd_step=1e-5):
    """Max finite-difference covariant-derivative residual over samples."""
    rep = conn.rep
    phi_float = [to_float_matrix(m) for m in conn.phi]

    def value(pt):
        return evaluate_solution(sol, v, chart, pt)[1]

    worst = 0.0
    for pt in sample_points:
        mc = chart.mc_coords(pt)
        for i in range(len(pt)):
            h = fd_step * (1.0 + abs(pt[i]))
            up = list(pt)
            dn = list(pt)
            up[i] += h
            dn[i] -= h
            ds = (value(up) - value(dn)) / (2 * h)
            phi_here = np.zeros((rep.dim, rep.dim))
            for t in range(conn.ext.k.dim):
                if mc[i][t]:
                    phi_here = phi_here + mc[i][t] * phi_float[t]
            resid = ds + phi_here @ value(pt)
            worst = max(worst, float(np.max(np.abs(resid))))
    return worst


# -- Weyl connection data ----------------------------------------------------

@dataclass
class WeylData:
    point: list
    christoffels: np.ndarray     # Gamma[k][i][j]
    rho_tensor: np.ndarray       # symmetric coordinate components


def weyl_data(ext: ConformalExtension, chart: Chart, point,
              metric_step=1e-3) -> WeylData:
    npts = len(point)
    g0 = metric_at(ext, chart, point)
    ginv = np.linalg.inv(g0)
    # five-point fourth-order first derivatives of the metric
    dg = np.zeros((npts, npts, npts))
    for t in range(npts):
        h = metric_step * (1.0 + abs(point[t]))
        samples = []
        for off in (-2, -1, 1, 2):
            pt = list(point)
            pt[t] += off * h
            samples.append(metric_at(ext, chart, pt))
        dg[t] = (samples[0] - 8 * samples[1] + 8 * samples[2]
                 - samples[3]) / (12 * h)
    gamma = np.zeros((npts, npts, npts))
    for kk in range(npts):
        for i in range(npts):
            for j in range(npts):
                acc = 0.0
                for l in range(npts):
                    acc += ginv[kk][l] * (dg[i][l][j] + dg[j][l][i]
                                          - dg[l][i][j])
                gamma[kk][i][j] = 0.5 * acc
    # covector component of the pulled-back connection, paired with the
    # coframe, gives the Rho tensor in coordinate components
    fs = mc_pullback(ext, chart, point)
    n = ext.so.n
    so = ext.so
    alpha_float = [to_float_matrix(m) for m in ext.alpha_mats]
    rho = np.zeros((npts, npts))
    for i in range(npts):
        acc = np.zeros((so.n + 2, so.n + 2))
        for t in range(ext.k.dim):
            if fs.omega_k[i][t]:
                acc = acc + fs.omega_k[i][t] * alpha_float[t]
        # covector coordinates: first row, columns 1..n
        zrow = acc[0, 1:n + 1]
        for j in range(npts):
            rho[i][j] = float(zrow @ fs.estar[:, j])
    rho = 0.5 * (rho + rho.T)
    return WeylData(point=list(point), christoffels=gamma, rho_tensor=rho)
