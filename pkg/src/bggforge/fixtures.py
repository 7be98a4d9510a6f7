"""Registry of built-in homogeneous geometries.

Each fixture packages the Lie-algebraic data of one geometry (structure
constants derived from a faithful matrix realization, so the realization
is a homomorphism by construction), the frame map, chart factorizations
for the exponential coordinates, and curve families where the geometry
has distinguished curves worth testing against.

Bracket sign convention: the stored structure constants are always the
commutator brackets of the stored matrix realization.  Where a geometry
is classically presented through Killing vector fields, that convention
may be opposite to the vector-field bracket; the frozen extensions below
are normal for the stored convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .exactfield import Scalar, ZERO, ONE, rational as Q, parse_scalar as P
from .linalg import (mat, eye, zeros, commutator, linear_solve, transpose,
                     mat_add)
from .lie import build_so
from .specfile import GeometrySpec

__all__ = ["fixture", "fixture_names", "Fixture", "structure_constants"]


def structure_constants(mats, amb):
    """Structure constants of an independent matrix basis (by commutators)."""
    d = len(mats)
    cols = [[m[i][j] for m in mats] for i in range(amb) for j in range(amb)]
    tb = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            br = commutator(mats[i], mats[j])
            flat = [br[r][c] for r in range(amb) for c in range(amb)]
            sol = linear_solve(cols, flat)
            if not sol.ok:
                raise ValueError("matrix basis does not close under brackets")
            tb[i][j] = sol.particular
    return tb


def _bracket_quads(tb):
    quads = []
    d = len(tb)
    for i in range(d):
        for j in range(i + 1, d):
            for k, v in enumerate(tb[i][j]):
                if v:
                    quads.append((i, j, k, v))
    return quads


@dataclass
class Fixture:
    spec: GeometrySpec
    charts: dict = field(default_factory=dict)     # name -> coords.Chart
    curves: dict = field(default_factory=dict)     # name -> factory
    extras: dict = field(default_factory=dict)

    @property
    def name(self):
        return self.spec.name

    def lie_algebra(self):
        return self.spec.lie_algebra()

    def extension_spec(self):
        return self.spec.extension_spec()


def _geometry_spec(name, p, q, mats, amb, h_idx, c_idx, alpha_minus1,
                   diota_rnstar=None, lan_split=None, charts=(), curves=()):
    tb = structure_constants(mats, amb)
    return GeometrySpec(
        name=name, p=p, q=q, kdim=len(mats), brackets=_bracket_quads(tb),
        h_indices=list(h_idx), c_indices=list(c_idx),
        alpha_minus1=alpha_minus1, matrix_realization=mats,
        diota_rnstar=diota_rnstar, lan_split=lan_split,
        charts=list(charts), curves=list(curves))


# ---------------------------------------------------------------------------
# fixture builders
# ---------------------------------------------------------------------------

def _build_godel():
    # conformal class of the Goedel metrics; five-dimensional symmetry
    # algebra acting on signature (1, 3), realized inside R + gl(2, R)
    m_k1 = mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    m_k2 = [[ZERO, ZERO, ZERO], [ZERO, P("1/2"), ZERO], [ZERO, ZERO, P("-1/2")]]
    m_k3 = [[ZERO] * 3, [ZERO, P("0-1*sqrt2"), ZERO],
            [ZERO, P("0+1*sqrt2"), P("0-1*sqrt2")]]
    m_k4 = [[P("1/2"), ZERO, ZERO], [ZERO, P("-1/2"), ZERO],
            [ZERO, ZERO, P("-1/2")]]
    m_h1 = [[ZERO] * 3, [ZERO, Q(2), P("1/2")], [ZERO, Q(-1), Q(2)]]
    mats = [m_k1, m_k2, m_k3, m_k4, m_h1]
    # chart generators: diagonalizable part (three commuting directions),
    # then the nilpotent direction
    b1 = [P("1/2"), ZERO, ZERO, ONE, ZERO]
    b2 = [P("1/2"), ZERO, ZERO, -ONE, ZERO]
    b3 = [ZERO, Q(2), ZERO, ZERO, ZERO]
    b4 = [P("1/2"), ZERO, P("0+1/2*sqrt2"), -ONE, ZERO]
    charts = [
        {"name": "exp",
         "factors": [{"coords": [0, 1, 2], "gens": [b1, b2, b3]},
                     {"coords": [3], "gens": [b4]}]},
        {"name": "orig", "base": "exp", "premap": "godel_orig"},
    ]
    spec = _geometry_spec("godel", 1, 3, mats, 3, [4], [0, 1, 2, 3], eye(4),
                          charts=charts)
    return Fixture(spec=spec, extras={
        # (t, x, y, z) -> chart coordinates of the 'exp' chart
        "premaps": {"godel_orig": lambda t, x, y, z:
                    (z, t, 0.5 * x, y * math.exp(x))},
    })


def _build_ppwave():
    # submaximally symmetric plane-wave conformal class, signature (1, 3)
    def m4(entries):
        m = zeros(4, 4)
        for (r, c), v in entries.items():
            m[r][c] = P(v) if isinstance(v, str) else Q(v)
        return m
    m_k1 = m4({(0, 0): "1/2", (1, 1): "-1/2"})
    m_k2 = m4({(0, 1): 1})
    m_k3 = m4({(2, 2): 1})
    m_k4 = m4({(3, 3): 1})
    mats = [m_k1, m_k2, m_k3, m_k4]
    e = lambda i: [ONE if j == i else ZERO for j in range(4)]
    charts = [
        {"name": "exp",
         "factors": [{"coords": [0, 2, 3], "gens": [e(0), e(2), e(3)]},
                     {"coords": [1], "gens": [e(1)]}]},
        {"name": "orig", "base": "exp", "premap": "ppwave_orig"},
    ]
    spec = _geometry_spec("ppwave", 1, 3, mats, 4, [], [0, 1, 2, 3], eye(4),
                          lan_split={"l": [], "a": [0, 2, 3], "n": [1]},
                          charts=charts)
    return Fixture(spec=spec, extras={
        "premaps": {"ppwave_orig": lambda t, x, y, z:
                    (t, x, y, z - 0.5 * x * x)},
    })


def _build_nonreductive_godel():
    # non-reductive relative of the Goedel class, signature (1, 3)
    def m4(entries):
        m = zeros(4, 4)
        for (r, c), v in entries.items():
            m[r][c] = Q(v)
        return m
    m_x1 = m4({(2, 3): -1, (3, 2): 1})
    m_x2 = m4({(2, 2): -1, (3, 3): 1})
    m_x3 = m4({(0, 0): 1, (1, 1): -1, (2, 2): 1, (3, 3): -1})
    m_x4 = m4({(2, 3): 2})
    m_x5 = m4({(0, 1): 1, (2, 3): 1})
    mats = [m_x1, m_x2, m_x3, m_x4, m_x5]
    e = lambda i: [ONE if j == i else ZERO for j in range(5)]
    charts = [
        {"name": "exp",
         "factors": [{"coords": [0], "gens": [e(0)]},
                     {"coords": [1, 2], "gens": [e(1), e(2)]},
                     {"coords": [3], "gens": [e(3)]}]},
    ]
    # the frozen representative of the normal extension pins the covector
    # completion of the isotropy embedding; with it the dilation-free gauge
    # is infeasible and the canonical echelon representative is taken
    spec = _geometry_spec("nonreductive_godel", 1, 3, mats, 4, [4],
                          [0, 1, 2, 3], eye(4),
                          diota_rnstar=[[ONE, ZERO, ZERO, ZERO]],
                          lan_split={"l": [0], "a": [1, 2], "n": [3]},
                          charts=charts)
    return Fixture(spec=spec)


def _build_gl2r():
    # left-invariant metric on the full 2x2 matrix group, signature (1, 3)
    g1 = mat([[2, 0], [0, 2]])
    g2 = [[ZERO, P("0+1/2*sqrt3")], [P("0+1/2*sqrt3"), ZERO]]
    g3 = [[ZERO, P("0-1/6*sqrt3")], [P("0+1/6*sqrt3"), ZERO]]
    g4 = [[P("1/12"), ZERO], [ZERO, P("7/12")]]
    mats = [g1, g2, g3, g4]
    e = lambda i: [ONE if j == i else ZERO for j in range(4)]
    charts = [
        {"name": "exp",
         "factors": [{"coords": [0], "gens": [e(0)]},
                     {"coords": [3], "gens": [e(3)]},
                     {"coords": [1], "gens": [e(1)]},
                     {"coords": [2], "gens": [e(2)]}]},
    ]
    spec = _geometry_spec("gl2r", 1, 3, mats, 2, [], [0, 1, 2, 3], eye(4),
                          charts=charts)
    return Fixture(spec=spec)


def _build_nil():
    # conformal class on the 3-dimensional Heisenberg group, signature (1, 2)
    y1 = [[ZERO] * 3, [P("0-1/2*sqrt2"), ZERO, ZERO],
          [ZERO, P("0+1/2*sqrt2"), ZERO]]
    y2 = [[ZERO] * 3, [ZERO] * 3, [ONE, ZERO, ZERO]]
    y3 = [[ZERO] * 3, [P("0+1/2*sqrt2"), ZERO, ZERO],
          [ZERO, P("0+1/2*sqrt2"), ZERO]]
    mats = [y1, y2, y3]
    # group-entry coordinates (x1, x2, x3); the entry chart factors into
    # exponentials of the three strictly-triangular directions
    g_e31 = [ZERO, ONE, ZERO]                                  # center
    g_e21 = [P("0-1/2*sqrt2"), ZERO, P("0+1/2*sqrt2")]
    g_e32 = [P("0+1/2*sqrt2"), ZERO, P("0+1/2*sqrt2")]
    charts = [
        {"name": "entry",
         "factors": [{"coords": [2], "gens": [g_e31]},
                     {"coords": [1], "gens": [g_e21]},
                     {"coords": [0], "gens": [g_e32]}]},
    ]
    spec = _geometry_spec("nil", 1, 2, mats, 3, [], [0, 1, 2], eye(3),
                          lan_split={"l": [], "a": [], "n": [0, 1, 2]},
                          charts=charts)
    return Fixture(spec=spec)


def _build_fubini_study(nn):
    # split-signature relative of the Fubini-Study symmetric space,
    # sl(nn+1, R) acting with gl(nn) isotropy, signature (nn, nn)
    amb = nn + 1
    mats, h_idx, c_idx = [], [], []
    for i in range(nn):
        m = zeros(amb, amb)
        m[1 + i][0] = ONE
        mats.append(m)
    for i in range(nn):
        m = zeros(amb, amb)
        m[0][1 + i] = ONE
        mats.append(m)
    c_idx = list(range(2 * nn))
    for i in range(nn):
        for j in range(nn):
            m = zeros(amb, amb)
            m[1 + i][1 + j] = ONE
            if i == j:
                m[0][0] = -ONE
            mats.append(m)
    h_idx = list(range(2 * nn, 2 * nn + nn * nn))
    lower = [[ONE if j == i else ZERO for j in range(len(mats))]
             for i in range(nn)]
    upper = [[ONE if j == nn + i else ZERO for j in range(len(mats))]
             for i in range(nn)]
    charts = [
        {"name": "exp",
         "factors": [{"coords": list(range(nn)), "gens": lower},
                     {"coords": list(range(nn, 2 * nn)), "gens": upper}]},
    ]
    curves = ["inverse_family"]
    spec = _geometry_spec("fubini_study(%d)" % nn, nn, nn, mats, amb,
                          h_idx, c_idx, eye(2 * nn),
                          lan_split={"l": [], "a": [],
                                     "n": list(range(2 * nn))},
                          charts=charts, curves=curves)

    def inverse_family(c):
        c = float(c)

        def gamma(t):
            out = [0.0] * (2 * nn)
            out[0] = (2 * c * c - t) / (2 * c ** 3)
            out[1] = -1.0 / (2 * c ** 3 * t)
            out[nn] = 1.0 / t
            out[nn + 1] = t
            return out

        def dgamma(t):
            out = [0.0] * (2 * nn)
            out[0] = -1.0 / (2 * c ** 3)
            out[1] = 1.0 / (2 * c ** 3 * t * t)
            out[nn] = -1.0 / (t * t)
            out[nn + 1] = 1.0
            return out

        return gamma, dgamma

    return Fixture(spec=spec, curves={"inverse_family": inverse_family})


def _build_flat(p, q):
    n = p + q
    amb = n + 1
    mats = []
    for i in range(n):
        m = zeros(amb, amb)
        m[0][1 + i] = ONE
        mats.append(m)
    e = lambda i: [ONE if j == i else ZERO for j in range(n)]
    charts = [{"name": "exp",
               "factors": [{"coords": list(range(n)),
                            "gens": [e(i) for i in range(n)]}]}]
    spec = _geometry_spec("flat(%d,%d)" % (p, q), p, q, mats, amb, [],
                          list(range(n)), eye(n),
                          lan_split={"l": [], "a": [], "n": list(range(n))},
                          charts=charts)
    return Fixture(spec=spec)


_BUILDERS = {
    "godel": _build_godel,
    "ppwave": _build_ppwave,
    "nonreductive_godel": _build_nonreductive_godel,
    "gl2r": _build_gl2r,
    "nil": _build_nil,
    "flat4": lambda: _build_flat(1, 3),
    "flat3": lambda: _build_flat(1, 2),
}

_CACHE = {}


def fixture_names():
    return sorted(_BUILDERS) + ["fubini_study(n)"]


def fixture(name: str) -> Fixture:
    """Look up a registered geometry by name (e.g. 'godel', 'fubini_study(2)')."""
    if name in _CACHE:
        return _CACHE[name]
    if name in _BUILDERS:
        fx = _BUILDERS[name]()
    elif name.startswith("fubini_study(") and name.endswith(")"):
        nn = int(name[len("fubini_study("):-1])
        if nn < 2:
            raise KeyError("fubini_study needs n >= 2")
        fx = _build_fubini_study(nn)
    elif name.startswith("flat(") and name.endswith(")"):
        p, q = (int(s) for s in name[len("flat("):-1].split(","))
        fx = _build_flat(p, q)
    else:
        raise KeyError("unknown fixture %r" % name)
    _CACHE[name] = fx
    return fx
