"""Scratch: validate extension solver against the known Goedel answer."""
from bggforge.exactfield import Scalar, ZERO, ONE, SQRT2, rational as Q, parse_scalar as P
from bggforge.linalg import mat, eye, mat_eq, zeros
from bggforge.lie import LieAlgebraData, build_so, so_bracket
from bggforge.extension import ExtensionSpec, solve_extension, curvature, check_normal

so = build_so(1, 3)
dim = 5


def bt_empty(d):
    return [[[ZERO] * d for _ in range(d)] for _ in range(d)]


def setbr(tb, i, j, vec):
    v = [P(x) if isinstance(x, str) else Scalar(x) for x in vec]
    tb[i][j] = v
    tb[j][i] = [-x for x in v]


SIGN = -1  # stored bracket = SIGN * printed bracket
tb = bt_empty(dim)
s = str(SIGN) + "*" if False else None
if SIGN == -1:
    setbr(tb, 1, 2, ["-1/2*sqrt2", "0", "-1", "0+1*sqrt2", "0"])
    setbr(tb, 1, 4, ["0", "0", "0+1*sqrt2", "0", "1"])
    setbr(tb, 2, 4, ["0", "-1*sqrt2".replace("-1*", "0-1*"), "0", "0", "0"])
else:
    setbr(tb, 1, 2, ["1/2*sqrt2".replace("1/2*", "0+1/2*"), "0", "1", "0-1*sqrt2", "0"])
    setbr(tb, 1, 4, ["0", "0", "0-1*sqrt2", "0", "-1"])
    setbr(tb, 2, 4, ["0", "0+1*sqrt2", "0", "0", "0"])

k = LieAlgebraData(dim=dim, bracket_table=tb, h_indices=[4], c_indices=[0, 1, 2, 3])
spec = ExtensionSpec(k=k, so=so, alpha_minus1=eye(4))
ext = solve_extension(spec)
print("solved; freedom:", ext.freedom, "gauge:", ext.gauge_used)

expected = {}
S2 = "0+1*sqrt2"


def E(i, entries):
    m = zeros(6, 6)
    for (r, c), lit in entries.items():
        m[r][c] = P(lit) if isinstance(lit, str) else Scalar(lit)
    expected[i] = m


E(0, {(0, 1): "-1/2", (0, 4): "1/6", (1, 0): "1", (1, 5): "-1/6",
      (2, 3): "0+1/2*sqrt2", (3, 2): "0-1/2*sqrt2", (4, 5): "1/2", (5, 4): "-1"})
E(1, {(0, 2): "-1/12", (1, 3): "0-1/4*sqrt2", (2, 0): "1", (2, 5): "1/12",
      (3, 1): "0-1/2*sqrt2", (3, 4): "0+1/4*sqrt2", (4, 3): "0+1/2*sqrt2",
      (5, 2): "-1"})
E(2, {(0, 3): "-1/12", (1, 2): "0+1/4*sqrt2", (2, 1): "0+1/2*sqrt2",
      (2, 3): "-1", (2, 4): "0-1/4*sqrt2", (3, 0): "1", (3, 2): "1",
      (3, 5): "1/12", (4, 2): "0-1/2*sqrt2", (5, 3): "-1"})
E(3, {(0, 1): "1/6", (0, 4): "-1/8", (1, 5): "1/8", (2, 3): "0-1/4*sqrt2",
      (3, 2): "0+1/4*sqrt2", (4, 0): "1", (4, 5): "-1/6", (5, 1): "-1"})
E(4, {(2, 3): S2, (3, 2): "0-1*sqrt2"})

ok = True
for i in range(5):
    if not mat_eq(ext.alpha_mats[i], expected[i]):
        ok = False
        print("MISMATCH alpha(k%d):" % (i + 1))
        for r in range(6):
            print("  got:", [str(x) for x in ext.alpha_mats[i][r]])
            print("  exp:", [str(x) for x in expected[i][r]])
print("alpha matches printed:", ok)

# kappa(k2, k3): z23 = 1
kap = ext.kappa_value(k.basis_vector(1), k.basis_vector(2))
exp_kap = zeros(6, 6)
exp_kap[0][1] = P("0-1/2*sqrt2")
exp_kap[0][4] = P("0+1/4*sqrt2")
exp_kap[1][5] = P("0-1/4*sqrt2")
exp_kap[2][3] = P("1/3")
exp_kap[3][2] = P("-1/3")
exp_kap[4][5] = P("0+1/2*sqrt2")
print("kappa(k2,k3) matches printed:", mat_eq(kap, exp_kap))
if not mat_eq(kap, exp_kap):
    for r in range(6):
        print("  got:", [str(x) for x in kap[r]])
    for r in range(6):
        print("  exp:", [str(x) for x in exp_kap[r]])
print("normal:", check_normal(ext)["ok"])
