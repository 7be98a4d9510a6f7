"""Scratch: validate solver on the remaining geometry fixtures."""
from gmpy2 import mpq
from bggforge.exactfield import Scalar, ZERO, ONE, parse_scalar as P, rational as Q
from bggforge.linalg import mat, eye, zeros, mat_eq, mat_sub, is_zero_mat
from bggforge.lie import LieAlgebraData, build_so, check_lie_algebra
from bggforge.extension import ExtensionSpec, solve_extension, check_normal


def bracket_table_from_matrices(mats, dim_amb):
    """Structure constants of a matrix Lie algebra given independent basis."""
    from bggforge.linalg import linear_solve, commutator, transpose
    d = len(mats)
    cols = [[m[i][j] for m in mats] for i in range(dim_amb) for j in range(dim_amb)]
    A = cols  # (dim_amb^2) x d matrix, columns are basis vectors flattened
    tb = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            br = commutator(mats[i], mats[j])
            flat = [br[r][c] for r in range(dim_amb) for c in range(dim_amb)]
            sol = linear_solve(A, flat)
            assert sol.ok and sol.nullspace.dim == 0
            tb[i][j] = sol.particular
    return tb


def lie_from_matrices(mats, h_indices, c_indices, dim_amb):
    tb = bracket_table_from_matrices(mats, dim_amb)
    return LieAlgebraData(dim=len(mats), bracket_table=tb, h_indices=h_indices,
                          c_indices=c_indices, matrix_realization=mats)


def show(m):
    for r in m:
        print('   ', [str(x) for x in r])


# ---------------- pp-wave ----------------
so13 = build_so(1, 3)
mats = [
    mat([["1/2", 0, 0, 0], [0, "-1/2", 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    mat([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    mat([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]),
    mat([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]]),
]
k = lie_from_matrices(mats, [], [0, 1, 2, 3], 4)
print("ppwave check:", check_lie_algebra(k)["ok"])
ext = solve_extension(ExtensionSpec(k=k, so=so13, alpha_minus1=eye(4)))
exp = [zeros(6, 6) for _ in range(4)]
exp[0][0][1] = P("1/2"); exp[0][1][0] = ONE; exp[0][4][5] = P("-1/2"); exp[0][5][4] = -ONE
exp[1][2][0] = ONE; exp[1][2][1] = -ONE; exp[1][4][2] = ONE; exp[1][5][2] = -ONE
exp[2][3][0] = ONE; exp[2][5][3] = -ONE
exp[3][4][0] = ONE; exp[3][5][1] = -ONE
okpp = all(mat_eq(ext.alpha_mats[i], exp[i]) for i in range(4))
print("ppwave alpha matches:", okpp, "gauge:", ext.gauge_used, "freedom:", ext.freedom)
if not okpp:
    for i in range(4):
        if not mat_eq(ext.alpha_mats[i], exp[i]):
            print("mismatch k%d got:" % (i+1)); show(ext.alpha_mats[i]); print("exp:"); show(exp[i])
kap = ext.kappa_value(k.basis_vector(0), k.basis_vector(1))
expk = zeros(6, 6); expk[2][1] = P("1/2"); expk[4][2] = P("-1/2")
print("ppwave kappa(k1,k2) matches:", mat_eq(kap, expk))
if not mat_eq(kap, expk):
    show(kap)

# ---------------- non-reductive Goedel ----------------
K1 = mat([[0,0,0,0],[0,0,0,0],[0,0,0,-1],[0,0,1,0]])
K2 = mat([[0,0,0,0],[0,0,0,0],[0,0,-1,0],[0,0,0,1]])
K3 = mat([[1,0,0,0],[0,-1,0,0],[0,0,1,0],[0,0,0,-1]])
K4 = mat([[0,0,0,0],[0,0,0,0],[0,0,0,2],[0,0,0,0]])
K5 = mat([[0,1,0,0],[0,0,0,0],[0,0,0,1],[0,0,0,0]])
k = lie_from_matrices([K1,K2,K3,K4,K5], [4], [0,1,2,3], 4)
print("nonreductive check:", check_lie_algebra(k)["ok"])
ext = solve_extension(ExtensionSpec(k=k, so=so13, alpha_minus1=eye(4)))
print("nonreductive gauge:", ext.gauge_used, "freedom:", ext.freedom)
exp = [zeros(6, 6) for _ in range(5)]
# columns of the displayed extension, coefficient per generator
# row0: [-x2, 4x1+2x4+x5, 0,0,0,0]
exp[1][0][0] = -ONE
exp[0][0][1] = Q(4); exp[3][0][1] = Q(2); exp[4][0][1] = ONE
# row1: [x1, x2-2x3, 0,0,0,0]
exp[0][1][0] = ONE; exp[1][1][1] = ONE; exp[2][1][1] = Q(-2)
# row2: [x2, 2x1-2x4-x5, 0, -x3, 0, 0]
exp[1][2][0] = ONE; exp[0][2][1] = Q(2); exp[3][2][1] = Q(-2); exp[4][2][1] = -ONE
exp[2][2][3] = -ONE
# row3: [x3, -2x1, x3, 0, 0, 0]
exp[2][3][0] = ONE; exp[0][3][1] = Q(-2); exp[2][3][2] = ONE
# row4: [x4, 0, -2x1+2x4+x5, 2x1, -x2+2x3, -4x1-2x4-x5]
exp[3][4][0] = ONE
exp[0][4][2] = Q(-2); exp[3][4][2] = Q(2); exp[4][4][2] = ONE
exp[0][4][3] = Q(2)
exp[1][4][4] = -ONE; exp[2][4][4] = Q(2)
exp[0][4][5] = Q(-4); exp[3][4][5] = Q(-2); exp[4][4][5] = -ONE
# row5: [0, -x4, -x2, -x3, -x1, x2]
exp[3][5][1] = -ONE; exp[1][5][2] = -ONE; exp[2][5][3] = -ONE; exp[0][5][4] = -ONE
exp[1][5][5] = ONE
oknr = all(mat_eq(ext.alpha_mats[i], exp[i]) for i in range(5))
print("nonreductive alpha matches:", oknr)
if not oknr:
    for i in range(5):
        if not mat_eq(ext.alpha_mats[i], exp[i]):
            print("mismatch x%d got:" % (i+1)); show(ext.alpha_mats[i]); print("exp:"); show(exp[i])
kap = ext.kappa_value(k.basis_vector(0), k.basis_vector(1))
print("kappa(K1,K2) entries (0,1),(2,1),(3,1):", str(kap[0][1]), str(kap[2][1]), str(kap[3][1]), "(expect 20, -2, -6)")

# ---------------- Gl(2,R) ----------------
G1 = mat([[2,0],[0,2]])
G2 = [[ZERO, P("0+1/2*sqrt3")],[P("0+1/2*sqrt3"), ZERO]]
G3 = [[ZERO, P("0-1/6*sqrt3")],[P("0+1/6*sqrt3"), ZERO]]
G4 = mat([["1/12",0],[0,"7/12"]])
k = lie_from_matrices([G1,G2,G3,G4], [], [0,1,2,3], 2)
print("gl2r check:", check_lie_algebra(k)["ok"])
ext = solve_extension(ExtensionSpec(k=k, so=so13, alpha_minus1=eye(4)))
exp = [zeros(6,6) for _ in range(4)]
# row0: [0, -x1, x2, -2/3 x3, 2/3 x4, 0]
exp[0][0][1] = -ONE; exp[1][0][2] = ONE; exp[2][0][3] = P("-2/3"); exp[3][0][4] = P("2/3")
# row1: [x1, 0, 2/3 x3, x2, 0, -2/3 x4]
exp[0][1][0] = ONE; exp[2][1][2] = P("2/3"); exp[1][1][3] = ONE; exp[3][1][5] = P("-2/3")
# row2: [x2, -x3, 0, -x1-1/2 x4, -2/3 x3, -x2]
exp[1][2][0] = ONE; exp[2][2][1] = -ONE; exp[0][2][3] = -ONE; exp[3][2][3] = P("-1/2")
exp[2][2][4] = P("-2/3"); exp[1][2][5] = -ONE
# row3: [x3, x2, x1+1/2x4, 0, -x2, 2/3 x3]
exp[2][3][0] = ONE; exp[1][3][1] = ONE; exp[0][3][2] = ONE; exp[3][3][2] = P("1/2")
exp[1][3][4] = -ONE; exp[2][3][5] = P("2/3")
# row4: [x4, 0, x3, -x2, 0, x1]
exp[3][4][0] = ONE; exp[2][4][2] = ONE; exp[1][4][3] = -ONE; exp[0][4][5] = ONE
# row5: [0, -x4, -x2, -x3, -x1, 0]
exp[3][5][1] = -ONE; exp[1][5][2] = -ONE; exp[2][5][3] = -ONE; exp[0][5][4] = -ONE
okgl = all(mat_eq(ext.alpha_mats[i], exp[i]) for i in range(4))
print("gl2r alpha matches:", okgl, "gauge:", ext.gauge_used, "freedom:", ext.freedom)
if not okgl:
    for i in range(4):
        if not mat_eq(ext.alpha_mats[i], exp[i]):
            print("mismatch x%d got:" % (i+1)); show(ext.alpha_mats[i]); print("exp:"); show(exp[i])

# ---------------- Nil ----------------
so12 = build_so(1, 2)
Y1 = [[ZERO]*3 for _ in range(3)]; Y1[1][0] = P("0-1/2*sqrt2"); Y1[2][1] = P("0+1/2*sqrt2")
Y2 = [[ZERO]*3 for _ in range(3)]; Y2[2][0] = ONE
Y3 = [[ZERO]*3 for _ in range(3)]; Y3[1][0] = P("0+1/2*sqrt2"); Y3[2][1] = P("0+1/2*sqrt2")
k = lie_from_matrices([Y1,Y2,Y3], [], [0,1,2], 3)
print("nil check:", check_lie_algebra(k)["ok"])
ext = solve_extension(ExtensionSpec(k=k, so=so12, alpha_minus1=eye(3)))
exp = [zeros(5,5) for _ in range(3)]
# row0: [0, -3/8 y3, 5/8 y2, -3/8 y1, 0]
exp[2][0][1] = P("-3/8"); exp[1][0][2] = P("5/8"); exp[0][0][3] = P("-3/8")
# row1: [y1, -1/2 y2, -1/2 y1, 0, 3/8 y1]
exp[0][1][0] = ONE; exp[1][1][1] = P("-1/2"); exp[0][1][2] = P("-1/2"); exp[0][1][4] = P("3/8")
# row2: [y2, -1/2 y3, 0, 1/2 y1, -5/8 y2]
exp[1][2][0] = ONE; exp[2][2][1] = P("-1/2"); exp[0][2][3] = P("1/2"); exp[1][2][4] = P("-5/8")
# row3: [y3, 0, 1/2 y3, 1/2 y2, 3/8 y3]
exp[2][3][0] = ONE; exp[2][3][2] = P("1/2"); exp[1][3][3] = P("1/2"); exp[2][3][4] = P("3/8")
# row4: [0, -y3, -y2, -y1, 0]
exp[2][4][1] = -ONE; exp[1][4][2] = -ONE; exp[0][4][3] = -ONE
oknil = all(mat_eq(ext.alpha_mats[i], exp[i]) for i in range(3))
print("nil alpha matches:", oknil, "gauge:", ext.gauge_used, "freedom:", ext.freedom)
if not oknil:
    for i in range(3):
        if not mat_eq(ext.alpha_mats[i], exp[i]):
            print("mismatch y%d got:" % (i+1)); show(ext.alpha_mats[i]); print("exp:"); show(exp[i])

# ---------------- Fubini-Study n=2 ----------------
sonn = build_so(2, 2)
def sl_basis(nn):
    mats, h_idx, c_idx = [], [], []
    # c: lower column then upper row
    for i in range(nn):
        m = [[ZERO]*(nn+1) for _ in range(nn+1)]
        m[1+i][0] = ONE
        mats.append(m)
    for i in range(nn):
        m = [[ZERO]*(nn+1) for _ in range(nn+1)]
        m[0][1+i] = ONE
        mats.append(m)
    c_idx = list(range(2*nn))
    # h: gl(nn) block embedded trace-free
    for i in range(nn):
        for j in range(nn):
            m = [[ZERO]*(nn+1) for _ in range(nn+1)]
            m[1+i][1+j] = ONE
            if i == j:
                m[0][0] = -ONE
            mats.append(m)
    h_idx = list(range(2*nn, 2*nn+nn*nn))
    return mats, h_idx, c_idx

mats, h_idx, c_idx = sl_basis(2)
k = lie_from_matrices(mats, h_idx, c_idx, 3)
print("fs2 check:", check_lie_algebra(k)["ok"])
ext = solve_extension(ExtensionSpec(k=k, so=sonn, alpha_minus1=eye(4)))
print("fs2 gauge:", ext.gauge_used, "freedom:", ext.freedom)
# expected: c1 = 1/2 for n=2
c1 = P("1/2")
ok = True
# alpha of lower-column basis (X1 = e_i): u-part e_i, d-part c1*e_i
for i in range(2):
    m = ext.alpha_mats[i]
    expm = zeros(6, 6)
    expm[1+i][0] = ONE; expm[5][3+i] = -ONE
    expm[0][3+i] = c1; expm[1+i][5] = -c1
    if not mat_eq(m, expm):
        ok = False; print("fs2 mismatch X1_%d:" % i); show(m); print("exp:"); show(expm)
for i in range(2):
    m = ext.alpha_mats[2+i]
    expm = zeros(6, 6)
    expm[3+i][0] = ONE; expm[5][1+i] = -ONE
    expm[0][1+i] = c1; expm[3+i][5] = -c1
    if not mat_eq(m, expm):
        ok = False; print("fs2 mismatch X2_%d:" % i); show(m); print("exp:"); show(expm)
# alpha of h basis: A = E_ij: middle (A + trA, -A^t - trA)
for t in range(4):
    i, j = divmod(t, 2)
    m = ext.alpha_mats[4+t]
    expm = zeros(6, 6)
    expm[1+i][1+j] = ONE
    expm[3+j][3+i] = -ONE
    if i == j:
        for r in range(2):
            expm[1+r][1+r] = expm[1+r][1+r] + ONE
            expm[3+r][3+r] = expm[3+r][3+r] - ONE
        expm[1+i][1+j] = expm[1+i][1+j]
    if not mat_eq(m, expm):
        ok = False; print("fs2 mismatch h%d%d:" % (i, j)); show(m); print("exp:"); show(expm)
print("fs2 alpha matches:", ok)
