"""Scratch: compare scheduled prolongation steps with the catalogued ones."""
from bggforge.exactfield import Scalar, ZERO, ONE, rational as Q, parse_scalar as P
from bggforge.fixtures import fixture
from bggforge.extension import solve_extension
from bggforge.lie import build_so
from bggforge.reps import build_rep
from bggforge.bgg import prolongation_connection

ext = solve_extension(fixture("godel").extension_spec())
so = build_so(1, 3)
rep = build_rep(so, "sym0(T,2)")

SCHEDULE = [6, 6, 12, 8, 12, 8, 12]
conn = prolongation_connection(ext, rep, schedule=SCHEDULE)
print("steps:", [(s["homogeneity2"], str(s["c"])) for s in conn.steps])

# position labels in the 6x6 output scheme -> sym-monomial pair
POS = {"w": (0, 0), "u1": (0, 1), "u2": (0, 2), "u3": (0, 3), "u4": (0, 4),
       "r1": (1, 1), "r5": (1, 2), "r8": (1, 3), "r9": (1, 4),
       "r2": (2, 2), "r6": (2, 3), "r10": (2, 4),
       "r3": (3, 3), "r7": (3, 4), "r4": (4, 4),
       "v1": (1, 5), "v2": (2, 5), "v3": (3, 5), "v4": (4, 5), "s": (5, 5)}
MONO = {}
from itertools import combinations_with_replacement
for a, tup in enumerate(combinations_with_replacement(range(6), 2)):
    MONO[tup] = a

def coords_to_labels(vec20):
    """sym0 coordinates -> matrix-entry labels, via the graded embedding.

    The equivariant matrix of a monomial vector has S_ij = c_ij off the
    diagonal and S_ii = 2 c_ii."""
    amb = [ZERO] * 21
    for c, row in zip(vec20, rep.embedding_rows):
        if c:
            for t in range(21):
                if row[t]:
                    amb[t] = amb[t] + c * row[t]
    out = {}
    for lbl, (i, j) in POS.items():
        v = amb[MONO[(min(i, j), max(i, j))]]
        out[lbl] = v + v if i == j else v
    return out

def labels_of_basis(idx):
    """input labels for the idx-th sym0 basis vector"""
    return coords_to_labels([ONE if t == idx else ZERO for t in range(20)])

H = Q(1, 2)
TH = Q(3, 4)

def disp_step(k, x, L):
    """displayed increment matrices: k-th step, x = input coords,
    L = labels of the module vector; returns label->Scalar of the image."""
    x1, x2, x3, x4 = x
    v1, v2, v3, v4, s = L["v1"], L["v2"], L["v3"], L["v4"], L["s"]
    r = {i: L["r%d" % i] for i in range(1, 11)}
    z = lambda i, j: [None, x1, x2, x3, x4][j] * [None, v1, v2, v3, v4][i] \
        + [None, x1, x2, x3, x4][i] * [None, v1, v2, v3, v4][j]
    out = {lbl: ZERO for lbl in POS}
    if k == 1:
        f = Q(1, 6) * Q(-2, 3)
        out["u1"] = H * ((r[2] + r[3] - Q(2) * r[9]) * x1 - x2 * r[5] - x3 * r[8]) + x4 * r[1]
        out["r1"] = Q(2) * x1 * v1
        out["u2"] = (r[9] - r[3]) * x2 - H * (x1 * r[10] + x4 * r[5]) + x3 * r[6]
        out["r5"] = -H * z(1, 2)
        out["r2"] = z(1, 4) - Q(2) * x3 * v3
        out["u3"] = (r[9] - r[2]) * x3 - H * (x1 * r[7] + x4 * r[8]) + x2 * r[6]
        out["r8"] = -H * z(1, 3)
        out["r6"] = z(2, 3)
        out["r3"] = z(1, 4) - Q(2) * x2 * v2
        out["u4"] = H * ((r[2] + r[3] - Q(2) * r[9]) * x4 - x2 * r[10] - x3 * r[7]) + x1 * r[4]
        out["r9"] = x2 * v2 + x3 * v3 - z(1, 4)
        out["r10"] = -H * z(2, 4)
        out["r7"] = -H * z(3, 4)
        out["r4"] = Q(2) * x4 * v4
    elif k == 2:
        f = Q(1, 6) * P("0+1*sqrt2")
        out["w"] = (Q(2) * r[7] - Q(4) * r[8]) * x2 + Q(4) * (r[5] - H * r[10]) * x3
        out["u1"] = TH * (x3 * v2 - x2 * v3)
        out["u2"] = Q(1, 4) * (x4 - Q(2) * x1) * v3 - Q(2) * (v1 - H * v4) * x3
        out["r5"] = -TH * x3 * s
        out["u3"] = Q(1, 4) * (Q(2) * x1 - x4) * v2 + Q(2) * (v1 - H * v4) * x2
        out["r8"] = TH * x2 * s
        out["u4"] = Q(3, 2) * (x2 * v3 - x3 * v2)
        out["r10"] = Q(3, 2) * x3 * s
        out["r7"] = -Q(3, 2) * x2 * s
    elif k == 3:
        f = Q(1, 12) * P("0+1/6*sqrt2")
        out["w"] = (Q(10) * r[8] - Q(5) * r[7]) * x2 - Q(10) * (r[5] - H * r[10]) * x3
        out["u1"] = H * (x2 * v3 - x3 * v2)
        out["u2"] = H * (Q(10) * x1 - Q(5) * x4) * v3 + Q(6) * (v1 - H * v4) * x3
        out["u3"] = H * (Q(-10) * x1 + Q(5) * x4) * v2 - Q(6) * (v1 - H * v4) * x2
        out["u4"] = x3 * v2 - x2 * v3
    elif k == 4:
        f = Q(1, 8) * P("0+1/9*sqrt2")
        out["w"] = Q(1, 4) * (Q(14) * r[8] - Q(7) * r[7]) * x2 - Q(7, 2) * (r[5] - H * r[10]) * x3
        out["u1"] = H * (x3 * v2 - x2 * v3)
        out["u2"] = H * v3 * (Q(2) * x1 - x4)
        out["u3"] = H * (Q(-2) * x1 + x4) * v2
        out["u4"] = x2 * v3 - x3 * v2
    elif k == 5:
        f = Q(1, 12) * P("0+1/4*sqrt2")
        out["w"] = H * (Q(-2) * r[8] + r[7]) * x2 + (r[5] - H * r[10]) * x3
    elif k == 6:
        f = Q(1, 8) * Q(1, 9)
        out["w"] = (Q(16) * x1 - Q(8) * x4) * v1 + (Q(-8) * x1 + Q(4) * x4) * v4 \
            + Q(12) * (v2 * x2 + v3 * x3)
        out["u1"] = s * (Q(5) * x1 - Q(2) * x4)
        out["u2"] = Q(-5) * x2 * s
        out["u3"] = Q(-5) * x3 * s
        out["u4"] = (Q(-8) * x1 + Q(5) * x4) * s
    elif k == 7:
        f = Q(1, 12) * Q(1, 9)
        out["w"] = -v1 * x4 - v2 * x2 - v3 * x3 - v4 * x1
    return {lbl: f * val for lbl, val in out.items()}

ok_all = True
for step_no, step in enumerate(conn.steps, start=1):
    ok = True
    for t in range(4):                  # input direction e_t (c-basis)
        x = [ONE if u == t else ZERO for u in range(4)]
        for b in range(20):             # module basis vector
            L = labels_of_basis(b)
            want = disp_step(step_no, x, L)
            img = [ZERO] * 20
            upd = step["update_z"][t]   # alpha_minus1 = id: z-index = t
            for i in range(20):
                if upd[i][b]:
                    img[i] = upd[i][b]
            got = coords_to_labels(img)
            for lbl in POS:
                if got[lbl] != want[lbl]:
                    if ok:
                        print("step %d mismatch at x=e%d, basis %d, %s: got %s want %s"
                              % (step_no, t + 1, b, lbl, got[lbl], want[lbl]))
                    ok = False
    print("step %d increments match displayed: %s" % (step_no, ok))
    ok_all = ok_all and ok
print("ALL:", ok_all)
