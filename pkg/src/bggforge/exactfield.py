"""Exact arithmetic in the real biquadratic field Q(sqrt2, sqrt3).

Every scalar is stored as a + b*sqrt2 + c*sqrt3 + d*sqrt6 with rational
coordinates (gmpy2.mpq).  The coordinate representation is unique, so
equality is coordinate equality and the field axioms hold exactly.
"""

from __future__ import annotations

from gmpy2 import mpq

__all__ = [
    "Scalar", "ZERO", "ONE", "SQRT2", "SQRT3", "SQRT6",
    "rational", "field_arith", "to_float", "parse_scalar", "format_scalar",
]

_Q0 = mpq(0)
_Q1 = mpq(1)

_F_SQRT2 = 1.4142135623730951
_F_SQRT3 = 1.7320508075688772
_F_SQRT6 = 2.449489742783178


class Scalar:
    """Element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Q(sqrt2, sqrt3)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = a if type(a) is mpq else mpq(a)
        self.b = b if type(b) is mpq else mpq(b)
        self.c = c if type(c) is mpq else mpq(c)
        self.d = d if type(d) is mpq else mpq(d)

    # -- ring structure -------------------------------------------------

    def __add__(self, other):
        if type(other) is not Scalar:
            other = as_scalar(other)
        if not (other.a or other.b or other.c or other.d):
            return self
        if not (self.a or self.b or self.c or self.d):
            return other
        return Scalar(self.a + other.a, self.b + other.b,
                      self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not Scalar:
            other = as_scalar(other)
        if not (other.a or other.b or other.c or other.d):
            return self
        if not (self.a or self.b or self.c or self.d):
            return other.__neg__()
        return Scalar(self.a - other.a, self.b - other.b,
                      self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        return as_scalar(other).__sub__(self)

    def __neg__(self):
        if not (self.a or self.b or self.c or self.d):
            return self
        return Scalar(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if type(other) is not Scalar:
            other = as_scalar(other)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        # fast path: both rational
        if not (b1 or c1 or d1):
            if not a1:
                return ZERO
            return Scalar(a1 * a2, a1 * b2, a1 * c2, a1 * d2)
        if not (b2 or c2 or d2):
            if not a2:
                return ZERO
            return Scalar(a1 * a2, b1 * a2, c1 * a2, d1 * a2)
        # sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2*sqrt3, sqrt3*sqrt6 = 3*sqrt2
        return Scalar(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    # -- field structure ------------------------------------------------

    def inverse(self):
        """Exact multiplicative inverse; raises ZeroDivisionError at 0."""
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        a, b, c, d = self.a, self.b, self.c, self.d
        if not (b or c or d):
            return Scalar(_Q1 / a)
        # conjugate under sqrt2 -> -sqrt2
        s1 = Scalar(a, -b, c, -d)
        # x * s1 lies in Q(sqrt3): kill sqrt3 with its conjugate there
        p = self * s1
        s2 = Scalar(p.a, p.b, -p.c, -p.d)
        norm = p * s2                    # rational now
        assert not (norm.b or norm.c or norm.d)
        return (s1 * s2) * Scalar(_Q1 / norm.a)

    def __truediv__(self, other):
        if type(other) is not Scalar:
            other = as_scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    # -- comparisons, hashing, misc --------------------------------------

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __eq__(self, other):
        if type(other) is not Scalar:
            if isinstance(other, (int, mpq)):
                other = as_scalar(other)
            else:
                return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def is_rational(self):
        return not (self.b or self.c or self.d)

    def __float__(self):
        return to_float(self)

    def __repr__(self):
        return "Scalar(%s)" % format_scalar(self)

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar()
ONE = Scalar(1)
SQRT2 = Scalar(0, 1)
SQRT3 = Scalar(0, 0, 1)
SQRT6 = Scalar(0, 0, 0, 1)


def as_scalar(x) -> Scalar:
    if type(x) is Scalar:
        return x
    if isinstance(x, (int, mpq)):
        return Scalar(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError("cannot coerce %r to Scalar" % (x,))


def rational(num, den=1) -> Scalar:
    """Rational scalar num/den."""
    return Scalar(mpq(num, den))


def field_arith(x: Scalar, y: Scalar, op: str) -> Scalar:
    """Dispatch one exact field operation: 'add', 'sub', 'mul' or 'div'."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError("unknown op %r" % op)


def to_float(x: Scalar) -> float:
    """Round to double precision (within a few ulp of the exact value)."""
    return (float(x.a) + float(x.b) * _F_SQRT2
            + float(x.c) * _F_SQRT3 + float(x.d) * _F_SQRT6)


# -- text literals -------------------------------------------------------
#
# Grammar:  RAT ( ('+'|'-') RAT '*' ROOT )*   with ROOT in {sqrt2,sqrt3,sqrt6}
# and RAT = ['-'] INT ['/' POSINT].   Example: -1/2+3/4*sqrt2
#
# The canonical form always starts with the rational coordinate (possibly 0)
# and lists the nonzero radical coordinates in the order sqrt2, sqrt3, sqrt6.

_ROOT_COORD = {"sqrt2": "b", "sqrt3": "c", "sqrt6": "d"}


def parse_scalar(text: str) -> Scalar:
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    # split into signed terms
    terms = []
    start = 0
    for i in range(1, len(s)):
        if s[i] in "+-" and s[i - 1] not in "+-*/":
            terms.append(s[start:i])
            start = i
    terms.append(s[start:])
    coords = {"a": _Q0, "b": _Q0, "c": _Q0, "d": _Q0}
    seen_rational = False
    for idx, term in enumerate(terms):
        if "*" in term:
            rat_part, _, root = term.partition("*")
            key = _ROOT_COORD.get(root)
            if key is None:
                raise ValueError("unknown radical %r in %r" % (root, text))
        else:
            if idx != 0 or seen_rational:
                raise ValueError("misplaced rational term in %r" % text)
            rat_part, key = term, "a"
            seen_rational = True
        try:
            val = mpq(rat_part.lstrip("+"))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError("bad rational %r in %r" % (rat_part, text)) from exc
        coords[key] += val
    return Scalar(coords["a"], coords["b"], coords["c"], coords["d"])


def _fmt_q(q: mpq) -> str:
    return str(q)


def format_scalar(x: Scalar) -> str:
    out = [_fmt_q(x.a)]
    for coord, root in ((x.b, "sqrt2"), (x.c, "sqrt3"), (x.d, "sqrt6")):
        if coord:
            sign = "+" if coord > 0 else "-"
            out.append("%s%s*%s" % (sign, _fmt_q(abs(coord)), root))
    return "".join(out)
