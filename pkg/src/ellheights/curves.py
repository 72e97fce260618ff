"""Weierstrass curves over Q with exact arithmetic.

A curve is given by five rational coefficients (a1, a2, a3, a4, a6) of

    y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6

All field arithmetic uses exact rationals; floating point appears only in
the naive logarithmic height.  Points are stored affinely with the origin O
(the point at infinity) as a distinguished case.
"""

from fractions import Fraction

from .arith import InputError, log_abs


class SingularCurveError(ValueError):
    """Raised when the discriminant vanishes."""


def parse_rational(s):
    s = s.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("cannot parse rational %r" % (s,)) from exc


def format_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


class CurvePoint:
    """Either the origin O or an affine rational point (x, y)."""

    __slots__ = ("x", "y", "is_origin")

    def __init__(self, x=None, y=None):
        if x is None:
            self.is_origin = True
            self.x = self.y = None
        else:
            self.is_origin = False
            self.x = Fraction(x)
            self.y = Fraction(y)

    @staticmethod
    def origin():
        return CurvePoint()

    @staticmethod
    def parse(s):
        s = s.strip()
        if s in ("O", "o", "0", "inf"):
            return CurvePoint()
        parts = s.split(",")
        if len(parts) != 2:
            raise InputError("point must be 'x,y' or 'O', got %r" % (s,))
        return CurvePoint(parse_rational(parts[0]), parse_rational(parts[1]))

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_origin or other.is_origin:
            return self.is_origin and other.is_origin
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.is_origin, self.x, self.y))

    def __repr__(self):
        if self.is_origin:
            return "O"
        return "(%s, %s)" % (format_rational(self.x), format_rational(self.y))


O = CurvePoint.origin()


class WeierstrassCurve:
    """An elliptic curve in Weierstrass form over Q with its invariants."""

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1 = Fraction(a1)
        self.a2 = Fraction(a2)
        self.a3 = Fraction(a3)
        self.a4 = Fraction(a4)
        self.a6 = Fraction(a6)
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4
                   + a2 * a3 * a3 - a4 * a4)
        self.c4 = self.b2 ** 2 - 24 * self.b4
        self.c6 = -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6
        self.disc = (-self.b2 ** 2 * self.b8 - 8 * self.b4 ** 3
                     - 27 * self.b6 ** 2 + 9 * self.b2 * self.b4 * self.b6)
        if self.disc == 0:
            raise SingularCurveError(
                "curve [%s] is singular" % self.coeff_string())
        self.j = self.c4 ** 3 / self.disc
        assert 4 * self.b8 == self.b2 * self.b6 - self.b4 ** 2
        assert self.c4 ** 3 - self.c6 ** 2 == 1728 * self.disc

    @staticmethod
    def parse(s):
        parts = s.split(",")
        if len(parts) != 5:
            raise InputError("curve must be 'a1,a2,a3,a4,a6', got %r" % (s,))
        return WeierstrassCurve(*[parse_rational(t) for t in parts])

    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def coeff_string(self):
        return ",".join(format_rational(a) for a in self.coefficients())

    def invariants(self):
        return {"b2": self.b2, "b4": self.b4, "b6": self.b6, "b8": self.b8,
                "c4": self.c4, "c6": self.c6, "disc": self.disc, "j": self.j}

    def __eq__(self, other):
        if not isinstance(other, WeierstrassCurve):
            return NotImplemented
        return self.coefficients() == other.coefficients()

    def __hash__(self):
        return hash(self.coefficients())

    def __repr__(self):
        return "WeierstrassCurve(%s)" % self.coeff_string()

    # -- membership and group law ------------------------------------------

    def is_on_curve(self, P):
        if P.is_origin:
            return True
        x, y = P.x, P.y
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x ** 3 + self.a2 * x * x + self.a4 * x + self.a6
        return lhs == rhs

    def _require(self, P):
        if not self.is_on_curve(P):
            raise InputError("point %r not on curve [%s]" % (P, self.coeff_string()))

    def negate(self, P):
        if P.is_origin:
            return P
        self._require(P)
        return CurvePoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P, Q):
        """Chord-and-tangent addition."""
        self._require(P)
        self._require(Q)
        if P.is_origin:
            return Q
        if Q.is_origin:
            return P
        a1, a2, a3, a4 = self.a1, self.a2, self.a3, self.a4
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return CurvePoint.origin()
            # tangent line at P = Q
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) \
                / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return CurvePoint(x3, y3)

    def subtract(self, P, Q):
        return self.add(P, self.negate(Q))

    def multiply(self, n, P):
        """n*P by double-and-add; n may be negative."""
        self._require(P)
        if n == 0 or P.is_origin:
            return CurvePoint.origin()
        if n < 0:
            n, P = -n, self.negate(P)
        acc = CurvePoint.origin()
        while n:
            if n & 1:
                acc = self.add(acc, P)
            P = self.add(P, P)
            n >>= 1
        return acc

    def torsion_order(self, P, bound=12):
        """Order of P if it is torsion of order <= bound, else None."""
        Q = P
        for m in range(1, bound + 1):
            if Q.is_origin:
                return m
            Q = self.add(Q, P)
        return None

    def two_division_values(self):
        """Coefficients (as a monic cubic) whose roots are the x-coordinates
        of the 2-torsion points: x^3 + (b2/4)x^2 + (b4/2)x + b6/4."""
        return [self.b6 / 4, self.b4 / 2, self.b2 / 4, Fraction(1)]


class ModelMap:
    """Change of Weierstrass model x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.

    Applying the map sends a curve E to an isomorphic curve E' with
    disc' = u^-12 disc, and maps points of E to points of E'.
    """

    __slots__ = ("u", "r", "s", "t")

    def __init__(self, u=1, r=0, s=0, t=0):
        self.u = Fraction(u)
        self.r = Fraction(r)
        self.s = Fraction(s)
        self.t = Fraction(t)
        if self.u == 0:
            raise InputError("model map needs u != 0")

    def is_identity(self):
        return (self.u, self.r, self.s, self.t) == (1, 0, 0, 0)

    def apply_to_curve(self, E):
        u, r, s, t = self.u, self.r, self.s, self.t
        a1, a2, a3, a4, a6 = E.coefficients()
        A1 = (a1 + 2 * s) / u
        A2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
        A3 = (a3 + r * a1 + 2 * t) / u ** 3
        A4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1
              + 3 * r * r - 2 * s * t) / u ** 4
        A6 = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3
              - t * t - r * t * a1) / u ** 6
        E2 = WeierstrassCurve(A1, A2, A3, A4, A6)
        assert E2.disc == E.disc / u ** 12
        return E2

    def apply_to_point(self, P):
        if P.is_origin:
            return P
        u, r, s, t = self.u, self.r, self.s, self.t
        x2 = (P.x - r) / u ** 2
        y2 = (P.y - s * (P.x - r) - t) / u ** 3
        return CurvePoint(x2, y2)

    def compose(self, second):
        """The map 'self then second'."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = second.u, second.r, second.s, second.t
        return ModelMap(u1 * u2,
                        r1 + u1 ** 2 * r2,
                        s1 + u1 * s2,
                        t1 + u1 ** 3 * t2 + s1 * u1 ** 2 * r2)

    def inverse(self):
        u, r, s, t = self.u, self.r, self.s, self.t
        return ModelMap(1 / u, -r / u ** 2, -s / u, (s * r - t) / u ** 3)

    def __repr__(self):
        return "ModelMap(u=%s, r=%s, s=%s, t=%s)" % tuple(
            format_rational(v) for v in (self.u, self.r, self.s, self.t))


def apply_transform(E, model_map):
    """Transformed curve together with the point mapping E -> E'."""
    E2 = model_map.apply_to_curve(E)

    def mapper(P):
        if not E.is_on_curve(P):
            raise InputError("point %r not on source curve" % (P,))
        Q = model_map.apply_to_point(P)
        assert E2.is_on_curve(Q)
        return Q

    return E2, mapper


def naive_x_height(P):
    """log max(|num x|, den x) of an affine point; the doubling-limit oracle
    feeds on this."""
    if P.is_origin:
        raise InputError("naive height needs an affine point")
    m = max(abs(P.x.numerator), P.x.denominator)
    return float(log_abs(m))
