"""Tate's algorithm over Q: minimal model at p, Kodaira type, component
group, Tamagawa number, and the special-fiber component hit by a point.

The step structure is the classical one.  Every change of model is tracked
as a ModelMap so points can be pushed to the normalized minimal model, and
each reduction-type decision records the little mod-p root data needed to
classify the component of an arbitrary rational point afterwards:

* multiplicative types use the two p-adic branches through the node; the
  valuation of the branch coordinate is the position in the cycle;
* additive types read the branch off valuations of the transformed point
  against the roots of the step polynomials (the exceptional components of
  the corresponding blowups).
"""

from fractions import Fraction
from functools import lru_cache

from .arith import (INF, InputError, check_prime, frac_mod, hensel_sqrt,
                    newton_root, roots_mod, sqrt_mod, vp)
from .curves import CurvePoint, ModelMap, WeierstrassCurve
from .fibers import fiber_for_type


class KodairaType:
    """Reduction-type label: I_n (n >= 0), II, III, IV, I_n*, IV*, III*, II*."""

    KINDS = ("I", "II", "III", "IV", "I*", "IV*", "III*", "II*")
    __slots__ = ("kind", "n")

    def __init__(self, kind, n=0):
        if kind not in self.KINDS:
            raise InputError("unknown Kodaira kind %r" % (kind,))
        if kind not in ("I", "I*") and n:
            raise InputError("%s carries no index" % kind)
        self.kind = kind
        self.n = int(n)

    def __str__(self):
        if self.kind == "I":
            return "I%d" % self.n
        if self.kind == "I*":
            return "I%d*" % self.n
        return self.kind

    __repr__ = __str__

    def __eq__(self, other):
        if not isinstance(other, KodairaType):
            return NotImplemented
        return (self.kind, self.n) == (other.kind, other.n)

    def __hash__(self):
        return hash((self.kind, self.n))

    @staticmethod
    def parse(s):
        s = s.strip()
        if s in ("II", "III", "IV", "IV*", "III*", "II*"):
            return KodairaType(s)
        star = s.endswith("*")
        body = s[:-1] if star else s
        if body.startswith("I") and body[1:].isdigit():
            return KodairaType("I*" if star else "I", int(body[1:]))
        raise InputError("cannot parse Kodaira type %r" % (s,))

    @property
    def n_components_mult_one(self):
        """Number of multiplicity-one fiber components (= |component group|)."""
        if self.kind == "I":
            return max(self.n, 1)
        if self.kind == "I*":
            return 4
        return {"II": 1, "III": 2, "IV": 3,
                "IV*": 3, "III*": 2, "II*": 1}[self.kind]


class ComponentGroup:
    """Geometric component group: trivial, cyclic Z/c, or Z/2 x Z/2.

    Labels are integers: residues mod c for cyclic groups, and bitmasks
    0..3 with xor addition for the Klein group.
    """

    def __init__(self, structure, order):
        assert structure in ("trivial", "cyclic", "klein")
        if structure == "cyclic" and order == 1:
            structure = "trivial"
        self.structure = structure
        self.order = 1 if structure == "trivial" else order
        assert structure != "klein" or order == 4

    def describe(self):
        if self.structure == "trivial":
            return "trivial"
        if self.structure == "klein":
            return "Z/2+Z/2"
        return "Z/%d" % self.order

    def elements(self):
        return list(range(self.order))

    def add(self, a, b):
        if self.structure == "klein":
            return a ^ b
        return (a + b) % self.order

    def neg(self, a):
        if self.structure == "klein":
            return a
        return (-a) % self.order

    def order_of(self, a):
        m, acc = 1, a
        while acc != 0:
            acc = self.add(acc, a)
            m += 1
        return m

    def __repr__(self):
        return "ComponentGroup(%s)" % self.describe()


def is_p_integral(E, p):
    return all(vp(a, p) >= 0 for a in E.coefficients())


def _integral_model(E, p):
    """Scale by u = p^-m so that all coefficients become p-integral."""
    m = 0
    for i, a in zip((1, 2, 3, 4, 6), E.coefficients()):
        v = vp(a, p)
        if v < 0:
            m = max(m, (-v + i - 1) // i)
    if m == 0:
        return E, ModelMap()
    mp = ModelMap(u=Fraction(1, p ** m))
    return mp.apply_to_curve(E), mp


def _singular_point(E, p):
    """The unique singular point of the reduced curve, coordinates in [0, p)."""
    if p == 2:
        for x0 in range(2):
            for y0 in range(2):
                if _is_singular_at(E, p, x0, y0):
                    return x0, y0
        raise RuntimeError("no singular point mod 2 found")
    # p odd: x0 is the multiple root of 4x^3 + b2 x^2 + 2b4 x + b6 mod p
    g = [frac_mod(E.b6, p), frac_mod(2 * E.b4, p), frac_mod(E.b2, p), 4 % p]
    dg = [g[1], 2 * g[2] % p, 12 % p]
    for r in roots_mod(g, p):
        if (dg[0] + dg[1] * r + dg[2] * r * r) % p == 0:
            y0 = frac_mod(-(E.a1 * r + E.a3) * Fraction(1, 2), p)
            return r, y0
    raise RuntimeError("no singular point mod %d found" % p)


def _is_singular_at(E, p, x0, y0):
    a1, a2, a3, a4, a6 = [frac_mod(a, p) for a in E.coefficients()]
    f = (y0 * y0 + a1 * x0 * y0 + a3 * y0
         - x0 ** 3 - a2 * x0 * x0 - a4 * x0 - a6) % p
    fx = (a1 * y0 - 3 * x0 * x0 - 2 * a2 * x0 - a4) % p
    fy = (2 * y0 + a1 * x0 + a3) % p
    return f == 0 and fx == 0 and fy == 0


def _shift(E, to_cur, p, r=0, s=0, t=0):
    m = ModelMap(1, r, s, t)
    return m.apply_to_curve(E), to_cur.compose(m)


def _normalize_entry(E, to_cur, p):
    """Kill a1 and a2 mod p after the singular point sits at the origin."""
    if p == 2:
        s = frac_mod(E.a2, 2)
    else:
        s = frac_mod(-E.a1 * Fraction(1, 2), p)
    if s:
        E, to_cur = _shift(E, to_cur, p, s=s)
    assert vp(E.a1, p) >= 1 and vp(E.a2, p) >= 1
    return E, to_cur


def _normalize_deep(E, to_cur, p):
    """Arrange v(a1), v(a2) >= 1, v(a3), v(a4) >= 2, v(a6) >= 3 (step 6 entry)."""
    if p > 2:
        t = frac_mod(-E.a3 * Fraction(1, 2), p * p)
        if t:
            E, to_cur = _shift(E, to_cur, p, t=t)
    else:
        for t in range(0, 16, 2):
            for r in range(0, 16, 2):
                for s in range(0, 8, 2):
                    m = ModelMap(1, r, s, t)
                    if _step6_ok(m.apply_to_curve(E), p):
                        return m.apply_to_curve(E), to_cur.compose(m)
        raise RuntimeError("step-6 normalization failed at p = 2")
    assert _step6_ok(E, p), "step-6 normalization failed at p = %d" % p
    return E, to_cur


def _step6_ok(E, p):
    return (vp(E.a1, p) >= 1 and vp(E.a2, p) >= 1 and vp(E.a3, p) >= 2
            and vp(E.a4, p) >= 2 and vp(E.a6, p) >= 3)


def _quad_roots(c0, c1, p):
    """Roots in F_p of Y^2 + c1 Y + c0, and whether the roots are distinct
    over the algebraic closure.  Returns (sorted rational roots, squarefree)."""
    if p == 2:
        squarefree = c1 % 2 == 1
    else:
        squarefree = (c1 * c1 - 4 * c0) % p != 0
    rts = roots_mod([c0 % p, c1 % p, 1], p)
    return rts, squarefree


class LocalModelData:
    """Everything Tate's algorithm produces for one (curve, prime) pair."""

    def __init__(self, curve, p, minimal_curve, to_minimal, norm_curve,
                 to_norm, kodaira, v_delta_min, component_group, tamagawa,
                 cls):
        self.curve = curve
        self.p = p
        self.minimal_curve = minimal_curve
        self.to_minimal = to_minimal
        self.norm_curve = norm_curve      # singular point at the origin
        self.to_norm = to_norm
        self.kodaira = kodaira
        self.v_delta_min = v_delta_min
        self.component_group = component_group
        self.tamagawa = tamagawa
        self.n_components_mult_one = kodaira.n_components_mult_one
        self._cls = cls
        self._fiber = None

    def __repr__(self):
        return ("LocalModelData(p=%d, %s, group=%s, c=%d)"
                % (self.p, self.kodaira, self.component_group.describe(),
                   self.tamagawa))

    def fiber(self):
        if self._fiber is None:
            self._fiber = fiber_for_type(self.kodaira)
        return self._fiber

    def fiber_node(self, label):
        """Graph node id of the multiplicity-one component with this label."""
        kind, n = self.kodaira.kind, self.kodaira.n
        if label == 0:
            return 0
        if kind == "I":
            return label % n
        if kind in ("III", "IV", "IV*"):
            return label
        if kind == "III*":
            return 6  # the far multiplicity-one end of the E7 chain
        if kind == "I*":
            if n == 0:
                return label  # legs 1..3
            if n % 2:  # Z/4: 1, 3 are the far legs, 2 the near leg
                return {1: 2, 2: 1, 3: 3}[label]
            return label  # Klein: 1 near, 2/3 far
        raise InputError("no non-identity component for type %s" % self.kodaira)

    # -- point classification ------------------------------------------------

    def _state(self, P):
        """('origin'|'smooth'|'singular', point on the normalized model)."""
        if P.is_origin:
            return "origin", P
        self.curve._require(P)
        Pn = self.to_norm.apply_to_point(P)
        if vp(Pn.x, self.p) < 0:
            return "origin", Pn
        if self.kodaira == KodairaType("I", 0):
            return "smooth", Pn
        if vp(Pn.x, self.p) >= 1 and vp(Pn.y, self.p) >= 1:
            return "singular", Pn
        return "smooth", Pn

    def in_E0(self, P):
        state, _ = self._state(P)
        if state != "singular":
            return True
        if self.kodaira in (KodairaType("I", 1), KodairaType("II"),
                            KodairaType("II*")):
            raise RuntimeError("section through a non-smooth point of an "
                               "irreducible fiber: %s at %d" % (P, self.p))
        return False

    def component_of(self, P):
        """Label of the Neron component P reduces to (0 = identity)."""
        state, Pn = self._state(P)
        if state != "singular":
            return 0
        kind, n, p = self.kodaira.kind, self.kodaira.n, self.p
        x, y = Pn.x, Pn.y
        if kind == "I":
            return self._cycle_position(Pn)
        if kind in ("III", "III*"):
            return 1
        if kind == "IV":
            lam = frac_mod(y / p, p)
            return 1 + self._root_index(lam, "deciding")
        if kind == "IV*":
            lam = frac_mod(y / p ** 2, p)
            return 1 + self._root_index(lam, "deciding")
        if kind == "I*" and n == 0:
            xh = frac_mod(x / p, p)
            return 1 + self._root_index(xh, "legs")
        if kind == "I*":
            xh = frac_mod(x / p, p)
            if xh == self._cls["simple_root"]:
                return 2 if n % 2 else 1
            if xh != 0:
                raise RuntimeError("point misses every exceptional branch")
            m = self._cls["m"]
            if n % 2:
                if vp(y, p) < m:
                    raise RuntimeError("far-leg point with shallow y")
                sel = frac_mod(y / p ** m, p)
                return (1, 3)[self._root_index(sel, "deciding")]
            if vp(x, p) < m:
                raise RuntimeError("far-leg point with shallow x")
            sel = frac_mod(x / p ** m, p)
            return (2, 3)[self._root_index(sel, "deciding")]
        raise RuntimeError("unclassifiable point %s for type %s" % (P, self.kodaira))

    def _root_index(self, value, key):
        roots = self._cls[key]
        if value not in roots:
            raise RuntimeError(
                "point reduces to a component not defined over F_%d "
                "(value %d, roots %s)" % (self.p, value, roots))
        return roots.index(value)

    def _cycle_position(self, Pn):
        """Position in the I_n cycle of a point reducing to the node.

        The quadratic part of the equation factors p-adically into the two
        branch coordinates s, t with s*t of valuation n; v(s) is the position.
        For non-split reduction only the antipodal component is rational, and
        at p = 2 the position is reported as min(j, n-j), which pins every
        pairing (they are invariant under the cycle flip).
        """
        p, n = self.p, self.kodaira.n
        E = self.norm_curve
        x, y = Pn.x, Pn.y
        fy = 2 * y + E.a1 * x + E.a3
        m = vp(fy, p)
        if m == INF or 2 * m > n:
            assert n % 2 == 0, "deep node contact with odd cycle length"
            return n // 2
        if not self._cls["split"]:
            assert n % 2 == 0 and m == n // 2, \
                "non-split point off the antipodal component"
            return n // 2
        if p == 2:
            return m
        prec = n + 6
        M = p ** prec
        B2, B4x2, B6 = (frac_mod(E.b2, M), frac_mod(2 * E.b4, M),
                        frac_mod(E.b6, M))
        g4 = [B6, B4x2, B2, 4]
        seed = frac_mod(-E.b2 * Fraction(1, 4), p)
        e1 = newton_root(g4, seed, p, prec)
        # divide out the unit root: g4 = (x - e1)(4x^2 + q1 x + q0) mod M
        q1 = (B2 + 4 * e1) % M
        q0 = (B4x2 + e1 * q1) % M
        assert (B6 + e1 * q0) % M == 0
        inv4 = pow(4, -1, M)
        c1, c0 = q1 * inv4 % M, q0 * inv4 % M
        D = (c1 * c1 - 4 * c0) % M
        assert D and vp(D, p) == n, "node depth disagrees with v(disc)"
        u0 = (frac_mod(x, M) - e1) % M
        s0 = sqrt_mod(u0 % p, p)
        assert s0, "split node with non-square branch unit"
        w = hensel_sqrt(u0, p, min(s0, p - s0), prec)
        eta = y + (E.a1 * x + E.a3) * Fraction(1, 2)
        sigma = frac_mod(eta, M) * pow(w, -1, M) % M
        half_shift = (frac_mod(x, M) + c1 * pow(2, -1, M)) % M
        s_res = (sigma - half_shift) % M
        t_res = (sigma + half_shift) % M
        assert s_res and t_res, "branch coordinate vanished: raise precision"
        vs, vt = vp(s_res, p), vp(t_res, p)
        assert vs + vt == n and min(vs, vt) == m
        return vs % n

    def to_json_dict(self):
        from .curves import format_rational
        return {
            "p": self.p,
            "kodaira": str(self.kodaira),
            "v_delta": self.v_delta_min,
            "component_group": self.component_group.describe(),
            "tamagawa": self.tamagawa,
            "n_components": self.n_components_mult_one,
            "minimal_model": [format_rational(a)
                              for a in self.minimal_curve.coefficients()],
        }


def _run_tate(E_in, p):
    E, to_cur = _integral_model(E_in, p)
    rescaled = not to_cur.is_identity()

    for _ in range(80):
        n = vp(E.disc, p)

        if n == 0:
            return _finish(E_in, p, E, to_cur, rescaled, KodairaType("I", 0),
                           0, ComponentGroup("trivial", 1), 1, {})

        x0, y0 = _singular_point(E, p)
        if x0 or y0:
            E, to_cur = _shift(E, to_cur, p, r=x0, t=y0)
        assert all(vp(a, p) >= 1 for a in (E.a3, E.a4, E.a6))

        if vp(E.b2, p) == 0:
            # multiplicative: type I_n, n = v(disc)
            if p == 2:
                split = vp(E.a2, 2) >= 1
            else:
                split = sqrt_mod(frac_mod(E.b2, p), p) is not None
            if split:
                c = n
            else:
                c = 2 if n % 2 == 0 else 1
            return _finish(E_in, p, E, to_cur, rescaled, KodairaType("I", n),
                           n, ComponentGroup("cyclic", n), c,
                           {"split": split})

        # additive from here on
        E, to_cur = _normalize_entry(E, to_cur, p)

        if vp(E.a6, p) < 2:
            return _finish(E_in, p, E, to_cur, rescaled, KodairaType("II"),
                           n, ComponentGroup("trivial", 1), 1, {})

        if vp(E.b8, p) < 3:
            return _finish(E_in, p, E, to_cur, rescaled, KodairaType("III"),
                           n, ComponentGroup("cyclic", 2), 2, {})

        if vp(E.b6, p) < 3:
            rts, squarefree = _quad_roots(frac_mod(-E.a6 / p ** 2, p),
                                          frac_mod(E.a3 / p, p), p)
            assert squarefree
            return _finish(E_in, p, E, to_cur, rescaled, KodairaType("IV"),
                           n, ComponentGroup("cyclic", 3),
                           3 if len(rts) == 2 else 1, {"deciding": rts})

        E, to_cur = _normalize_deep(E, to_cur, p)

        # cubic controlling the four-leg configurations
        pc = [frac_mod(E.a6 / p ** 3, p), frac_mod(E.a4 / p ** 2, p),
              frac_mod(E.a2 / p, p), 1]
        dpc = [pc[1], 2 * pc[2] % p, 3 % p]
        multiple = None
        for r in roots_mod(pc, p):
            if (dpc[0] + dpc[1] * r + dpc[2] * r * r) % p == 0:
                multiple = r
                break

        if multiple is None:
            rts = roots_mod(pc, p)
            return _finish(E_in, p, E, to_cur, rescaled, KodairaType("I*", 0),
                           n, ComponentGroup("klein", 4), 1 + len(rts),
                           {"legs": rts})

        if multiple:
            E, to_cur = _shift(E, to_cur, p, r=multiple * p)
        assert vp(E.a4, p) >= 3 and vp(E.a6, p) >= 4

        if vp(E.a2, p) == 1:
            # I_n* chain: alternate quadratics in y and x until one splits
            simple_root = frac_mod(-E.a2 / p, p)
            m = 2
            for _ in range(80):
                c1, c0 = frac_mod(E.a3 / p ** m, p), frac_mod(-E.a6 / p ** (2 * m), p)
                rts, squarefree = _quad_roots(c0, c1, p)
                if squarefree:
                    nn = 2 * m - 3
                    return _finish(
                        E_in, p, E, to_cur, rescaled, KodairaType("I*", nn),
                        n, ComponentGroup("cyclic", 4), 4 if len(rts) == 2 else 2,
                        {"simple_root": simple_root, "m": m, "deciding": rts})
                y1 = _double_root(1, c1, c0, p)
                if y1:
                    E, to_cur = _shift(E, to_cur, p, t=y1 * p ** m)
                assert vp(E.a3, p) >= m + 1 and vp(E.a6, p) >= 2 * m + 1

                a, b, c = (frac_mod(E.a2 / p, p), frac_mod(E.a4 / p ** (m + 1), p),
                           frac_mod(E.a6 / p ** (2 * m + 1), p))
                rts, squarefree = _quad_roots_general(a, b, c, p)
                if squarefree:
                    nn = 2 * m - 2
                    return _finish(
                        E_in, p, E, to_cur, rescaled, KodairaType("I*", nn),
                        n, ComponentGroup("klein", 4), 4 if len(rts) == 2 else 2,
                        {"simple_root": simple_root, "m": m, "deciding": rts})
                x1 = _double_root(a, b, c, p)
                if x1:
                    E, to_cur = _shift(E, to_cur, p, r=x1 * p ** m)
                assert vp(E.a4, p) >= m + 2 and vp(E.a6, p) >= 2 * m + 2
                m += 1
            raise RuntimeError("I_n* chain did not terminate")

        assert vp(E.a2, p) >= 2

        rts, squarefree = _quad_roots(frac_mod(-E.a6 / p ** 4, p),
                                      frac_mod(E.a3 / p ** 2, p), p)
        if squarefree:
            return _finish(E_in, p, E, to_cur, rescaled, KodairaType("IV*"),
                           n, ComponentGroup("cyclic", 3),
                           3 if len(rts) == 2 else 1, {"deciding": rts})
        y1 = _double_root(1, frac_mod(E.a3 / p ** 2, p),
                          frac_mod(-E.a6 / p ** 4, p), p)
        if y1:
            E, to_cur = _shift(E, to_cur, p, t=y1 * p ** 2)
        assert vp(E.a3, p) >= 3 and vp(E.a6, p) >= 5

        if vp(E.a4, p) < 4:
            return _finish(E_in, p, E, to_cur, rescaled, KodairaType("III*"),
                           n, ComponentGroup("cyclic", 2), 2, {})

        if vp(E.a6, p) < 6:
            return _finish(E_in, p, E, to_cur, rescaled, KodairaType("II*"),
                           n, ComponentGroup("trivial", 1), 1, {})

        # non-minimal: rescale and start over
        m = ModelMap(u=p)
        E = m.apply_to_curve(E)
        to_cur = to_cur.compose(m)
        rescaled = True

    raise RuntimeError("Tate loop did not terminate at p = %d" % p)


def _double_root(a, b, c, p):
    """Double root mod p of a y^2 + b y + c (a a unit); the caller has already
    established the quadratic is not squarefree."""
    if p == 2:
        assert b % 2 == 0
        return c * a % 2  # Frobenius square root of c/a
    return (-b) * pow(2 * a, -1, p) % p


def _quad_roots_general(a, b, c, p):
    assert a % p
    if p == 2:
        squarefree = b % 2 == 1
    else:
        squarefree = (b * b - 4 * a * c) % p != 0
    rts = roots_mod([c % p, b % p, a % p], p)
    return rts, squarefree


def _finish(E_in, p, E, to_cur, rescaled, kodaira, vdelta, group, tamagawa,
            cls):
    if rescaled:
        minimal, to_min = E, to_cur
    else:
        minimal, to_min = E_in, ModelMap()
    data = LocalModelData(E_in, p, minimal, to_min, E, to_cur, kodaira,
                          vdelta, group, tamagawa, cls)
    assert vp(E.disc, p) == vdelta
    return data


@lru_cache(maxsize=None)
def _local_data_cached(curve, p):
    return _run_tate(curve, p)


def local_data(curve, p):
    """Run Tate's algorithm; results are cached per (curve, prime)."""
    check_prime(p)
    return _local_data_cached(curve, p)


def minimal_model_at(curve, p):
    """A p-minimal, p-integral model together with the map onto it.

    Already-minimal integral input is returned unchanged.
    """
    data = local_data(curve, p)
    return data.minimal_curve, data.to_minimal


def is_in_E0(curve, P, p):
    """True iff P reduces to a nonsingular point of the minimal model at p."""
    return local_data(curve, p).in_E0(P)


def component_index(curve, P, p):
    """Label of the Neron-model component hit by the section of P."""
    return local_data(curve, p).component_of(P)


def reduce_to_normal_form(E):
    """Integral shift to the standard a1, a3 in {0,1}, a2 in {-1,0,1} form."""
    if not all(a.denominator == 1 for a in E.coefficients()):
        raise InputError("normal form needs an integral model")
    s = -(E.a1.numerator // 2)
    a2 = E.a2 - s * E.a1 - s * s
    r = -((a2.numerator + 1) // 3)
    a3 = E.a3 + r * E.a1
    t = -(a3.numerator // 2)
    m = ModelMap(1, r, s, t)
    return m.apply_to_curve(E), m
