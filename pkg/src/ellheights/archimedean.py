"""Archimedean local heights via the classical q-series.

A curve over Q is uniformized as E(C) = C*/q^Z.  The period lattice comes
from Carlson symmetric integrals of the 2-division cubic and is reduced so
that |q| <= exp(-pi*sqrt(3)); the lattice is then certified by checking that
the series reproduces the three 2-torsion x-coordinates.  The elliptic
logarithm of a point is found by Newton iteration on the x-series in the
multiplicative coordinate U, with the y-coordinate selecting the branch.

With B2(T) = T^2 - T + 1/6 the height with respect to the origin divisor is

    lambda'(U) = -(1/2) B2(log|U|/log|q|) log|q| - log|1 - U|
                 - sum_{n>=1} log|(1 - q^n U)(1 - q^n / U)|

and the normalization used everywhere else in this package is
lambda = 2*lambda' + (1/6) log|disc|.
"""

import math

import mpmath
from mpmath import mp, mpf, mpc

from .arith import InputError, log_abs

_GUARD = 24


class ArchParams:
    """Uniformization data for one point: tau, z, q = e^{2 pi i tau},
    u = e^{2 pi i z}, with |q| < |u| <= 1 (z = u = None for the origin)."""

    def __init__(self, tau, q, z, u, precision_bits):
        self.tau = tau
        self.q = q
        self.z = z
        self.u = u
        self.precision_bits = precision_bits


def _bernoulli2(t):
    return t * t - t + mpf(1) / 6


class CurveTorus:
    """Analytic model of a rational curve over C with series evaluators."""

    def __init__(self, E, precision_bits=64):
        self.E = E
        self.precision_bits = precision_bits
        self.prec = precision_bits + _GUARD
        with mp.workprec(self.prec):
            self._setup()

    # -- lattice ----------------------------------------------------------

    def _setup(self):
        E = self.E
        b2 = mpf(E.b2.numerator) / E.b2.denominator
        cubic = [mpf(1), b2 / 4,
                 mpf(E.b4.numerator) / E.b4.denominator / 2,
                 mpf(E.b6.numerator) / E.b6.denominator / 4]
        roots = mpmath.polyroots(cubic, maxsteps=200, extraprec=60)
        # base root: the real one (largest if all three are real)
        roots = sorted(roots, key=lambda r: (abs(mpmath.im(r)), -mpmath.re(r)))
        if abs(mpmath.im(roots[0])) > mpf(2) ** (-self.prec // 2):
            raise RuntimeError("no real 2-division value found")
        e1 = mpmath.re(roots[0])
        e2, e3 = roots[1], roots[2]
        self.roots = [e1, e2, e3]
        w1 = 2 * mpmath.elliprf(0, e1 - e2, e1 - e3)
        w2 = 2 * mpmath.elliprf(0, e2 - e1, e2 - e3)
        w3 = 2 * mpmath.elliprf(0, e3 - e1, e3 - e2)
        if abs(mpmath.im(w1)) > abs(w1) * mpf(2) ** (-self.prec // 2):
            raise RuntimeError("real period has an imaginary part")
        w1 = mpmath.re(w1)
        for second in self._second_period_candidates(w1, w2, w3):
            tau = second / w1
            if mpmath.im(tau) < 0:
                tau = -tau
            tau_r, w1_r = _reduce_tau(tau, w1)
            if mpmath.im(tau_r) < mpf(866) / 1000:
                continue
            if self._try_lattice(tau_r, w1_r):
                return
        raise RuntimeError("could not certify a period lattice for %r" % (E,))

    def _second_period_candidates(self, w1, w2, w3):
        base = [w2, w3, w2 + w3, w2 - w3,
                w2 + w1 / 2, w2 - w1 / 2, w3 + w1 / 2, w3 - w1 / 2]
        out = []
        for w in base:
            out.extend([w, mpmath.conj(w), -w, -mpmath.conj(w)])
        return out

    def _try_lattice(self, tau, omega1):
        q = mpmath.expjpi(2 * tau)
        if abs(q) > mpf(1) / 200:
            return False
        self.tau, self.omega1, self.q = tau, omega1, q
        self.N = self._series_length(abs(q))
        sq = mpmath.sqrt(q)
        half_xs = sorted([self.x_of_U(-1), self.x_of_U(sq), self.x_of_U(-sq)],
                         key=lambda v: (mpmath.re(v), mpmath.im(v)))
        want = sorted(self.roots, key=lambda v: (mpmath.re(v), mpmath.im(v)))
        tol = mpf(2) ** (-self.precision_bits // 2)
        scale = 1 + max(abs(v) for v in want)
        return all(abs(a - b) <= tol * scale for a, b in zip(half_xs, want))

    def _series_length(self, absq):
        bits = (self.prec + 16) * math.log(2)
        return max(16, int(bits / -math.log(absq)) + 8)

    # -- series -----------------------------------------------------------

    def _x_series(self, U):
        """1/12 + sum q^n U/(1-q^n U)^2 over n in Z, minus the constant part."""
        q = self.q
        s = U / (1 - U) ** 2
        qn = mpf(1)
        for _ in range(self.N):
            qn *= q
            s += (qn * U / (1 - qn * U) ** 2
                  + (qn / U) / (1 - qn / U) ** 2
                  - 2 * qn / (1 - qn) ** 2)
        return s + mpf(1) / 12

    def _y_series(self, U):
        q = self.q
        s = U * (1 + U) / (1 - U) ** 3
        qn = mpf(1)
        for _ in range(self.N):
            qn *= q
            s += (qn * U * (1 + qn * U) / (1 - qn * U) ** 3
                  - (qn / U) * (1 + qn / U) / (1 - qn / U) ** 3)
        return s

    def x_of_U(self, U):
        E = self.E
        b2 = mpf(E.b2.numerator) / E.b2.denominator
        return -4 * mpmath.pi ** 2 * self._x_series(U) / self.omega1 ** 2 - b2 / 12

    def two_eta_of_U(self, U):
        """2y + a1 x + a3 = weierstrass-prime of z."""
        return -8j * mpmath.pi ** 3 * self._y_series(U) / self.omega1 ** 3

    def normalize_U(self, U):
        """Bring U into the annulus |q| < |U| <= 1."""
        absq = abs(self.q)
        while abs(U) > 1:
            U = U * self.q
        while abs(U) <= absq:
            U = U / self.q
        return U

    def U_of_z(self, z):
        return self.normalize_U(mpmath.expjpi(2 * z))

    # -- elliptic logarithm ------------------------------------------------

    def U_of_point(self, P):
        """Multiplicative coordinate of an affine rational point."""
        E = self.E
        with mp.workprec(self.prec):
            x = mpf(P.x.numerator) / P.x.denominator
            eta2 = 2 * P.y + E.a1 * P.x + E.a3
            eta2 = mpf(eta2.numerator) / eta2.denominator
            target = -(x + mpf(E.b2.numerator) / E.b2.denominator / 12) \
                * self.omega1 ** 2 / (4 * mpmath.pi ** 2)
            U = self._newton_U(target)
            # the two solutions U, 1/U correspond to +-z; pick by y
            cand = self.normalize_U(1 / U)
            if abs(self.two_eta_of_U(cand) - eta2) < abs(self.two_eta_of_U(U) - eta2):
                U = cand
            err = abs(self.x_of_U(U) - x)
            if err > mpf(2) ** (-self.precision_bits // 2) * (1 + abs(x)):
                raise RuntimeError("elliptic log failed to certify x(P)")
            return U

    def _newton_U(self, target):
        q = self.q
        s1 = mpf(0)
        qn = mpf(1)
        for _ in range(self.N):
            qn *= q
            s1 += qn / (1 - qn) ** 2
        t0 = target - mpf(1) / 12 + 2 * s1
        seeds = []
        if abs(t0) > mpf(2) ** (-self.prec):
            disc = mpmath.sqrt(4 * t0 + 1)
            for sgn in (1, -1):
                U = (2 * t0 + 1 + sgn * disc) / (2 * t0)
                if abs(U) <= 1 + mpf(1) / 1000:
                    seeds.append(U)
        else:
            seeds.append(mpc(-1))
        seeds += [mpmath.expjpi(2 * mpf(k) / 7) for k in range(1, 7)]
        tol = mpf(2) ** (-(self.prec - 8))
        for seed in seeds:
            U = self.normalize_U(mpc(seed))
            ok = False
            for _ in range(120):
                f = self._x_series(U) - target
                if abs(f) < tol * (1 + abs(target)):
                    ok = True
                    break
                df = self._y_series(U) / U
                if df == 0:
                    break
                step = f / df
                if abs(step) > mpf(1) / 2 * abs(U):
                    step = step / abs(step) * abs(U) / 2
                U = self.normalize_U(U - step)
            if ok:
                return U
        raise RuntimeError("Newton iteration for the elliptic log stalled")

    # -- heights ------------------------------------------------------------

    def lambda_prime_U(self, U):
        """Height with respect to the origin divisor at the point with
        multiplicative coordinate U (normalized into the annulus)."""
        q = self.q
        with mp.workprec(self.prec):
            U = self.normalize_U(U)
            t = mpmath.log(abs(U)) / mpmath.log(abs(q))
            val = -_bernoulli2(t) * mpmath.log(abs(q)) / 2
            val -= mpmath.log(abs(1 - U))
            qn = mpf(1)
            for _ in range(self.N):
                qn *= q
                val -= mpmath.log(abs((1 - qn * U) * (1 - qn / U)))
            return val

    def lambda_prime_z(self, z):
        return self.lambda_prime_U(self.U_of_z(z))

    def x_of_z(self, z):
        return self.x_of_U(self.U_of_z(z))


_torus_cache = {}


def curve_torus(E, precision_bits=64):
    key = (E, precision_bits)
    if key not in _torus_cache:
        _torus_cache[key] = CurveTorus(E, precision_bits)
    return _torus_cache[key]


def period_lattice_and_log(E, P, precision_bits=64):
    """ArchParams for P: reduced tau, q, and the uniformizing z of P.

    For P = O the parameters carry z = 0 / u = 1, which is valid for
    internal use but rejected by the series height.
    """
    torus = curve_torus(E, precision_bits)
    if P.is_origin:
        return ArchParams(torus.tau, torus.q, mpf(0), mpf(1), precision_bits)
    E._require(P)
    with mp.workprec(torus.prec):
        U = torus.U_of_point(P)
        z = mpmath.log(U) / (2j * mpmath.pi)
        if mpmath.im(z) < 0:
            z += torus.tau
        return ArchParams(torus.tau, torus.q, z, U, precision_bits)


def lambda_prime(E, P, precision_bits=64):
    """Series height of a rational point with respect to the origin divisor."""
    if P.is_origin:
        raise InputError("lambda' is undefined at the origin")
    torus = curve_torus(E, precision_bits)
    with mp.workprec(torus.prec):
        return torus.lambda_prime_U(torus.U_of_point(P))


def local_height_arch_value(E, P, precision_bits=64):
    """The archimedean local height 2*lambda' + (1/6) log|disc| as an mpf."""
    lp = lambda_prime(E, P, precision_bits)
    with mp.workprec(precision_bits + _GUARD):
        return 2 * lp + _log_abs_mp(E.disc, precision_bits + _GUARD) / 6


def _log_abs_mp(q, prec):
    with mp.workprec(prec):
        return mpmath.log(mpf(abs(q.numerator))) - mpmath.log(mpf(q.denominator))


def green_pairing(E, P, Q, precision_bits=64):
    """Green pairing of (P)-(O) against (P+Q)-(Q): four series heights.

    Requires P, Q, P+Q, P-Q all different from O.
    """
    if P.is_origin or Q.is_origin:
        raise InputError("green_pairing needs affine P and Q")
    S, D = E.add(P, Q), E.subtract(P, Q)
    if S.is_origin or D.is_origin:
        raise InputError("green_pairing needs P +- Q != O")
    torus = curve_torus(E, precision_bits)
    with mp.workprec(torus.prec):
        lQ = torus.lambda_prime_U(torus.U_of_point(Q))
        lS = torus.lambda_prime_U(torus.U_of_point(S))
        lD = torus.lambda_prime_U(torus.U_of_point(D))
        return 2 * lQ - lS - lD


def _reduce_tau(tau, omega1):
    """Modular reduction of (tau, omega1) keeping the lattice fixed."""
    omega2 = tau * omega1
    for _ in range(400):
        n = int(mpmath.nint(mpmath.re(tau)))
        if n:
            tau -= n
            omega2 -= n * omega1
        if abs(tau) < 1 - mpf(1) / mpf(10) ** 12:
            omega1, omega2 = omega2, -omega1
            tau = omega2 / omega1
        else:
            break
    return tau, omega1
