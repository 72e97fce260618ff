"""Local heights at all places, their sum, and two independent oracles.

Non-archimedean values are exact rationals times log p, computed from the
intersection formula on the minimal regular model:

    lambda_p(P) = 2 (P . O)_p - (Phi_p((P)-(O)) . P - O)_p

with the vertical correction Phi from the fiber lattice.  On a model that is
not minimal at p the value picks up (1/6)(v_p(disc_min) - v_p(disc)) log p,
which keeps the sum over all places model-independent.

The canonical height is the sum of the local heights.  In this normalization
it is the Neron-Tate height with respect to the origin divisor doubled and
then decomposed; numerically it equals *half* of lim 4^-n h_x(2^n P), the
naive doubling limit of the degree-two function x.  The doubling-limit
oracle reports the full limit, so consumers bridge with a factor 1/2.
"""

import math
from fractions import Fraction

from .arith import INF, InputError, check_prime, factor, vp
from .archimedean import green_pairing, local_height_arch_value  # noqa: F401
from .curves import CurvePoint, format_rational, naive_x_height
from .fibers import phi_pairing, section_intersection, solve_phi
from .tate import local_data

HX_TO_CANONICAL = Fraction(1, 2)   # bridge: sum of local heights = h_x-limit / 2


class NonArchHeight:
    """Exact local height coefficient: the value is coefficient * log p."""

    __slots__ = ("coefficient", "p")

    def __init__(self, coefficient, p):
        self.coefficient = Fraction(coefficient)
        self.p = p

    def value(self):
        return float(self.coefficient) * math.log(self.p)

    def exact_str(self):
        if self.coefficient == 0:
            return "0"
        return "%s * log %d" % (format_rational(self.coefficient), self.p)

    def __repr__(self):
        return "NonArchHeight(%s)" % self.exact_str()

    def __eq__(self, other):
        if not isinstance(other, NonArchHeight):
            return NotImplemented
        return (self.coefficient, self.p) == (other.coefficient, other.p)


class ArchHeight:
    """Archimedean local height with precision metadata."""

    __slots__ = ("value_mp", "precision_bits")

    def __init__(self, value_mp, precision_bits):
        self.value_mp = value_mp
        self.precision_bits = precision_bits

    def value(self):
        return float(self.value_mp)

    def __repr__(self):
        return "ArchHeight(%.12g @ %d bits)" % (self.value(), self.precision_bits)


def _minimal_coefficient(data, P):
    """Exact coefficient of log p on the p-minimal model."""
    Pn = data.to_norm.apply_to_point(P)
    v = vp(Pn.x, data.p)
    term = Fraction(0) if v == INF else Fraction(max(-v, 0))
    label = data.component_of(P)
    if label:
        node = data.fiber_node(label)
        phi = solve_phi(data.fiber(), node)
        term -= phi_pairing(phi, node)
    return term


def _model_adjustment(E, data):
    """(1/6)(v_p(disc_min) - v_p(disc_E)): zero on a p-minimal model."""
    return Fraction(data.v_delta_min - vp(E.disc, data.p), 6)


def local_height_nonarch(E, P, p):
    """Local height of P at a finite prime, as an exact multiple of log p.

    The input model need not be minimal or integral at p; the value is
    normalized to the given model.
    """
    check_prime(p)
    if P.is_origin:
        raise InputError("local height is undefined at the origin")
    data = local_data(E, p)
    coeff = _minimal_coefficient(data, P) + _model_adjustment(E, data)
    return NonArchHeight(coeff, p)


def intlambda_height(E, P, Q, p):
    """The same local height through the auxiliary-point route:

        lambda_p(P) = -(D + Phi_p(D) . D_Q)_p + log|x(P) - x(Q)|_p

    with D = (P)-(O), D_Q = (P+Q)-(Q) and Q a rational point on the identity
    component, Q not in {O, P, -P}.  Used as an internal consistency path;
    the result is an exact rational times log p and must equal
    local_height_nonarch(E, P, p).
    """
    check_prime(p)
    if P.is_origin:
        raise InputError("local height is undefined at the origin")
    if Q.is_origin or Q == P or Q == E.negate(P):
        raise InputError("auxiliary point must avoid {O, P, -P}, got %r" % (Q,))
    data = local_data(E, p)
    if not data.in_E0(Q):
        raise InputError(
            "auxiliary point %r misses the identity component at %d" % (Q, p))
    Em, f = data.minimal_curve, data.to_minimal
    Pm, Qm = f.apply_to_point(P), f.apply_to_point(Q)
    Sm = Em.add(Pm, Qm)
    origin = CurvePoint.origin()
    dd = (section_intersection(Em, Pm, Sm, p).coefficient
          - section_intersection(Em, Pm, Qm, p).coefficient
          - section_intersection(Em, origin, Sm, p).coefficient
          + section_intersection(Em, origin, Qm, p).coefficient)
    label = data.component_of(E.add(P, Q))
    phi_term = Fraction(0)
    if label:
        node = data.fiber_node(label)
        phi_term = solve_phi(data.fiber(), node).coeffs[node]
    vdiff = vp(Pm.x - Qm.x, p)
    assert vdiff != INF
    coeff = -(dd + phi_term) - vdiff
    return NonArchHeight(coeff + _model_adjustment(E, data), p)


def local_height_arch(E, P, precision_bits=64):
    """Archimedean local height 2*lambda' + (1/6) log|disc|."""
    if P.is_origin:
        raise InputError("local height is undefined at the origin")
    return ArchHeight(local_height_arch_value(E, P, precision_bits),
                      precision_bits)


def relevant_primes(E, P=None):
    """Primes where a local height can be nonzero: divisors of the model
    discriminant (numerator and denominator) and of den(x(P))."""
    ps = set(factor(E.disc.numerator)) | set(factor(E.disc.denominator))
    if P is not None and not P.is_origin:
        ps |= set(factor(P.x.denominator))
    return sorted(ps)


def canonical_height(E, P, precision_bits=64):
    """Sum of the local heights over all places of Q.

    Vanishes on torsion; quadratic (h(2P) = 4h(P)); equals half the naive
    doubling limit of h_x.
    """
    E._require(P)
    if P.is_origin:
        return 0.0
    total = float(local_height_arch_value(E, P, precision_bits))
    for p in relevant_primes(E, P):
        total += local_height_nonarch(E, P, p).value()
    return total


def doubling_limit_oracle(E, P, n_steps=8):
    """Naive-height estimate 4^-n h_x(2^n P) of the doubling limit.

    Fully independent of the local-height machinery.  Returns the estimate
    and a torsion flag (estimate 0 when an iterate hits the origin).  The
    error decays like 4^-n; with coordinates doubling in size each step,
    n_steps stays small (default 8, absolute error well under 1e-3 at desk
    scale).
    """
    E._require(P)
    if n_steps < 1:
        raise InputError("n_steps must be positive")
    if P.is_origin:
        return 0.0, True
    Q = P
    for _ in range(n_steps):
        Q = E.add(Q, Q)
        if Q.is_origin:
            return 0.0, True
    return naive_x_height(Q) / 4.0 ** n_steps, False


def residual_oracle(E, P, p, precision_bits=64, n_steps=8):
    """Estimate of lambda_p(P) that never touches the fiber lattice:

        lambda_p = hhat - lambda_inf - sum_{q != p} lambda_q

    where hhat comes from the doubling-limit oracle (bridged by the factor
    1/2 between h_x and the local-height normalization) and every other
    finite term uses only the identity-component formula 2(P.O)_q.  Requires
    P to lie on the identity component at every bad prime other than p.
    """
    check_prime(p)
    if P.is_origin:
        raise InputError("residual oracle needs an affine point")
    est, _ = doubling_limit_oracle(E, P, n_steps)
    total = float(HX_TO_CANONICAL) * est
    total -= float(local_height_arch_value(E, P, precision_bits))
    for q in relevant_primes(E, P):
        if q == p:
            continue
        data = local_data(E, q)
        if not data.in_E0(P):
            raise InputError(
                "point misses the identity component at %d; the residual "
                "oracle cannot isolate lambda_%d" % (q, p))
        Pn = data.to_norm.apply_to_point(P)
        v = vp(Pn.x, q)
        coeff = Fraction(0) if v == INF else Fraction(max(-v, 0))
        coeff += _model_adjustment(E, data)
        total -= float(coeff) * math.log(q)
    return total


def adjust_for_model(E_other, p, lam_min):
    """Transport a local height from the p-minimal model to another model.

    lambda_other = lambda_min + (1/6)(v_p(disc_min) - v_p(disc_other)) log p;
    the sum of the adjusted local heights over all places does not depend on
    the model.
    """
    check_prime(p)
    data = local_data(E_other, p)
    return NonArchHeight(lam_min.coefficient + _model_adjustment(E_other, data), p)


def height_breakdown(E, P, precision_bits=64):
    """Per-place heights plus their sum, serialization-friendly."""
    E._require(P)
    places = []
    total = 0.0
    for p in relevant_primes(E, P):
        data = local_data(E, p)
        if P.is_origin:
            h = NonArchHeight(0, p)
            comp = 0
        else:
            h = local_height_nonarch(E, P, p)
            comp = data.component_of(P)
        places.append({
            "place": str(p),
            "exact": h.exact_str(),
            "value": h.value(),
            "kodaira": str(data.kodaira),
            "component": comp,
        })
        total += h.value()
    if P.is_origin:
        arch_val = 0.0
    else:
        arch_val = float(local_height_arch_value(E, P, precision_bits))
    places.append({
        "place": "inf",
        "exact": None,
        "value": arch_val,
        "kodaira": None,
        "component": 0,
    })
    total += arch_val
    return {"places": places, "canonical_height": total,
            "precision_bits": precision_bits}
