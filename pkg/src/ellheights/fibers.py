"""Combinatorial special fibers and the vertical-divisor solver.

Each reduction type has a fixed configuration of fiber components: a list of
multiplicities and an integer Gram matrix of pairwise intersections.  The
solver produces the vertical Q-divisor that makes a degree-zero horizontal
divisor orthogonal to every fiber component; its coefficients are exact
rationals and all pairings are returned as rational multiples of log p.
"""

from fractions import Fraction

from .arith import InputError, vp


class SpecialFiberGraph:
    """Components with multiplicities and their intersection Gram matrix.

    Component 0 is always the identity component.  Self-intersections sit on
    the diagonal; the matrix annihilates the multiplicity vector.
    """

    def __init__(self, label, mults, edges, names=None):
        self.label = label
        self.mults = list(mults)
        k = len(self.mults)
        self.names = list(names) if names else ["C%d" % i for i in range(k)]
        self.identity = 0
        gram = [[0] * k for _ in range(k)]
        for i, j, m in edges:
            gram[i][j] += m
            gram[j][i] += m
        # self-intersections forced by M.m = 0
        for i in range(k):
            off = sum(gram[i][j] * self.mults[j] for j in range(k) if j != i)
            assert off % self.mults[i] == 0
            gram[i][i] = -off // self.mults[i]
        self.gram = gram

    @property
    def n_components(self):
        return len(self.mults)

    def multiplicity_one_ids(self):
        return [i for i, m in enumerate(self.mults) if m == 1]

    def check_kernel(self):
        """M.m must vanish row by row."""
        k = self.n_components
        return all(
            sum(self.gram[i][j] * self.mults[j] for j in range(k)) == 0
            for i in range(k))

    def reduced_determinant(self):
        """|det| of the Gram matrix with the identity row/column deleted."""
        idx = [i for i in range(self.n_components) if i != self.identity]
        m = [[Fraction(self.gram[i][j]) for j in idx] for i in idx]
        return abs(_det(m))

    def to_json_dict(self):
        edges = []
        for i in range(self.n_components):
            for j in range(i + 1, self.n_components):
                if self.gram[i][j]:
                    edges.append({"i": i, "j": j, "mult": self.gram[i][j]})
        return {
            "type": self.label,
            "components": [{"id": i, "name": self.names[i], "mult": m}
                           for i, m in enumerate(self.mults)],
            "edges": edges,
            "identity": self.identity,
        }


def _det(m):
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def fiber_for_type(kodaira):
    """Special fiber configuration for a Kodaira type.

    I_n (n >= 2) is a cycle of n lines; III is two lines meeting twice; IV is
    three concurrent-free lines pairwise meeting once; I0* is four legs on a
    double center; I_n* is a chain of doubled components with two legs at
    each end; IV*, III*, II* are the extended E6, E7, E8 configurations.
    """
    kind, n = kodaira.kind, kodaira.n
    if (kind == "I" and n <= 1) or kind == "II":
        return SpecialFiberGraph(str(kodaira), [1], [])
    if kind == "II*":
        # extended E8; the single multiplicity-one component is the identity
        mults = [1, 2, 3, 4, 5, 6, 4, 2, 3]
        edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1),
                 (5, 6, 1), (6, 7, 1), (5, 8, 1)]
        return SpecialFiberGraph("II*", mults, edges)
    if kind == "I":
        if n == 2:
            return SpecialFiberGraph("I2", [1, 1], [(0, 1, 2)])
        mults = [1] * n
        edges = [(i, (i + 1) % n, 1) for i in range(n)]
        return SpecialFiberGraph("I%d" % n, mults, edges)
    if kind == "III":
        return SpecialFiberGraph("III", [1, 1], [(0, 1, 2)])
    if kind == "IV":
        return SpecialFiberGraph("IV", [1, 1, 1],
                                 [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
    if kind == "I*":
        if n == 0:
            names = ["leg0", "leg1", "leg2", "leg3", "Z"]
            edges = [(i, 4, 1) for i in range(4)]
            return SpecialFiberGraph("I0*", [1, 1, 1, 1, 2], edges, names)
        # legs 0 (identity) and 1 on Z_0, legs 2 and 3 on Z_n
        names = ["leg0", "near", "far1", "far2"] + \
            ["Z%d" % i for i in range(n + 1)]
        mults = [1, 1, 1, 1] + [2] * (n + 1)
        z0, zn = 4, 4 + n
        edges = [(0, z0, 1), (1, z0, 1), (2, zn, 1), (3, zn, 1)]
        edges += [(4 + i, 5 + i, 1) for i in range(n)]
        return SpecialFiberGraph("I%d*" % n, mults, edges, names)
    if kind == "IV*":
        # extended E6: center of multiplicity 3, three arms 1-2-center
        names = ["end0", "end1", "end2", "mid0", "mid1", "mid2", "center"]
        mults = [1, 1, 1, 2, 2, 2, 3]
        edges = [(0, 3, 1), (1, 4, 1), (2, 5, 1),
                 (3, 6, 1), (4, 6, 1), (5, 6, 1)]
        return SpecialFiberGraph("IV*", mults, edges, names)
    if kind == "III*":
        # extended E7: chain 1-2-3-4-3-2-1 with a 2 hanging off the center
        mults = [1, 2, 3, 4, 3, 2, 1, 2]
        edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1),
                 (5, 6, 1), (3, 7, 1)]
        return SpecialFiberGraph("III*", mults, edges)
    raise InputError("unknown Kodaira type %r" % (kodaira,))


class VerticalQDivisor:
    """Rational coefficients per fiber component, gauge phi[identity] = 0."""

    def __init__(self, fiber, coeffs):
        self.fiber = fiber
        self.coeffs = [Fraction(c) for c in coeffs]
        assert self.coeffs[fiber.identity] == 0

    def to_json_dict(self):
        from .curves import format_rational
        return {self.fiber.names[i]: format_rational(c)
                for i, c in enumerate(self.coeffs)}


def solve_phi(fiber, c_P):
    """Vertical Q-divisor Phi with (D + Phi . F_j) = 0 for every component j,
    where D = (P) - (O) meets component c_P and the identity once each.

    The Gram matrix is singular with kernel spanned by the multiplicities, so
    the system is solved in the gauge phi[identity] = 0; the right-hand side
    has zero pairing against the kernel, which makes the reduced system
    uniquely solvable.
    """
    k = fiber.n_components
    if not 0 <= c_P < k:
        raise InputError("no component %r in fiber %s" % (c_P, fiber.label))
    if fiber.mults[c_P] != 1:
        raise InputError("component %d has multiplicity %d > 1"
                         % (c_P, fiber.mults[c_P]))
    b = [Fraction(0)] * k
    b[c_P] += 1
    b[fiber.identity] -= 1
    idx = [i for i in range(k) if i != fiber.identity]
    rows = [[Fraction(fiber.gram[i][j]) for j in idx] + [-b[i]] for i in idx]
    sol = _solve(rows)
    if sol is None:
        raise RuntimeError("singular reduced Gram system for %s" % fiber.label)
    coeffs = [Fraction(0)] * k
    for pos, i in enumerate(idx):
        coeffs[i] = sol[pos]
    phi = VerticalQDivisor(fiber, coeffs)
    # exact verification of the defining property
    for j in range(k):
        pair = b[j] + sum(coeffs[i] * fiber.gram[i][j] for i in range(k))
        assert pair == 0
    return phi


def _solve(aug):
    """Gaussian elimination over Q on an augmented matrix; None if singular."""
    n = len(aug)
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [a * inv for a in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [aug[r][n] for r in range(n)]


def phi_pairing(phi, c_P):
    """(Phi . (P) - (O)) = phi[c_P] - phi[identity]; invariant under adding a
    constant to every coefficient since (P) - (O) has degree zero."""
    return phi.coeffs[c_P] - phi.coeffs[phi.fiber.identity]


class IntersectionValue:
    """An exact rational r meaning r * log p."""

    __slots__ = ("coefficient", "p")

    def __init__(self, coefficient, p):
        self.coefficient = Fraction(coefficient)
        self.p = p

    def __repr__(self):
        from .curves import format_rational
        return "%s * log %d" % (format_rational(self.coefficient), self.p)


def section_intersection(E, P, Q, p):
    """(P . Q)_p as a rational multiple of log p, for distinct sections.

    Translation by -P moves the pair to (O, Q - P); the sections of O and R
    meet exactly to the depth that R sinks into the formal group, which is
    read off the valuation of x(R): (O . R)_p = (1/2) max(-v_p(x(R)), 0).
    """
    if P == Q:
        raise InputError("self-intersection of a section is not defined here")
    E._require(P)
    E._require(Q)
    R = E.subtract(Q, P)
    v = vp(R.x, p)  # +inf when x(R) = 0, giving intersection 0
    coeff = Fraction(max(-v, 0), 2)
    return IntersectionValue(coeff, p)
