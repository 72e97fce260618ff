"""Integer and p-adic arithmetic helpers.

Everything here is exact: valuations of rationals, primality testing and
factoring at desk scale, root finding for low-degree polynomials over F_p,
and Hensel/Newton lifts used by the reduction-type machinery.
"""

import math
import random
from fractions import Fraction

INF = math.inf

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class InputError(ValueError):
    """Malformed or out-of-domain input (bad prime, point not on curve, ...)."""


def is_prime(n):
    """Miller-Rabin, deterministic for n < 3.3e24 with the fixed base set."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise InputError("p = %r is not a prime" % (p,))
    return p


def vp(q, p):
    """p-adic valuation of a Fraction or int; vp(0) = +inf."""
    if isinstance(q, int):
        num, den = q, 1
    else:
        q = Fraction(q)
        num, den = q.numerator, q.denominator
    if num == 0:
        return INF
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _pollard_brent(n):
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor(n):
    """Prime factorization of |n| as a sorted dict {p: multiplicity}."""
    n = abs(n)
    if n <= 1:
        return {}
    out = {}
    for q in _SMALL_PRIMES:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.extend([d, m // d])
    return dict(sorted(out.items()))


def prime_divisors(n):
    return list(factor(n))


def frac_mod(q, modulus):
    """Residue of a rational with denominator prime to the modulus."""
    q = Fraction(q)
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists low degree first
# ---------------------------------------------------------------------------

def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmulmod(f, g, h, p):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _pdivmod(out, h, p)[1]


def _pdivmod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    quo = [0] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and _ptrim(f):
        shift = len(f) - 1 - dg
        c = f[-1] * inv % p
        quo[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        _ptrim(f)
    return quo, f


def _pgcd(f, g, p):
    f, g = list(f), list(g)
    while _ptrim(g):
        f, g = g, _pdivmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _ppow_xp(h, p):
    """x^p mod h over F_p by square and multiply."""
    result = [1]
    base = [0, 1]
    e = p
    while e:
        if e & 1:
            result = _pmulmod(result, base, h, p)
        base = _pmulmod(base, base, h, p)
        e >>= 1
    return result


def roots_mod(coeffs, p):
    """Sorted roots in F_p of the polynomial with the given coefficients
    (constant term first).  Multiple roots are reported once."""
    f = _ptrim([c % p for c in coeffs])
    if not f:
        raise ValueError("zero polynomial")
    if p <= 47:
        return sorted(x for x in range(p) if _peval(f, x, p) == 0)
    # keep only the linear-factor part: gcd(f, x^p - x)
    g = _ppow_xp(f, p) + [0, 0]
    g[1] = (g[1] - 1) % p
    g = _pgcd(f, _ptrim(g), p)
    return sorted(_split_linear(g, p))


def _peval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _split_linear(g, p):
    """Roots of a squarefree product of linear factors over F_p (p odd)."""
    deg = len(g) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [(-g[0]) * pow(g[1], -1, p) % p]
    rng = random.Random(p ^ 0x5eed)
    while True:
        a = rng.randrange(p)
        # gcd(g, (x+a)^((p-1)/2) - 1) splits the root set
        base = [a, 1]
        e = (p - 1) // 2
        acc = [1]
        b = base
        while e:
            if e & 1:
                acc = _pmulmod(acc, b, g, p)
            b = _pmulmod(b, b, g, p)
            e >>= 1
        acc = list(acc)
        if acc:
            acc[0] = (acc[0] - 1) % p
        h = _pgcd(g, _ptrim(acc), p)
        if 0 < len(h) - 1 < deg:
            rest = _pdivmod(g, h, p)[0]
            return _split_linear(h, p) + _split_linear(rest, p)


def sqrt_mod(a, p):
    """A square root of a mod p, or None if a is not a QR (p odd prime)."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    r = roots_mod([-a, 0, 1], p)
    return r[0] if r else None


def hensel_sqrt(a, p, seed, prec):
    """Lift seed (a sqrt of a mod p, p odd) to a sqrt of a mod p^prec."""
    pk = p
    x = seed % p
    while pk < p ** prec:
        pk = min(pk * pk, p ** prec)
        # x <- (x + a/x)/2 mod pk
        x = (x + a % pk * pow(x, -1, pk)) * pow(2, -1, pk) % pk
    assert (x * x - a) % p ** prec == 0
    return x


def newton_root(coeffs, x0, p, prec):
    """Lift a simple root x0 mod p of an integer polynomial to mod p^prec."""
    pk = p
    x = x0 % p
    target = p ** prec
    while pk < target:
        pk = min(pk * pk, target)
        fx = _eval_int(coeffs, x) % pk
        dfx = _eval_int(_deriv_int(coeffs), x) % pk
        x = (x - fx * pow(dfx, -1, pk)) % pk
    assert _eval_int(coeffs, x) % target == 0
    return x


def _eval_int(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deriv_int(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def log_abs(q):
    """Natural log of |q| for a Fraction/int of arbitrary size (q != 0)."""
    if isinstance(q, int):
        num, den = q, 1
    else:
        num, den = q.numerator, q.denominator
    return _log_int(abs(num)) - _log_int(den)


def _log_int(n):
    assert n > 0
    bits = n.bit_length()
    if bits <= 960:
        return math.log(n)
    shift = bits - 960
    return math.log(n >> shift) + shift * math.log(2)
