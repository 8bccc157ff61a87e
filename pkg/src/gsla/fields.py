"""Exact scalar arithmetic: rationals, cyclotomic fields Q(zeta_n), prime fields F_p.

Element representations are raw Python values so hot loops stay cheap:
rationals are `fractions.Fraction`, cyclotomic elements are tuples of
phi(n) Fractions (coordinates in the basis 1, z, ..., z^(phi(n)-1) reduced
modulo the n-th cyclotomic polynomial), prime-field elements are ints in
[0, p).  All operations go through a Field object which owns the constants
and the reduction tables.  No floating point anywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import FieldMismatch, InputError, NoSuchRoot

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ----------------------------------------------------------------------
# dense polynomial helpers over Fraction (coefficient lists, low degree first)
# ----------------------------------------------------------------------

def poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return poly_trim(out)


def poly_divmod(a, b):
    """Quotient and remainder in Q[t]; b must be nonzero."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = [_ZERO] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        c = a[-1] / lb
        k = len(a) - 1 - db
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
        poly_trim(a)
    return poly_trim(q), a


def poly_xgcd(a, b):
    """Extended gcd in Q[t]: returns (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [_ONE], []
    t0, t1 = [], [_ONE]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_trim([x - y for x, y in _zip_pad(s0, poly_mul(q, s1))])
        t0, t1 = t1, poly_trim([x - y for x, y in _zip_pad(t0, poly_mul(q, t1))])
    lead = r0[-1]
    inv = 1 / lead
    return [c * inv for c in r0], [c * inv for c in s0], [c * inv for c in t0]


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = a + [_ZERO] * (n - len(a))
    b = b + [_ZERO] * (n - len(b))
    return zip(a, b)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int):
    """Coefficients of the n-th cyclotomic polynomial, low degree first.

    Computed by dividing t^n - 1 by the product of Phi_d over proper
    divisors d of n; integer coefficients, monic, degree phi(n).
    """
    if n < 1:
        raise ValueError("n must be positive")
    pn = [-_ONE] + [_ZERO] * (n - 1) + [_ONE]
    den = [_ONE]
    for d in range(1, n):
        if n % d == 0:
            den = poly_mul(den, cyclotomic_polynomial(d))
    q, r = poly_divmod(pn, den)
    assert not r, "cyclotomic division must be exact"
    return tuple(q)


def euler_phi(n):
    out, m = 1, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out *= (p - 1) * p ** (k - 1)
        p += 1
    if m > 1:
        out *= m - 1
    return out


def factorize(n):
    """Prime factorization by trial division; fine at desk scale."""
    out = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def is_prime(n):
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def primitive_root_mod_p(p):
    """Smallest generator of F_p^*."""
    if p == 2:
        return 1
    qs = factorize(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ArithmeticError(f"no primitive root mod {p}")  # unreachable for prime p


# ----------------------------------------------------------------------
# field objects
# ----------------------------------------------------------------------

class Field:
    """Common interface: constants, arithmetic on raw scalars, literals."""

    kind = None

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def characteristic(self):
        return 0

    def is_zero(self, a):
        return a == self.zero()

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, k):
        raise NotImplementedError

    def from_fraction(self, q):
        raise NotImplementedError

    def root_of_unity(self, m):
        """Element of multiplicative order exactly m, or NoSuchRoot."""
        raise NotImplementedError

    def pow(self, a, k):
        if k < 0:
            return self.pow(self.inv(a), -k)
        out = self.one()
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def sum(self, items):
        out = self.zero()
        for x in items:
            out = self.add(out, x)
        return out

    def parse(self, text):
        raise NotImplementedError

    def format(self, a):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        raise NotImplementedError

    def __repr__(self):
        return self.describe()

    def describe(self):
        raise NotImplementedError


class Rationals(Field):
    kind = "rationals"

    def zero(self):
        return _ZERO

    def one(self):
        return _ONE

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def from_int(self, k):
        return Fraction(k)

    def from_fraction(self, q):
        return Fraction(q)

    def root_of_unity(self, m):
        if m == 1:
            return _ONE
        if m == 2:
            return -_ONE
        raise NoSuchRoot(f"Q has no primitive root of unity of order {m}")

    def parse(self, text):
        coeffs = _parse_poly_literal(text)
        if any(c != 0 for c in coeffs[1:]):
            raise InputError("$", f"rational scalar cannot mention z: {text!r}")
        return coeffs[0]

    def format(self, a):
        return str(a)

    def _key(self):
        return ("rationals",)

    def describe(self):
        return "Q"


class Cyclotomic(Field):
    """Q(zeta_n) with elements stored reduced modulo Phi_n."""

    kind = "cyclotomic"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("cyclotomic order must be >= 1")
        self.n = n
        self.phi = cyclotomic_polynomial(n)
        self.degree = len(self.phi) - 1
        # reduction rows: t^k mod Phi_n for k = degree .. 2*degree-2
        self._red = []
        cur = [-c for c in self.phi[:-1]]  # t^degree
        self._red.append(tuple(cur))
        for _ in range(self.degree - 2):
            cur = [_ZERO] + cur
            if len(cur) > self.degree:
                top = cur.pop()
                row = self._red[0]
                cur = [c + top * r for c, r in zip(cur, row)]
            self._red.append(tuple(cur))

    def zero(self):
        return (_ZERO,) * self.degree

    def one(self):
        if self.degree == 1:
            # Phi_1 = t - 1 or Phi_2 = t + 1: the basis "1" is still index 0
            pass
        return (_ONE,) + (_ZERO,) * (self.degree - 1)

    def zeta(self):
        """The distinguished generator z (class of t)."""
        if self.degree == 1:
            # t reduces to a rational: t = -phi[0]
            return (-self.phi[0],)
        return (_ZERO, _ONE) + (_ZERO,) * (self.degree - 2)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        conv = [_ZERO] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj != 0:
                    conv[i + j] += ai * bj
        out = conv[:d]
        for k in range(d, 2 * d - 1):
            ck = conv[k]
            if ck != 0:
                row = self._red[k - d]
                for i, r in enumerate(row):
                    out[i] += ck * r
        return tuple(out)

    def inv(self, a):
        if all(x == 0 for x in a):
            raise ZeroDivisionError("inverse of zero")
        g, u, _ = poly_xgcd(poly_trim(list(a)), list(self.phi))
        assert len(g) == 1, "Phi_n is irreducible, gcd must be constant"
        u = [c / g[0] for c in u]
        u += [_ZERO] * (self.degree - len(u))
        # u may have degree >= self.degree only if a did; inputs are reduced
        return tuple(u[: self.degree])

    def from_int(self, k):
        return (Fraction(k),) + (_ZERO,) * (self.degree - 1)

    def from_fraction(self, q):
        return (Fraction(q),) + (_ZERO,) * (self.degree - 1)

    def root_of_unity(self, m):
        if self.n % m != 0:
            raise NoSuchRoot(f"Q(zeta_{self.n}) lacks an order-{m} root under the m | n rule")
        return self.pow(self.zeta(), self.n // m)

    def parse(self, text):
        coeffs = _parse_poly_literal(text)
        # reduce any power of z via repeated multiplication by zeta
        out = self.zero()
        zpow = self.one()
        for k, c in enumerate(coeffs):
            if c != 0:
                out = self.add(out, self.scale(zpow, c))
            zpow = self.mul(zpow, self.zeta())
        return out

    def scale(self, a, q):
        return tuple(x * q for x in a)

    def format(self, a):
        terms = []
        for k, c in enumerate(a):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                z = "z" if k == 1 else f"z^{k}"
                if c == 1:
                    terms.append(z)
                elif c == -1:
                    terms.append(f"-{z}")
                else:
                    terms.append(f"{c}*{z}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def _key(self):
        return ("cyclotomic", self.n)

    def describe(self):
        return f"Q(zeta_{self.n})"


class PrimeField(Field):
    kind = "prime"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def characteristic(self):
        return self.p

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def from_int(self, k):
        return k % self.p

    def from_fraction(self, q):
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator divisible by {self.p}")
        return (q.numerator * pow(q.denominator, -1, self.p)) % self.p

    def root_of_unity(self, m):
        if (self.p - 1) % m != 0:
            raise NoSuchRoot(f"F_{self.p} has no element of order {m}")
        g = primitive_root_mod_p(self.p)
        return pow(g, (self.p - 1) // m, self.p)

    def parse(self, text):
        text = text.strip()
        if not re.fullmatch(r"-?\d+", text):
            raise InputError("$", f"prime-field scalar must be a decimal integer, got {text!r}")
        return int(text) % self.p

    def format(self, a):
        return str(a % self.p)

    def _key(self):
        return ("prime", self.p)

    def describe(self):
        return f"F_{self.p}"


_TERM_RE = re.compile(
    r"""(?P<sign>[+-])?\s*
        (?:
            (?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*(?P<zc>z(?:\^(?P<ec>\d+))?))?
          | (?P<zb>z(?:\^(?P<eb>\d+))?)
        )\s*""",
    re.VERBOSE,
)


def _parse_poly_literal(text):
    """Parse 'a0 + a1*z + a2*z^2 ...' into a coefficient list of Fractions."""
    s = text.strip()
    if not s:
        raise InputError("$", "empty scalar literal")
    coeffs = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise InputError("$", f"cannot parse scalar literal {text!r} at offset {pos}")
        sign = m.group("sign")
        if sign is None and not first:
            raise InputError("$", f"missing +/- between terms in {text!r}")
        sgn = -1 if sign == "-" else 1
        if m.group("coef") is not None:
            c = Fraction(m.group("coef"))
            if m.group("zc") is not None:
                e = int(m.group("ec") or 1)
            else:
                e = 0
        else:
            c = _ONE
            e = int(m.group("eb") or 1)
        coeffs[e] = coeffs.get(e, _ZERO) + sgn * c
        pos = m.end()
        first = False
    deg = max(coeffs) if coeffs else 0
    return [coeffs.get(k, _ZERO) for k in range(deg + 1)]


def field_from_spec(kind, n=None, p=None):
    if kind == "rationals":
        return Rationals()
    if kind == "cyclotomic":
        return Cyclotomic(int(n))
    if kind == "prime":
        return PrimeField(int(p))
    raise InputError("$.field", f"unknown field kind {kind!r}")


def multiplicative_order(field, a, cap=None):
    """Order of a in the unit group; raises if not a root of unity within cap."""
    cap = cap or 10_000
    x = a
    for k in range(1, cap + 1):
        if x == field.one():
            return k
        x = field.mul(x, a)
    raise ArithmeticError("element is not a root of unity of small order")


def same_field(a: Field, b: Field):
    if a != b:
        raise FieldMismatch(f"{a.describe()} vs {b.describe()}")


def rational_reconstruct(residue: int, modulus: int, bound: int):
    """a/b with |a| <= bound, 0 < b <= bound, gcd(b, m) = 1, a = b*residue (mod m).

    Half-extended Euclid.  The answer is unique whenever 2*bound^2 < modulus;
    callers wanting that guarantee must pick their modulus accordingly.
    Returns a Fraction, or None when no admissible pair exists.
    """
    if not 0 <= residue < modulus:
        raise ValueError("residue out of range")
    if bound < 1:
        raise ValueError("bound must be positive")
    r0, r1 = modulus, residue
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    a, b = r1, t1
    if b == 0:
        return None
    if b < 0:
        a, b = -a, -b
    if abs(a) > bound or b > bound:
        return None
    if gcd(b, modulus) != 1:
        return None
    if (a - b * residue) % modulus != 0:
        return None
    return Fraction(a, b)
