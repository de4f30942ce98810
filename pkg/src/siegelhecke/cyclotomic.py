"""Exact arithmetic in the ring of integers of cyclotomic fields.

An element of Z[zeta_N] is stored as its coefficient vector in the power
basis 1, zeta_N, ..., zeta_N^(phi(N)-1), reduced modulo the N-th cyclotomic
polynomial.  Because the reduction is canonical, two elements are equal
exactly when their coefficient vectors are equal.

Coefficients are Python integers (arbitrary precision).  Orders used in
this package are 8 (theta coefficients) and 8p (intermediate Hecke sums).
"""

import cmath
import math
from functools import lru_cache

import sympy


class CyclotomicError(ValueError):
    """Raised on order mismatches and failed subfield projections."""


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N):
    """Coefficients (constant term first) of the N-th cyclotomic polynomial."""
    if N < 1:
        raise CyclotomicError("order must be positive, got %r" % (N,))
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(N, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def euler_phi(N):
    return len(cyclotomic_polynomial(N)) - 1


def _reduce(poly, N):
    """Reduce an integer coefficient list modulo Phi_N (monic), in place copy."""
    phi = cyclotomic_polynomial(N)
    deg = len(phi) - 1
    c = list(poly)
    for top in range(len(c) - 1, deg - 1, -1):
        lead = c[top]
        if lead:
            shift = top - deg
            for j in range(deg):
                if phi[j]:
                    c[shift + j] -= lead * phi[j]
            c[top] = 0
    c = c[:deg]
    c.extend([0] * (deg - len(c)))
    return tuple(c)


class CycElt:
    """An immutable element of Z[zeta_N] in canonical power-basis form."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order, coeffs, reduced=False):
        if order < 1:
            raise CyclotomicError("order must be positive")
        coeffs = tuple(int(c) for c in coeffs)
        if not reduced or len(coeffs) != euler_phi(order):
            coeffs = _reduce(coeffs, order)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycElt is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, N):
        return cls(N, (0,) * euler_phi(N), reduced=True)

    @classmethod
    def from_int(cls, N, n):
        c = [0] * euler_phi(N)
        c[0] = int(n)
        return cls(N, c, reduced=True)

    # -- predicates ----------------------------------------------------
    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycElt.from_int(self.order, other)
        if not isinstance(other, CycElt):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.order, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, int):
            return CycElt.from_int(self.order, other)
        if not isinstance(other, CycElt):
            return NotImplemented
        if other.order != self.order:
            raise CyclotomicError(
                "order mismatch: %d vs %d (embed explicitly)" % (self.order, other.order))
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElt(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)], reduced=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElt(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)], reduced=True)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycElt(self.order, [-a for a in self.coeffs], reduced=True)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycElt(self.order, [a * other for a in self.coeffs], reduced=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycElt(self.order, prod)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise CyclotomicError("negative powers are not supported in the ring")
        result = CycElt.from_int(self.order, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, n):
        """Divide by a nonzero integer, requiring exact divisibility."""
        n = int(n)
        if any(c % n for c in self.coeffs):
            raise CyclotomicError("%r is not divisible by %d" % (self, n))
        return CycElt(self.order, [c // n for c in self.coeffs], reduced=True)

    def galois(self, k):
        """Apply the automorphism zeta_N -> zeta_N^k (k coprime to N)."""
        if math.gcd(k, self.order) != 1:
            raise CyclotomicError("k=%d is not coprime to %d" % (k, self.order))
        N = self.order
        out = [0] * N
        for j, c in enumerate(self.coeffs):
            if c:
                out[(j * k) % N] += c
        return CycElt(N, out)

    def norm(self):
        """Absolute norm N_{Q(zeta_N)/Q}, an integer."""
        prod = CycElt.from_int(self.order, 1)
        for k in range(1, self.order):
            if math.gcd(k, self.order) == 1:
                prod = prod * self.galois(k)
        if not prod.is_rational():
            raise CyclotomicError("norm is not rational (internal error)")
        return prod.coeffs[0]

    def __repr__(self):
        return "CycElt(%d, %r)" % (self.order, list(self.coeffs))

    def to_json(self):
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["order"]), [int(c) for c in obj["coeffs"]])


def cyc_make_root(N, k):
    """Return zeta_N^k in canonical form."""
    k %= N
    c = [0] * (k + 1)
    c[k] = 1
    return CycElt(N, c)


def cyc_arith(a, b, op):
    """Ring operation op in {'add', 'sub', 'mul'} on two elements of equal order."""
    if a.order != b.order:
        raise CyclotomicError("order mismatch: %d vs %d" % (a.order, b.order))
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise CyclotomicError("unknown operation %r" % (op,))


def cyc_embed(a, k=1):
    """Complex value of a under zeta_N -> exp(2 pi i k / N)."""
    if math.gcd(k, a.order) != 1:
        raise CyclotomicError("embedding index %d not coprime to %d" % (k, a.order))
    z = cmath.exp(2j * math.pi * k / a.order)
    val = 0j
    for c in reversed(a.coeffs):
        val = val * z + c
    return val


def cyc_lift_order(a, M):
    """Express a in order M, where a.order divides M (zeta_N = zeta_M^(M/N))."""
    N = a.order
    if M % N:
        raise CyclotomicError("order %d does not divide %d" % (N, M))
    m = M // N
    c = [0] * (m * (len(a.coeffs) - 1) + 1)
    for j, v in enumerate(a.coeffs):
        c[j * m] = v
    return CycElt(M, c)


@lru_cache(maxsize=None)
def _projection_data(M, N):
    """Pivot rows, integer inverse numerators and common denominator for M -> N."""
    basis = [cyc_lift_order(cyc_make_root(N, j), M).coeffs for j in range(euler_phi(N))]
    mat = sympy.Matrix(basis).T          # phi(M) x phi(N)
    _, pivots = mat.T.rref()
    inv = mat.extract(list(pivots), list(range(mat.cols))).inv()
    den = int(sympy.ilcm(*[sympy.fraction(v)[1] for v in inv]))
    num = tuple(tuple(int(v * den) for v in inv.row(i)) for i in range(inv.rows))
    return tuple(pivots), num, den


def cyc_project_order(a, N):
    """Inverse of cyc_lift_order; fails if a is not in Q(zeta_N)."""
    M = a.order
    if M % N:
        raise CyclotomicError("order %d does not divide %d" % (N, M))
    pivots, num, den = _projection_data(M, N)
    rhs = [a.coeffs[i] for i in pivots]
    sol = []
    for row in num:
        s = sum(x * y for x, y in zip(row, rhs))
        if s % den:
            raise CyclotomicError("residual off-field content: %r is not in Q(zeta_%d)" % (a, N))
        sol.append(s // den)
    b = CycElt(N, sol, reduced=True)
    if cyc_lift_order(b, M) != a:
        raise CyclotomicError("residual off-field content: %r is not in Q(zeta_%d)" % (a, N))
    return b


ZETA8 = cyc_make_root(8, 1)
ONE8 = CycElt.from_int(8, 1)
I8 = cyc_make_root(8, 2)
SQRT2 = ZETA8 + cyc_make_root(8, 7)          # zeta + zeta^-1
UNIT_1P2 = ONE8 + SQRT2                       # 1 + sqrt(2)


def gaussian(re, im):
    """The Gaussian integer re + im*i as an order-8 element."""
    return CycElt(8, (re, 0, im, 0), reduced=True)
