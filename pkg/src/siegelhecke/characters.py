"""Predicted Euler data: quadratic characters, the CM character mu of Q(i),
the Hecke character lambda of Q(zeta_8), the weight-4 level-8 newform rho_1,
Euler-factor assembly, eigenvalue prediction and Satake absolute values.

Euler factors are polynomials in X = p^(-s) with constant term 1,
prod_i (1 - alpha_i X).  The T(p)-eigenvalue predicted by a factor is
sum_i alpha_i, i.e. minus its linear coefficient, multiplied by p^nu where nu
is the calibrated normalization shift of the Hecke operator.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import isprime
from sympy.functions.combinatorial.numbers import kronecker_symbol, legendre_symbol

from .cyclotomic import ONE8, UNIT_1P2, ZETA8, CycElt, cyc_embed


class CharacterError(ValueError):
    """Raised on excluded primes, failed searches and inconsistent calibrations."""


def _check_odd_prime(p):
    p = int(p)
    if p == 2:
        raise CharacterError("p = 2 is excluded (Euler factors at 2 are not predicted)")
    if p < 3 or not isprime(p):
        raise CharacterError("expected an odd prime, got %r" % (p,))
    return p


# ---------------------------------------------------------------------------
# quadratic characters
# ---------------------------------------------------------------------------

_DISCRIMINANTS = {-1: -4, -2: -8, 2: 8}


@dataclass(frozen=True)
class QuadChar:
    """chi_{-1}, chi_{-2} or chi_2, identified by discriminant_tag in {-1, -2, 2}."""
    discriminant_tag: int

    def __post_init__(self):
        if self.discriminant_tag not in _DISCRIMINANTS:
            raise CharacterError("discriminant tag must be one of -1, -2, 2")

    @property
    def discriminant(self):
        return _DISCRIMINANTS[self.discriminant_tag]

    def __call__(self, n):
        return kronecker_value(self, n)


CHI_M1 = QuadChar(-1)
CHI_M2 = QuadChar(-2)
CHI_2 = QuadChar(2)


def kronecker_value(chi, n):
    """Kronecker symbol (D/n) for the character's discriminant D."""
    n = int(n)
    if n < 1:
        raise CharacterError("n must be positive")
    return int(kronecker_symbol(chi.discriminant, n))


# ---------------------------------------------------------------------------
# the newform rho_1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewformQexp:
    """q-expansion coefficients a_1 .. a_prec of a normalized newform."""
    coefficients: tuple
    weight: int = 4
    level_tag: int = 8

    @property
    def prec(self):
        return len(self.coefficients)

    def a(self, n):
        if not 1 <= n <= self.prec:
            raise CharacterError("a_%d outside the computed range 1..%d" % (n, self.prec))
        return self.coefficients[n - 1]


@lru_cache(maxsize=None)
def _eta_product(prec):
    # q * prod_{n>=1} (1 - q^{2n})^4 (1 - q^{4n})^4, coefficients of q^0 .. q^prec
    c = [0] * (prec + 1)
    c[1] = 1
    for step in itertools.chain(range(2, prec + 1, 2), range(4, prec + 1, 4)):
        for _ in range(4):
            for i in range(prec, step - 1, -1):
                c[i] -= c[i - step]
    return tuple(c[1:])


def rho1_qexp(prec):
    """Expansion of the eta product q prod (1-q^{2n})^4 (1-q^{4n})^4 to prec terms."""
    if prec < 10:
        raise CharacterError("rho1_qexp needs prec >= 10")
    return NewformQexp(_eta_product(int(prec)))


def rho1_ap(p, rho1=None):
    if rho1 is None:
        rho1 = rho1_qexp(max(10, p))
    return rho1.a(p)


# ---------------------------------------------------------------------------
# Q(i): primary primes, point counts and the CM character mu
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussPrimeData:
    """Primes of Z[i] above an odd p; generators are (a, b) for a + b i."""
    p: int
    split: bool
    generators: tuple


def _is_primary(a, b):
    # (a - 1 + b i) / (-2 + 2i) = ((a - 1) + b i)(-2 - 2i) / 8
    x, y = a - 1, b
    return (-2 * x + 2 * y) % 8 == 0 and (-2 * x - 2 * y) % 8 == 0


def gauss_prime_data(p):
    """Primary generators of the primes of Z[i] above the odd prime p."""
    p = _check_odd_prime(p)
    if p % 4 == 3:
        return GaussPrimeData(p, False, ((p, 0),))
    r = math.isqrt(p)
    a, b = next((a, b) for a in range(1, r + 1) for b in range(1, r + 1) if a * a + b * b == p)
    gens = []
    for x, y in ((a, b), (a, -b)):
        for ux, uy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            c, d = x * ux - y * uy, x * uy + y * ux
            if _is_primary(c, d):
                gens.append((c, d))
                break
    if len(gens) != 2:
        raise CharacterError("no primary associate found for p=%d (internal error)" % p)
    gens.sort(key=lambda g: (g[1] < 0, g))
    return GaussPrimeData(p, True, tuple(gens))


def _curve_rhs(x, p):
    return (x * x * x - x) % p


def ap_from_point_count(p):
    """a_p = p + 1 - #E(F_p) for E: y^2 = x^3 - x."""
    p = _check_odd_prime(p)
    affine = sum(1 + legendre_symbol(_curve_rhs(x, p), p) if _curve_rhs(x, p) else 1
                 for x in range(p))
    return p + 1 - (affine + 1)


@lru_cache(maxsize=None)
def point_count_fp2(p):
    """#E(F_{p^2}) for E: y^2 = x^3 - x, with F_{p^2} = F_p[t]/(t^2 - n).

    An element z of F_{p^2} is a square iff its norm to F_p is a square in
    F_p, which gives the quadratic character cheaply.
    """
    p = _check_odd_prime(p)
    n = next(v for v in range(2, p) if legendre_symbol(v, p) == -1)

    def mul(u, v):
        return ((u[0] * v[0] + n * u[1] * v[1]) % p, (u[0] * v[1] + u[1] * v[0]) % p)

    total = 1                                        # point at infinity
    for x0 in range(p):
        for x1 in range(p):
            x = (x0, x1)
            x3 = mul(mul(x, x), x)
            f = ((x3[0] - x0) % p, (x3[1] - x1) % p)
            if f == (0, 0):
                total += 1
            else:
                nm = (f[0] * f[0] - n * f[1] * f[1]) % p
                total += 1 + legendre_symbol(nm, p)
    return total


@lru_cache(maxsize=None)
def mu_sign():
    """One-bit calibration: mu((pi)) = sign * pi for primary pi, fixed at p = 5."""
    (a, b), (c, d) = gauss_prime_data(5).generators
    trace = a + c
    ap = ap_from_point_count(5)
    if trace == ap:
        return 1
    if trace == -ap:
        return -1
    raise CharacterError("primary generators at p=5 do not match the point count")


def mu_inert_value(p):
    """mu((p)) at an inert prime, read off from #E(F_{p^2}) = p^2 + 1 - 2 mu((p))."""
    p = _check_odd_prime(p)
    if p % 4 != 3:
        raise CharacterError("%d is not inert in Q(i)" % p)
    val = p * p + 1 - point_count_fp2(p)
    if val % 2:
        raise CharacterError("odd trace over F_{%d^2} (internal error)" % p)
    return val // 2


def mu_value(generator, power=1):
    """mu((pi))^power as a Gaussian integer (order-8 CycElt) for a split-prime generator."""
    a, b = generator
    g = CycElt(8, (a, 0, b, 0), reduced=True) * mu_sign()
    return g ** power


# ---------------------------------------------------------------------------
# Euler factors
# ---------------------------------------------------------------------------

def _simplify(c):
    if isinstance(c, CycElt) and c.is_rational():
        return c.coeffs[0]
    return c


def _poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] = out[i + j] + x * y
    return [_simplify(c) for c in out]


def _as_complex(c):
    if isinstance(c, CycElt):
        return cyc_embed(c, 1)
    return complex(c)


@dataclass(frozen=True)
class EulerFactor:
    """1 + c_1 X + ... + c_d X^d in X = p^(-s), with normalization shift nu."""
    p: int
    coefficients: tuple
    shift: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.coefficients or self.coefficients[0] != 1:
            raise CharacterError("Euler factor must have constant coefficient 1")

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __mul__(self, other):
        if self.p != other.p or self.shift != other.shift:
            raise CharacterError("cannot multiply Euler factors at different p or shift")
        return EulerFactor(self.p, tuple(_poly_mul(self.coefficients, other.coefficients)),
                           self.shift, {**self.meta, **other.meta})

    def linear_coefficient(self):
        return self.coefficients[1] if self.degree >= 1 else 0

    def satake_parameters(self):
        """The alpha_i (complex), scaled by p^shift."""
        poly = [_as_complex(c) for c in self.coefficients]
        roots = np.roots(poly) if self.degree else np.array([])
        return roots * float(self.p) ** self.shift

    def to_json_obj(self):
        def enc(c):
            return c.to_json() if isinstance(c, CycElt) else str(c)
        return {"p": self.p, "degree": self.degree, "shift": self.shift,
                "coefficients": [enc(c) for c in self.coefficients]}


def _linear_factor(p, alpha):
    return EulerFactor(p, (1, _simplify(-alpha)))


def mu_euler(p, power=1, twist=None):
    """Euler factor of L(s, mu^power) at p (optionally twisted by twist o Norm)."""
    p = _check_odd_prime(p)
    if power not in (1, 3):
        raise CharacterError("power must be 1 or 3")
    data = gauss_prime_data(p)
    if data.split:
        chi = 1 if twist is None else twist(p)
        f = EulerFactor(p, (1,))
        for g in data.generators:
            f = f * _linear_factor(p, mu_value(g, power) * chi)
        return EulerFactor(p, f.coefficients, meta={"mu_sign": mu_sign()})
    chi = 1 if twist is None else twist(p * p)
    val = mu_inert_value(p) ** power * chi
    return EulerFactor(p, (1, 0, -val), meta={"mu_inert": mu_inert_value(p)})


# ---------------------------------------------------------------------------
# Q(zeta_8): the character lambda
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _unit_residue_table():
    """(alpha mod 2) -> (j, e) with alpha = zeta_8^j (1+sqrt2)^e mod 2."""
    table = {}
    for j in range(4):
        for e in range(2):
            x = ZETA8 ** j * (UNIT_1P2 ** e)
            table[tuple(c % 2 for c in x.coeffs)] = (j, e)
    if len(table) != 8:
        raise CharacterError("unit residues mod 2 are not distinct (internal error)")
    return table


def residue_exponents(alpha):
    """(j, e) with alpha = zeta_8^j (1+sqrt2)^e modulo 2; alpha must be odd."""
    key = tuple(c % 2 for c in alpha.coeffs)
    try:
        return _unit_residue_table()[key]
    except KeyError:
        raise CharacterError("%r is not coprime to 2" % (alpha,)) from None


_CONJUGATE_PAIRS = ((1, 7), (3, 5))


@dataclass(frozen=True)
class LambdaSpec:
    """Finite part on the unit generators mod 2 and infinity type (a, b).

    Lambda_inf(x) = sigma_a(x)^3 sigma_b(x)^2 sigma_{8-b}(x).
    """
    eps_zeta8: int = 1
    eps_unit: int = -1
    infinity_type: tuple = (1, 5)

    def finite_part(self, alpha):
        j, e = residue_exponents(alpha)
        return self.eps_zeta8 ** j * self.eps_unit ** e

    def infinity_part(self, alpha):
        a, b = self.infinity_type
        return alpha.galois(a) ** 3 * alpha.galois(b) ** 2 * alpha.galois(8 - b)

    def conjugate(self):
        a, b = self.infinity_type
        return LambdaSpec(self.eps_zeta8, self.eps_unit, (8 - a, 8 - b))


def _pair_of(k):
    return next(i for i, pr in enumerate(_CONJUGATE_PAIRS) if k in pr)


def lambda_infinity_search(eps_zeta8=1, eps_unit=-1):
    """All infinity types (a, b) making lambda trivial on the global units."""
    out = []
    for a, b in itertools.product((1, 3, 5, 7), repeat=2):
        if _pair_of(a) == _pair_of(b):
            continue
        spec = LambdaSpec(eps_zeta8, eps_unit, (a, b))
        if all(spec.finite_part(u) * spec.infinity_part(u) == ONE8 for u in (ZETA8, UNIT_1P2)):
            out.append(spec)
    if not out:
        raise CharacterError("no infinity type is trivial on the units for finite part "
                             "eps(zeta_8)=%d, eps(1+sqrt2)=%d" % (eps_zeta8, eps_unit))
    return out


@lru_cache(maxsize=None)
def default_lambda_spec():
    return lambda_infinity_search()[0]


def lambda_value(spec, generator):
    """lambda((alpha)) = eps(alpha mod 2) * Lambda_inf(alpha), exactly."""
    if generator.order != 8:
        raise CharacterError("generator must be an order-8 element")
    if generator.norm() % 2 == 0:
        raise CharacterError("generator has even norm; lambda is undefined at 2")
    return spec.finite_part(generator) * spec.infinity_part(generator)


def residue_degree(p):
    """Order of p modulo 8."""
    return 1 if p % 8 == 1 else 2


def _associated(x, y):
    """True if (x) = (y), for elements of equal norm."""
    n = x.norm()
    if n != y.norm():
        return False
    cof = ONE8
    for k in (3, 5, 7):
        cof = cof * x.galois(k)
    return all(c % n == 0 for c in (y * cof).coeffs)


def _norm_grid(B):
    rng = np.arange(-B, B + 1)
    grid = np.array(list(itertools.product(rng, repeat=4)), dtype=np.int64)
    z = np.exp(2j * np.pi * np.arange(4) / 8)
    # N(x) = |sigma_1 x|^2 |sigma_3 x|^2, since sigma_7, sigma_5 are the conjugates
    total = np.abs(grid @ z) ** 2 * np.abs(grid @ z ** 3) ** 2
    order = np.argsort(np.abs(grid).sum(axis=1), kind="stable")
    return grid[order], np.rint(total[order]).astype(np.int64)


def zeta8_primes_above(p, max_box=6):
    """Pairwise non-associate generators of the primes of Z[zeta_8] above p."""
    p = _check_odd_prime(p)
    f = residue_degree(p)
    target = p ** f
    gen = None
    for B in range(2, max_box + 1):
        grid, norms = _norm_grid(B)
        hits = np.nonzero(norms == target)[0]
        for h in hits:
            cand = CycElt(8, [int(v) for v in grid[h]], reduced=True)
            if cand.norm() == target:
                gen = cand
                break
        if gen is not None:
            break
    if gen is None:
        raise CharacterError("no element of norm %d with coefficients in [-%d, %d]; "
                             "retry with a larger max_box" % (target, max_box, max_box))
    primes = []
    for k in (1, 3, 5, 7):
        c = gen.galois(k)
        if not any(_associated(c, q) for q in primes):
            primes.append(c)
    if len(primes) != 4 // f:
        raise CharacterError("found %d primes above %d, expected %d" % (len(primes), p, 4 // f))
    return primes


# ---------------------------------------------------------------------------
# calibration, prediction, Satake parameters
# ---------------------------------------------------------------------------

FORMS = ("g1", "g4", "F5", "F6")
SHIFT_GRID = tuple(range(-4, 5))
SHIFT_PAIRS = ((0, 1), (1, 2), (2, 3))


@dataclass(frozen=True)
class Calibration:
    """Operator normalization nu and abelian shifts (s1, s2) of the g4 factor."""
    nu: int = 0
    shifts: tuple = (1, 2)
    calibrated: bool = False

    def to_json_obj(self):
        return {"nu": self.nu, "shifts": list(self.shifts), "calibrated": self.calibrated}


DEFAULT_CALIBRATION = Calibration()


def euler_factor(form, p, calibration=DEFAULT_CALIBRATION, lambda_spec=None, rho1=None):
    """The conjectured degree-4 Euler factor of form at the odd prime p."""
    p = _check_odd_prime(p)
    nu = calibration.nu
    if form == "g4":
        chi = kronecker_value(CHI_M2, p)
        s1, s2 = calibration.shifts
        ap = rho1_ap(p, rho1)
        f = (_linear_factor(p, chi * p ** s1) * _linear_factor(p, chi * p ** s2)
             * EulerFactor(p, (1, -ap, p ** 3)))
    elif form == "g1":
        spec = lambda_spec or default_lambda_spec()
        deg = residue_degree(p)
        f = EulerFactor(p, (1,))
        for g in zeta8_primes_above(p):
            val = lambda_value(spec, g)
            f = f * EulerFactor(p, (1,) + (0,) * (deg - 1) + (_simplify(-val),))
    elif form == "F5":
        f = mu_euler(p, 1) * mu_euler(p, 3)
    elif form == "F6":
        f = mu_euler(p, 1, twist=CHI_M2) * mu_euler(p, 3, twist=CHI_M2)
    else:
        raise CharacterError("unknown form %r (choose from %s)" % (form, ", ".join(FORMS)))
    return EulerFactor(p, f.coefficients, nu, f.meta)


def _scaled(value, p, nu):
    v = Fraction(value) * Fraction(p) ** nu
    return v.numerator if v.denominator == 1 else v


def predict_eigenvalue(form, p, shift=0, shifts=(1, 2), lambda_spec=None, rho1=None):
    """Predicted T(p)-eigenvalue: sum of the Satake parameters, times p^shift."""
    ef = euler_factor(form, p, Calibration(shift, tuple(shifts)), lambda_spec, rho1)
    c1 = ef.linear_coefficient()
    if isinstance(c1, CycElt):
        raise CharacterError("linear coefficient of %s at %d is not rational: %r" % (form, p, c1))
    return _scaled(-c1, p, shift)


def calibrate_shift(measured, rho1=None):
    """Fit the unique (nu, (s1, s2)) reproducing every measured g4 eigenvalue."""
    rows = [(int(p), Fraction(ev)) for form, p, ev in measured if form == "g4"]
    if len({p for p, _ in rows}) < 2:
        raise CharacterError("calibration needs g4 eigenvalues at two distinct primes")
    table, solutions = [], []
    for nu in SHIFT_GRID:
        for sh in SHIFT_PAIRS:
            res = [(p, ev, predict_eigenvalue("g4", p, nu, sh, rho1=rho1)) for p, ev in rows]
            table.append((nu, sh, res))
            if all(ev == pred for _, ev, pred in res):
                solutions.append((nu, sh))
    if len(solutions) != 1:
        lines = ["nu=%d shifts=%s: %s" % (nu, sh, ", ".join(
            "p=%d measured=%s predicted=%s" % (p, ev, pr) for p, ev, pr in res))
            for nu, sh, res in table]
        raise CharacterError("calibration found %d solutions; residual table:\n%s"
                             % (len(solutions), "\n".join(lines)))
    nu, sh = solutions[0]
    return Calibration(nu, sh, True)


def satake_abs(form, p, calibration=DEFAULT_CALIBRATION, rho1=None):
    """Sorted absolute values of the four Satake parameters of the conjectured factor."""
    ef = euler_factor(form, p, calibration, rho1=rho1)
    return sorted(float(abs(a)) for a in ef.satake_parameters())


__all__ = [
    "CharacterError", "QuadChar", "CHI_M1", "CHI_M2", "CHI_2", "kronecker_value",
    "NewformQexp", "rho1_qexp", "rho1_ap", "GaussPrimeData", "gauss_prime_data",
    "ap_from_point_count", "point_count_fp2", "mu_sign", "mu_inert_value", "mu_value",
    "EulerFactor", "mu_euler", "LambdaSpec", "lambda_infinity_search", "default_lambda_spec",
    "lambda_value", "residue_exponents", "residue_degree", "zeta8_primes_above",
    "Calibration", "DEFAULT_CALIBRATION", "FORMS", "euler_factor", "predict_eigenvalue",
    "calibrate_shift", "satake_abs",
]
