"""Igusa theta-constants as q-expansions, and six-fold theta products.

Convention: for a characteristic m = (a, b, c, d) in {0,1}^4,

    theta_m(Z) = sum_{x in Z^2} e( v Z v^t + v . (c, d)/2 ),   v = x + (a, b)/2,

with e(t) = exp(2 pi i t).  A factor theta_m(dZ) (dilation d in {1, 2})
contributes the scale-4 index (d u^2, 2 d u w, d w^2) with u = 2x1 + a,
w = 2x2 + b, and coefficient i^(u c + w d).  All coefficients therefore lie
in Z[i], stored inside Z[zeta_8].

Products are expanded with a dense numpy convolution over the box
0 <= N, M <= P, |R| <= P, which is much faster than a sparse dictionary
convolution at the precisions needed for Hecke operators.  The sparse
:func:`siegelhecke.qseries.series_mul` remains the reference oracle.
"""

import itertools
import math
from typing import NamedTuple

import numpy as np

from .cyclotomic import CycElt, ONE8, gaussian
from .qseries import FourierSeries, QIndex


class ThetaError(ValueError):
    """Raised on invalid characteristics, dilations or factor files."""


class Characteristic(NamedTuple):
    a: int
    b: int
    c: int
    d: int


class ThetaFactorSpec(NamedTuple):
    characteristic: Characteristic
    dilation: int


def make_factor(ch, dilation=1):
    """Validated ThetaFactorSpec from a 4-tuple and a dilation."""
    ch = tuple(ch)
    if len(ch) != 4 or any(v not in (0, 1) for v in ch):
        raise ThetaError("characteristic entries must be 0 or 1, got %r" % (ch,))
    if dilation not in (1, 2):
        raise ThetaError("dilation must be 1 or 2, got %r" % (dilation,))
    return ThetaFactorSpec(Characteristic(*ch), int(dilation))


def _as_factor(f):
    if isinstance(f, ThetaFactorSpec):
        return make_factor(f.characteristic, f.dilation)
    ch, dil = f
    return make_factor(ch, dil)


def is_odd_characteristic(m):
    a, b, c, d = m
    for v in m:
        if v not in (0, 1):
            raise ThetaError("characteristic entries must be 0 or 1, got %r" % (tuple(m),))
    return (a * c + b * d) % 2 == 1


EVEN_CHARACTERISTICS = tuple(Characteristic(*m) for m in itertools.product((0, 1), repeat=4)
                             if not is_odd_characteristic(m))
ODD_CHARACTERISTICS = tuple(Characteristic(*m) for m in itertools.product((0, 1), repeat=4)
                            if is_odd_characteristic(m))


# ---------------------------------------------------------------------------
# single theta-constants
# ---------------------------------------------------------------------------

_I_POWERS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def theta_terms(spec, prec):
    """Gaussian-integer terms {(N, R, M): (re, im)} of one factor up to trace prec."""
    (a, b, c, d), dil = _as_factor(spec)
    if prec < 0:
        return {}
    bound = math.isqrt(prec // dil) + 2
    out = {}
    for x1 in range(-bound, bound + 1):
        u = 2 * x1 + a
        if dil * u * u > prec:
            continue
        for x2 in range(-bound, bound + 1):
            w = 2 * x2 + b
            N, R, M = dil * u * u, 2 * dil * u * w, dil * w * w
            if N + M > prec:
                continue
            re, im = _I_POWERS[(u * c + w * d) % 4]
            acc = out.setdefault((N, R, M), [0, 0])
            acc[0] += re
            acc[1] += im
    return {k: tuple(v) for k, v in out.items() if v != [0, 0]}


def theta_constant(spec, prec):
    """The theta-constant theta_m(dZ) as a scale-4 FourierSeries."""
    spec = _as_factor(spec)
    if prec < 0:
        raise ThetaError("precision must be nonnegative")
    terms = {QIndex(*k): gaussian(*v) for k, v in theta_terms(spec, prec).items()}
    return FourierSeries(4, prec, 8, terms, recipe=ThetaCombination.single([spec]), check=False)


# ---------------------------------------------------------------------------
# recipes: linear combinations of theta products
# ---------------------------------------------------------------------------

class ThetaCombination:
    """A formal sum  sum_j c_j * prod_i theta_{m_ij}(d_ij Z)  with c_j in Z[zeta_8].

    Each entry is (constant, factors) with factors a tuple of ThetaFactorSpec.
    The Hecke module transforms these symbolically under Sp4(Z).
    """

    __slots__ = ("entries",)

    def __init__(self, entries=()):
        self.entries = tuple((c, tuple(_as_factor(f) for f in fs)) for c, fs in entries)

    @classmethod
    def single(cls, factors, constant=ONE8):
        return cls([(constant, factors)])

    def __add__(self, other):
        return ThetaCombination(self.entries + other.entries)

    def __mul__(self, other):
        return ThetaCombination([(c1 * c2, f1 + f2) for c1, f1 in self.entries
                                 for c2, f2 in other.entries])

    def scaled(self, k):
        return ThetaCombination([(c * k, fs) for c, fs in self.entries])

    def __repr__(self):
        return "ThetaCombination(%r)" % (self.entries,)


# ---------------------------------------------------------------------------
# dense product engine
# ---------------------------------------------------------------------------

def _l1(terms):
    return sum(abs(re) + abs(im) for re, im in terms.values())


def dense_product(factors, prec):
    """Expand a theta product; returns numpy arrays (N, R, M, re, im) of nonzero terms.

    Coefficients are Gaussian integers re + i*im.  int64 is used when the
    product of the factors' l1-norms guarantees no overflow, object otherwise.
    """
    factors = [_as_factor(f) for f in factors]
    P = int(prec)
    if P < 0:
        raise ThetaError("precision must be nonnegative")
    all_terms = [theta_terms(f, P) for f in factors]
    bound = 1
    for t in all_terms:
        bound *= max(_l1(t), 1)
    dtype = np.int64 if bound < 2 ** 62 else object
    re = np.zeros((P + 1, 2 * P + 1, P + 1), dtype)
    im = np.zeros_like(re)
    re[0, P, 0] = 1
    for terms in all_terms:
        nre = np.zeros_like(re)
        nim = np.zeros_like(im)
        for (N, R, M), (cr, ci) in terms.items():
            src_n, dst_n = slice(0, P + 1 - N), slice(N, P + 1)
            src_m, dst_m = slice(0, P + 1 - M), slice(M, P + 1)
            if R >= 0:
                src_r, dst_r = slice(0, 2 * P + 1 - R), slice(R, 2 * P + 1)
            else:
                src_r, dst_r = slice(-R, 2 * P + 1), slice(0, 2 * P + 1 + R)
            a = re[src_n, src_r, src_m]
            b = im[src_n, src_r, src_m]
            if cr:
                nre[dst_n, dst_r, dst_m] += cr * a
                nim[dst_n, dst_r, dst_m] += cr * b
            if ci:
                nre[dst_n, dst_r, dst_m] -= ci * b
                nim[dst_n, dst_r, dst_m] += ci * a
        re, im = nre, nim
    n, r, m = np.nonzero((re != 0) | (im != 0))
    keep = n + m <= P
    n, r, m = n[keep], r[keep], m[keep]
    return (n.astype(np.int64), (r - P).astype(np.int64), m.astype(np.int64),
            re[n, r, m], im[n, r, m])


def _series_from_dense(arrays, prec, recipe):
    N, R, M, re, im = arrays
    terms = {QIndex(int(a), int(b), int(c)): gaussian(int(x), int(y))
             for a, b, c, x, y in zip(N, R, M, re, im)}
    return FourierSeries(4, prec, 8, terms, recipe=recipe, check=False)


def product_form(factors, prec):
    """Truncated product of theta-constants (list order), as a scale-4 FourierSeries."""
    factors = [_as_factor(f) for f in factors]
    if not factors:
        raise ThetaError("factor list must be nonempty")
    return _series_from_dense(dense_product(factors, prec), prec, ThetaCombination.single(factors))


def combination_series(combo, prec):
    """Expand a ThetaCombination to a FourierSeries."""
    total = FourierSeries(4, prec, 8, {}, recipe=ThetaCombination(), check=False)
    for c, fs in combo.entries:
        s = product_form(fs, prec)
        s = FourierSeries(4, prec, 8, {k: v * c for k, v in s.terms.items()},
                          recipe=ThetaCombination.single(fs, c), check=False)
        total = total + s
    return total


# ---------------------------------------------------------------------------
# the forms g1 and g4
# ---------------------------------------------------------------------------

def _fl(*items):
    return tuple(make_factor(ch, d) for ch, d in items)


G4_FACTORS = _fl(((0, 0, 0, 0), 2), ((1, 0, 0, 0), 2), ((0, 1, 0, 0), 2),
                 ((0, 0, 1, 0), 1), ((0, 0, 0, 1), 1), ((0, 0, 1, 1), 1))

# The g1 product; theta_(0,0,1,0)(Z) deliberately occurs twice.
G1_FACTORS = _fl(((0, 0, 0, 0), 2), ((1, 0, 0, 0), 1), ((0, 1, 0, 0), 1),
                       ((0, 0, 1, 0), 1), ((0, 0, 1, 0), 1), ((0, 0, 0, 1), 1))

G1_PRESETS = {"standard": G1_FACTORS}


def g1_factors(preset="standard"):
    try:
        return G1_PRESETS[preset]
    except KeyError:
        raise ThetaError("unknown g1 preset %r (choose from %s)"
                         % (preset, ", ".join(sorted(G1_PRESETS)))) from None


def build_g1(prec, preset="standard"):
    return product_form(g1_factors(preset), prec)


def build_g4(prec):
    return product_form(G4_FACTORS, prec)


def minimal_trace(factors):
    """Smallest trace N + M occurring in the product (sum of factor minima)."""
    total = 0
    for f in factors:
        f = _as_factor(f)
        a, b = f.characteristic.a, f.characteristic.b
        total += f.dilation * (a + b)
    return total


# ---------------------------------------------------------------------------
# factor files
# ---------------------------------------------------------------------------

def parse_factor_text(text):
    """Parse lines 'd:a,b,c,d' ('#' starts a comment) into ThetaFactorSpecs."""
    factors = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            d, rest = line.split(":")
            ch = tuple(int(v) for v in rest.split(","))
            factors.append(make_factor(ch, int(d)))
        except (ValueError, ThetaError) as exc:
            raise ThetaError("line %d: cannot parse %r (%s)" % (lineno, raw, exc)) from None
    if not factors:
        raise ThetaError("factor file contains no factors")
    return factors


def read_factor_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_factor_text(fh.read())


# ---------------------------------------------------------------------------
# floating-point evaluation (used to identify transformation constants)
# ---------------------------------------------------------------------------

def theta_numeric(spec, Z, bound=40):
    """Evaluate theta_m(dZ) at a point Z of the Siegel upper half space."""
    (a, b, c, d), dil = _as_factor(spec)
    x = np.arange(-bound, bound + 1)
    v1 = x[:, None] + a / 2
    v2 = x[None, :] + b / 2
    q = Z[0, 0] * v1 ** 2 + 2 * Z[0, 1] * v1 * v2 + Z[1, 1] * v2 ** 2
    return np.exp(2j * np.pi * (dil * q + (v1 * c + v2 * d) / 2)).sum()
