"""Sparse truncated Fourier expansions of degree-two Siegel modular objects.

A Fourier monomial exp(2 pi i tr(T Z)) with T = [[n, r/2], [r/2, m]] is
indexed by the scaled triple (N, R, M) = (s n, s r, s m), where s is the
series scale (4 for finished forms, 4p transiently inside Hecke sums).
Precision is a trace bound: only indices with N + M <= prec are stored.
"""

import json
from typing import NamedTuple

from .cyclotomic import CycElt, CyclotomicError


class SeriesError(ValueError):
    """Raised on incompatible series and out-of-range or off-lattice indices."""


class QIndex(NamedTuple):
    N: int
    R: int
    M: int

    def is_psd(self):
        return self.N >= 0 and self.M >= 0 and 4 * self.N * self.M >= self.R * self.R

    def trace(self):
        return self.N + self.M

    def sort_key(self):
        return (self.N, self.M, self.R)


class FourierSeries:
    """Truncated sparse q-expansion: a map QIndex -> CycElt.

    The optional ``recipe`` records how the series was built from
    theta-constants (see :mod:`siegelhecke.theta`); it is what lets
    :func:`siegelhecke.hecke.hecke_T` apply non-triangular group elements.
    """

    __slots__ = ("scale", "prec", "root_order", "terms", "recipe")

    def __init__(self, scale, prec, root_order, terms=None, recipe=None, check=True):
        self.scale = int(scale)
        self.prec = int(prec)
        self.root_order = int(root_order)
        clean = {}
        for k, v in (terms or {}).items():
            k = QIndex(*k)
            if check:
                if not k.is_psd():
                    raise SeriesError("index %r is not positive semi-definite" % (k,))
                if v.order != self.root_order:
                    raise SeriesError("coefficient order %d != %d" % (v.order, self.root_order))
            if k.trace() > self.prec:
                continue
            if not v.is_zero():
                clean[k] = v
        self.terms = clean
        self.recipe = recipe

    # -- basic access -------------------------------------------------
    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def zero_coeff(self):
        return CycElt.zero(self.root_order)

    def __eq__(self, other):
        if not isinstance(other, FourierSeries):
            return NotImplemented
        return (self.scale, self.prec, self.root_order, self.terms) == \
               (other.scale, other.prec, other.root_order, other.terms)

    def __repr__(self):
        return "FourierSeries(scale=%d, prec=%d, root_order=%d, %d terms)" % (
            self.scale, self.prec, self.root_order, len(self.terms))

    def truncate(self, prec):
        prec = min(prec, self.prec)
        return FourierSeries(self.scale, prec, self.root_order,
                             {k: v for k, v in self.terms.items() if k.trace() <= prec},
                             recipe=self.recipe, check=False)

    def scalar_mul(self, c):
        """Multiply by an integer or a CycElt of the same order."""
        recipe = None
        if self.recipe is not None and isinstance(c, int):
            recipe = self.recipe.scaled(c)
        return FourierSeries(self.scale, self.prec, self.root_order,
                             {k: v * c for k, v in self.terms.items()}, recipe=recipe, check=False)

    def __neg__(self):
        return self.scalar_mul(-1)

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, FourierSeries):
            return series_mul(self, other)
        return self.scalar_mul(other)

    __rmul__ = __mul__

    # -- serialization ------------------------------------------------
    def to_json_obj(self):
        return {
            "scale": self.scale,
            "prec": self.prec,
            "root_order": self.root_order,
            "terms": [{"N": k.N, "R": k.R, "M": k.M, "coeff": [str(c) for c in v.coeffs]}
                      for k, v in self.sorted_items()],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text) if isinstance(text, str) else text
        order = int(obj["root_order"])
        terms = {QIndex(t["N"], t["R"], t["M"]): CycElt(order, [int(c) for c in t["coeff"]])
                 for t in obj["terms"]}
        return cls(obj["scale"], obj["prec"], order, terms)


def _check_compatible(a, b):
    if a.scale != b.scale:
        raise SeriesError("scale mismatch: %d vs %d" % (a.scale, b.scale))
    if a.root_order != b.root_order:
        raise SeriesError("root order mismatch: %d vs %d" % (a.root_order, b.root_order))


def series_add(a, b):
    """Termwise sum at precision min(a.prec, b.prec)."""
    _check_compatible(a, b)
    prec = min(a.prec, b.prec)
    out = {k: v for k, v in a.terms.items() if k.trace() <= prec}
    for k, v in b.terms.items():
        if k.trace() > prec:
            continue
        if k in out:
            s = out[k] + v
            if s.is_zero():
                del out[k]
            else:
                out[k] = s
        else:
            out[k] = v
    recipe = None
    if a.recipe is not None and b.recipe is not None:
        recipe = a.recipe + b.recipe
    return FourierSeries(a.scale, prec, a.root_order, out, recipe=recipe, check=False)


def series_mul(a, b):
    """Truncated product: indices add, precision min(a.prec, b.prec)."""
    _check_compatible(a, b)
    prec = min(a.prec, b.prec)
    small, big = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
    big_items = sorted(big.terms.items(), key=lambda kv: kv[0].trace())
    out = {}
    for k1, v1 in small.sorted_items():
        room = prec - k1.trace()
        if room < 0:
            continue
        for k2, v2 in big_items:
            if k2.trace() > room:
                break
            key = QIndex(k1.N + k2.N, k1.R + k2.R, k1.M + k2.M)
            prod = v1 * v2
            if key in out:
                out[key] = out[key] + prod
            else:
                out[key] = prod
    recipe = None
    if a.recipe is not None and b.recipe is not None:
        recipe = a.recipe * b.recipe
    return FourierSeries(a.scale, prec, a.root_order, out, recipe=recipe, check=False)


def series_coefficient(f, idx):
    """Stored coefficient at idx, zero if absent; error beyond the precision."""
    idx = QIndex(*idx)
    if idx.trace() > f.prec:
        raise SeriesError("index %r lies beyond the precision %d" % (idx, f.prec))
    return f.terms.get(idx, f.zero_coeff())


def series_rescale(f, factor, direction):
    """Move a series to a finer ('refine') or coarser ('coarsen') index lattice."""
    factor = int(factor)
    if factor < 1:
        raise SeriesError("rescale factor must be positive")
    if direction == "refine":
        terms = {QIndex(k.N * factor, k.R * factor, k.M * factor): v for k, v in f.terms.items()}
        return FourierSeries(f.scale * factor, f.prec * factor, f.root_order, terms, check=False)
    if direction == "coarsen":
        if f.scale % factor:
            raise SeriesError("scale %d is not divisible by %d" % (f.scale, factor))
        terms = {}
        for k, v in f.sorted_items():
            if k.N % factor or k.R % factor or k.M % factor:
                raise SeriesError("off-lattice term at %r (not divisible by %d)" % (tuple(k), factor))
            terms[QIndex(k.N // factor, k.R // factor, k.M // factor)] = v
        return FourierSeries(f.scale // factor, f.prec // factor, f.root_order, terms, check=False)
    raise SeriesError("direction must be 'refine' or 'coarsen'")


def validate_series(f):
    """Walk every term and check the FourierSeries invariants; returns True or raises."""
    for k, v in f.terms.items():
        if not isinstance(k, QIndex) or not k.is_psd():
            raise SeriesError("bad index %r" % (k,))
        if k.trace() > f.prec:
            raise SeriesError("index %r beyond precision %d" % (k, f.prec))
        if not isinstance(v, CycElt) or v.order != f.root_order:
            raise SeriesError("bad coefficient at %r" % (k,))
        if v.is_zero():
            raise SeriesError("stored zero at %r" % (k,))
    return True


__all__ = ["QIndex", "FourierSeries", "SeriesError", "series_add", "series_mul",
           "series_coefficient", "series_rescale", "validate_series", "CyclotomicError"]
