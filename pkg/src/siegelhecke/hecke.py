"""The degree-two Hecke operator T(p) at odd primes, by explicit coset sums.

Normalization:  T(p) f = p^(2k-3) * sum_X f|_k X  with k = 3, where X runs
over right cosets of Gamma \\ Gamma diag(1,1,p,p) Gamma and

    (f|_k X)(Z) = det(CZ + D)^(-k) f((AZ + B)(CZ + D)^(-1)).

The forms of interest are only invariant under a congruence subgroup, so
each coset representative R (block upper triangular, from
:func:`coset_reps`) is replaced by X = gamma R with gamma in Sp4(Z) chosen
so that X is congruent to the fixed target sigma = diag(1,1,p,p) modulo the
level (8 by default).  We write

    gamma = delta * T_S * L_U

with T_S = [[1, S], [0, 1]], L_U = diag(U, U^-T) and delta an embedded
SL2 matrix [[u, b], [L, d]] in Gamma_0(L).  The three factors are applied
*symbolically* to the theta-product recipe of f (each theta-constant goes
to a root of unity times another theta-constant), and only the final
triangular R acts on q-expansions.  The constants for delta are identified
numerically (by evaluating theta-constants near a cusp) and cached; any
misidentification is caught by the exactness tripwires at the end of the
coset sum.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclotomic import (CycElt, CyclotomicError, cyc_lift_order, cyc_make_root,
                         cyc_project_order, cyclotomic_polynomial, euler_phi)
from .qseries import FourierSeries, QIndex, SeriesError, series_rescale
from .theta import (EVEN_CHARACTERISTICS, ThetaFactorSpec, Characteristic, dense_product,
                    is_odd_characteristic, theta_numeric)

WEIGHT = 3
DEFAULT_LEVEL = 8
NORMALIZATION = "T(p)f = p^(2k-3) * sum_X f|_k X, k=3"


class HeckeError(RuntimeError):
    """Raised when a Hecke computation fails one of its exactness tripwires."""


# ---------------------------------------------------------------------------
# small integer matrix helpers (object arrays keep Python integers exact)
# ---------------------------------------------------------------------------

def _mat(rows):
    return np.array(rows, dtype=object)


I2 = _mat([[1, 0], [0, 1]])
O2 = _mat([[0, 0], [0, 0]])


def _block(A, B, C, D):
    g = np.zeros((4, 4), dtype=object)
    g[:2, :2], g[:2, 2:], g[2:, :2], g[2:, 2:] = A, B, C, D
    return g


def _J():
    return _block(O2, -I2, I2, O2)


def _det2(U):
    return U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0]


def _inv2(U):
    det = _det2(U)
    if abs(det) != 1:
        raise HeckeError("matrix %r is not unimodular" % (U,))
    return _mat([[U[1, 1], -U[0, 1]], [-U[1, 0], U[0, 0]]]) * det


def _mod(X, L):
    return np.vectorize(lambda v: int(v) % L, otypes=[object])(X)


def _symplectic_adjugate(X):
    """X^# with X X^# = sim(X) * 1 for a symplectic similitude X."""
    J = _J()
    return (-J).dot(X.T).dot(J)


# ---------------------------------------------------------------------------
# coset representatives
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CosetRep:
    """Block upper-triangular representative [[A, B], [0, D]] of similitude p."""
    A: tuple
    B: tuple
    D: tuple
    p: int

    @classmethod
    def from_arrays(cls, A, B, D, p):
        t = lambda X: tuple(tuple(int(v) for v in row) for row in X)
        return cls(t(A), t(B), t(D), int(p))

    def arrays(self):
        return _mat(self.A), _mat(self.B), _mat(self.D)

    def matrix(self):
        A, B, D = self.arrays()
        return _block(A, B, O2, D)

    def check(self):
        A, B, D = self.arrays()
        if not (A.T.dot(D) == self.p * I2).all():
            raise HeckeError("similitude condition A^t D = pI fails for %r" % (self,))
        X = B.T.dot(D)
        if not (X == X.T).all():
            raise HeckeError("B^t D is not symmetric for %r" % (self,))
        return True


def _gauss_reduce_rows(A):
    """Unimodular W such that W A has a Lagrange-Gauss reduced row basis."""
    W = I2.copy()
    A = A.copy()

    def n2(v):
        return v[0] * v[0] + v[1] * v[1]

    while True:
        if n2(A[0]) > n2(A[1]):
            A = A[[1, 0]]
            W = W[[1, 0]]
        q = Fraction(int(A[0][0] * A[1][0] + A[0][1] * A[1][1]), int(n2(A[0])))
        q = round(q)
        if q == 0:
            return W
        A[1] = A[1] - q * A[0]
        W[1] = W[1] - q * W[0]


def _check_prime(p):
    if not isinstance(p, (int, np.integer)) or p <= 1 or p % 2 == 0:
        raise HeckeError("p must be an odd prime, got %r" % (p,))
    if any(p % q == 0 for q in range(3, math.isqrt(p) + 1, 2)):
        raise HeckeError("p must be an odd prime, got %r" % (p,))


def coset_reps(p):
    """Representatives of Gamma \\ Gamma diag(1,1,p,p) Gamma; (p+1)(p^2+1) of them.

    Family (i):  A = pI, B = 0, D = I.
    Family (ii): A = I, B symmetric mod p, D = pI.
    Family (iii): A = diag(p,1) V, B = diag(0,b) V^-T, D = diag(1,p) V^-T over
    V in the p+1 classes of P^1(F_p) and b mod p, then left-multiplied by a
    Levi element making the rows of A Gauss-reduced (this keeps the trace
    transport well conditioned; see :func:`slash_action`).
    """
    _check_prime(p)
    reps = [CosetRep.from_arrays(p * I2, O2, I2, p)]
    for b1, b2, b3 in itertools.product(range(p), repeat=3):
        reps.append(CosetRep.from_arrays(I2, _mat([[b1, b2], [b2, b3]]), p * I2, p))
    A0, D0 = _mat([[p, 0], [0, 1]]), _mat([[1, 0], [0, p]])
    Vs = [_mat([[1, 0], [k, 1]]) for k in range(p)] + [_mat([[0, -1], [1, 0]])]
    for V in Vs:
        ViT = _inv2(V).T
        for b in range(p):
            A = A0.dot(V)
            B = _mat([[0, 0], [0, b]]).dot(ViT)
            D = D0.dot(ViT)
            W = _gauss_reduce_rows(A)
            reps.append(CosetRep.from_arrays(W.dot(A), W.dot(B), _inv2(W).T.dot(D), p))
    for r in reps:
        r.check()
    return reps


def same_coset(X, Y, p):
    """True iff X Y^-1 is integral, i.e. Gamma X = Gamma Y (similitude p both)."""
    Z = X.dot(_symplectic_adjugate(Y))
    return all(int(v) % p == 0 for v in Z.flat)


def pairwise_distinct(mats, p):
    """Check that no two similitude-p matrices lie in the same right coset.

    Gamma X is determined by the row lattice Z^4 X, which contains p Z^4;
    so the row space of X over F_p is a complete invariant of the coset.
    """
    keys = {_row_space_key(X, p) for X in mats}
    return len(keys) == len(mats)


def _row_space_key(M, p):
    """Reduced row echelon form over F_p of the rows of M, as a hashable key."""
    rows = [[int(v) % p for v in row] for row in M]
    piv_row = 0
    ncols = len(rows[0])
    for col in range(ncols):
        pivot = next((r for r in range(piv_row, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[piv_row], rows[pivot] = rows[pivot], rows[piv_row]
        inv = pow(rows[piv_row][col], -1, p)
        rows[piv_row] = [(v * inv) % p for v in rows[piv_row]]
        for r in range(len(rows)):
            if r != piv_row and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[piv_row])]
        piv_row += 1
    return tuple(tuple(r) for r in rows[:piv_row])


# ---------------------------------------------------------------------------
# normalization:  X = delta * T_S * L_U * R  congruent to sigma mod L
# ---------------------------------------------------------------------------

def _lift_sl2(Ub, L):
    """Integral U with det U = +-1 and U = Ub mod L, for Ub of determinant +-1 mod L."""
    a, b, c, d = [int(x) % L for x in Ub.flat]
    det = (a * d - b * c) % L
    flip = False
    if det == L - 1:
        flip = True
        b, d = (-b) % L, (-d) % L
    if (a * d - b * c) % L != 1:
        raise HeckeError("cannot lift %r: determinant is not +-1 mod %d" % (Ub, L))
    cc = c if c else L
    dd = d
    while math.gcd(cc, dd) != 1:
        dd += L
    # x dd - y cc = 1
    x = pow(dd, -1, cc) if cc > 1 else 1
    y = (x * dd - 1) // cc
    M0 = _mat([[x, y], [cc, dd]])
    T = _mod(_mat([[a, b], [c, d]]).dot(_inv2(M0)), L)
    if not (T[0, 0] == 1 and T[1, 0] == 0 and T[1, 1] == 1):
        raise HeckeError("SL2 lift failed for %r" % (Ub,))
    U = _mat([[1, int(T[0, 1])], [0, 1]]).dot(M0)
    if flip:
        U = U.dot(_mat([[1, 0], [0, -1]]))
    return U


def _embed_sl2(a, b, c, d):
    g = _block(I2, O2, O2, I2)
    g[0, 0], g[0, 2], g[2, 0], g[2, 2] = a, b, c, d
    return g


def _deltas(L):
    """One Gamma_0(L) element [[u, b], [L, d]] per class u mod L up to sign."""
    out = {}
    for u in range(1, L, 2):
        key = min(u, L - u)
        if key in out or key == 1:
            continue
        for d in range(1, L + 1):
            if (u * d - 1) % L == 0:
                out[key] = _embed_sl2(u, (u * d - 1) // L, L, d)
                break
    return out


@dataclass(frozen=True)
class NormalizedRep:
    """X = delta T_S L_U R, congruent to the target modulo the level."""
    rep: CosetRep
    delta_key: int
    delta: object
    S: object
    U: object
    X: object
    level: int


def normalize_reps(reps, level=DEFAULT_LEVEL, target=None):
    """Left-multiply each representative into the class of the target mod level.

    Left multiplication by gamma in Sp4(Z) keeps the right coset Gamma R, so
    the normalized matrices represent the same cosets.
    """
    out = []
    if not reps:
        return out
    p = reps[0].p
    if math.gcd(p, level) != 1:
        raise HeckeError("p must be coprime to the level")
    sigma = _block(I2, O2, O2, p * I2) if target is None else _mat(target)
    deltas = _deltas(level)
    pinv = pow(p, -1, level)
    for rep in reps:
        R = rep.matrix()
        g = _mod(sigma.dot(_symplectic_adjugate(R)) * pinv, level)      # sigma R^-1
        if any(v for v in g[2:, :2].flat):
            raise HeckeError("target is not in the Borel class of %r" % (rep,))
        u = int(_det2(g[:2, :2])) % level
        key = min(u, level - u)
        if key == 1:
            delta = _block(I2, O2, O2, I2)
            rest = g
        else:
            delta = deltas[key]
            rest = _mod(_symplectic_adjugate(delta).dot(g), level)
        if any(v for v in rest[2:, :2].flat):
            raise HeckeError("Gamma_0 factorization failed for %r" % (rep,))
        U = _lift_sl2(rest[:2, :2], level)
        S = _mod(rest[:2, 2:].dot(U.T), level)
        if not (S == S.T).all():
            raise HeckeError("translation part is not symmetric for %r" % (rep,))
        TS = _block(I2, S, O2, I2)
        LU = _block(U, O2, O2, _inv2(U).T)
        X = delta.dot(TS).dot(LU).dot(R)
        if not (_mod(X, level) == _mod(sigma, level)).all():
            raise HeckeError("normalization failed for %r" % (rep,))
        out.append(NormalizedRep(rep, key, delta, S, U, X, level))
    return out


# ---------------------------------------------------------------------------
# symbolic action on theta products
# ---------------------------------------------------------------------------

def act_translation(factors, S):
    """theta_m(d(Z+S)) = zeta_8^(2d(s11 a + s22 b + 2 s12 a b)) theta_m(dZ)."""
    e = 0
    for (a, b, c, d), dil in factors:
        e += 2 * dil * (int(S[0][0]) * a + int(S[1][1]) * b + 2 * int(S[0][1]) * a * b)
    return e % 8, list(factors)


def act_levi(factors, U):
    """Weight-3 action of L_U = diag(U, U^-T) on a six-fold theta product."""
    U = _mat(U)
    det = _det2(U)
    Uinv = _inv2(U)
    e = 0 if det == 1 else 4          # det(U)^3
    out = []
    for (a, b, c, d), dil in factors:
        ap = _mat([a, b]).dot(U)
        cp = Uinv.dot(_mat([c, d]))      # v.(c,d) = (vU).(U^-1 (c,d)^t)
        ab = [int(x) % 2 for x in ap]
        cb = [int(x) % 2 for x in cp]
        j = [(int(cp[i]) - cb[i]) // 2 for i in range(2)]
        if (ab[0] * j[0] + ab[1] * j[1]) % 2:
            e += 4
        out.append(ThetaFactorSpec(Characteristic(*(ab + cb)), dil))
    return e % 8, out


def _act_point(g, Z):
    A, B, C, D = g[:2, :2], g[:2, 2:], g[2:, :2], g[2:, 2:]
    W = (A @ Z + B) @ np.linalg.inv(C @ Z + D)
    return W, np.linalg.det(C @ Z + D)


_DELTA_CACHE = {}


def identify_delta_factor(spec, g, tol=1e-7):
    """Find (k, m') with theta_m(d gZ) det(CZ+D)^(-1/2) = zeta_8^k theta_m'(dZ).

    The sample points sit near the cusp -d/c of the embedded SL2 block so
    that both sides are of moderate size; a match requires a constant ratio
    of modulus one that is an 8th root of unity to within tol.
    """
    key = (spec, tuple(int(v) for v in g.flat))
    if key in _DELTA_CACHE:
        return _DELTA_CACHE[key]
    gf = np.array(g, dtype=float)
    rng = np.random.default_rng(7)
    c00, d00 = gf[2, 0], gf[2, 2]
    points = []
    for _ in range(3):
        tau = -d00 / c00 + rng.uniform(-0.01, 0.01) + 1j / abs(c00)
        z12 = 0.05 + 0.03j * rng.uniform()
        Z = np.array([[tau, z12], [z12, 0.1 * rng.uniform() + 0.7j]])
        points.append(Z)
    lhs = []
    for Z in points:
        W, dt = _act_point(gf, Z)
        lhs.append(theta_numeric(spec, W, bound=60) / np.sqrt(dt))
    found = None
    for ch in EVEN_CHARACTERISTICS:
        cand = ThetaFactorSpec(ch, spec.dilation)
        ratios = [l / theta_numeric(cand, Z, bound=60) for l, Z in zip(lhs, points)]
        r0 = ratios[0]
        if all(abs(r - r0) < tol for r in ratios) and abs(abs(r0) - 1) < tol:
            k = round(np.angle(r0) / (np.pi / 4)) % 8
            if abs(r0 - np.exp(1j * np.pi * k / 4)) < tol:
                if found is not None:
                    raise HeckeError("ambiguous transformation for %r" % (spec,))
                found = (k, cand)
    if found is None:
        raise HeckeError("could not identify the transform of %r" % (spec,))
    _DELTA_CACHE[key] = found
    return found


def act_delta(factors, g):
    e = 0
    out = []
    for f in factors:
        k, f2 = identify_delta_factor(f, g)
        e += k
        out.append(f2)
    return e % 8, out


def transform_recipe(factors, nrep):
    """Apply delta, T_S, L_U of a normalized rep; returns (zeta_8 exponent, factors)."""
    e = 0
    fs = list(factors)
    if nrep.delta_key != 1:
        e1, fs = act_delta(fs, nrep.delta)
        e += e1
    e2, fs = act_translation(fs, nrep.S)
    e3, fs = act_levi(fs, nrep.U)
    return (e + e2 + e3) % 8, fs


# ---------------------------------------------------------------------------
# slash action of a triangular representative on q-expansions
# ---------------------------------------------------------------------------

@dataclass
class SlashResult:
    """f|_k R as a scale-4p series (order 8p) times an exact rational scalar."""
    series: FourierSeries
    scalar: Fraction


def _transport(N, R, M, A, B):
    """Index transport (N,R,M) at scale 4 -> scale 4p, and the phase exponent.

    tr(T (AZ+B) D^-1) = tr(A^t T A Z)/p + tr(T B A^t)/p, so the new scale-4p
    index is 4 A^t T A and the phase is exp(2 pi i k / (4p)) with
    k = N b11 + R b12 + M b22 for b = B A^t.
    """
    a11, a12, a21, a22 = [int(v) for v in A.flat]
    N2 = N * a11 * a11 + R * a11 * a21 + M * a21 * a21
    M2 = N * a12 * a12 + R * a12 * a22 + M * a22 * a22
    R2 = 2 * N * a11 * a12 + R * (a11 * a22 + a12 * a21) + 2 * M * a21 * a22
    bb = B.dot(A.T)
    k = N * int(bb[0, 0]) + R * int(bb[0, 1]) + M * int(bb[1, 1])
    return N2, R2, M2, k


def _check_transport_bound(A):
    """Require A A^t - I to be positive semi-definite, so truncation is complete."""
    G = A.dot(A.T)
    g11, g12, g22 = int(G[0, 0]) - 1, int(G[0, 1]), int(G[1, 1]) - 1
    if g11 < 0 or g22 < 0 or g11 * g22 < g12 * g12:
        raise HeckeError("representative A=%r is not reduced enough for exact truncation" % (A,))


def slash_action(f, rep, weight=WEIGHT):
    """(f|_k R)(Z) = det(D)^-k f((AZ+B)D^-1) for a triangular representative."""
    if f.scale != 4:
        raise SeriesError("slash_action expects a scale-4 series, got scale %d" % f.scale)
    p = rep.p
    A, B, D = rep.arrays()
    _check_transport_bound(A)
    order = 8 * p
    terms = {}
    for idx, coeff in f.terms.items():
        N2, R2, M2, k = _transport(idx.N, idx.R, idx.M, A, B)
        phase = cyc_make_root(order, 2 * k)
        val = cyc_lift_order(coeff, order) * phase
        key = QIndex(N2, R2, M2)
        terms[key] = terms[key] + val if key in terms else val
    out = FourierSeries(4 * p, f.prec, order, terms, check=False)
    return SlashResult(out, Fraction(1, int(_det2(D)) ** weight))


# ---------------------------------------------------------------------------
# the Hecke operator
# ---------------------------------------------------------------------------

_RED_CACHE = {}


def _reduction_matrix(n):
    """Row j = coefficients of x^j mod Phi_n, for j < n (int64)."""
    if n not in _RED_CACHE:
        deg = euler_phi(n)
        rows = []
        for j in range(n):
            c = cyc_make_root(n, j).coeffs
            rows.append(list(c) + [0] * (deg - len(c)))
        _RED_CACHE[n] = np.array(rows, dtype=np.int64)
    return _RED_CACHE[n]


def _recipe_of(f):
    if f.recipe is None:
        raise HeckeError(
            "hecke_T needs the theta-product recipe of f (build it with the theta module); "
            "a bare truncated q-expansion does not determine its transformation law")
    return f.recipe


def required_precision(f, p):
    """Smallest input trace bound giving at least one coefficient beyond the leading one."""
    from .theta import minimal_trace
    recipe = _recipe_of(f)
    if not recipe.entries:
        return 0
    tmin = min(minimal_trace(fs) for _, fs in recipe.entries)
    return p * (tmin + 1)


def hecke_T(f, p, level=DEFAULT_LEVEL, progress=None):
    """T(p) f for a theta-product series f; result has scale 4 and prec floor(f.prec/p).

    Tripwires: every off-lattice term of the scale-4p coset sum must cancel
    exactly, every coefficient must lie in Z[zeta_8], and the division by
    p^3 must be exact.
    """
    _check_prime(p)
    if f.scale != 4:
        raise SeriesError("hecke_T expects a scale-4 series")
    recipe = _recipe_of(f)
    P = f.prec
    out_prec = P // p
    if not recipe.entries:
        return FourierSeries(4, out_prec, 8, {}, check=False)
    reps = normalize_reps(coset_reps(p), level)
    order = 8 * p
    cache = {}
    rowlen = (2 * P + 1) * (P + 1)
    acc_keys, acc_vals = np.zeros(0, np.int64), np.zeros(0, np.int64)
    batch_k, batch_v = [], []

    def flush(keys, vals, bk, bv):
        if not bk:
            return keys, vals
        k = np.concatenate([keys] + bk)
        v = np.concatenate([vals] + bv)
        uk, inv = np.unique(k, return_inverse=True)
        s = np.zeros(len(uk), np.int64)
        np.add.at(s, inv, v)
        nz = s != 0
        return uk[nz], s[nz]

    bound = 0
    for i, nrep in enumerate(reps):
        A, B, D = nrep.rep.arrays()
        _check_transport_bound(A)
        w = int(_det2(A)) ** 3
        for const, factors in recipe.entries:
            e, fs = transform_recipe(factors, nrep)
            if any(is_odd_characteristic(s.characteristic) for s in fs):
                continue
            ck = tuple(sorted(fs))
            if ck not in cache:
                cache[ck] = dense_product(ck, P)
            N, R, M, re, im = cache[ck]
            if re.dtype == object:
                raise HeckeError("coefficients too large for the int64 accumulator")
            N2, R2, M2, k = _transport(N, R, M, A, B)
            keep = N2 + M2 <= P
            k = np.mod(k, 4 * p)
            lin = (N2 * (2 * P + 1) + (R2 + P)) * (P + 1) + M2
            for j, cj in enumerate(const.coeffs):
                if not cj:
                    continue
                for vals, off in ((re, 0), (im, 2 * p)):
                    nz = keep & (vals != 0)
                    if not nz.any():
                        continue
                    slot = (p * (e + j) + off + 2 * k[nz]) % order
                    batch_k.append(lin[nz] * order + slot)
                    v = (w * cj) * vals[nz]
                    bound += int(np.abs(vals[nz]).max()) * abs(w * cj) * int(nz.sum())
                    batch_v.append(v)
        if bound >= 2 ** 62:
            raise HeckeError("coset sum may overflow int64; lower the precision")
        if len(batch_k) > 400:
            acc_keys, acc_vals = flush(acc_keys, acc_vals, batch_k, batch_v)
            batch_k, batch_v = [], []
        if progress is not None:
            progress(i + 1, len(reps))
    acc_keys, acc_vals = flush(acc_keys, acc_vals, batch_k, batch_v)

    # group ring Z[C_8p] -> Z[zeta_8p]
    lin, slot = acc_keys // order, acc_keys % order
    ulin, inv = np.unique(lin, return_inverse=True)
    grp = np.zeros((len(ulin), order), np.int64)
    np.add.at(grp, (inv, slot), acc_vals)
    red = grp.dot(_reduction_matrix(order))
    M2 = ulin % (P + 1)
    rest = ulin // (P + 1)
    R2 = rest % (2 * P + 1) - P
    N2 = rest // (2 * P + 1)
    terms = {}
    for r in np.nonzero((red != 0).any(axis=1))[0]:
        terms[QIndex(int(N2[r]), int(R2[r]), int(M2[r]))] = CycElt(
            order, [int(v) for v in red[r]], reduced=True)
    big = FourierSeries(4 * p, P, order, terms, check=False)
    try:
        small = series_rescale(big, p, "coarsen")
    except SeriesError as exc:
        raise HeckeError("off-lattice residue after the coset sum: %s" % exc) from None
    out = {}
    p3 = p ** 3
    for idx, c in small.terms.items():
        try:
            c8 = cyc_project_order(c, 8)
            out[idx] = c8.exact_div(p3)
        except CyclotomicError as exc:
            raise HeckeError("coefficient at %r: %s" % (tuple(idx), exc)) from None
    return FourierSeries(4, out_prec, 8, out, check=False)


# ---------------------------------------------------------------------------
# eigenvalues
# ---------------------------------------------------------------------------

@dataclass
class EigenReport:
    eigenvalue: object                      # Fraction, or None when undetermined
    witnesses: list = field(default_factory=list)
    consistent: bool = True
    count: int = 0

    def to_json_obj(self):
        ev = self.eigenvalue
        return {
            "eigenvalue": None if ev is None else str(ev),
            "consistent": self.consistent,
            "count": self.count,
            "witnesses": [{"N": k.N, "R": k.R, "M": k.M,
                           "numerator": [str(c) for c in a.coeffs],
                           "denominator": [str(c) for c in b.coeffs]}
                          for k, a, b in self.witnesses],
        }


def _rational_ratio(num, den):
    """num / den if it is a rational number, else None."""
    j = next(i for i, c in enumerate(den.coeffs) if c)
    q = Fraction(num.coeffs[j], den.coeffs[j])
    if all(Fraction(a) == q * b for a, b in zip(num.coeffs, den.coeffs)):
        return q
    return None


def extract_eigenvalue(original, transformed):
    """Exact proportionality test of transformed against original."""
    if transformed.prec > original.prec:
        raise SeriesError("transformed series has higher precision than the original")
    P = transformed.prec
    keys = sorted({k for k in original.terms if k.trace() <= P} | set(transformed.terms),
                  key=QIndex.sort_key)
    zero = original.zero_coeff()
    witnesses = []
    ref = None
    consistent = True
    for k in keys:
        o = original.terms.get(k, zero)
        t = transformed.terms.get(k, zero)
        if not o.is_zero():
            witnesses.append((k, t, o))
            if ref is None:
                ref = (t, o)
    if ref is None:
        consistent = transformed.is_zero()
        return EigenReport(None, [], consistent, 0)
    t0, o0 = ref
    for k in keys:
        o = original.terms.get(k, zero)
        t = transformed.terms.get(k, zero)
        if t * o0 != t0 * o:
            consistent = False
            break
    ev = _rational_ratio(t0, o0) if consistent else None
    return EigenReport(ev, witnesses, consistent, len(witnesses))
