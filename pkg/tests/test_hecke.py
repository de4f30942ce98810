import itertools
from fractions import Fraction

import numpy as np
import pytest

from siegelhecke.cyclotomic import I8, ONE8, cyc_lift_order, cyc_make_root
from siegelhecke.hecke import (HeckeError, act_levi, act_translation, coset_reps, extract_eigenvalue,
                               hecke_T, normalize_reps, pairwise_distinct, required_precision,
                               same_coset, slash_action, transform_recipe)
from siegelhecke.hecke import _act_point, _symplectic_adjugate
from siegelhecke.qseries import FourierSeries
from siegelhecke.theta import (EVEN_CHARACTERISTICS, G4_FACTORS, ThetaCombination,
                               combination_series, g1_factors, make_factor, product_form,
                               theta_numeric)

Z_SAMPLE = np.array([[0.13 + 0.8j, 0.07 + 0.11j], [0.07 + 0.11j, -0.21 + 0.9j]])


@pytest.mark.parametrize("p", [3, 5, 7])
def test_coset_counts_and_distinctness(p):
    reps = coset_reps(p)
    assert len(reps) == (p + 1) * (p * p + 1)
    assert pairwise_distinct([r.matrix() for r in reps], p)
    nreps = normalize_reps(reps)
    assert pairwise_distinct([n.X for n in nreps], p)
    sigma = np.diag([1, 1, p, p])
    for n in nreps:
        assert ((np.array(n.X, dtype=object) - sigma) % 8 == 0).all()
        assert same_coset(n.X, n.rep.matrix(), p)


def test_same_coset_detects_different_cosets():
    reps = coset_reps(3)
    assert not same_coset(reps[0].matrix(), reps[1].matrix(), 3)


def _random_unimodular(rng):
    U = np.eye(2, dtype=int)
    for _ in range(4):
        k = int(rng.integers(-2, 3))
        E = np.array([[1, k], [0, 1]]) if rng.random() < 0.5 else np.array([[1, 0], [k, 1]])
        U = U @ E
    if rng.random() < 0.5:
        U = U @ np.diag([1, -1])
    return U


def test_levi_action_numerically():
    rng = np.random.default_rng(11)
    for _ in range(20):
        U = _random_unimodular(rng)
        factors = [make_factor(EVEN_CHARACTERISTICS[int(i)], int(d))
                   for i, d in zip(rng.integers(0, 10, 6), rng.integers(1, 3, 6))]
        W = U @ Z_SAMPLE @ U.T
        lhs = round(np.linalg.det(U)) ** 3 * np.prod([theta_numeric(f, W, bound=60) for f in factors])
        e, fs = act_levi(factors, U)
        rhs = np.exp(1j * np.pi * e / 4) * np.prod([theta_numeric(f, Z_SAMPLE) for f in fs])
        assert abs(lhs - rhs) < 1e-8 * max(1, abs(rhs))


def test_translation_action_numerically():
    rng = np.random.default_rng(5)
    for _ in range(20):
        s11, s12, s22 = (int(v) for v in rng.integers(-3, 4, 3))
        S = np.array([[s11, s12], [s12, s22]])
        factors = [make_factor(EVEN_CHARACTERISTICS[int(i)], int(d))
                   for i, d in zip(rng.integers(0, 10, 6), rng.integers(1, 3, 6))]
        lhs = np.prod([theta_numeric(f, Z_SAMPLE + S) for f in factors])
        e, fs = act_translation(factors, S)
        rhs = np.exp(1j * np.pi * e / 4) * np.prod([theta_numeric(f, Z_SAMPLE) for f in fs])
        assert abs(lhs - rhs) < 1e-8 * max(1, abs(rhs))


@pytest.mark.parametrize("factors", [G4_FACTORS, g1_factors()], ids=["g4", "g1"])
def test_full_recipe_transform_numerically(factors):
    """f|gamma for gamma = X R^-1 agrees with the symbolic recipe (p = 3).

    Sample points are placed so gamma's SL2 part sees a point near its cusp;
    residual truncation error is ~1e-2 at worst, while any wrong root of
    unity or characteristic produces an O(1) discrepancy.
    """
    for nr in normalize_reps(coset_reps(3)):
        g = nr.X.dot(_symplectic_adjugate(nr.rep.matrix()))
        g = np.array([[int(v) // 3 for v in row] for row in g], dtype=float)
        c, d = float(nr.delta[2, 0]), float(nr.delta[2, 2])
        t = (-d / c + 0.013 + 1j / abs(c)) if c else 0.1 + 0.9j
        Z0 = np.array([[t, 0.04 + 0.03j], [0.04 + 0.03j, 0.11 + 0.8j]])
        Ui = np.linalg.inv(np.array(nr.U, dtype=float))
        Z = Ui @ (Z0 - np.array(nr.S, dtype=float)) @ Ui.T
        W, dt = _act_point(g, Z)
        lhs = np.prod([theta_numeric(s, W, bound=120) for s in factors]) / dt ** 3
        e, fs = transform_recipe(factors, nr)
        rhs = np.exp(1j * np.pi * e / 4) * np.prod([theta_numeric(s, Z, bound=120) for s in fs])
        assert abs(lhs - rhs) < 0.05 * abs(rhs)


def test_slash_action_on_simple_families():
    f = product_form(G4_FACTORS, 36)
    reps = coset_reps(3)
    res = slash_action(f, reps[0])               # A = 3I, B = 0, D = I: f(3Z)
    assert res.scalar == Fraction(1)
    assert res.series.scale == 12 and res.series.root_order == 24
    expected = {(9 * k.N, 9 * k.R, 9 * k.M): cyc_lift_order(v, 24)
                for k, v in f.terms.items() if 9 * k.trace() <= 36}
    assert {tuple(k): v for k, v in res.series.terms.items()} == expected
    rep = reps[6]                                # A = I, B = [[0,1],[1,2]], D = 3I
    assert rep.B == ((0, 1), (1, 2))
    res = slash_action(f, rep)
    assert res.scalar == Fraction(1, 9 ** 3)                # det(D)^-3
    for k, v in f.terms.items():
        phase = cyc_make_root(24, 2 * (k.R + 2 * k.M))          # e((R b12 + M b22)/12)
        assert res.series.terms[k] == cyc_lift_order(v, 24) * phase


def test_hecke_T_is_linear_on_theta_combinations():
    a = ThetaCombination.single(G4_FACTORS)
    b = ThetaCombination.single(g1_factors())
    combo = a.scaled(2) + ThetaCombination.single(g1_factors(), I8 * -3)
    P = 24
    lhs = hecke_T(combination_series(combo, P), 3)
    ta = hecke_T(product_form(G4_FACTORS, P), 3)
    tb = hecke_T(product_form(g1_factors(), P), 3)
    rhs = ta.scalar_mul(2) + tb.scalar_mul(I8 * -3)
    assert lhs.terms == rhs.terms
    assert b.entries[0][0] == ONE8


def test_T3_g4_equals_eight_g4():
    f = product_form(G4_FACTORS, 48)
    g = hecke_T(f, 3)
    assert g.prec == 16
    assert g.terms == f.truncate(16).scalar_mul(8).terms


def test_hecke_T_requires_recipe():
    f = product_form(G4_FACTORS, 12)
    bare = FourierSeries(4, 12, 8, f.terms)
    with pytest.raises(HeckeError, match="recipe"):
        hecke_T(bare, 3)


def test_required_precision():
    assert required_precision(product_form(G4_FACTORS, 4), 3) == 15
    assert required_precision(product_form(g1_factors(), 4), 5) == 15


def test_bad_prime_rejected():
    with pytest.raises(HeckeError):
        coset_reps(9)
    with pytest.raises(HeckeError):
        coset_reps(2)


def test_extract_eigenvalue_examples():
    f = product_form(G4_FACTORS, 16)
    rep = extract_eigenvalue(f, f.scalar_mul(-5).truncate(8))
    assert rep.consistent and rep.eigenvalue == -5 and rep.count > 0
    zero = FourierSeries(4, 8, 8, {})
    rep0 = extract_eigenvalue(f, zero)
    assert rep0.consistent and rep0.eigenvalue == 0
    k = next(iter(f.truncate(8).terms))
    broken = f.truncate(8).scalar_mul(2)
    broken.terms[k] = broken.terms[k] + 1
    assert not extract_eigenvalue(f, broken).consistent
