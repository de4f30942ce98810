"""Compute T(p) eigenvalues of g4 and g1 by explicit coset sums."""

import time

from siegelhecke.hecke import coset_reps, extract_eigenvalue, hecke_T, normalize_reps
from siegelhecke.theta import G4_FACTORS, g1_factors, product_form

# The double coset of diag(1,1,p,p) splits into (p+1)(p^2+1) right cosets.
for p in (3, 5, 7):
    print("p=%d: %d coset representatives" % (p, len(coset_reps(p))))

# Each representative is moved into the class of diag(1,1,p,p) mod 8 by a
# left factor delta * T_S * L_U, applied symbolically to the theta recipe.
nrep = normalize_reps(coset_reps(3))[-1]
print("a normalized representative for p=3:\n", nrep.X)

# T(p) maps a form with input precision P to one with precision P // p.
for form, factors in (("g4", G4_FACTORS), ("g1", g1_factors())):
    for p in (3, 5, 7):
        t0 = time.perf_counter()
        f = product_form(factors, 12 * p)
        rep = extract_eigenvalue(f, hecke_T(f, p))
        print("T(%d)%s = %s * %s   (%d coefficients compared, consistent=%s, %.1fs)"
              % (p, form, rep.eigenvalue, form, rep.count, rep.consistent, time.perf_counter() - t0))

# p = 17 is the first prime with degree-one primes in Z[zeta_8]; this takes
# about 20 seconds and a few hundred MB.
f = product_form(g1_factors(), 102)
rep = extract_eigenvalue(f, hecke_T(f, 17))
print("T(17)g1 = %s * g1   (%d coefficients compared)" % (rep.eigenvalue, rep.count))
