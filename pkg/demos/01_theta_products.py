"""Walk through the theta-constant expansions behind g1 and g4."""

import numpy as np

from siegelhecke.cyclotomic import cyc_embed
from siegelhecke.theta import (EVEN_CHARACTERISTICS, G4_FACTORS, ODD_CHARACTERISTICS, build_g1,
                               build_g4, make_factor, theta_constant, theta_numeric)

# Ten characteristics are even, six are odd; the odd theta-constants vanish identically.
print("even:", len(EVEN_CHARACTERISTICS), "odd:", len(ODD_CHARACTERISTICS))
print("odd theta_(1,0,1,0) at prec 40 is zero:", theta_constant(make_factor((1, 0, 1, 0)), 40).is_zero())

# A single theta-constant: exponents are quarter-integral, stored at scale 4.
th = theta_constant(make_factor((1, 0, 0, 0), 1), 12)
for k, v in th.sorted_items()[:6]:
    print("  index (N,R,M) =", tuple(k), " coefficient", cyc_embed(v))

# g4 is a product of six theta-constants, three of them dilated by 2.
g4 = build_g4(24)
print("g4 at prec 24:", len(g4), "nonzero coefficients; lowest trace",
      min(k.trace() for k in g4.terms))
g1 = build_g1(24)
print("g1 at prec 24:", len(g1), "nonzero coefficients; lowest trace",
      min(k.trace() for k in g1.terms))

# The truncated series agrees with direct numerical evaluation at a point of H_2.
Z = np.array([[0.1 + 1.0j, 0.05 + 0.2j], [0.05 + 0.2j, -0.1 + 1.1j]])
g4 = build_g4(60)
series_value = sum(cyc_embed(c) * np.exp(2j * np.pi * (k.N * Z[0, 0] + k.R * Z[0, 1] + k.M * Z[1, 1]) / 4)
                   for k, c in g4.terms.items())
direct_value = np.prod([theta_numeric(f, Z) for f in G4_FACTORS])
print("g4(Z) from the series:", series_value)
print("g4(Z) from lattice sums:", direct_value)
