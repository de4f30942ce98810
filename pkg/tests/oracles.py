"""Independent oracles shared by the test modules (no package internals)."""

import cmath
import math


def theta_coefficient_oracle(ch, dil, index):
    """Coefficient of a theta-constant at a scale-4 index, by a direct double sum.

    Each lattice point x contributes exp(2 pi i ((2x1+a)c + (2x2+b)d)/4) when
    4 d (x1+a/2)^2, 8 d (x1+a/2)(x2+b/2), 4 d (x2+b/2)^2 equal (N, R, M).
    Returned as a complex number rounded to a Gaussian integer.
    """
    a, b, c, d = ch
    N, R, M = index
    total = 0j
    bound = math.isqrt(max(N, M) + 1) + 2
    for x1 in range(-bound, bound + 1):
        for x2 in range(-bound, bound + 1):
            v1, v2 = x1 + a / 2, x2 + b / 2
            if (round(4 * dil * v1 * v1), round(8 * dil * v1 * v2), round(4 * dil * v2 * v2)) \
                    == (N, R, M):
                total += cmath.exp(2j * math.pi * ((2 * x1 + a) * c + (2 * x2 + b) * d) / 4)
    return complex(round(total.real), round(total.imag))
