"""The predicted Euler data and the comparison with measured eigenvalues."""

from siegelhecke import characters as ch

# rho_1 = q prod (1-q^2n)^4 (1-q^4n)^4, the weight-4 level-8 newform.
rho = ch.rho1_qexp(20)
print("rho_1:", rho.coefficients)

# g4: chi_{-2}(p)(p^s1 + p^s2) + a_p(rho_1), calibrated on p = 3, 5.
cal = ch.calibrate_shift([("g4", 3, 8), ("g4", 5, -32)])
print("calibration:", cal)
for p in (3, 5, 7, 11, 13):
    print("g4 p=%d predicted %s, Satake moduli %s"
          % (p, ch.predict_eigenvalue("g4", p, cal.nu, cal.shifts),
             [round(a, 6) for a in ch.satake_abs("g4", p, cal)]))

# mu: the CM character of Q(i) attached to y^2 = x^3 - x.
for p in (5, 13, 17):
    gens = ch.gauss_prime_data(p).generators
    print("p=%d primary generators %s, a_p = %d" % (p, gens, ch.ap_from_point_count(p)))

# lambda on Q(zeta_8): infinity types trivial on the units.
specs = ch.lambda_infinity_search()
print("lambda infinity types:", [s.infinity_type for s in specs])
for p in (17, 41, 73):
    print("g1 p=%d predicted %s" % (p, ch.predict_eigenvalue("g1", p)))
for p in (5, 13, 17):
    print("F5 p=%d predicted %s, F6 predicted %s"
          % (p, ch.predict_eigenvalue("F5", p), ch.predict_eigenvalue("F6", p)))
