"""Command-line front end: expand, hecke, predict, verify, selftest.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
Machine-readable results go to files (``--out PREFIX``) or standard output;
progress messages go to standard error only.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction

from sympy import isprime

from . import characters as ch
from .hecke import (DEFAULT_LEVEL, NORMALIZATION, HeckeError, coset_reps, extract_eigenvalue,
                    hecke_T, normalize_reps, pairwise_distinct)
from .qseries import SeriesError
from .theta import (EVEN_CHARACTERISTICS, G4_FACTORS, ODD_CHARACTERISTICS, ThetaError,
                    g1_factors, make_factor, minimal_trace, product_form, read_factor_file,
                    theta_constant)


class UsageError(Exception):
    """Bad command-line input; maps to exit code 2."""


class VerificationFailure(Exception):
    """A check failed; maps to exit code 1."""


@dataclass
class RunConfig:
    command: str
    form: str = "g4"
    factor_file: str = None
    prec: int = None
    primes: list = field(default_factory=lambda: [3, 5, 7])
    output: str = None
    format: str = "json"
    calibrate_on: list = field(default_factory=lambda: [3, 5])
    calibration_file: str = None
    perturb_rho1_a3: int = 0

    def validate(self):
        for p in self.primes + self.calibrate_on:
            if p == 2 or not isprime(p):
                raise UsageError("primes must be odd primes, got %d" % p)
        if self.form == "custom" and not self.factor_file:
            raise UsageError("--form custom requires --factors FILE")
        if self.prec is not None and self.prec < 0:
            raise UsageError("--prec must be nonnegative")


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _log(msg):
    print(msg, file=sys.stderr, flush=True)


def _factors(cfg, form=None):
    form = form or cfg.form
    if form == "g4":
        return list(G4_FACTORS)
    if form == "g1":
        return list(g1_factors())
    if form == "custom":
        try:
            return read_factor_file(cfg.factor_file)
        except OSError as exc:
            raise UsageError("cannot read factor file: %s" % exc) from None
        except ThetaError as exc:
            raise UsageError("bad factor file %s: %s" % (cfg.factor_file, exc)) from None
    raise UsageError("unknown form %r for this command" % form)


def _required_prec(factors, p):
    return p * (minimal_trace(factors) + 1)


def default_prec(p):
    """Input precision used when --prec is not given (output trace bound 12, or 6 for p > 7)."""
    return p * (12 if p <= 7 else 6)


def _emit(cfg, suffix, text):
    if cfg.output:
        path = "%s%s" % (cfg.output, suffix)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        _log("wrote %s" % path)
    else:
        sys.stdout.write(text)


def _dumps(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _progress(label):
    state = {"last": -1}

    def cb(done, total):
        pct = 100 * done // total
        if pct // 10 != state["last"]:
            state["last"] = pct // 10
            _log("%s: %d/%d cosets" % (label, done, total))
    return cb


def _rep_normalization(p):
    return {"level": DEFAULT_LEVEL, "target": "diag(1,1,%d,%d)" % (p, p),
            "normalization": NORMALIZATION}


def measure(factors, p, prec, label):
    """Run T(p) on a theta product and return (EigenReport, prec used)."""
    need = _required_prec(factors, p)
    if prec < need:
        raise UsageError("precision %d too small for p=%d: need at least %d" % (prec, p, need))
    _log("%s: expanding at prec %d" % (label, prec))
    f = product_form(factors, prec)
    g = hecke_T(f, p, progress=_progress(label))
    return extract_eigenvalue(f, g)


def _ev_str(ev):
    return "" if ev is None else str(ev)


def _rho1(cfg):
    rho = ch.rho1_qexp(200)
    if cfg.perturb_rho1_a3:
        coeffs = list(rho.coefficients)
        coeffs[2] += cfg.perturb_rho1_a3
        rho = replace(rho, coefficients=tuple(coeffs))
    return rho


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_expand(cfg):
    if cfg.prec is None:
        raise UsageError("expand requires --prec")
    factors = _factors(cfg)
    f = product_form(factors, cfg.prec)
    if cfg.format == "json":
        text = f.to_json()
    else:
        rows = [[k.N, k.R, k.M] + [str(c) for c in v.coeffs] for k, v in f.sorted_items()]
        text = _csv(["N", "R", "M", "c0", "c1", "c2", "c3"], rows)
    _emit(cfg, ".series." + cfg.format, text)
    return 0


def cmd_hecke(cfg):
    factors = _factors(cfg)
    for p in cfg.primes:
        prec = cfg.prec if cfg.prec is not None else default_prec(p)
        need = _required_prec(factors, p)
        if prec < need:
            raise UsageError("precision %d too small for p=%d: need at least %d" % (prec, p, need))
    ok = True
    rows = []
    for p in cfg.primes:
        prec = cfg.prec if cfg.prec is not None else default_prec(p)
        rep = measure(factors, p, prec, "%s T(%d)" % (cfg.form, p))
        ok = ok and rep.consistent and rep.count > 0
        obj = {"form": cfg.form, "p": p, "prec": prec}
        obj.update(rep.to_json_obj())
        obj["rep_normalization"] = _rep_normalization(p)
        if cfg.format == "json":
            _emit(cfg, ".hecke_p%d.json" % p, _dumps(obj))
        rows.append([cfg.form, p, prec, _ev_str(rep.eigenvalue), rep.consistent, rep.count])
    if cfg.format == "csv":
        _emit(cfg, ".hecke.csv",
              _csv(["form", "p", "prec", "eigenvalue", "consistent", "witnesses"], rows))
    return 0 if ok else 1


def _load_calibration(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        return ch.Calibration(int(obj["nu"]), tuple(obj["shifts"]), bool(obj["calibrated"]))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError("cannot read calibration file %s: %s" % (path, exc)) from None


def cmd_predict(cfg):
    cal = _load_calibration(cfg.calibration_file) if cfg.calibration_file else ch.DEFAULT_CALIBRATION
    label = "calibrated" if cal.calibrated else "uncalibrated"
    rho = _rho1(cfg)
    forms = cfg.form.split(",")
    rows, objs = [], []
    for form in forms:
        if form not in ch.FORMS:
            raise UsageError("predict supports forms %s" % ", ".join(ch.FORMS))
        for p in cfg.primes:
            pred = ch.predict_eigenvalue(form, p, cal.nu, cal.shifts, rho1=rho)
            ef = ch.euler_factor(form, p, cal, rho1=rho)
            rows.append([form, p, str(pred), label])
            objs.append({"form": form, "p": p, "predicted": str(pred),
                         "euler_factor": ef.to_json_obj(), "status": label})
    if cfg.format == "json":
        _emit(cfg, ".predict.json", _dumps({"calibration": cal.to_json_obj(), "predictions": objs}))
    else:
        _emit(cfg, ".predict.csv", _csv(["form", "p", "predicted", "status"], rows))
    return 0


def cmd_verify(cfg):
    forms = cfg.form.split(",")
    for form in forms:
        if form not in ("g1", "g4"):
            raise UsageError("verify supports forms g1 and g4")
    rho = _rho1(cfg)
    measured = {}

    def get(form, p):
        if (form, p) not in measured:
            prec = cfg.prec if cfg.prec is not None else default_prec(p)
            measured[form, p] = measure(_factors(cfg, form), p, prec, "%s T(%d)" % (form, p))
        return measured[form, p]

    for p in cfg.calibrate_on:
        if _required_prec(G4_FACTORS, p) > (cfg.prec if cfg.prec is not None else default_prec(p)):
            raise UsageError("precision too small for calibration prime %d" % p)
    cal_rows = []
    for p in cfg.calibrate_on:
        rep = get("g4", p)
        if not rep.consistent or rep.eigenvalue is None:
            raise VerificationFailure("g4 is not an eigenform at p=%d; cannot calibrate" % p)
        cal_rows.append(("g4", p, rep.eigenvalue))
    try:
        cal = ch.calibrate_shift(cal_rows, rho1=rho)
    except ch.CharacterError as exc:
        raise VerificationFailure(str(exc)) from None
    _emit(cfg, ".calibration.json", _dumps(cal.to_json_obj()))

    rows, all_ok = [], True
    for form in forms:
        for p in cfg.primes:
            rep = get(form, p)
            pred = ch.predict_eigenvalue(form, p, cal.nu, cal.shifts, rho1=rho)
            match = rep.consistent and rep.eigenvalue is not None and rep.eigenvalue == Fraction(pred)
            all_ok = all_ok and match
            rows.append([form, p, _ev_str(rep.eigenvalue), str(pred), match])
    satake = []
    for p in cfg.primes:
        got = ch.satake_abs("g4", p, cal, rho1=rho)
        want = sorted([p ** 1.5, p ** 1.5, float(p), float(p * p)])
        ok = all(abs(a - b) <= 1e-9 * b for a, b in zip(got, want))
        all_ok = all_ok and ok
        satake.append({"p": p, "abs": [repr(v) for v in got], "match": ok})
    header = ["form", "p", "measured", "predicted", "match"]
    if cfg.format == "json":
        _emit(cfg, ".verify.json", _dumps({
            "calibration": cal.to_json_obj(),
            "rows": [dict(zip(header, r)) for r in rows],
            "satake_g4": satake, "all_match": all_ok}))
    else:
        _emit(cfg, ".verify.csv", _csv(header, rows))
    for r in rows:
        _log("%s p=%d measured=%s predicted=%s %s" % (r[0], r[1], r[2], r[3],
                                                      "MATCH" if r[4] else "MISMATCH"))
    return 0 if all_ok else 1


def cmd_selftest(cfg):
    checks = []

    def check(name, fn):
        try:
            ok = bool(fn())
        except Exception as exc:            # report, do not crash
            _log("%s raised %s: %s" % (name, type(exc).__name__, exc))
            ok = False
        checks.append((name, ok))
        print("%s %s" % ("PASS" if ok else "FAIL", name))

    check("odd characteristics vanish",
          lambda: all(theta_constant(make_factor(m, d), 32).is_zero()
                      for m in ODD_CHARACTERISTICS for d in (1, 2)))
    check("even characteristics are nonzero",
          lambda: all(not theta_constant(make_factor(m, 1), 8).is_zero()
                      for m in EVEN_CHARACTERISTICS))
    check("coset counts 40/156",
          lambda: [len(coset_reps(p)) for p in (3, 5)] == [40, 156])
    check("normalized cosets distinct (p=3)",
          lambda: pairwise_distinct([r.rep.matrix() for r in normalize_reps(coset_reps(3))], 3))
    check("chi_-2 values", lambda: [ch.kronecker_value(ch.CHI_M2, n) for n in (1, 3, 5, 7)]
          == [1, 1, -1, -1])
    check("rho1 a_3 = -4", lambda: ch.rho1_qexp(10).a(3) == -4)
    check("mu calibration p=5", lambda: ch.mu_euler(5, 1).coefficients == (1, 2, 5))
    check("g4 eigenvalue at p=3", lambda: measure(list(G4_FACTORS), 3, 36, "g4 T(3)").eigenvalue
          == ch.predict_eigenvalue("g4", 3))
    return 0 if all(ok for _, ok in checks) else 1


COMMANDS = {"expand": cmd_expand, "hecke": cmd_hecke, "predict": cmd_predict,
            "verify": cmd_verify, "selftest": cmd_selftest}


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers, got %r" % text)


def build_parser():
    ap = argparse.ArgumentParser(prog="siegelhecke",
                                 description="Exact Hecke eigenvalues of theta-product Siegel "
                                             "cusp forms and their predicted Euler data.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--form", default="g4",
                    help="g1, g4 or custom (expand/hecke); g1, g4, F5, F6 (predict); "
                         "comma lists allowed for predict and verify")
    ap.add_argument("--factors", dest="factor_file", help="factor file, lines 'd:a,b,c,d'")
    ap.add_argument("--prec", type=int, help="input trace bound (default: per prime)")
    ap.add_argument("--primes", type=_int_list, default=[3, 5, 7])
    ap.add_argument("--out", dest="output", help="output path prefix (default: stdout)")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--calibrate-on", type=_int_list, default=[3, 5],
                    help="primes used to fit the normalization in verify")
    ap.add_argument("--calibration", dest="calibration_file",
                    help="calibration JSON written by verify (predict)")
    ap.add_argument("--perturb-rho1-a3", type=int, default=0,
                    help="testing aid: add this to a_3 of rho_1 (falsifiability check)")
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        _log("error: %s" % exc)
        return 2
    except (ThetaError, SeriesError, ch.CharacterError) as exc:
        _log("error: %s" % exc)
        return 2
    except VerificationFailure as exc:
        _log("verification failed: %s" % exc)
        return 1
    except HeckeError as exc:
        _log("Hecke computation failed: %s" % exc)
        return 1
    except OSError as exc:
        _log("error: %s" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
