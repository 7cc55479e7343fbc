"""Acceptance suite: one test per numbered criterion, stated tolerances.

Each test prints a single PASS/FAIL line (visible with -s or in the -v
test report) and asserts the criterion's stated target values verbatim;
failures list every deviating value with a certificate.  Four criteria
fail by design because their stated targets are themselves erroneous;
the README's "known deviations" section carries the analysis.
"""

import random
import time
from fractions import Fraction

from bpx.arith import Mod, kronecker, sieve
from bpx.borcherds import (exact_exponents, fit_congruence, formula_eval,
                           twisted_roundtrip)
from bpx.classpoly import eligibility
from bpx.density import (X0_CURVES, asymptotic_table, charpoly_count,
                         charpoly_table_bruteforce, ec_trace, ec_traces,
                         empirical_table)
from bpx.qseries import GF, QSeries, eisenstein
from bpx.ssforms import (eigenbasis, supersingular_poly,
                         supersingular_poly_bruteforce)


def _report(num, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE C{num:02d} {status}" + (f" - {detail}" if detail else ""))
    return ok


def test_c01_fd_coefficient_regression():
    # the nine (listed: eight) square-index coefficients, exact
    expected = {
        (3, 1): -248, (3, 2): 26572, (3, 3): -4096248,
        (4, 1): 492, (4, 2): 143376, (4, 3): 51180012,
        (7, 1): -4119, (7, 2): 8288256,
    }
    tables = {d: exact_exponents(d, 9) for d in (3, 4, 7)}
    bad = []
    for (d, n), want in sorted(expected.items()):
        got = tables[d][n]
        if got != want:
            bad.append(f"A({n * n},{d}): computed {got}, stated {want}")
    ok = _report(1, not bad, "; ".join(bad))
    assert ok, ("exact exponent regression deviates from the stated list: "
                + "; ".join(bad)
                + "  [the computed A(4,3) = 26752 satisfies the product "
                  "identity: C(249,2) - 26752 = 4124, the q^2 coefficient "
                  "of the cube root of j; 26572 does not]")


def test_c02_congruence_constants():
    bad = []
    F = fit_congruence(4, 11)
    if (F.c0.value, [c.value for c in F.c]) != (6, [9]):
        bad.append(f"(d=4,l=11): got c0={F.c0.value}, c={[c.value for c in F.c]}")
    G = fit_congruence(20, 31)
    got = (G.c0.value, [c.value for c in G.c])
    if got != (2, [14, 9]):
        bad.append(f"(d=20,l=31): got c0={got[0]}, c={got[1]}, stated (2,[14,9])")
    want_f1 = {(2, 2, 0): 22, (1, 2, 2): 1}
    want_f2 = {(2, 2, 0): 19, (1, 2, 2): 1}
    basis = {i: dict(G.basis.monomial_combos[i]) for i in range(G.basis.dim)}
    if basis.get(0) != want_f1 or basis.get(1) != want_f2:
        bad.append(f"(d=20,l=31) eigenforms: got {basis}, stated "
                   "Delta*E4^2*E6^2 + 22 Delta^2*E4^2 and + 19 Delta^2*E4^2")
    ok = _report(2, not bad, "; ".join(bad))
    assert ok, ("congruence constants deviate: " + "; ".join(bad)
                + "  [the stated 22/19 combinations fail T_2 f = a f; the "
                  "actual eigenforms carry 13/7 and the verified fit is "
                  "c = (22, 1)]")


def test_c03_end_to_end_congruence_d4_l11():
    t0 = time.time()
    F = fit_congruence(4, 11, verify_to=300)
    table = exact_exponents(4, 300)
    bad = [n for n in range(1, 301)
           if n % 11 and Mod(table[n], 11) != formula_eval(F, n)]
    ok = _report(3, not bad, f"{time.time() - t0:.1f}s")
    assert ok, f"mismatches at n = {bad}"


def test_c04_trivial_congruences():
    bad = []
    for ell, d in ((5, 3), (7, 4), (13, 7)):
        table = exact_exponents(d, 200)
        for n in range(1, 201):
            if n % ell == 0:
                continue
            if table[n] % ell != 2:
                bad.append((ell, d, n, table[n] % ell))
    ok = _report(4, not bad)
    assert ok, f"A(n^2,d) != 2 mod l at {bad[:10]}"


def test_c05_supersingular_oracle():
    bad = []
    for ell in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        if supersingular_poly(ell) != supersingular_poly_bruteforce(ell):
            bad.append(ell)
    ok = _report(5, not bad)
    assert ok, f"supersingular polynomial mismatch at l = {bad}"


def test_c06_gl2_charpoly_densities():
    bad = []
    for ell in (3, 5, 7, 11):
        table = charpoly_table_bruteforce(ell)
        for a in range(ell):
            for b in range(1, ell):
                if charpoly_count(ell, a, b).count != table.get((a, b), 0):
                    bad.append((ell, a, b))
    # case-count tallies from the remark, l <= 31
    for ell in (5, 7, 11, 13, 17, 19, 23, 29, 31):
        inv4 = pow(4, -1, ell)
        for a in range(ell):
            cases = {-1: 0, 0: 0, 1: 0}
            for b in range(1, ell):
                cases[kronecker((a * a * inv4 - b) % ell, ell)] += 1
            want = ({-1: (ell - 1) // 2, 1: (ell - 1) // 2, 0: 0} if a == 0
                    else {-1: (ell - 1) // 2, 1: (ell - 3) // 2, 0: 1})
            if cases != want:
                bad.append((ell, a, cases))
    ok = _report(6, not bad)
    assert ok, f"GL2 density deviations: {bad[:10]}"


def test_c07_asymptotic_tables():
    bad = []
    tab = asymptotic_table(fit_congruence(4, 11))
    for t in range(11):
        want = (Fraction(119, 1200) if t == 8 else
                Fraction(109, 1200) if t == 10 else Fraction(9, 100))
        if tab.entries.get(t) != want:
            bad.append(f"(4,11) t={t}: {tab.entries.get(t)} != {want}")
    stated = {0: Fraction(991, 29760), 8: Fraction(14399, 446400)}
    for t in (1, 2, 9, 14, 21, 29):
        stated[t] = Fraction(1199, 37200)
    for t in (3, 4, 5, 11, 16, 19, 20, 23, 28):
        stated[t] = Fraction(29, 900)
    for t in (6, 7, 10, 18, 25, 30):
        stated[t] = Fraction(719, 22320)
    for t in (12, 13, 15, 17):
        stated[t] = Fraction(799, 24800)
    for t in (22, 24, 26, 27):
        stated[t] = Fraction(7193, 223200)
    tab31 = asymptotic_table(fit_congruence(20, 31))
    wrong31 = [t for t in range(31) if tab31.entries.get(t) != stated[t]]
    if wrong31:
        bad.append(f"(20,31): {len(wrong31)}/31 entries differ from the stated "
                   f"seven-case list, e.g. t=0: {tab31.entries.get(0)} vs {stated[0]}")
    ok = _report(7, not bad, "; ".join(bad))
    assert ok, ("asymptotic tables deviate: " + "; ".join(bad)
                + "  [the stated seven-case list does not arise from the "
                  "determinant-coupled class-count sum for any constants; "
                  "the computed table was cross-checked against literal "
                  "matrix-pair enumeration]")


def test_c08_empirical_table1():
    rows = {
        10 ** 4: ([.0829, .0928, .0887, .0911, .0862, .0903,
                   .0846, .0960, .1009, .1066, .0797], 0.0015),
        10 ** 6: ([.0899, .0897, .0891, .0915, .0887, .0894,
                   .0893, .0913, .0976, .0920, .0914], 0.0005),
    }
    F = fit_congruence(4, 11)
    bad = []
    t0 = time.time()
    for x, (row, tol) in rows.items():
        tab = empirical_table(F, x)
        for t in range(11):
            dev = abs(tab.ratio(t) - row[t])
            if dev > tol:
                bad.append(f"X={x} t={t}: {tab.ratio(t):.4f} vs {row[t]:.4f}")
    ok = _report(8, not bad, f"{time.time() - t0:.1f}s")
    assert ok, f"empirical densities out of tolerance: {bad}"


def test_c09_table2_reproduction():
    stated = {
        11: {3, 4, 11, 12, 15, 20, 67, 115, 148, 163, 267},
        17: {3, 7, 11, 12, 24, 28, 88, 91, 163, 267, 403},
        19: {4, 7, 11, 19, 20, 28, 35, 43, 163, 187, 235, 427},
    }
    t0 = time.time()
    certificates = []
    for ell, want in stated.items():
        dmax = max(want)
        got = set()
        for d in range(3, dmax + 1):
            if d % 4 in (0, 3) and eligibility(d, ell).divides:
                got.add(d)
        if got != want:
            from bpx.classpoly import hilbert_class_poly
            s = supersingular_poly(ell)
            for d in sorted(got ^ want):
                side = "extra" if d in got else "missing"
                hmod = hilbert_class_poly(d).product_mod(ell)
                certificates.append(
                    f"l={ell} {side} d={d}: H_{d} mod {ell} = [{hmod}], "
                    f"s_{ell} = [{s}]")
    ok = _report(9, not certificates, f"{time.time() - t0:.1f}s "
                 + "; ".join(certificates))
    assert ok, ("divisibility scan differs from the stated lists; "
                "certificates: " + " | ".join(certificates)
                + "  [each extra d was end-to-end verified: its fitted "
                  "congruence reproduces the exact exponents]")


def test_c10_property_suites():
    t0 = time.time()
    bad = []
    # Eisenstein congruences to 500 terms
    for ell in (5, 7, 11, 13, 17, 19, 23, 29, 31):
        ring = GF(ell)
        if eisenstein(ell - 1, 500, ring) != QSeries.one(ring, 500):
            bad.append(f"E_(l-1) != 1 mod {ell}")
        if eisenstein(ell + 1, 500, ring) != eisenstein(2, 500, ring):
            bad.append(f"E_(l+1) != E_2 mod {ell}")
    # convolution-inverse round trips, 50 random sequences per D
    rng = random.Random(0xB0C4)
    for D in (5, 8, 13):
        for _ in range(50):
            seq = [rng.randint(-100, 100) for _ in range(64)]
            if twisted_roundtrip(D, seq) != seq:
                bad.append(f"roundtrip failed for D={D}")
                break
    # eigenform coefficients vs curve traces mod l, p < 1000
    for ell in (11, 17, 19):
        eb = eigenbasis(ell, order=1000)
        curve = X0_CURVES[ell]
        for p in sieve(1000).primes:
            if p == ell:
                continue
            if eb.coefficient(0, p).value != ec_trace(curve, p) % ell:
                bad.append(f"trace mismatch l={ell} p={p}")
    # dual-method trace agreement on the overlap band, and the Hasse bound
    curve = X0_CURVES[11]
    band = [p for p in sieve(30000).primes if 10000 < p][:100]
    naive = ec_traces(curve, band, naive_limit=10 ** 9)
    bsgs = ec_traces(curve, band, naive_limit=2)
    if naive != bsgs:
        bad.append("naive/BSGS disagreement in the overlap band")
    for p, t in zip(band, naive):
        if t * t > 4 * p:
            bad.append(f"Hasse bound violated at {p}")
    ok = _report(10, not bad, f"{time.time() - t0:.1f}s")
    assert ok, f"property failures: {bad[:10]}"
