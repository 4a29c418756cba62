"""Acceptance criteria: one test per criterion, each printing a PASS line.

Run with ``pytest -v tests/test_acceptance.py`` (the three extra quintic
primes are opt-in: ``-m slow``).  Every expected value is pinned here or in
the bundled fixture documents; tolerances are exact-integer or stated digit
prefixes throughout.
"""

import time
from fractions import Fraction as F

import pytest

from bhzeta import charsum, counting, fixtures, matrixcore as mc, milnor, mw, spectrum as sp
from bhzeta.counting import FiniteField
from bhzeta.matrixcore import BHMatrix, SIDE_A


def report(criterion: str, detail: str):
    print(f"[acceptance] PASS {criterion}: {detail}")


def J_group(A):
    return mc.span(A, SIDE_A, [tuple(1 for _ in range(A.n))])


def run_fixture(fid: str):
    rep = fixtures.run(fixtures.load(fid))
    failed = [o for o in rep.outcomes if o.status == "fail"]
    assert not failed, f"{fid}: " + "; ".join(f"{o.name} ({o.detail})" for o in failed)
    return rep


CHAIN_223 = BHMatrix.from_rows([[2, 1, 0], [0, 2, 1], [0, 0, 3]])


def test_criterion_01_cubic_chain_example():
    t0 = time.time()
    G = J_group(CHAIN_223)
    st = sp.supertrace_report(CHAIN_223, G, 13, 8)
    assert st.lift == 20 and st.rational
    recs = sp.eigenvalues(CHAIN_223, G, 13, 8)
    zf = sp.zeta(recs, 13)
    assert zf.factors == {0: (1, -1), 1: (1, 6, 13), 2: (1, -13)}
    assert counting.count_projective(CHAIN_223, field=FiniteField(13)).count == 20
    elapsed = time.time() - t0
    assert elapsed < 1.0, f"criterion requires < 1 s, took {elapsed:.2f}"
    st7 = sp.supertrace_report(CHAIN_223, G, 7, 6)
    assert st7.value.digits(6) == [0, 0, 6, 1, 5, 5] and not st7.rational
    assert counting.count_projective(CHAIN_223, field=FiniteField(7)).count == 8
    report("1", f"cubic: ST_13=20, zeta=(1+6t+13t^2)/((1-t)(1-13t)), p=7 diagnostic ({elapsed:.2f}s)")


def test_criterion_02_non_cy_partial_count():
    t0 = time.time()
    A = BHMatrix.from_rows([[2, 1, 0, 0], [0, 2, 1, 0], [0, 0, 2, 1], [0, 0, 0, 3]])
    recs = sp.eigenvalues(A, J_group(A), 73, 8)
    partial = sp.supertrace(recs).lift_centered()
    true_count = counting.count_projective(A, field=FiniteField(73)).count
    assert partial == 438 and true_count == 5841
    assert true_count - partial == 5403 == 1 + 73 + 73**2
    elapsed = time.time() - t0
    assert elapsed < 10.0
    report("2", f"non-CY cubic: 5841 - 438 = #P^2(F_73) ({elapsed:.2f}s)")


K3_IDS = [
    "k3-m42", "k3-m30", "k3-m24", "k3-m20", "k3-m18",
    "k3-m12-2-3-12-12", "k3-m12-2-4-6-12", "k3-m12-3-3-4-12", "k3-m12-3-4-4-6",
    "k3-m10", "k3-m8", "k3-m6-3-3-6-6", "k3-m6-2-6-6-6", "k3-m4-fermat-quartic",
]


@pytest.mark.parametrize("fid", K3_IDS)
def test_criterion_03_k3_table(fid):
    t0 = time.time()
    run_fixture(fid)
    elapsed = time.time() - t0
    assert elapsed < 60.0
    report("3", f"{fid}: P_2 coefficient-exact ({elapsed:.1f}s)")


def test_criterion_04_m30_eigenvalue_digits():
    run_fixture("m30-eigenvalue-digits")
    report("4", "all eight printed digit prefixes match mod p^4")


def test_criterion_05_deformed_diagonals():
    run_fixture("deformed-diagonal-5-15-3-2")
    run_fixture("deformed-diagonal-10-10-2-3")
    report("5", "zeta over F_1801, F_2251, F_2251^2 (nu=2 squaring) and p=601 exact")


def test_criterion_06_l2l2():
    t0 = time.time()
    run_fixture("l2l2")
    elapsed = time.time() - t0
    assert elapsed < 900, "criterion allows 15 minutes"
    report("6", f"five point counts + quadratics at 193/281 ({elapsed:.1f}s)")


def test_criterion_07_chain_3334():
    run_fixture("chain-3334")
    report("7", "ST_109 = 12147 = brute force; 5-adic prefix 4+2*5+4*5^2+4*5^3 non-rational")


def test_criterion_08_quintic():
    t0 = time.time()
    run_fixture("quintic-37501")
    elapsed = time.time() - t0
    # exact-backend reproduction of the same quartets (mandatory surrogate
    # plus the direct check; both backends are feasible here)
    A = BHMatrix.from_rows([[5 if i == j else 0 for j in range(5)] for i in range(5)])
    p = 37501
    G = J_group(A)
    spec = milnor.sector_spectrum(A, G)
    recs = sp.eigenvalues(A, G, p, 12, spectrum=spec)
    table = charsum.build_character_table(p)
    t1 = time.time()
    orbits = sp.galois_orbits(recs)
    r1 = ra = None
    for orbit in orbits:
        if int(recs[orbit[0]].total_degree) != 3:
            continue
        vals = [charsum.eigenvalue_exact(recs[i].label, A, p, table) for i in orbit]
        poly = _exact_quartic(vals)
        diagonal = all(f == recs[orbit[0]].label.gamma_frac[0] for f in recs[orbit[0]].label.gamma_frac)
        if diagonal:
            r1 = poly
        elif ra is None:
            ra = poly
        else:
            assert poly == ra
    assert r1 == (1, -8414879, 1287051631 * p, -8414879 * p**3, p**6)
    assert ra == (1, 271 * p, 93331 * p**2, 271 * p**4, p**6)
    exact_time = time.time() - t1
    report("8", f"quintic p=37501: padic route {elapsed:.1f}s, exact quartets {exact_time:.1f}s")


def _exact_quartic(vals):
    coeffs = [charsum.CyclotomicInt.from_int(1, vals[0].order)]
    for v in vals:
        coeffs = [c if i < len(coeffs) else charsum.CyclotomicInt.zero(v.order)
                  for i, c in enumerate(coeffs + [charsum.CyclotomicInt.zero(v.order)])]
        new = list(coeffs)
        for j in range(len(coeffs) - 1, 0, -1):
            new[j] = coeffs[j] - coeffs[j - 1] * v
        coeffs = new
    out = []
    for c in coeffs:
        as_int = c.as_int()
        assert as_int is not None, "orbit product must be rational"
        out.append(as_int)
    return tuple(out)


@pytest.mark.slow
@pytest.mark.parametrize("fid", ["quintic-62501", "quintic-112501", "quintic-118751"])
def test_criterion_08_quintic_extra_primes(fid):
    t0 = time.time()
    run_fixture(fid)
    report("8+", f"{fid} quartets and counts ({time.time() - t0:.1f}s)")


def test_criterion_08_backend_agreement_surrogate():
    # mandatory surrogate: the two backends agree on fixtures with p <= 3001
    cases = [
        (CHAIN_223, 13),
        (BHMatrix.from_rows([[3, 1, 0, 0], [1, 3, 0, 0], [0, 0, 3, 1], [0, 0, 1, 3]]), 193),
        (BHMatrix.from_rows([[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 10, 0], [0, 0, 0, 15]]), 1801),
        (BHMatrix.from_rows([[2, 0, 0, 0], [0, 5, 0, 0], [0, 0, 5, 0], [0, 0, 0, 10]]), 3001),
        (BHMatrix.from_rows([[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 4]]), 109),
    ]
    checked = 0
    for A, p in cases:
        G = J_group(A)
        recs = sp.eigenvalues(A, G, p, 6)
        table = charsum.build_character_table(p)
        for r in recs:
            exact = charsum.eigenvalue_exact(r.label, A, p, table)
            assert exact.to_padic(p, 6, table).eq_mod(r.alpha_padic, 6), (A, p, r.label)
            checked += 1
    report("8s", f"cross-backend agreement on {checked} sectors at p <= 3001")


def test_criterion_09_greene_plesser():
    run_fixture("greene-plesser-125")
    run_fixture("greene-plesser-25")
    report("9", "shapes R_1 [R_A]^10 vs ^8, poles 17 vs 21, chi = -8/+8, RH on all roots")


THEOREM_FIXTURES = [
    (CHAIN_223, [[1, 1, 1]], 13),
    (BHMatrix.from_rows([[4 if i == j else 0 for j in range(4)] for i in range(4)]), [[1, 1, 1, 1]], 257),
    (BHMatrix.from_rows([[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 10, 0], [0, 0, 0, 15]]), [[1, 1, 1, 1]], 1801),
    (BHMatrix.from_rows([[3, 1, 0, 0], [1, 3, 0, 0], [0, 0, 3, 1], [0, 0, 1, 3]]), [[1, 1, 1, 1]], 193),
    (BHMatrix.from_rows([[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 4]]), [[1, 1, 1, 1]], 109),
    (BHMatrix.from_rows([[5, 0, 0, 0], [0, 15, 0, 0], [0, 0, 3, 0], [1, 0, 0, 2]]), [[1, 1, 1, 1]], 2251),
    (BHMatrix.from_rows([[5 if i == j else 0 for j in range(5)] for i in range(5)]), [[1, 1, 1, 1, 1]], 37501),
    (BHMatrix.from_rows([[5 if i == j else 0 for j in range(5)] for i in range(5)]),
     [[1, 1, 1, 1, 1], [0, 1, 2, 3, 4], [0, 1, 1, 4, 4]], 37501),
]


@pytest.mark.parametrize("A,gens,p", THEOREM_FIXTURES)
def test_criterion_10_weil_property_suite(A, gens, p):
    G = mc.span(A, SIDE_A, gens)
    spec = milnor.sector_spectrum(A, G)
    n = A.n
    N = 12 if A.n == 5 else sp.required_precision({k: 24 for k in range(2 * n - 3)}, p)
    recs = sp.eigenvalues(A, G, p, N, spectrum=spec)
    zf = sp.zeta(recs, p)
    wr = sp.weil_check(recs, zf, A, spec)
    assert wr.pairing_ok and not wr.pairing_violations, wr.pairing_violations
    assert wr.valuation_ok
    assert wr.functional_equation_ok
    # coefficient stability under N -> N+2
    recs2 = sp.eigenvalues(A, G, p, N + 2, spectrum=spec)
    assert sp.zeta(recs2, p).factors == zf.factors
    report("10", f"{A.n}x{A.n} at p={p}: pairing, functional equation, stability")


def test_criterion_11_section7_suite():
    t0 = time.time()
    run_fixture("mw-lemma-identity")
    run_fixture("mw-fermat-tri-oracle")
    run_fixture("mw-cancellation-quartic")
    run_fixture("mw-cancellation-3chain")
    report("11", f"Lemma identity (7,13,31@N=8), tri-oracle n=3,4 p<=100, Z=0 ({time.time() - t0:.0f}s)")


def test_diagnostic_fixtures_never_fail():
    for fid in ("jacobi-table-m30",):
        rep = fixtures.run(fixtures.load(fid))
        assert rep.passed
        assert any(o.status == "diagnostic" for o in rep.outcomes)
