"""Regenerate the packaged fixture documents (development helper).

Run from the repository root:  python3 tools_make_fixtures.py
"""

import json
from pathlib import Path

OUT = Path(__file__).parent / "src" / "bhzeta" / "fixtures"

J3 = [[1, 1, 1]]
J4 = [[1, 1, 1, 1]]
J5 = [[1, 1, 1, 1, 1]]


def diag(*a):
    n = len(a)
    return [[a[i] if i == j else 0 for j in range(n)] for i in range(n)]


def fx(id_, matrix, gens, provenance, expected, status="assert", tags=("fast",), primes=None):
    return {
        "schema_version": 1,
        "id": id_,
        "provenance": provenance,
        "status": status,
        "tags": list(tags),
        "matrix": matrix,
        "group_generators": gens,
        "primes": primes or [],
        "expected": expected,
    }


def cp(c, e=0):
    return [c, e]


FIXTURES = []

# ---- worked cubic examples ----
FIXTURES.append(
    fx(
        "cubic-chain-223",
        [[2, 1, 0], [0, 2, 1], [0, 0, 3]],
        J3,
        "worked cubic curve example (det 12); trace table with four sectors",
        {
            "validate": {"det": 12, "det_divides": {"7": False, "13": True}, "calabi_yau": True},
            "sector_count": 4,
            "counts": {"7": 8, "13": 20},
            "supertrace": {"13": 20},
            "supertrace_digits": {"7": {"digits": [0, 0, 6, 1, 5, 5], "rational": False, "precision": 6}},
            "zeta": {
                "13": {
                    "1": [{"power": 1, "coeffs": [cp(1), cp(6), cp(1, 1)]}],
                    "0": [{"power": 1, "coeffs": [cp(1), cp(-1)]}],
                    "2": [{"power": 1, "coeffs": [cp(1), cp(-1, 1)]}],
                }
            },
            "mw_tri_oracle": {"primes": [7, 13]},
        },
        primes=[7, 13],
    )
)

FIXTURES.append(
    fx(
        "cubic-chain-2223-non-cy",
        [[2, 1, 0, 0], [0, 2, 1, 0], [0, 0, 2, 1], [0, 0, 0, 3]],
        J4,
        "non-Calabi-Yau cubic surface: integer-age sectors give N_partial, difference #P^2",
        {
            "validate": {"det": 24, "det_divides": {"73": True}, "calabi_yau": False, "j_in_GT": False},
            "sector_count": 8,
            "n_partial": {"73": {"partial": 438, "true": 5841, "difference": 5403}},
        },
        primes=[73],
    )
)

# ---- the 14 weighted diagonal K3 surfaces ----
K3S = [
    ("k3-m42", diag(2, 3, 7, 42), 3529,
     [({"power": 10, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(-4675), cp(13699, 1), cp(-16339, 2), cp(26774, 3),
                               cp(-25606, 4), cp(33125, 5), cp(-25606, 6), cp(26774, 7),
                               cp(-16339, 8), cp(13699, 9), cp(-4675, 10), cp(1, 12)]})]),
    ("k3-m30", diag(2, 3, 10, 15), 1801,
     [({"power": 14, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(-1873), cp(4068, 1), cp(-5981, 2), cp(4595, 3),
                               cp(-5981, 4), cp(4068, 5), cp(-1873, 6), cp(1, 8)]})]),
    ("k3-m24", diag(2, 3, 8, 24), 1153,
     [({"power": 10, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 2, "coeffs": [cp(1), cp(0), cp(1, 2)]}),
      ({"power": 1, "coeffs": [cp(1), cp(-2912), cp(2080, 1), cp(2464, 2), cp(-5246, 3),
                               cp(2464, 4), cp(2080, 5), cp(-2912, 6), cp(1, 8)]})]),
    ("k3-m20", diag(2, 4, 5, 20), 1601,
     [({"power": 14, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(6232), cp(13148, 1), cp(19304, 2), cp(21830, 3),
                               cp(19304, 4), cp(13148, 5), cp(6232, 6), cp(1, 8)]})]),
    ("k3-m18", diag(2, 3, 9, 18), 2917,
     [({"power": 16, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(4530), cp(987, 1), cp(-1316, 2), cp(987, 3),
                               cp(4530, 4), cp(1, 6)]})]),
    ("k3-m12-2-3-12-12", diag(2, 3, 12, 12), 2593,
     [({"power": 6, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 8, "coeffs": [cp(1), cp(1, 1)]}),
      ({"power": 2, "coeffs": [cp(1), cp(1, 1), cp(1, 2)]}),
      ({"power": 1, "coeffs": [cp(1), cp(850), cp(-3405, 1), cp(850, 2), cp(1, 4)]})]),
    ("k3-m12-2-4-6-12", diag(2, 4, 6, 12), 577,
     [({"power": 18, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(92), cp(966, 1), cp(92, 2), cp(1, 4)]})]),
    ("k3-m12-3-3-4-12", diag(3, 3, 4, 12), 433,
     [({"power": 18, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(68), cp(294, 1), cp(68, 2), cp(1, 4)]})]),
    ("k3-m12-3-4-4-6", diag(3, 4, 4, 6), 577,
     [({"power": 18, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(92), cp(966, 1), cp(92, 2), cp(1, 4)]})]),
    ("k3-m10", diag(2, 5, 5, 10), 3001,
     [({"power": 10, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(-9799), cp(14001, 1), cp(-9799, 2), cp(1, 4)]}),
      ({"power": 2, "coeffs": [cp(1), cp(1, 1), cp(1, 2), cp(1, 3), cp(1, 4)]})]),
    ("k3-m8", diag(2, 4, 8, 8), 7681,
     [({"power": 4, "coeffs": [cp(1), cp(1, 1)]}),
      ({"power": 14, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(-4300), cp(-5466, 1), cp(-4300, 2), cp(1, 4)]})]),
    ("k3-m6-3-3-6-6", diag(3, 3, 6, 6), 1297,
     [({"power": 16, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(478), cp(1, 2)]}),
      ({"power": 2, "coeffs": [cp(1), cp(1, 1), cp(1, 2)]})]),
    ("k3-m6-2-6-6-6", diag(2, 6, 6, 6), 433,
     [({"power": 20, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(862), cp(1, 2)]})]),
    ("k3-m4-fermat-quartic", diag(4, 4, 4, 4), 257,
     [({"power": 20, "coeffs": [cp(1), cp(-1, 1)]}),
      ({"power": 1, "coeffs": [cp(1), cp(510), cp(1, 2)]})]),
]
for id_, matrix, p, factors in K3S:
    FIXTURES.append(
        fx(
            id_,
            matrix,
            J4,
            f"weighted diagonal K3 middle cohomology polynomial at p={p}",
            {
                "sector_count": 24,
                "hodge": {"1,1": 20},
                "zeta": {str(p): {"2": factors,
                                   "0": [{"power": 1, "coeffs": [cp(1), cp(-1)]}],
                                   "4": [{"power": 1, "coeffs": [cp(1), cp(-1, 2)]}]}},
            },
            primes=[p],
        )
    )

# ---- deformed diagonal surfaces ----
FIXTURES.append(
    fx(
        "deformed-diagonal-5-15-3-2",
        [[5, 0, 0, 0], [0, 15, 0, 0], [0, 0, 3, 0], [1, 0, 0, 2]],
        J4,
        "deformed diagonal K3 over three fields incl. the quadratic extension",
        {
            "sector_count": 24,
            "hodge": {"1,1": 20},
            "zeta": {
                "1801": {
                    "2": [{"power": 14, "coeffs": [cp(1), cp(-1, 1)]},
                          {"power": 1, "coeffs": [cp(1), cp(-1873), cp(4068, 1), cp(-5981, 2), cp(4595, 3),
                                                  cp(-5981, 4), cp(4068, 5), cp(-1873, 6), cp(1, 8)]}],
                },
                "2251": {
                    "2": [{"power": 10, "coeffs": [cp(1), cp(-1, 1)]},
                          {"power": 4, "coeffs": [cp(1), cp(1, 1)]},
                          {"power": 1, "coeffs": [cp(1), cp(2323), cp(-732, 1), cp(1181, 2), cp(4595, 3),
                                                  cp(1181, 4), cp(-732, 5), cp(2323, 6), cp(1, 8)]}],
                },
                "2251^2": {
                    "2": [{"power": 14, "coeffs": [cp(1), cp(-1, 1)]},
                          {"power": 1, "coeffs": [cp(1), cp(-8691793), cp(15735588, 1), cp(-16904231, 2),
                                                  cp(18737495, 3), cp(-16904231, 4), cp(15735588, 5),
                                                  cp(-8691793, 6), cp(1, 8)]}],
                },
            },
        },
        primes=[1801, 2251],
    )
)
FIXTURES.append(
    fx(
        "deformed-diagonal-10-10-2-3",
        [[10, 0, 0, 0], [0, 10, 0, 0], [0, 0, 2, 0], [1, 0, 0, 3]],
        J4,
        "deformed diagonal K3 at p=601",
        {
            "sector_count": 24,
            "zeta": {
                "601": {
                    "2": [{"power": 6, "coeffs": [cp(1), cp(-1, 1)]},
                          {"power": 4, "coeffs": [cp(1), cp(-1, 1), cp(1, 2)]},
                          {"power": 1, "coeffs": [cp(1), cp(1532), cp(2698, 1), cp(3704, 2), cp(3955, 3),
                                                  cp(3704, 4), cp(2698, 5), cp(1532, 6), cp(1, 8)]}],
                }
            },
        },
        primes=[601],
    )
)

# ---- L2L2 ----
FIXTURES.append(
    fx(
        "l2l2",
        [[3, 1, 0, 0], [1, 3, 0, 0], [0, 0, 3, 1], [0, 0, 1, 3]],
        J4,
        "double-loop quartic K3: point counts and middle quadratics",
        {
            "validate": {"det": 64, "det_divides": {"193": True, "281": False}},
            "sector_count": 24,
            "hodge": {"1,1": 20},
            "counts": {"193": 40920, "257": 70680, "449": 209880, "577": 343320, "641": 424920},
            "supertrace": {"193": 40920, "257": 70680, "449": 209880, "577": 343320, "641": 424920},
            "zeta": {
                "193": {"2": [{"power": 20, "coeffs": [cp(1), cp(-1, 1)]},
                               {"power": 1, "coeffs": [cp(1), cp(190), cp(1, 2)]}]},
                "281": {"2": [{"power": 20, "coeffs": [cp(1), cp(-1, 1)]},
                               {"power": 1, "coeffs": [cp(1), cp(462), cp(1, 2)]}]},
            },
        },
        primes=[193, 257, 449, 577, 641, 281],
    )
)

# ---- chain(3,3,3,4) ----
FIXTURES.append(
    fx(
        "chain-3334",
        [[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 4]],
        J4,
        "non-diagonal quartic K3 chain; integer supertrace at 109, diagnostic at 5",
        {
            "validate": {"det": 108, "det_divides": {"109": True, "5": False}},
            "sector_count": 24,
            "counts": {"109": 12147},
            "supertrace": {"109": 12147},
            "supertrace_digits": {"5": {"digits": [4, 2, 4, 4], "rational": False, "precision": 6}},
        },
        primes=[109, 5],
    )
)

# ---- Fermat quintic threefold ----
QUINTIC_ROWS = {
    "37501": {"a1": -8414879, "b1": 1287051631, "c": 271, "d": 93331,
              "counts": [52740499948675,
                         2781359284579565153342704675,
                         146684977590415830796619713088162291370925]},
    "62501": {"a1": 30690371, "b1": 9257997381, "c": 71, "d": 99981,
              "counts": [244156502943925,
                         59610367065473834056333248175,
                         14554010838275253898527781005005357802359425]},
    "112501": {"a1": 17212621, "b1": -915109619, "c": -479, "d": 278581,
               "counts": [1423876073488675,
                          2027394654052389497109812802175,
                          2886738507011079685634568411080155451821512175]},
    "118751": {"a1": 11436371, "b1": -14628025869, "c": 521, "d": 275331,
               "counts": [1674620058737425,
                          2804294711853468324003533172175,
                          4696079921757156471284481243293773424762344675]},
}
FIXTURES.append(
    fx(
        "quintic-37501",
        diag(5, 5, 5, 5, 5),
        J5,
        "Fermat quintic threefold quartic factors and point counts, first admissible prime",
        {
            "sector_count": 208,
            "hodge": {"1,2": 101},
            "quintic_quartets": {"37501": QUINTIC_ROWS["37501"]},
        },
        primes=[37501],
    )
)
for p in ("62501", "112501", "118751"):
    FIXTURES.append(
        fx(
            f"quintic-{p}",
            diag(5, 5, 5, 5, 5),
            J5,
            f"Fermat quintic threefold at p={p}",
            {"quintic_quartets": {p: QUINTIC_ROWS[p]}},
            tags=("slow",),
            primes=[int(p)],
        )
    )
FIXTURES.append(
    fx(
        "quintic-rho1-small",
        diag(5, 5, 5, 5, 5),
        J5,
        "quintic at small rho=1 primes outside det | p-1: supertrace equals brute force",
        {"supertrace_equals_count": {"primes": [11, 31]}},
        primes=[11, 31],
    )
)

# ---- Greene-Plesser quotients ----
FIXTURES.append(
    fx(
        "greene-plesser-125",
        diag(5, 5, 5, 5, 5),
        [[1, 1, 1, 1, 1], [0, 1, 2, 3, 4], [0, 1, 1, 4, 4]],
        "order-125 quintic quotient: chi=-8, numerator R_1 [R_A(pt)^2]^10",
        {
            "sector_count": 80,
            "hodge": {"1,1": 17, "2,1": 21},
            "gp_shape": {"37501": {"chi": -8, "numerator_degree": 44, "pole_order": 17,
                                    "quartet_count": 10, "norm_exponent": "3/2"}},
            "diagnostic_quartets": {"a1": -89, "b1": 351, "c": 1, "d": -9,
                                     "note": "prime unspecified in the source; compare only if reproduced"},
        },
        primes=[37501],
    )
)
FIXTURES.append(
    fx(
        "greene-plesser-25",
        diag(5, 5, 5, 5, 5),
        [[1, 1, 1, 1, 1], [0, 4, 1, 1, 4]],
        "order-25 mirror quotient: chi=+8, numerator R_1 [R_A(pt)^2]^8",
        {
            "sector_count": 80,
            "hodge": {"1,1": 21, "2,1": 17},
            "gp_shape": {"37501": {"chi": 8, "numerator_degree": 36, "pole_order": 21,
                                    "quartet_count": 8, "norm_exponent": "3/2"}},
            "diagnostic_quartets": {"a1": -89, "b1": 351, "c": 1, "d": -9,
                                     "note": "prime unspecified in the source; compare only if reproduced"},
        },
        primes=[37501],
    )
)

# ---- Jacobi sum table (diagnostic: printed normalization unresolved) ----
FIXTURES.append(
    fx(
        "jacobi-table-m30",
        diag(2, 3, 10, 15),
        J4,
        "printed Jacobi sums for the m=30 K3 at p=1801 (a+bi normalization unknown)",
        {
            "jacobi_table": {
                "1801": [
                    {"a": ["1/2", "1/3", "1/10", "1/15"], "printed": [1775, -307]},
                    {"a": ["1/2", "1/3", "3/10", "13/15"], "printed": [-215, 1788]},
                    {"a": ["1/2", "1/3", "1/2", "2/3"], "printed": "p"},
                    {"a": ["1/2", "1/3", "7/10", "7/15"], "printed": [-706, -1657]},
                    {"a": ["1/2", "1/3", "9/10", "4/15"], "printed": [83, 1799]},
                    {"a": ["1/2", "2/3", "1/10", "11/15"], "printed": [83, -1799]},
                    {"a": ["1/2", "2/3", "3/10", "8/15"], "printed": [-706, 1657]},
                    {"a": ["1/2", "2/3", "1/2", "1/3"], "printed": "p"},
                    {"a": ["1/2", "2/3", "7/10", "2/15"], "printed": [-215, -1788]},
                    {"a": ["1/2", "2/3", "9/10", "14/15"], "printed": [1775, 307]},
                ]
            }
        },
        status="diagnostic",
        primes=[1801],
    )
)

# ---- eigenvalue digit prefixes (m=30 table) ----
FIXTURES.append(
    fx(
        "m30-eigenvalue-digits",
        diag(2, 3, 10, 15),
        J4,
        "per-sector eigenvalue digit expansions for the m=30 K3 at p=1801",
        {
            "eigenvalue_digits": {
                "1801": [
                    {"v": ["1/2", "1/3", "1/10", "1/15"], "digits": [72, 845, 1550, 721]},
                    {"v": ["1/2", "1/3", "3/10", "13/15"], "digits": [0, 1416, 391, 37]},
                    {"v": ["1/2", "1/3", "7/10", "7/15"], "digits": [0, 1081, 438, 783]},
                    {"v": ["1/2", "1/3", "9/10", "4/15"], "digits": [0, 409, 1590, 1437]},
                    {"v": ["1/2", "2/3", "1/10", "11/15"], "digits": [0, 1026, 1383, 580]},
                    {"v": ["1/2", "2/3", "3/10", "8/15"], "digits": [0, 903, 410, 194]},
                    {"v": ["1/2", "2/3", "7/10", "2/15"], "digits": [0, 1525, 1463, 303]},
                    {"v": ["1/2", "2/3", "9/10", "14/15"], "digits": [0, 0, 1776, 1343, 473]},
                ]
            }
        },
        primes=[1801],
    )
)

# ---- Monsky-Washnitzer suite ----
FIXTURES.append(
    fx(
        "mw-lemma-identity",
        [[1]],
        [[1]],
        "coordinate-wise Gauss-sum series identity at three primes, precision 8",
        {"lemma": {"primes": [7, 13, 31], "precision": 8}},
    )
)
FIXTURES.append(
    fx(
        "mw-fermat-tri-oracle",
        diag(3, 3, 3),
        J3,
        "trace formula = supertrace = brute force for Fermat cubic/quartic, admissible p <= 100",
        {
            "mw_tri_oracle": {
                "cubic_primes": [7, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97],
                "quartic_primes": [5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97],
            }
        },
    )
)
FIXTURES.append(
    fx(
        "mw-cancellation-quartic",
        diag(4, 4, 4, 4),
        J4,
        "cancellation pair tables for the Fermat quartic at p=13",
        {
            "cancellation": {
                "13": {
                    "pair_counts": {"1/4,3/4,*,*": 8, "1/2,3/4,3/4,*": 8},
                    "residual_zero": True,
                }
            }
        },
    )
)
FIXTURES.append(
    fx(
        "mw-cancellation-3chain",
        [[2, 1, 0], [0, 2, 1], [0, 0, 3]],
        J3,
        "cancellation pair tables for the worked 3-chain at p=13",
        {
            "cancellation": {
                "13": {
                    "block_pairs": {"vertices": 4, "(0,1,2) + t e A": 4,
                                     "S^{1,3} partials": 2, "S^{1,2} partials": 2},
                    "residual_zero": True,
                }
            }
        },
    )
)

OUT.mkdir(parents=True, exist_ok=True)
for fixture in FIXTURES:
    path = OUT / f"{fixture['id']}.json"
    path.write_text(json.dumps(fixture, indent=1, sort_keys=True) + "\n")
print(f"wrote {len(FIXTURES)} fixtures to {OUT}")
