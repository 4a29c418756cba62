"""High-level orchestration shared by the service, the CLI client, and the
fixture harness.  Every function takes the parsed input document (matrix,
prime, group generators) plus options and returns JSON-ready dictionaries
with stable key order, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import charsum, counting, milnor, mw, padic, spectrum as sp
from .errors import BhzetaError, InputError
from .matrixcore import SIDE_A, BHMatrix, SymmetryGroup, span, transpose_group, validate


@dataclass
class RunOptions:
    precision: int | None = None
    nu: int = 1  # field extension degree for zeta/counts
    nu_max: int = 1  # supertrace / point-count range
    backend: str = "padic"  # padic | exact | both
    use_orbits: bool = True
    max_ops: int = counting.DEFAULT_MAX_OPS
    allow_slow: bool = False
    workers: int = 1


def parse_document(doc: dict) -> tuple[BHMatrix, list, int | None]:
    matrix = BHMatrix.from_rows(doc["matrix"], doc.get("prime"))
    gens = doc.get("group_generators") or [[1] * matrix.n]
    prime = doc.get("prime")
    return matrix, [tuple(int(x) for x in g) for g in gens], prime


def group_of(A: BHMatrix, generators) -> SymmetryGroup:
    return span(A, SIDE_A, generators)


def _frac_str(x: Fraction) -> str:
    return str(x)


def auto_precision(labels, p: int, nu: int = 1, use_orbits: bool = True) -> int:
    """Smallest certified reconstruction precision; orbit-aware so that large
    spectra are priced by their largest Galois orbit, not their total degree."""
    live = [lab for lab in labels if lab.is_integral]
    if not live:
        return 6
    if use_orbits:
        fake = [_FakeRecord(lab) for lab in live]
        orbits = sp.galois_orbits(fake)
    else:
        orbits = None
    degrees: dict[int, int] = {}
    if orbits is None:
        for lab in live:
            k = int(lab.total_degree)
            degrees[k] = degrees.get(k, 0) + 1
    else:
        for orbit in orbits:
            k = int(live[orbit[0]].total_degree)
            degrees[k] = max(degrees.get(k, 0), len(orbit))
    return sp.required_precision(degrees, p, nu)


@dataclass
class _FakeRecord:
    label: object
    withheld: bool = False


def st_precision(labels, p: int, nu_max: int) -> int:
    """Enough digits to certify integer supertrace lifts up to nu_max."""
    bound = 2
    for lab in labels:
        if lab.is_integral:
            bound += 2 * p ** math.ceil(int(lab.total_degree) * nu_max / 2)
    N = 1
    while p**N <= 2 * bound:
        N += 1
    return max(N + 2, 6)


def run_validate(doc: dict) -> dict:
    A, gens, p = parse_document(doc)
    rep = validate(A, p, gens)
    return {
        "matrix": [list(r) for r in A.entries],
        "prime": p,
        "invertible": rep.invertible,
        "det": rep.det,
        "det_divides": rep.det_divides,
        "weights": [_frac_str(w) for w in rep.weights],
        "weights_positive": rep.weights_positive,
        "atoms": None
        if rep.atom_decomposition is None
        else [
            {"kind": a.kind, "variables": list(a.variables), "exponents": list(a.exponents)}
            for a in rep.atom_decomposition
        ],
        "calabi_yau": rep.calabi_yau,
        "j_in_G": rep.j_in_G,
        "j_in_GT": rep.j_in_GT,
        "valid": rep.valid,
        "warnings": list(rep.warnings),
    }


def run_spectrum(doc: dict) -> dict:
    A, gens, p = parse_document(doc)
    G = group_of(A, gens)
    spec = milnor.sector_spectrum(A, G)
    GT = transpose_group(A, G)
    rows = []
    for lab in spec.labels:
        rows.append(
            {
                "H": f"H^{{{lab.s},{lab.r}}}",
                "gamma": list(lab.gamma_rep),
                "lambda": list(lab.lam.rep),
                "gamma_frac": [_frac_str(x) for x in lab.gamma_frac],
                "age_lambda": _frac_str(lab.age_lambda),
                "dual_age_gamma": _frac_str(lab.dual_age_gamma),
            }
        )
    hodge = {}
    for (s, r), count in sorted(spec.hodge_numbers().items()):
        hodge[f"{s},{r}"] = count
    return {
        "group_order": G.order,
        "dual_group_order": GT.order,
        "sectors": rows,
        "hodge": hodge,
        "warnings": list(spec.warnings),
    }


def run_supertrace(doc: dict, options: RunOptions | None = None) -> dict:
    options = options or RunOptions()
    A, gens, p = parse_document(doc)
    if p is None:
        raise InputError("prime required (flag or document field)")
    G = group_of(A, gens)
    spec = milnor.sector_spectrum(A, G)
    N = options.precision or st_precision(spec.labels, p, options.nu_max)
    out = {"prime": p, "precision": N, "supertraces": [], "warnings": list(spec.warnings)}
    for nu in range(1, options.nu_max + 1):
        rep = sp.supertrace_report(A, G, p, N, nu=nu, spectrum=spec)
        out["supertraces"].append(
            {
                "nu": nu,
                "lift": rep.lift,
                "rational": rep.rational,
                "digits": rep.value.digits(min(N, 12)),
                "withheld_ages": [_frac_str(x) for x in rep.withheld_ages],
            }
        )
    return out


def build_records(A, G, p, options: RunOptions, spec=None, N=None):
    spec = spec or milnor.sector_spectrum(A, G)
    N = N or options.precision or auto_precision(spec.labels, p, options.nu, options.use_orbits)
    records = sp.eigenvalues(A, G, p, N, spectrum=spec)
    if options.backend in ("exact", "both"):
        table = charsum.build_character_table(p)
        records = [
            r if r.withheld else r.with_exact(charsum.eigenvalue_exact(r.label, A, p, table))
            for r in records
        ]
    return spec, records, N


def run_zeta(doc: dict, options: RunOptions | None = None) -> dict:
    options = options or RunOptions()
    A, gens, p = parse_document(doc)
    if p is None:
        raise InputError("prime required (flag or document field)")
    G = group_of(A, gens)
    spec, records, N = build_records(A, G, p, options)
    zf = sp.zeta(records, p, nu=options.nu, use_orbits=options.use_orbits)
    counts = sp.point_counts(zf, max(options.nu_max, 3))
    weil = run_weil_on(records, zf, A, spec)
    display = {
        str(k): [{"coeffs": list(c), "power": e} for c, e in fs]
        for k, fs in zf.display_factorization().items()
    }
    out = {
        "prime": p,
        "nu": zf.nu,
        "precision": N,
        "backend": options.backend,
        "P": {str(k): list(coeffs) for k, coeffs in sorted(zf.factors.items())},
        "chi": zf.chi,
        "counts": counts,
        "weil": weil,
        "display": display,
        "warnings": list(spec.warnings),
    }
    if options.backend in ("exact", "both"):
        table = charsum.build_character_table(p)
        agree = all(
            r.withheld
            or r.alpha_exact.to_padic(p, min(6, N), table).eq_mod(r.alpha_padic, min(6, N))
            for r in records
        )
        out["backend_agreement"] = agree
    return out


def run_weil_on(records, zf, A, spec) -> dict:
    wr = sp.weil_check(records, zf, A, spec)
    return {
        "chi": wr.chi,
        "pairing_ok": wr.pairing_ok,
        "pairing_violations": list(wr.pairing_violations),
        "valuation_ok": wr.valuation_ok,
        "functional_equation_ok": wr.functional_equation_ok,
        "functional_equation_sign": wr.functional_equation_sign,
        "rh_checked": wr.rh_checked,
        "rh_ok": wr.rh_ok,
        "ok": wr.ok,
    }


def run_weil(doc: dict, options: RunOptions | None = None) -> dict:
    options = options or RunOptions()
    A, gens, p = parse_document(doc)
    G = group_of(A, gens)
    spec, records, N = build_records(A, G, p, options)
    zf = sp.zeta(records, p, use_orbits=options.use_orbits)
    out = run_weil_on(records, zf, A, spec)
    out["prime"] = p
    out["precision"] = N
    return out


def run_count(doc: dict, options: RunOptions | None = None, nu: int = 1, smallcheck: bool = False) -> dict:
    options = options or RunOptions()
    A, gens, p = parse_document(doc)
    if p is None:
        raise InputError("prime required (flag or document field)")
    field = counting.FiniteField(p, nu)
    weights, degree = counting.integer_weights(A)
    res = counting.count_projective(
        A, weights, field, max_ops=options.max_ops, allow_slow=options.allow_slow, workers=options.workers
    )
    out = {
        "prime": p,
        "nu": nu,
        "q": field.q,
        "weights": list(weights),
        "degree": degree,
        "count": res.count,
        "affine_nonzero": res.affine_nonzero,
        "method": res.method,
    }
    if smallcheck:
        chk = counting.count_projective_smallcheck(A, weights, field)
        out["smallcheck"] = chk.count
        out["smallcheck_agrees"] = chk.count == res.count
    return out


def run_mw(doc: dict, options: RunOptions | None = None) -> dict:
    options = options or RunOptions()
    A, gens, p = parse_document(doc)
    if p is None:
        raise InputError("prime required (flag or document field)")
    N = options.precision or 6
    result = mw.mw_point_count(A, p, N)
    G = group_of(A, gens)
    st = sp.supertrace_report(A, G, p, N)
    out = {
        "prime": p,
        "precision": N,
        "mw_count": result.lift,
        "mw_method": result.method,
        "vertical": result.vertical,
        "supertrace": st.lift,
        "agree_mw_st": result.lift == st.lift,
    }
    estimate = counting.estimate_ops(A, counting.FiniteField(p))
    if estimate <= options.max_ops or options.allow_slow:
        bf = counting.count_projective(
            A, field=counting.FiniteField(p), max_ops=options.max_ops, allow_slow=options.allow_slow
        )
        out["brute_force"] = bf.count
        out["agree_all"] = result.lift == st.lift == bf.count
    try:
        rep = mw.cancellation_report(A, p, N)
        out["cancellation"] = {
            "classes": len(rep.classes),
            "pairs": sum(len(c.pairs) for c in rep.classes),
            "all_cancel": rep.ok,
        }
    except BhzetaError as exc:
        out["cancellation"] = {"error": exc.code}
    return out


def spectrum_table_text(doc: dict) -> str:
    data = run_spectrum(doc)
    lines = [f"{'H^{s,r}':<12} {'gamma':<18} {'lambda':<14} gamma A^-1"]
    for row in data["sectors"]:
        lines.append(
            f"{row['H']:<12} {str(tuple(row['gamma'])):<18} "
            f"{str(tuple(row['lambda'])):<14} ({', '.join(row['gamma_frac'])})"
        )
    lines.append("")
    lines.append("hodge numbers: " + ", ".join(f"h^{{{k}}}={v}" for k, v in data["hodge"].items()))
    return "\n".join(lines)
