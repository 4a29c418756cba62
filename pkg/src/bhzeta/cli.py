"""Batch command-line client.

The CLI is a thin client of the service API: by default it mounts the app
in-process over an ASGI transport (no running server needed) and with
``--server URL`` it talks to a remote instance instead.  Exit codes:
0 success / agreement, 1 assertion mismatch, 2 usage error.
"""

from __future__ import annotations

import json
import os
import sys
from importlib import resources
from pathlib import Path

import click
import httpx

from . import counting


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


def _load_document(path: str) -> dict:
    candidate = Path(path)
    if not candidate.exists():
        # allow fixture-relative references like fixtures/k3-m30.json
        name = Path(path).name
        packaged = resources.files("bhzeta") / "fixtures" / name
        if packaged.is_file():
            return json.loads(packaged.read_text())
        raise click.UsageError(f"input file {path} not found")
    return json.loads(candidate.read_text())


def _emit(ctx, payload: dict, table_text: str | None = None):
    fmt = ctx.obj["format"]
    if fmt == "table" and table_text is not None:
        click.echo(table_text)
    else:
        click.echo(json.dumps(payload, indent=1, sort_keys=True))


def _post(ctx, endpoint: str, body: dict) -> dict:
    with _client(ctx.obj["server"]) as client:
        resp = client.post(endpoint, json=body)
    if resp.status_code >= 400:
        try:
            detail = resp.json()
        except ValueError:
            detail = {"message": resp.text}
        click.echo(json.dumps(detail, indent=1, sort_keys=True), err=True)
        sys.exit(2)
    return resp.json()


def _common_body(input_path: str, prime: int | None) -> dict:
    doc = _load_document(input_path)
    body = {
        "matrix": doc["matrix"],
        "prime": prime if prime is not None else doc.get("prime") or (doc.get("primes") or [None])[0],
        "group_generators": doc.get("group_generators"),
    }
    if body["prime"] is None:
        raise click.UsageError("no prime given (flag --prime or document field)")
    return body


@click.group()
@click.option("--server", default=None, help="remote service URL (default: in-process)")
@click.option("--format", "fmt", type=click.Choice(["structured", "table"]), default="structured")
@click.option("--cache-dir", default=None, help="cache directory (default $BHZETA_CACHE_DIR)")
@click.pass_context
def main(ctx, server, fmt, cache_dir):
    """Orbifold zeta functions of invertible Calabi-Yau hypersurfaces."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server
    ctx.obj["format"] = fmt
    if cache_dir:
        os.environ["BHZETA_CACHE_DIR"] = cache_dir


def input_options(f):
    f = click.option("--prime", type=int, default=None, help="override the document prime")(f)
    f = click.option("--input", "input_path", required=True, help="input document (JSON)")(f)
    return f


@main.command()
@input_options
@click.pass_context
def validate(ctx, input_path, prime):
    """Structural validation of the exponent matrix."""
    out = _post(ctx, "/validate", _common_body(input_path, prime))
    lines = [f"det = {out['det']}, det | p-1: {out['det_divides']}",
             f"weights: ({', '.join(out['weights'])})",
             f"atoms: {out['atoms']}",
             f"calabi_yau: {out['calabi_yau']}  J in G: {out['j_in_G']}  J in G^T: {out['j_in_GT']}"]
    _emit(ctx, out, "\n".join(lines))
    sys.exit(0 if out["valid"] else 1)


@main.command()
@input_options
@click.pass_context
def spectrum(ctx, input_path, prime):
    """Sector spectrum with Hodge bidegrees."""
    body = _common_body(input_path, prime)
    out = _post(ctx, "/spectrum", body)
    lines = [f"{r['H']:<12} gamma={tuple(r['gamma'])} lambda={tuple(r['lambda'])} "
             f"gammaA^-1=({', '.join(r['gamma_frac'])})" for r in out["sectors"]]
    lines.append("hodge: " + ", ".join(f"h^{{{k}}}={v}" for k, v in out["hodge"].items()))
    _emit(ctx, out, "\n".join(lines))


@main.command()
@input_options
@click.option("--nu-max", type=int, default=1)
@click.option("--precision", type=int, default=None)
@click.pass_context
def supertrace(ctx, input_path, prime, nu_max, precision):
    """Supertraces with integer lifts and rationality flags."""
    body = _common_body(input_path, prime) | {"nu_max": nu_max, "precision": precision}
    out = _post(ctx, "/supertrace", body)
    lines = [f"p = {out['prime']}, precision {out['precision']}"]
    for st in out["supertraces"]:
        tag = "integer" if st["rational"] else "NON-RATIONAL"
        lines.append(f"ST_{{p^{st['nu']}}} = {st['lift']} ({tag}; digits {st['digits']})")
    _emit(ctx, out, "\n".join(lines))


@main.command()
@input_options
@click.option("--precision", type=int, default=None, help="override auto precision (refused if too low)")
@click.option("--nu", type=int, default=1, help="field extension degree")
@click.option("--nu-max", type=int, default=3, help="point counts up to this power")
@click.option("--backend", type=click.Choice(["padic", "exact", "both"]), default="padic")
@click.pass_context
def zeta(ctx, input_path, prime, precision, nu, nu_max, backend):
    """Reconstructed zeta function with Weil verification and point counts."""
    body = _common_body(input_path, prime) | {
        "precision": precision, "nu": nu, "nu_max": nu_max, "backend": backend,
    }
    out = _post(ctx, "/zeta", body)
    lines = [f"p = {out['prime']}, nu = {out['nu']}, precision {out['precision']} (auto unless overridden)"]
    for k, fs in sorted(out["display"].items(), key=lambda kv: int(kv[0])):
        shown = " * ".join(
            f"({_poly_str(f['coeffs'])})" + (f"^{f['power']}" if f["power"] > 1 else "")
            for f in fs
        )
        where = "numerator" if int(k) % 2 else "denominator"
        lines.append(f"P_{k} ({where}): {shown}")
    lines.append(f"chi = {out['chi']}; counts {out['counts']}")
    lines.append(f"weil ok: {out['weil']['ok']} (sign {out['weil']['functional_equation_sign']})")
    _emit(ctx, out, "\n".join(lines))
    sys.exit(0 if out["weil"]["ok"] else 1)


def _poly_str(coeffs) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            t = "t" if i == 1 else f"t^{i}"
            terms.append(f"{'+' if c > 0 else '-'} {abs(c)}{t}")
    return " ".join(terms)


@main.command()
@input_options
@click.option("--nu", type=int, default=1)
@click.option("--max-ops", type=int, default=counting.DEFAULT_MAX_OPS,
              help="operation budget; refuse beyond it without --allow-slow")
@click.option("--allow-slow", is_flag=True)
@click.option("--workers", type=int, default=1)
@click.option("--smallcheck", is_flag=True, help="cross-check with orbit enumeration")
@click.pass_context
def count(ctx, input_path, prime, nu, max_ops, allow_slow, workers, smallcheck):
    """Brute-force projective point count."""
    body = _common_body(input_path, prime) | {
        "nu": nu, "max_ops": max_ops, "allow_slow": allow_slow,
        "workers": workers, "smallcheck": smallcheck,
    }
    out = _post(ctx, "/count", body)
    text = f"#X(F_{out['q']}) = {out['count']}  [{out['method']}]"
    if "smallcheck" in out:
        text += f"  smallcheck: {out['smallcheck']} ({'ok' if out['smallcheck_agrees'] else 'MISMATCH'})"
    _emit(ctx, out, text)
    sys.exit(0 if out.get("smallcheck_agrees", True) else 1)


@main.command()
@input_options
@click.option("--precision", type=int, default=6)
@click.option("--allow-slow", is_flag=True)
@click.pass_context
def mw(ctx, input_path, prime, precision, allow_slow):
    """Trace-formula point count with tri-oracle agreement report."""
    body = _common_body(input_path, prime) | {"precision": precision, "allow_slow": allow_slow}
    out = _post(ctx, "/mw", body)
    lines = [f"N_MW = {out['mw_count']} [{out['mw_method']}], ST = {out['supertrace']}"]
    if "brute_force" in out:
        lines.append(f"brute force = {out['brute_force']}; all agree: {out.get('agree_all')}")
    lines.append(f"cancellation: {out['cancellation']}")
    _emit(ctx, out, "\n".join(lines))
    sys.exit(0 if out.get("agree_all", out["agree_mw_st"]) else 1)


@main.command()
@input_options
@click.option("--backend", type=click.Choice(["padic", "exact", "both"]), default="padic")
@click.pass_context
def weil(ctx, input_path, prime, backend):
    """Formal Weil-conjecture verification of the reconstructed zeta."""
    body = _common_body(input_path, prime) | {"backend": backend}
    out = _post(ctx, "/weil", body)
    _emit(ctx, out, json.dumps(out, indent=1, sort_keys=True))
    sys.exit(0 if out["ok"] else 1)


@main.group(name="fixtures", invoke_without_command=True)
@click.pass_context
def fixtures_group(ctx):
    """List or run the bundled validation fixtures."""
    if ctx.invoked_subcommand is None:
        with _client(ctx.obj["server"]) as client:
            resp = client.get("/fixtures")
        out = resp.json()
        for row in out["fixtures"]:
            click.echo(f"{row['id']:<32} [{row['status']}/{','.join(row['tags'])}] {row['provenance']}")


@fixtures_group.command(name="run")
@click.argument("fixture_id")
@click.pass_context
def fixtures_run(ctx, fixture_id):
    """Run one fixture and print per-check pass/fail lines."""
    out = _post(ctx, "/fixtures/run", {"id": fixture_id})
    for check in out["checks"]:
        click.echo(f"[{check['status'].upper():<10}] {check['name']}: {check['detail']}")
    click.echo(("PASS " if out["passed"] else "FAIL ") + out["fixture"])
    sys.exit(0 if out["passed"] else 1)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8787)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
