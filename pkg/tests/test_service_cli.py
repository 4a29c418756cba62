"""Service endpoints and the thin CLI client."""

import json
import warnings

import pytest
from click.testing import CliRunner

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from bhzeta import fixtures
from bhzeta.cli import main
from bhzeta.service import create_app

CHAIN_223 = {"matrix": [[2, 1, 0], [0, 2, 1], [0, 0, 3]], "prime": 13, "group_generators": [[1, 1, 1]]}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


class TestService:
    def test_healthz(self, client):
        resp = client.get("/healthz")
        assert resp.status_code == 200 and resp.json()["status"] == "ok"

    def test_validate(self, client):
        resp = client.post("/validate", json=CHAIN_223)
        out = resp.json()
        assert out["det"] == 12 and out["det_divides"] is True
        assert out["weights"] == ["1/3", "1/3", "1/3"]

    def test_spectrum(self, client):
        out = client.post("/spectrum", json=CHAIN_223).json()
        assert len(out["sectors"]) == 4
        assert out["group_order"] == 3 and out["dual_group_order"] == 4

    def test_supertrace(self, client):
        out = client.post("/supertrace", json=CHAIN_223).json()
        st = out["supertraces"][0]
        assert st["lift"] == 20 and st["rational"] is True

    def test_zeta_structured_output(self, client):
        out = client.post("/zeta", json=CHAIN_223).json()
        assert out["P"] == {"0": [1, -1], "1": [1, 6, 13], "2": [1, -13]}
        assert out["chi"] == 0
        assert out["counts"][:2] == [20, 160]
        assert out["weil"]["ok"] is True

    def test_zeta_exact_backend(self, client):
        out = client.post("/zeta", json=CHAIN_223 | {"backend": "both"}).json()
        assert out["backend_agreement"] is True
        assert out["weil"]["rh_checked"] == 4 and out["weil"]["rh_ok"] is True

    def test_count_and_budget(self, client):
        out = client.post("/count", json=CHAIN_223 | {"smallcheck": True}).json()
        assert out["count"] == 20 and out["smallcheck_agrees"] is True
        resp = client.post(
            "/count",
            json={"matrix": [[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 4]],
                  "prime": 641, "max_ops": 1000},
        )
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "counting:BudgetExceeded" and body["estimate"] > 1000

    def test_mw_endpoint(self, client):
        out = client.post("/mw", json={"matrix": [[4 if i == j else 0 for j in range(4)] for i in range(4)],
                                       "prime": 13}).json()
        assert out["agree_all"] is True
        assert out["cancellation"]["all_cancel"] is True

    def test_fixture_listing_and_run(self, client):
        listing = client.get("/fixtures").json()["fixtures"]
        assert any(f["id"] == "cubic-chain-223" for f in listing)
        out = client.post("/fixtures/run", json={"id": "k3-m4-fermat-quartic"}).json()
        assert out["passed"] is True
        assert client.post("/fixtures/run", json={"id": "nope"}).status_code == 404

    def test_deterministic_output(self, client):
        a = client.post("/zeta", json=CHAIN_223).content
        b = client.post("/zeta", json=CHAIN_223).content
        assert a == b


class TestCli:
    def run(self, *args):
        return CliRunner().invoke(main, args, catch_exceptions=False)

    def test_zeta_json(self, tmp_path):
        doc = tmp_path / "in.json"
        doc.write_text(json.dumps(CHAIN_223))
        res = self.run("zeta", "--input", str(doc))
        assert res.exit_code == 0
        out = json.loads(res.output)
        assert out["P"]["1"] == [1, 6, 13]

    def test_packaged_fixture_path(self):
        res = self.run("--format", "table", "count", "--input", "fixtures/l2l2.json", "--prime", "193")
        assert res.exit_code == 0 and "40920" in res.output

    def test_zeta_table_shape(self):
        res = self.run("--format", "table", "zeta", "--input", "fixtures/k3-m4-fermat-quartic.json")
        assert res.exit_code == 0
        assert "(1 - 257t)^20" in res.output.replace("1 - 257t", "1 - 257t")
        assert "510" in res.output

    def test_validate_exit_codes(self, tmp_path):
        doc = tmp_path / "in.json"
        doc.write_text(json.dumps(CHAIN_223 | {"prime": 7}))
        res = self.run("validate", "--input", str(doc))
        assert res.exit_code == 1  # det does not divide p-1
        res = self.run("validate", "--input", str(doc), "--prime", "13")
        assert res.exit_code == 0

    def test_usage_error_exit_2(self, tmp_path):
        doc = tmp_path / "in.json"
        doc.write_text(json.dumps({"matrix": [[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 4]],
                                   "prime": 641}))
        res = self.run("count", "--input", str(doc), "--max-ops", "1000")
        assert res.exit_code == 2

    def test_fixture_run_pass_lines(self):
        res = self.run("fixtures", "run", "cubic-chain-2223-non-cy")
        assert res.exit_code == 0
        assert "[PASS" in res.output and "PASS cubic-chain-2223-non-cy" in res.output

    def test_mw_command(self):
        res = self.run("--format", "table", "mw", "--input", "fixtures/cubic-chain-223.json", "--prime", "13")
        assert res.exit_code == 0 and "all agree: True" in res.output

    def test_byte_identical_reruns(self, tmp_path):
        doc = tmp_path / "in.json"
        doc.write_text(json.dumps(CHAIN_223))
        a = self.run("zeta", "--input", str(doc)).output
        b = self.run("zeta", "--input", str(doc)).output
        assert a == b


def test_fixture_catalog_complete():
    ids = fixtures.list_ids()
    # every table/example family of the validation corpus is represented
    assert sum(1 for i in ids if i.startswith("k3-")) == 14
    for required in [
        "cubic-chain-223", "cubic-chain-2223-non-cy", "l2l2", "chain-3334",
        "deformed-diagonal-5-15-3-2", "deformed-diagonal-10-10-2-3",
        "quintic-37501", "greene-plesser-125", "greene-plesser-25",
        "jacobi-table-m30", "m30-eigenvalue-digits",
        "mw-lemma-identity", "mw-fermat-tri-oracle",
        "mw-cancellation-quartic", "mw-cancellation-3chain",
    ]:
        assert required in ids, required
    for fid in ids:
        fx = fixtures.load(fid)
        assert fx.provenance, f"{fid} missing provenance"
        assert fx.status in ("assert", "diagnostic")
