"""Fixture catalog loading and the full fast sweep."""

import pytest

from bhzeta import fixtures
from bhzeta.errors import UnknownFixtureError

FAST_IDS = [fid for fid in fixtures.list_ids() if not fixtures.load(fid).slow]


def test_unknown_fixture():
    with pytest.raises(UnknownFixtureError):
        fixtures.load("does-not-exist")


def test_expand_factors():
    got = fixtures.expand_factors(
        [{"power": 2, "coeffs": [[1, 0], [-1, 1]]}, {"power": 1, "coeffs": [[1, 0], [3, 0]]}], 5
    )
    # (1 - 5t)^2 (1 + 3t)
    assert got == (1, -7, -5, 75)


def test_schema_fields():
    fx = fixtures.load("cubic-chain-223")
    assert fx.matrix.n == 3
    assert fx.primes == (7, 13)
    assert fx.status == "assert" and fx.provenance


@pytest.mark.parametrize("fid", FAST_IDS)
def test_fixture_passes(fid):
    rep = fixtures.run(fixtures.load(fid))
    failed = [o for o in rep.outcomes if o.status == "fail"]
    assert not failed, "; ".join(f"{o.name}: {o.detail}" for o in failed)


@pytest.mark.slow
@pytest.mark.parametrize("fid", [fid for fid in fixtures.list_ids() if fixtures.load(fid).slow])
def test_slow_fixture_passes(fid):
    rep = fixtures.run(fixtures.load(fid))
    assert rep.passed
