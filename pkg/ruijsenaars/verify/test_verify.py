from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ruijsenaars.config import load_config
from ruijsenaars.errors import DomainError, PrecisionError
from ruijsenaars.numerics import QuadSpec
from ruijsenaars.verify.catalog import CATALOG, identity_ids, tolerance_for, verify_identity
from ruijsenaars.verify.limits import LIMITS, limit_ratio, limit_schedule, verify_limit
from ruijsenaars.verify.runner import resolve_selection, run_suite

IDENTITY_IDS = [
    "hp1-a", "hp1-b", "g-refl", "cgamma-refl", "cgamma-shift", "pentagon", "beta-complex", "master-888", "dualf",
    "find1", "difcm", "diffig", "diffig2", "chi-duality", "Fg-dual", "sabo2", "Feq1", "Feq2", "fd-eqs", "d-eqs",
    "barnes-euler", "F2-F1", "niph", "comp-refl", "intertwine-M", "intertwine-Mhat", "prfor", "Q2ker3", "Q223",
    "q-commutativity", "eigen-hyp", "eigen-hyp-prime",
]

LIMIT_IDS = [
    "gamma-r-real", "gamma-r-real-rat", "gamma-lim1", "gamma-lim2'", "gamma-poh", "wavefn-complim-cm",
    "ham-hyp-to-cr", "ham-hyp-to-ccr", "ham-hyp-to-CS", "ham-hyp-to-c", "ham-hyp-to-cc", "weight-SPh-to-SPcr",
    "weight-SPh-to-ccr", "weight-SPh-to-c", "weight-SPh2-variants", "eigen-limit-cr",
]

FAST = ["hp1-a", "hp1-b", "g-refl", "cgamma-refl", "cgamma-shift", "cgamma-alt", "pochhammer", "Q223"]


def test_catalog_complete():
    assert set(IDENTITY_IDS) <= set(CATALOG)
    assert set(LIMIT_IDS) <= set(LIMITS)
    for entry in CATALOG.values():
        assert entry.anchor
        assert entry.family in load_config()["tolerances"]
    for limit in LIMITS.values():
        assert limit.anchor


def test_optional_ids():
    assert "q-commutativity" in identity_ids(include_optional=True)
    assert "q-commutativity" not in identity_ids(include_optional=False)
    assert "q-commutativity" not in resolve_selection()
    assert "q-commutativity" in resolve_selection(include_optional=True)


def test_independence():
    independent = sum(not e.shared for e in CATALOG.values()) / len(CATALOG)
    assert independent >= 0.8


@pytest.mark.parametrize("id", FAST)
def test_fast_identities(id):
    report = verify_identity(id)
    assert report.passed, report.to_dict()
    assert report.id == id
    assert report.rel_residual <= report.tolerance


@pytest.mark.parametrize("id", ["cgamma-refl", "cgamma-shift"])
@settings(max_examples=25, deadline=None)
@given(re=st.floats(0.1, 2.0), im=st.floats(-0.5, 0.5), n=st.sampled_from([-2, -1, 0, 1, 2, 3]))
def test_complex_gamma_identities_hold(id, re, im, n):
    report = verify_identity(id, params={"u": complex(re, im), "n": n})
    assert report.passed, report.to_dict()


def test_shared_evaluator_warning():
    report = verify_identity("cgamma-alt")
    assert "both sides share an evaluator" in report.warnings
    assert not verify_identity("g-refl").warnings


def test_explicit_tolerance():
    report = verify_identity("g-refl", tolerance=1e-3)
    assert report.tolerance == 1e-3
    assert report.passed


def test_tolerance_override(monkeypatch):
    monkeypatch.delenv("RUIJSENAARS_TOLERANCE", raising=False)
    assert tolerance_for("gamma") == 1e-9
    monkeypatch.setenv("RUIJSENAARS_TOLERANCE", "1e-3")
    assert tolerance_for("gamma") == 1e-3
    monkeypatch.setenv("RUIJSENAARS_TOLERANCE", "-1")
    with pytest.raises(DomainError):
        tolerance_for("gamma")


def test_failure_is_data(monkeypatch):
    def check(params, quad, warnings):
        raise PrecisionError("cancellation")

    monkeypatch.setitem(CATALOG, "g-refl", replace(CATALOG["g-refl"], check=check))
    report = verify_identity("g-refl")
    assert not report.passed
    assert "PrecisionError: cancellation" in report.warnings
    assert report.to_dict()["lhs"] == [None, None]


def test_unknown_ids():
    with pytest.raises(DomainError):
        verify_identity("no-such-identity")
    with pytest.raises(DomainError):
        verify_limit("no-such-limit")
    with pytest.raises(DomainError):
        resolve_selection(["g-refl", "no-such-identity"])


def test_draws_are_seeded():
    entry = CATALOG["g-refl"]
    first = entry.draw(np.random.RandomState(3))
    second = entry.draw(np.random.RandomState(3))
    assert first == second
    assert first != entry.defaults


def test_suite_order_and_seed():
    selection = ["cgamma-shift", "g-refl", "gamma-lim1"]
    suite = run_suite(selection, seed=5, points=2, progress=False)
    assert [r.id for r in suite.reports] == ["g-refl", "g-refl", "cgamma-shift", "cgamma-shift", "gamma-lim1"]
    assert [r.params.get("draw") for r in suite.reports[:2]] == [0, 1]
    assert suite.ok, suite.to_dict()
    again = run_suite(selection, seed=5, points=2, progress=False)
    assert [r.params for r in again.reports[:4]] == [r.params for r in suite.reports[:4]]
    other = run_suite(["g-refl"], seed=6, points=2, progress=False)
    assert other.reports[1].params != suite.reports[1].params


def test_suite_exclude_and_summary():
    suite = run_suite(["g-refl", "hp1-a"], exclude=["hp1-a"], progress=False)
    assert [r.id for r in suite.reports] == ["g-refl"]
    summary = suite.to_dict()
    assert summary["passed"] == 1 and summary["failed"] == 0
    assert summary["independent_fraction"] == 1.0
    assert summary["reports"][0]["pass"] is True


def test_suite_failures_do_not_raise(monkeypatch):
    def check(params, quad, warnings):
        raise DomainError("inadmissible")

    monkeypatch.setitem(CATALOG, "hp1-a", replace(CATALOG["hp1-a"], check=check))
    suite = run_suite(["hp1-a", "g-refl"], progress=False)
    assert suite.failed == 1
    assert not suite.ok
    assert "inadmissible" in suite.reports[0].warnings[0]


def test_suite_workers():
    serial = run_suite(["g-refl", "cgamma-refl"], seed=1, points=2, progress=False)
    parallel = run_suite(["g-refl", "cgamma-refl"], seed=1, points=2, workers=2, progress=False)
    assert [r.id for r in parallel.reports] == [r.id for r in serial.reports]
    assert [r.lhs for r in parallel.reports] == [r.lhs for r in serial.reports]


def test_gamma_limits():
    report = verify_limit("gamma-lim1")
    assert report.id == "gamma-lim1"
    assert report.passed, report.to_dict()
    assert verify_limit("gamma-r-real").passed


def test_limit_schedule_from_config():
    config = load_config()
    config["limits"]["gamma-lim1"] = [0.03, 0.015, 0.0075]
    report = verify_limit("gamma-lim1", config=config)
    assert report.params["deltas"] == [0.03, 0.015, 0.0075]
    schedule = limit_schedule("gamma-lim1", deltas=[0.1, 0.05, 0.025])
    assert schedule.deltas == (0.1, 0.05, 0.025)
    even = limit_schedule("gamma-lim2'", deltas=[0.06, 0.03, 0.015])
    assert even.rule == "even" and even.companion(0.015) == 20
    config["limits"]["gamma-lim1"] = [0.1, 0.05]
    with pytest.raises(DomainError, match="at least 3 deltas"):
        verify_limit("gamma-lim1", config=config)
    with pytest.raises(DomainError):
        limit_schedule("gamma-lim1", deltas=["a", 0.1, 0.05])


def test_config_keys_are_checked():
    config = load_config()
    config["limits"]["gamma-lim-1"] = [0.04, 0.02, 0.01]
    with pytest.raises(DomainError, match="gamma-lim-1"):
        verify_limit("gamma-lim1", config=config)
    config = load_config()
    del config["tolerances"]["limit"]
    with pytest.raises(DomainError, match="no tolerance"):
        tolerance_for("limit", config)


def test_limit_ratio_approaches_one():
    far = abs(limit_ratio("gamma-lim1", 0.05) - 1)
    near = abs(limit_ratio("gamma-lim1", 0.005) - 1)
    assert near < far


@pytest.mark.slow
def test_default_suite():
    suite = run_suite(workers=4, progress=False)
    assert suite.independent >= 0.8
    assert suite.ok, [r.to_dict() for r in suite.reports if not r.passed]


def test_tighter_quadrature_does_not_hurt():
    quad = QuadSpec.from_config(load_config())
    loose = verify_identity("hyp-gamma-swap", quad=quad)
    tight = verify_identity("hyp-gamma-swap", quad=quad.scaled(0.1))
    assert tight.passed
    assert tight.abs_residual <= 2 * loose.abs_residual + 1e-14
