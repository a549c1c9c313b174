import numpy
import pytest
import scipy.integrate

from levyhg.errors import DomainError
from levyhg.stable import exit_before_zero_density
from levyhg.verify import checks, exit_histogram_pvalue, render_report, run_checks


def test_registry_order() -> None:
    assert list(checks.keys()) == [
        "specfun",
        "whf_identity",
        "density_dual_route",
        "lk_reconstruct",
        "mellin_functional_equation",
        "ckl_cross",
        "radial_constant",
        "mc_t0",
        "exit_laws",
        "mellin_inversion",
    ]


def test_analytic_checks_pass() -> None:
    results = run_checks(["radial_constant", "specfun", "ckl_cross"], quick=True)
    assert [result["name"] for result in results] == [
        "specfun",
        "ckl_cross",
        "radial_constant",
    ]
    for result in results:
        assert result["passed"], result["detail"]
        assert result["seconds"] >= 0


def test_t0_check_runs_at_default_settings() -> None:
    result = run_checks(["mc_t0"], quick=True)[0]
    assert result["passed"], result["detail"]


def test_unknown_check() -> None:
    with pytest.raises(DomainError):
        run_checks(["radial_constant", "no_such_check"])


def test_failure_is_reported(monkeypatch) -> None:
    def broken(quick):
        raise DomainError("broken on purpose")

    monkeypatch.setitem(
        checks, "radial_constant", {"description": "stand-in", "run": broken}
    )
    result = run_checks(["radial_constant"])[0]
    assert not result["passed"]
    assert result["detail"] == "DomainError: broken on purpose"


def test_report() -> None:
    results = [
        {
            "name": "specfun",
            "passed": True,
            "detail": "max error 1e-15",
            "seconds": 0.1,
        },
        {"name": "mc_t0", "passed": False, "detail": "s=0.5: off", "seconds": 2.0},
    ]
    report = render_report(results, quick=True)
    assert "| specfun | PASS | 0.1 | max error 1e-15 |" in report
    assert "| mc_t0 | **FAIL** | 2.0 | s=0.5: off |" in report
    assert "Mode: quick" in report
    assert "Some checks failed." in report
    assert "All checks passed." in render_report(results[:1])


def test_exit_histogram_matches_density() -> None:
    edges = list(numpy.linspace(1.0, 5.0, 21))
    expected = numpy.array(
        [
            scipy.integrate.quad(
                lambda y: exit_before_zero_density(0.5, y, 1.5), low, high
            )[0]
            for low, high in zip(edges[:-1], edges[1:])
        ]
    )
    histogram = [int(round(count)) for count in 1e5 * expected / expected.sum()]
    assert exit_histogram_pvalue(0.5, 1.5, histogram, edges) > 0.99
    skewed = list(histogram)
    skewed[0] += 5000
    assert exit_histogram_pvalue(0.5, 1.5, skewed, edges) < 1e-6
