"""Named checks produced by the verification engine"""

import pytest

from src.normalizers import normalize
from src.scattering import scatter_problem
from src.verifiers import CHECK_GROUPS, VerificationEngine
from tests.conftest import load_fixture


def by_name(results):
    return {check.name: check for check in results}


@pytest.fixture
def engine():
    return VerificationEngine()


def test_closed_check_passes_symbolically(engine):
    system = load_fixture("triangle3body.sys")
    results, details = engine.verify(normalize(system), system.configs["start"], checks=["closed"])
    (check,) = results
    assert check.name == "closed" and check.status == "pass"
    assert details["closed"]["symbolic_zero"] is True


def test_closed_check_fails_off_the_tree(engine):
    system = load_fixture("nontree.sys")
    results, details = engine.verify(normalize(system), system.configs["start"], checks=["closed"])
    check = by_name(results)["closed"]
    assert check.status == "fail"
    assert check.value == pytest.approx(1.0)
    assert set(details["closed"]["per_edge"]) == {"v0-v1", "v1-v2", "v2-v0"}


def test_finite_difference_mode(engine):
    system = load_fixture("nontree.sys")
    results, details = engine.verify(normalize(system), system.configs["start"], checks=["closed"], mode="fd")
    assert by_name(results)["closed"].status == "fail"
    assert details["closed"]["mode"] == "fd"


def test_full_verification_of_the_line(engine):
    system = load_fixture("line10.sys")
    results, details = engine.verify(normalize(system), system.configs["zero"], checks=CHECK_GROUPS)
    checks = by_name(results)
    for name in ("closed", "boundary_identity", "newton", "boundary_on_solutions", "homology"):
        assert checks[name].status == "pass", name
    assert details["kernel_dimension"] == 2
    assert details["homology"]["basis_dimension"] == 1
    (coordinate,) = details["homology"]["coordinates"]
    assert abs(coordinate) > 1e-3


def test_planar_springs_have_trivial_homology_class(engine):
    system = load_fixture("laplace2d.sys")
    results, details = engine.verify(normalize(system), system.configs["rest"])
    checks = by_name(results)
    assert checks["homology"].status == "pass"
    assert checks["boundary_on_solutions"].status == "pass"
    assert abs(details["homology"]["coordinates"][0]) <= 1e-9


def test_trivial_kernel_skips_solution_checks(engine):
    system = load_fixture("pendulum5.sys")
    results, _ = engine.verify(normalize(system), system.configs["start"], checks=["boundary", "homology"])
    checks = by_name(results)
    assert checks["newton"].status == "pass"
    assert checks["boundary_on_solutions"].status == "skip"
    assert checks["homology"].status == "skip"


def test_unknown_check_group(engine):
    system = load_fixture("triangle.sys")
    with pytest.raises(ValueError):
        engine.verify(normalize(system), system.configs["ones"], checks=["closed", "entropy"])


def test_wronskian_checks_on_the_line(engine):
    system = load_fixture("line10.sys")
    results, details = engine.wronskian_checks(normalize(system), system.configs["zero"])
    assert [c.status for c in results] == ["pass", "pass", "pass"]
    assert details["kernel_dimension"] == 2


def test_wronskian_checks_skip_without_kernel(engine):
    system = load_fixture("triangle3body.sys")
    results, _ = engine.wronskian_checks(normalize(system), system.configs["start"])
    assert {c.status for c in results} == {"skip"}


def test_scatter_checks(engine):
    problem = scatter_problem(load_fixture("star3.sys"))
    results, details = engine.scatter_checks(problem, 1.0471975512, 1e-10)
    assert [c.name for c in results] == ["unitarity", "flux_balance", "reciprocity"]
    assert all(c.status == "pass" for c in results)
    assert details == {"k": 1.0471975512}


def test_singular_scattering_becomes_a_failed_check(engine):
    problem = scatter_problem(load_fixture("free_line.sys"))
    (check,), _ = engine.scatter_checks(problem, 1e-14, 1e-10)
    assert check.name == "scatter" and check.status == "fail"
