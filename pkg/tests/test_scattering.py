"""Symplectic Wronskian and scattering on graphs with tails"""

import math

import numpy as np
import pytest

from src.models import Graph, InvalidGraph, NotNearestNeighbor, ScatterProblem, SingularSystem, TailSpec, TangentField
from src.normalizers import normalize
from src.scattering import (
    flux_matrix,
    nn_wronskian,
    scatter,
    scatter_problem,
    verify_unitarity,
    wronskian,
)
from tests.conftest import config_of, load_fixture, random_config, random_local_system, random_tangent, scalar_system

MOMENTA = [0.3, 1.0, math.pi / 2, 2.5]


def test_nearest_neighbour_wronskian_of_a_spring():
    system = scalar_system(["a", "b"], [("a", "b")], [("s", ["a", "b"], "(x(b,0)-x(a,0))^2/2")])
    tsys = normalize(system)
    psi = config_of(system, {"a": 0.0, "b": 0.0})
    u = TangentField({"a": [1.0], "b": [1.0]})
    v = TangentField({"a": [0.0], "b": [1.0]})
    assert nn_wronskian(tsys, psi, u, v, ("a", "b")) == -1.0
    assert nn_wronskian(tsys, psi, u, v, ("b", "a")) == 1.0
    assert wronskian(tsys, psi, u, v).core == {("a", "b"): -1.0}


def test_nearest_neighbour_formula_matches_the_form_exactly():
    rng = np.random.default_rng(37)
    for _ in range(30):
        system = random_local_system(rng, max_vertices=8, kind="nn")
        tsys = normalize(system)
        psi = random_config(rng, system)
        u, v = random_tangent(rng, system), random_tangent(rng, system)
        chain = wronskian(tsys, psi, u, v)
        for edge in system.graph.edges:
            assert nn_wronskian(tsys, psi, u, v, edge) == chain.coefficient(edge)
            assert nn_wronskian(tsys, psi, u, v, edge[::-1]) == -chain.coefficient(edge)


def test_wronskian_is_antisymmetric():
    rng = np.random.default_rng(41)
    for _ in range(10):
        system = random_local_system(rng, max_vertices=8)
        tsys = normalize(system)
        psi = random_config(rng, system)
        u, v = random_tangent(rng, system), random_tangent(rng, system)
        assert (wronskian(tsys, psi, u, v) + wronskian(tsys, psi, v, u)).max_abs() <= 1e-12


def test_nearest_neighbour_formula_rejects_larger_terms():
    system = load_fixture("triangle3body.sys")
    tsys = normalize(system)
    u = TangentField({v: [1.0] for v in system.graph.vertices})
    with pytest.raises(NotNearestNeighbor):
        nn_wronskian(tsys, system.configs["start"], u, u, ("v0", "v1"))


def test_free_line_transmits_everything():
    problem = scatter_problem(load_fixture("free_line.sys"))
    for k in MOMENTA:
        s = scatter(problem, k)
        assert s.tails == ("left", "right")
        np.testing.assert_allclose(s.matrix, [[0, 1], [1, 0]], atol=1e-12)


def _star_oracle(q, k, tails=3):
    energy, z = 2 * math.cos(k), np.exp(1j * k)
    s = np.zeros((tails, tails), dtype=complex)
    for a in range(tails):
        m = np.zeros((tails + 1, tails + 1), dtype=complex)
        rhs = np.zeros(tails + 1, dtype=complex)
        m[0, 0] = q - energy
        m[0, 1:] = z
        rhs[0] = -np.conj(z)
        for b in range(tails):
            m[b + 1, 0] = 1.0
            m[b + 1, b + 1] = -1.0
        rhs[a + 1] = 1.0
        s[:, a] = np.linalg.solve(m, rhs)[1:]
    return s


@pytest.mark.parametrize("name, q", [("star3.sys", 0.0), ("star3_q15.sys", 1.5)])
@pytest.mark.parametrize("k", MOMENTA)
def test_star_matches_a_direct_solve(name, q, k):
    problem = scatter_problem(load_fixture(name))
    s = scatter(problem, k)
    np.testing.assert_allclose(s.matrix, _star_oracle(q, k), atol=1e-12)


@pytest.mark.parametrize("name", ["star3.sys", "star3_q15.sys", "free_line.sys"])
@pytest.mark.parametrize("k", MOMENTA)
def test_unitarity_and_flux_balance(name, k):
    report = verify_unitarity(scatter_problem(load_fixture(name)), k)
    assert report.unitarity_defect <= 1e-10
    assert report.flux_defect <= 1e-10
    assert report.reciprocity_defect <= 1e-10
    assert report.passed


def test_flux_is_conserved_along_the_tails():
    problem = scatter_problem(load_fixture("star3_q15.sys"))
    s = scatter(problem, 0.8)
    near = flux_matrix(s, problem.graph, 0)
    for site in (1, 3, 7):
        np.testing.assert_allclose(flux_matrix(s, problem.graph, site), near, atol=1e-12)


def test_non_symmetric_coupling_breaks_unitarity():
    graph = Graph(("v0", "v1"), (("v0", "v1"),), (TailSpec("A", "v0"), TailSpec("B", "v1")))
    problem = ScatterProblem(graph, couplings={("v0", "v1"): 2.0, ("v1", "v0"): 1.0}, enforce_symmetry=False)
    s = scatter(problem, math.pi / 2)
    assert abs(s.matrix[0, 0]) ** 2 + abs(s.matrix[1, 0]) ** 2 == pytest.approx(5 / 9)
    report = verify_unitarity(problem, math.pi / 2)
    assert report.unitarity_defect > 1e-3
    assert not report.passed


def test_momentum_outside_the_band():
    problem = scatter_problem(load_fixture("free_line.sys"))
    for k in (0.0, -0.5, math.pi, 4.0):
        with pytest.raises(ValueError):
            scatter(problem, k)


def test_band_edge_is_ill_conditioned():
    problem = scatter_problem(load_fixture("free_line.sys"))
    assert scatter(problem, 1e-9).ill_conditioned
    with pytest.raises(SingularSystem):
        scatter(problem, 1e-14)


def test_scattering_needs_tails():
    with pytest.raises(InvalidGraph):
        ScatterProblem(Graph(("a", "b"), (("a", "b"),)))
