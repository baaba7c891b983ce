"""Chain-valued 2-form: assembly, closedness, boundary and homology"""

import numpy as np
import pytest

from src.graph import boundary, cycle_basis, cycle_coordinates
from src.models import (
    Chain1,
    FieldConfig,
    MismatchedSystem,
    NotACycle,
    NotNormalized,
    TangentField,
    TreeLikeSystem,
)
from src.normalizers import build_tree_like_term, normalize, with_path_override
from src.symform import (
    FINITE_DIFFERENCE,
    assemble_omega,
    boundary_omega,
    check_closedness,
    omega_on_tangents,
)
from src.variational import hessian, open_kernel_basis
from tests.conftest import (
    FIXTURES,
    config_of,
    load_fixture,
    random_config,
    random_local_system,
    random_tangent,
    scalar_system,
)


def tangent(system, values):
    return TangentField({v: np.atleast_1d(np.asarray(values[v], dtype=float)) for v in system.graph.vertices})


def hand_tree_system():
    """Three-body term on the triangle over the explicit tree v0-v1-v2"""
    system = load_fixture("triangle3body.sys")
    t = build_tree_like_term(system.graph, system.terms[0], [("v0", "v1"), ("v1", "v2")])
    return system, t


def test_pairwise_term_on_one_edge():
    system = scalar_system(["a", "b"], [("a", "b")], [("ab", ["a", "b"], "2.5*x(a,0)*x(b,0)")])
    tsys = normalize(system)
    form = assemble_omega(tsys, config_of(system, {"a": 0.3, "b": -0.7}))
    chain = omega_on_tangents(form, tangent(system, {"a": 1, "b": 0}), tangent(system, {"a": 0, "b": 1}))
    assert chain.core == {("a", "b"): 2.5}


def test_three_body_blocks_follow_the_tree():
    system, t = hand_tree_system()
    form = assemble_omega(TreeLikeSystem(system, (t,)), system.configs["start"])
    blocks = {edge: {pair: b.tolist() for pair, b in per.items()} for edge, per in form.edge_blocks.items()}
    assert blocks == {
        ("v0", "v1"): {("v0", "v1"): [[3.0]], ("v0", "v2"): [[2.0]]},
        ("v1", "v2"): {("v1", "v2"): [[1.0]], ("v0", "v2"): [[2.0]]},
    }


def test_on_site_terms_give_a_zero_form():
    system = scalar_system(["a", "b"], [("a", "b")], [("pa", ["a"], "x(a,0)^4"), ("pb", ["b"], "cos(x(b,0))")])
    form = assemble_omega(normalize(system), config_of(system, {"a": 0.5, "b": 0.2}))
    assert form.edge_blocks == {}


def test_single_terms_add_up_to_the_full_form():
    rng = np.random.default_rng(17)
    system = random_local_system(rng, max_vertices=7)
    tsys = normalize(system)
    config = random_config(rng, system)
    full = assemble_omega(tsys, config)
    for edge in system.graph.edges:
        total = sum(assemble_omega(tsys, config, term=t.term.name).edge_matrix(edge) for t in tsys.terms)
        np.testing.assert_allclose(total, full.edge_matrix(edge), atol=1e-12)
    with pytest.raises(KeyError):
        assemble_omega(tsys, config, term="missing")


def test_edge_matrices_are_antisymmetric():
    rng = np.random.default_rng(21)
    for _ in range(10):
        system = random_local_system(rng, max_vertices=8)
        form = assemble_omega(normalize(system), random_config(rng, system))
        for edge in system.graph.edges:
            w = form.edge_matrix(edge)
            np.testing.assert_array_equal(w, -w.T)
            u, v = random_tangent(rng, system), random_tangent(rng, system)
            forward = omega_on_tangents(form, u, v).coefficient(edge)
            backward = omega_on_tangents(form, v, u).coefficient(edge)
            assert forward == pytest.approx(-backward, abs=1e-12)


def test_assembly_needs_a_normalized_system():
    system = load_fixture("triangle.sys")
    with pytest.raises(NotNormalized):
        assemble_omega(system, system.configs["ones"])


def test_tree_like_forms_are_closed():
    system, t = hand_tree_system()
    result = check_closedness(TreeLikeSystem(system, (t,)), system.configs["start"])
    assert result.symbolic_zero is True
    assert result.max_value == 0.0

    normalized = check_closedness(normalize(system), system.configs["start"])
    assert normalized.symbolic_zero is True


def test_path_outside_the_tree_breaks_closedness():
    system, t = hand_tree_system()
    bent = with_path_override(t, "v0", "v2", Chain1({("v2", "v0"): -1.0}))
    result = check_closedness(TreeLikeSystem(system, (bent,)), system.configs["start"])
    assert result.symbolic_zero is False
    assert result.per_edge[("v0", "v1")] == pytest.approx(1.0, abs=1e-12)


def test_non_tree_fixture_is_not_closed():
    system = load_fixture("nontree.sys")
    tsys = normalize(system)
    config = system.configs["start"]
    analytic = check_closedness(tsys, config)
    fd = check_closedness(tsys, config, mode=FINITE_DIFFERENCE)
    for edge in system.graph.edges:
        assert analytic.per_edge[edge] == pytest.approx(1.0, abs=1e-12)
        assert fd.per_edge[edge] == pytest.approx(analytic.per_edge[edge], abs=1e-6)


def test_pairwise_systems_are_structurally_closed():
    rng = np.random.default_rng(23)
    for _ in range(20):
        system = random_local_system(rng, kind="pairwise")
        result = check_closedness(normalize(system), random_config(rng, system))
        assert result.symbolic_zero is True
        assert result.max_value == 0.0


def test_random_local_systems_are_closed_analytically():
    rng = np.random.default_rng(29)
    for _ in range(50):
        system = random_local_system(rng, max_vertices=12, max_dim=3)
        result = check_closedness(normalize(system), random_config(rng, system))
        assert result.max_value <= 1e-12


def test_random_local_systems_are_closed_by_finite_differences():
    rng = np.random.default_rng(31)
    for _ in range(15):
        system = random_local_system(rng, max_vertices=6, max_dim=2)
        result = check_closedness(normalize(system), random_config(rng, system), mode=FINITE_DIFFERENCE)
        assert result.max_value <= 1e-6


def test_closedness_arguments_are_validated():
    system = load_fixture("triangle.sys")
    tsys = normalize(system)
    with pytest.raises(ValueError):
        check_closedness(tsys, system.configs["ones"], mode="symbolic")
    with pytest.raises(ValueError):
        check_closedness(tsys, system.configs["ones"], mode=FINITE_DIFFERENCE, fd_step=0.0)


@pytest.mark.parametrize("name", sorted(p.name for p in FIXTURES.glob("*.sys")))
def test_boundary_identity_holds_at_any_configuration(name):
    system = load_fixture(name)
    tsys = normalize(system)
    rng = np.random.default_rng(len(name))
    for _ in range(3):
        config = random_config(rng, system)
        forms = boundary_omega(assemble_omega(tsys, config), tsys, config)
        assert forms.identity_defect <= 1e-12


def test_boundary_vanishes_on_kernel_tangents_of_planar_springs():
    system = load_fixture("laplace2d.sys")
    tsys = normalize(system)
    config = system.configs["rest"]
    forms = boundary_omega(assemble_omega(tsys, config), tsys, config)
    e1 = tangent(system, {v: [1.0, 0.0] for v in system.graph.vertices})
    e2 = tangent(system, {v: [0.0, 1.0] for v in system.graph.vertices})
    layout = system.layout
    for vertex in system.graph.vertices:
        assert forms.evaluate(vertex, layout.flatten(e1), layout.flatten(e2)) == 0.0
    assert omega_on_tangents(assemble_omega(tsys, config), e1, e2).is_zero()


def test_wronskian_of_the_line_is_a_homology_generator():
    system = load_fixture("line10.sys")
    tsys = normalize(system)
    config = system.configs["zero"]
    form = assemble_omega(tsys, config)
    constant = tangent(system, {v: 1.0 for v in system.graph.vertices})
    linear = tangent(system, {v: float(v[1:]) for v in system.graph.vertices})
    chain = omega_on_tangents(form, constant, linear)
    for edge in system.graph.edges:
        assert chain.coefficient(edge) == pytest.approx(-1.0, abs=1e-12)
    assert chain.tail_coefficient("left") == pytest.approx(1.0, abs=1e-12)
    assert chain.tail_coefficient("right") == pytest.approx(-1.0, abs=1e-12)

    graph = system.graph
    basis = cycle_basis(graph)
    coords = cycle_coordinates(graph, basis, chain)
    assert len(basis) == 1
    assert abs(coords[0]) == pytest.approx(1.0, abs=1e-9)


def test_open_kernel_pair_gives_a_constant_flux():
    system = load_fixture("line10.sys")
    tsys = normalize(system)
    config = system.configs["zero"]
    u, v = open_kernel_basis(hessian(system, config), system.coupled_attach_vertices())
    chain = omega_on_tangents(assemble_omega(tsys, config), u, v)
    values = [chain.coefficient(e) for e in system.graph.edges]
    assert max(values) - min(values) <= 1e-12
    assert abs(values[0]) > 1e-3
    assert chain.tail_coefficient("left") == pytest.approx(-values[0], abs=1e-10)
    assert chain.tail_coefficient("right") == pytest.approx(values[0], abs=1e-10)
    assert boundary(chain, system.graph).max_abs() <= 1e-10


def test_tangents_outside_the_kernel_do_not_give_cycles():
    system = load_fixture("path_ends.sys")
    tsys = normalize(system)
    config = FieldConfig.zeros(system.layout)
    chain = omega_on_tangents(
        assemble_omega(tsys, config),
        tangent(system, {"v0": 1, "v1": 0, "v2": 0}),
        tangent(system, {"v0": 0, "v1": 1, "v2": 0}),
    )
    assert chain.core == {("v0", "v1"): -1.0}
    with pytest.raises(NotACycle):
        cycle_coordinates(system.graph, [], chain)


def test_relabelling_vertices_does_not_change_the_form():
    terms = [
        ("t", ["a", "b", "c", "d"], "x(a,0)*x(b,0)*x(c,0) + x(b,0)*x(d,0)^2"),
        ("u", ["c", "d"], "x(c,0)^2*x(d,0)"),
    ]
    edges = [("a", "b"), ("b", "c"), ("c", "d")]
    values = {"a": 1.0, "b": -2.0, "c": 3.0, "d": 2.0}
    u_values = {"a": 1.0, "b": 2.0, "c": 0.0, "d": -1.0}
    v_values = {"a": 0.0, "b": 1.0, "c": 3.0, "d": 1.0}

    chains = []
    for order in (["a", "b", "c", "d"], ["d", "b", "a", "c"]):
        system = scalar_system(order, edges, terms)
        form = assemble_omega(normalize(system), config_of(system, values))
        chains.append(omega_on_tangents(form, tangent(system, u_values), tangent(system, v_values)))
    assert chains[0] == chains[1]


def test_boundary_needs_the_assembling_system():
    system = load_fixture("triangle.sys")
    tsys = normalize(system)
    form = assemble_omega(tsys, system.configs["ones"])
    with pytest.raises(MismatchedSystem):
        boundary_omega(form, normalize(system), system.configs["ones"])
    with pytest.raises(MismatchedSystem):
        boundary_omega(form, tsys, system.configs["zero"])
