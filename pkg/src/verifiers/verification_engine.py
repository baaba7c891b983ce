"""Verification engine turning computations into named checks"""

import logging
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..graph import boundary, cycle_basis, cycle_coordinates
from ..models import (
    Chain1,
    CheckResult,
    Disconnected,
    FieldConfig,
    LagrangianGraphError,
    NoConvergence,
    NotACycle,
    NotInSpan,
    NotNearestNeighbor,
    ScatterProblem,
    SingularJacobian,
    SingularSystem,
    SolveResult,
    TangentField,
    TreeLikeSystem,
)
from ..scattering import nn_wronskian, require_nearest_neighbor, verify_unitarity, wronskian
from ..symform import assemble_omega, boundary_omega, check_closedness, omega_on_tangents
from ..variational import hessian, kernel_basis, open_kernel_basis, solve_newton

logger = logging.getLogger(__name__)

CHECK_GROUPS = ("closed", "boundary", "homology")


def edge_label(edge) -> str:
    return f"{edge[0]}-{edge[1]}"


def chain_to_dict(chain: Chain1) -> Dict[str, Any]:
    return {
        "core": {edge_label(e): v for e, v in chain.core.items()},
        "tails": dict(chain.tails),
    }


class VerificationEngine:
    """Run closedness, boundary, homology, Wronskian and scattering checks"""

    def __init__(
        self,
        verify_tol: float = 1e-8,
        identity_tol: float = 1e-12,
        fd_step: float = 1e-4,
        kernel_tol: float = 1e-9,
        newton_tol: float = 1e-10,
        max_iter: int = 50,
        ridge: Optional[float] = None,
    ):
        self.verify_tol = verify_tol
        self.identity_tol = identity_tol
        self.fd_step = fd_step
        self.kernel_tol = kernel_tol
        self.newton_tol = newton_tol
        self.max_iter = max_iter
        self.ridge = ridge

    # building blocks ------------------------------------------------------

    def check_closed(self, tsys: TreeLikeSystem, config: FieldConfig, mode: str = "analytic") -> Tuple[CheckResult, Dict]:
        result = check_closedness(tsys, config, mode=mode, fd_step=self.fd_step)
        details = {
            "mode": result.mode,
            "per_edge": {edge_label(e): v for e, v in result.per_edge.items()},
        }
        if result.symbolic_zero:
            check = CheckResult("closed", "pass", 0.0, self.verify_tol, "dΩ vanishes symbolically")
        else:
            check = CheckResult.compare("closed", result.max_value, self.verify_tol)
        if result.symbolic_zero is not None:
            details["symbolic_zero"] = result.symbolic_zero
        return check, details

    def check_boundary_identity(self, tsys: TreeLikeSystem, config: FieldConfig) -> CheckResult:
        form = assemble_omega(tsys, config)
        forms = boundary_omega(form, tsys, config)
        return CheckResult.compare("boundary_identity", forms.identity_defect, self.identity_tol)

    def solve(self, tsys: TreeLikeSystem, init: FieldConfig) -> Tuple[CheckResult, Optional[SolveResult]]:
        try:
            result = solve_newton(tsys.system, init, tol=self.newton_tol, max_iter=self.max_iter, ridge=self.ridge)
        except SingularJacobian as exc:
            return CheckResult("newton", "fail", None, self.newton_tol, str(exc)), None
        except NoConvergence as exc:
            return CheckResult("newton", "fail", exc.residual, self.newton_tol, str(exc)), None
        return CheckResult.compare("newton", result.residual, self.newton_tol,
                                   f"{result.iterations} iterations"), result

    def tangent_kernel(self, tsys: TreeLikeSystem, config: FieldConfig) -> List[TangentField]:
        """Kernel of L_ψ; with coupled tails the attach rows stay open"""
        sys = tsys.system
        op = hessian(sys, config)
        if sys.tail_couplings:
            return open_kernel_basis(op, sys.coupled_attach_vertices(), self.kernel_tol)
        return kernel_basis(op, self.kernel_tol)

    def check_boundary_on_solutions(
        self, tsys: TreeLikeSystem, solution: FieldConfig, kernel: Sequence[TangentField]
    ) -> CheckResult:
        if len(kernel) < 2:
            return CheckResult("boundary_on_solutions", "skip", None, self.verify_tol,
                               f"kernel dimension {len(kernel)} < 2")
        form = assemble_omega(tsys, solution)
        forms = boundary_omega(form, tsys, solution)
        layout = tsys.system.layout
        worst = 0.0
        for u, v in combinations(kernel, 2):
            fu, fv = layout.flatten(u), layout.flatten(v)
            for vertex in forms.a_forms:
                worst = max(worst, abs(float(fu @ forms.a_forms[vertex] @ fv)))
        return CheckResult.compare("boundary_on_solutions", worst, self.verify_tol)

    def check_homology(
        self, tsys: TreeLikeSystem, solution: FieldConfig, kernel: Sequence[TangentField]
    ) -> Tuple[CheckResult, Dict]:
        if len(kernel) < 2:
            return CheckResult("homology", "skip", None, self.verify_tol,
                               f"kernel dimension {len(kernel)} < 2"), {}
        graph = tsys.system.graph
        chain = omega_on_tangents(assemble_omega(tsys, solution), kernel[0], kernel[1])
        details = {"chain": chain_to_dict(chain)}
        norm = boundary(chain, graph).max_abs()
        try:
            basis = cycle_basis(graph)
            coords = cycle_coordinates(graph, basis, chain, tol=self.verify_tol)
        except Disconnected as exc:
            return CheckResult("homology", "skip", None, self.verify_tol, str(exc)), details
        except (NotACycle, NotInSpan) as exc:
            return CheckResult("homology", "fail", norm, self.verify_tol, str(exc)), details
        details["basis_dimension"] = len(basis)
        details["coordinates"] = [float(c) for c in coords]
        return CheckResult.compare("homology", norm, self.verify_tol), details

    # command-level pipelines ---------------------------------------------

    def verify(
        self,
        tsys: TreeLikeSystem,
        config: FieldConfig,
        checks: Sequence[str] = CHECK_GROUPS,
        mode: str = "analytic",
    ) -> Tuple[List[CheckResult], Dict[str, Any]]:
        """Run the requested check groups at a configuration

        "boundary" and "homology" first solve the Euler-Lagrange equations
        from the configuration and use kernel tangents at the solution.
        """
        unknown = [c for c in checks if c not in CHECK_GROUPS]
        if unknown:
            raise ValueError(f"Unknown checks: {', '.join(unknown)} (choose from {', '.join(CHECK_GROUPS)})")
        results: List[CheckResult] = []
        details: Dict[str, Any] = {}

        if "closed" in checks:
            check, info = self.check_closed(tsys, config, mode)
            results.append(check)
            details["closed"] = info

        if "boundary" in checks:
            results.append(self.check_boundary_identity(tsys, config))

        if "boundary" in checks or "homology" in checks:
            newton, solved = self.solve(tsys, config)
            results.append(newton)
            kernel = self.tangent_kernel(tsys, solved.config) if solved else []
            if solved:
                details["solution"] = solved.config.to_dict()
                details["kernel_dimension"] = len(kernel)
            if "boundary" in checks:
                if solved:
                    results.append(self.check_boundary_on_solutions(tsys, solved.config, kernel))
                else:
                    results.append(CheckResult("boundary_on_solutions", "skip", None, self.verify_tol,
                                               "no solution"))
            if "homology" in checks:
                if solved:
                    check, info = self.check_homology(tsys, solved.config, kernel)
                    results.append(check)
                    details["homology"] = info
                else:
                    results.append(CheckResult("homology", "skip", None, self.verify_tol, "no solution"))

        for check in results:
            logger.info(f"Check {check.name}: {check.status} (value {check.value}, tol {check.tol})")
        return results, details

    def wronskian_checks(self, tsys: TreeLikeSystem, config: FieldConfig) -> Tuple[List[CheckResult], Dict[str, Any]]:
        """Wronskian of the first two kernel tangents: antisymmetry, cycle and NN identity"""
        kernel = self.tangent_kernel(tsys, config)
        details: Dict[str, Any] = {"kernel_dimension": len(kernel)}
        names = ("wronskian_antisymmetry", "wronskian_cycle", "nn_identity")
        if len(kernel) < 2:
            message = f"kernel dimension {len(kernel)} < 2"
            return [CheckResult(name, "skip", None, None, message) for name in names], details

        u, v = kernel[0], kernel[1]
        forward = wronskian(tsys, config, u, v)
        backward = wronskian(tsys, config, v, u)
        details["chain"] = chain_to_dict(forward)
        results = [
            CheckResult.compare("wronskian_antisymmetry", (forward + backward).max_abs(), self.identity_tol),
            CheckResult.compare("wronskian_cycle", boundary(forward, tsys.system.graph).max_abs(), self.verify_tol),
        ]
        try:
            require_nearest_neighbor(tsys)
        except NotNearestNeighbor as exc:
            results.append(CheckResult("nn_identity", "skip", None, 0.0, str(exc)))
        else:
            gap = max(
                (abs(nn_wronskian(tsys, config, u, v, e) - forward.coefficient(e)) for e in tsys.system.graph.edges),
                default=0.0,
            )
            results.append(CheckResult.compare("nn_identity", gap, 0.0))
        return results, details

    def scatter_checks(self, problem: ScatterProblem, k: float, tol: float) -> Tuple[List[CheckResult], Dict[str, Any]]:
        try:
            report = verify_unitarity(problem, k, tol)
        except SingularSystem as exc:
            return [CheckResult("scatter", "fail", exc.condition, None, str(exc))], {"k": k}
        results = [
            CheckResult.compare("unitarity", report.unitarity_defect, tol),
            CheckResult.compare("flux_balance", report.flux_defect, tol),
            CheckResult.compare("reciprocity", report.reciprocity_defect, tol),
        ]
        return results, {"k": k}


def numeric_failure(exc: LagrangianGraphError) -> CheckResult:
    """Failed check standing in for a numerical error raised outside the engine"""
    return CheckResult(type(exc).__name__, "fail", None, None, str(exc))
