"""Orchestration of loading, normalization, solving and verification"""

import hashlib
import logging
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .graph import cycle_basis, is_connected, set_diameter
from .lagrangian import locality_bound
from .loaders import SystemBuilder, SystemFileLoader
from .models import (
    CheckResult,
    ExpressionSyntaxError,
    FieldConfig,
    FiberKind,
    LagrangianGraphError,
    LagrangianSystem,
    NoConvergence,
    ParseError,
    ReportConfig,
    RunReport,
    SingularJacobian,
    SystemInputError,
    TreeLikeSystem,
)
from .normalizers import TreeNormalizer, format_annotations
from .reporters import CSVReportGenerator, ExcelReportGenerator, JSONReportGenerator
from .scattering import scatter, scatter_problem
from .variational import solve_newton
from .verifiers import CHECK_GROUPS, VerificationEngine, edge_label, numeric_failure

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def file_digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def display_config(sys: LagrangianSystem, config: FieldConfig) -> Dict[str, List[float]]:
    """Configuration for display; circle angles are reduced mod 2π"""
    shown = {}
    for vertex, values in config.to_dict().items():
        if sys.fibers[vertex].kind is FiberKind.CIRCLE:
            values = [float(np.mod(x, 2 * np.pi)) for x in values]
        shown[vertex] = values
    return shown


class LagrangianGraphToolkit:
    """Main class for running commands on Lagrangian systems on graphs"""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """Initialize the toolkit

        Args:
            config: Configuration dictionary with optional settings:
                - allow_ends: Accept degree-1 vertices with a warning (default: False)
                - newton_tol, max_iter, ridge: Newton settings (1e-10, 50, None)
                - verify_tol, identity_tol: Check tolerances (1e-8, 1e-12)
                - fd_step, closedness_mode: Closedness settings (1e-4, 'analytic')
                - kernel_tol: Relative kernel tolerance (1e-9)
                - scatter_tol: Unitarity tolerance (1e-10)
                - report_config: ReportConfig instance
        """
        self.config = config or {}

        self.loader = SystemFileLoader()
        self.normalizer = TreeNormalizer()
        self.engine = VerificationEngine(
            verify_tol=self.config.get('verify_tol', 1e-8),
            identity_tol=self.config.get('identity_tol', 1e-12),
            fd_step=self.config.get('fd_step', 1e-4),
            kernel_tol=self.config.get('kernel_tol', 1e-9),
            newton_tol=self.config.get('newton_tol', 1e-10),
            max_iter=self.config.get('max_iter', 50),
            ridge=self.config.get('ridge'),
        )

        # Report configuration
        self.report_config = self.config.get('report_config', ReportConfig())

    # loading -----------------------------------------------------------------

    def load(self, path: str) -> Tuple[LagrangianSystem, List[str]]:
        """Read and validate a system file

        Returns:
            The system and the warnings raised while validating it
        """
        builder = SystemBuilder(allow_ends=self.config.get('allow_ends', False))
        system = builder.build(self.loader.load(path))
        logger.info(f"Loaded system {path} with {len(system.terms)} terms")
        return system, list(builder.warnings)

    def pick_config(self, system: LagrangianSystem, name: Optional[str] = None) -> FieldConfig:
        """Named configuration, else the first declared one, else zeros"""
        if name is not None:
            if name not in system.configs:
                known = ', '.join(system.configs) or 'none'
                raise ParseError(f"no config named {name!r} (declared: {known})")
            return system.configs[name]
        if system.configs:
            return next(iter(system.configs.values()))
        return FieldConfig.zeros(system.layout)

    def _start(self, command: str, path: str) -> Tuple[RunReport, float]:
        return RunReport(command=command, input_sha256=file_digest(path)), time.perf_counter()

    @staticmethod
    def _finish(report: RunReport, started: float) -> RunReport:
        report.elapsed_ms = (time.perf_counter() - started) * 1000.0
        return report

    # commands ----------------------------------------------------------------

    def validate(self, path: str) -> RunReport:
        report, started = self._start('validate', path)
        system, warnings = self.load(path)
        graph = system.graph
        report.add(CheckResult('load', 'pass', message=f"{len(system.terms)} terms"))
        report.details = {
            'vertices': len(graph.vertices),
            'edges': len(graph.edges),
            'tails': [t.name for t in graph.tails],
            'terms': [t.name for t in system.terms],
            'dimension': system.dimension,
            'locality_bound': locality_bound(system),
            'warnings': warnings,
        }
        if is_connected(graph):
            report.details['homology_rank'] = len(cycle_basis(graph))
        return self._finish(report, started)

    def normalize(self, path: str, output: Optional[str] = None) -> RunReport:
        """Tree-like form; optionally write the file back with annotations"""
        report, started = self._start('normalize', path)
        system, _ = self.load(path)
        tsys = self.normalizer.normalize(system)
        bound = locality_bound(system)
        normalized_bound = max((set_diameter(system.graph, t.vertices) for t in tsys.terms), default=0)
        report.add(CheckResult.compare('diameter_bound', normalized_bound, 2 * bound,
                                       f"normalized locality {normalized_bound}, original {bound}"))
        report.details = {
            'tree_like': tsys.is_tree_like,
            'preserved_fraction': tsys.preserved_fraction(),
            'terms': [
                {
                    'name': t.term.name,
                    'vertices': list(t.vertices),
                    'tree_edges': [edge_label(e) for e in t.tree_edges],
                    'diameter': t.diameter,
                    'base_diameter': t.base_diameter,
                    'tree_like': t.tree_like,
                }
                for t in tsys.terms
            ],
        }
        if output:
            text = Path(path).read_text(encoding='utf-8').rstrip('\n')
            Path(output).write_text(text + '\n\n' + '\n'.join(format_annotations(tsys)) + '\n', encoding='utf-8')
            logger.info(f"Wrote annotated system to {output}")
            report.details['output'] = str(output)
        return self._finish(report, started)

    def solve(self, path: str, config_name: Optional[str] = None) -> RunReport:
        report, started = self._start('solve', path)
        system, _ = self.load(path)
        init = self.pick_config(system, config_name)
        tol = self.config.get('newton_tol', 1e-10)
        try:
            result = solve_newton(system, init, tol=tol, max_iter=self.config.get('max_iter', 50),
                                  ridge=self.config.get('ridge'))
        except SingularJacobian as exc:
            report.add(CheckResult('newton', 'fail', None, tol, str(exc)))
            return self._finish(report, started)
        except NoConvergence as exc:
            report.add(CheckResult('newton', 'fail', exc.residual, tol, str(exc)))
            report.details = {'best': display_config(system, exc.best)}
            return self._finish(report, started)
        report.add(CheckResult.compare('newton', result.residual, tol, f"{result.iterations} iterations"))
        report.details = {
            'iterations': result.iterations,
            'residual_history': result.residual_history,
            'solution': display_config(system, result.config),
        }
        return self._finish(report, started)

    def verify(self, path: str, checks: Sequence[str] = CHECK_GROUPS, config_name: Optional[str] = None) -> RunReport:
        report, started = self._start('verify', path)
        system, _ = self.load(path)
        config = self.pick_config(system, config_name)
        tsys = self.normalizer.normalize(system)
        try:
            results, details = self.engine.verify(
                tsys, config, checks, mode=self.config.get('closedness_mode', 'analytic')
            )
        except SystemInputError:
            raise
        except LagrangianGraphError as exc:
            logger.error(f"Verification failed: {exc}")
            results, details = [numeric_failure(exc)], {}
        for check in results:
            report.add(check)
        report.details = details
        return self._finish(report, started)

    def wronskian(self, path: str, config_name: Optional[str] = None) -> RunReport:
        report, started = self._start('wronskian', path)
        system, _ = self.load(path)
        config = self.pick_config(system, config_name)
        tsys: TreeLikeSystem = self.normalizer.normalize(system)
        results, details = self.engine.wronskian_checks(tsys, config)
        for check in results:
            report.add(check)
        report.details = details
        return self._finish(report, started)

    def scatter(self, path: str, k: float) -> RunReport:
        report, started = self._start('scatter', path)
        system, _ = self.load(path)
        problem = scatter_problem(system)
        tol = self.config.get('scatter_tol', 1e-10)
        results, details = self.engine.scatter_checks(problem, k, tol)
        for check in results:
            report.add(check)
        if not any(c.name == 'scatter' for c in results):
            s = scatter(problem, k)
            details.update({
                'tails': list(s.tails),
                'S': [[[float(z.real), float(z.imag)] for z in row] for row in s.matrix],
                'condition_number': s.condition_number,
                'ill_conditioned': s.ill_conditioned,
            })
        report.details = details
        return self._finish(report, started)

    def batch_verify(
        self,
        paths: Sequence[str],
        checks: Sequence[str] = CHECK_GROUPS,
        config_name: Optional[str] = None,
    ) -> List[Dict[str, Any]]:
        """Verify several files; failures are captured per file

        Returns:
            List of results, each with 'status', 'path' and either 'report'
            or 'error' plus 'input_error' (True for unreadable or invalid input)
        """
        results = []

        for idx, path in enumerate(paths, 1):
            logger.info(f"Processing file {idx}/{len(paths)}: {path}")

            try:
                report = self.verify(path, checks, config_name)
                results.append({
                    'status': 'failed' if report.failed else 'success',
                    'path': str(path),
                    'report': report,
                })
            except (LagrangianGraphError, OSError) as e:
                logger.error(f"Failed to process {path}: {e}")
                results.append({
                    'status': 'error',
                    'path': str(path),
                    'error': str(e),
                    'input_error': isinstance(e, (SystemInputError, ExpressionSyntaxError, OSError)),
                })

        successes = len([r for r in results if r['status'] == 'success'])
        logger.info(f"Batch verification complete: {successes}/{len(paths)} passed")
        return results

    # reports -----------------------------------------------------------------

    def generate_reports(self, report: RunReport, output_dir: str, base_filename: str = "run_report") -> Dict[str, str]:
        """Write a run report as JSON, CSV and Excel

        Args:
            report: RunReport to write
            output_dir: Directory where reports should be saved
            base_filename: Base name for report files

        Returns:
            Dictionary mapping format to file path
        """
        output_path = Path(output_dir)
        output_path.mkdir(parents=True, exist_ok=True)

        generated_files = {}
        generators = [
            ('json', JSONReportGenerator, 'json'),
            ('csv', CSVReportGenerator, 'csv'),
            ('excel', ExcelReportGenerator, 'xlsx'),
        ]
        for label, generator_cls, suffix in generators:
            file_path = output_path / f"{base_filename}.{suffix}"
            try:
                logger.info(f"Generating {label.upper()} report: {file_path}")
                generator_cls(self.report_config).generate(report, str(file_path))
                generated_files[label] = str(file_path)
            except Exception as e:
                logger.error(f"Failed to generate {label.upper()} report: {e}")

        return generated_files

    def render(self, report: RunReport) -> str:
        return JSONReportGenerator(self.report_config).render(report)

