"""Main entry point for the lagrangian-graphs toolkit"""

import sys
import argparse
import json
import logging
import math
from typing import List, Optional

from src.lagrangian_graphs import LagrangianGraphToolkit
from src.models import ExpressionSyntaxError, LagrangianGraphError, RunReport, SystemInputError
from src.verifiers import CHECK_GROUPS

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Parser that raises instead of exiting, so run() can return the code"""

    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _positive(value: str) -> float:
    number = float(value)
    if not number > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return number


def _momentum(value: str) -> float:
    k = float(value)
    if not 0.0 < k < math.pi:
        raise argparse.ArgumentTypeError(f"k must lie strictly inside (0, pi), got {value}")
    return k


def _check_list(value: str) -> List[str]:
    names = [part.strip() for part in value.split(',') if part.strip()]
    unknown = [n for n in names if n not in CHECK_GROUPS]
    if not names or unknown:
        raise argparse.ArgumentTypeError(
            f"checks must be a comma list of {', '.join(CHECK_GROUPS)}, got {value!r}"
        )
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='lagrangian-graphs',
        description='Discrete Lagrangian systems on graphs: normalization, symplectic form and scattering',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Closedness of the chain-valued form
  python main.py verify fixtures/triangle3body.sys --checks closed --mode analytic

  # Newton solve from a named configuration
  python main.py solve fixtures/pendulum5.sys --config start

  # S-matrix of a star with three tails
  python main.py scatter fixtures/star3.sys --k 1.0471975512
        """
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--allow-ends', action='store_true', help='Accept vertices of degree < 2 with a warning')
    common.add_argument('--report-dir', help='Also write JSON, CSV and Excel reports to this directory')
    common.add_argument('-v', '--verbose', action='store_true', help='Debug logging on stderr')
    common.add_argument('-q', '--quiet', action='store_true', help='Only warnings and errors on stderr')

    subparsers = parser.add_subparsers(dest='command', help='Command to execute')

    validate = subparsers.add_parser('validate', parents=[common], help='Parse and validate a system file')
    validate.add_argument('file')

    normalize = subparsers.add_parser('normalize', parents=[common], help='Bring every term into tree-like form')
    normalize.add_argument('file')
    normalize.add_argument('-o', '--output', help='Write the system with tree annotations here')

    solve = subparsers.add_parser('solve', parents=[common], help='Solve the Euler-Lagrange equations by Newton iteration')
    solve.add_argument('file')
    solve.add_argument('--config', help='Initial configuration name')
    solve.add_argument('--tol', type=_positive, default=1e-10, help='Residual tolerance (default: 1e-10)')
    solve.add_argument('--max-iter', type=int, default=50, help='Maximal Newton steps (default: 50)')
    solve.add_argument('--ridge', type=_positive, help='Tikhonov shift for singular Hessians')

    verify = subparsers.add_parser('verify', parents=[common], help='Verify closedness, boundary and homology of the form')
    verify.add_argument('files', nargs='+', metavar='FILE')
    verify.add_argument('--checks', type=_check_list, default=list(CHECK_GROUPS),
                        help='Comma list of closed,boundary,homology (default: all)')
    verify.add_argument('--mode', choices=['analytic', 'fd'], default='analytic', help='Closedness mode')
    verify.add_argument('--fd-step', type=_positive, default=1e-4, help='Finite-difference step (default: 1e-4)')
    verify.add_argument('--tol', type=_positive, default=1e-8, help='Check tolerance (default: 1e-8)')
    verify.add_argument('--config', help='Configuration name')
    verify.add_argument('--ridge', type=_positive, help='Tikhonov shift for singular Hessians')

    wronskian = subparsers.add_parser('wronskian', parents=[common], help='Symplectic Wronskian of kernel tangents')
    wronskian.add_argument('file')
    wronskian.add_argument('--config', required=True, help='Configuration name')

    scatter = subparsers.add_parser('scatter', parents=[common], help='S-matrix and unitarity checks on a graph with tails')
    scatter.add_argument('file')
    scatter.add_argument('--k', type=_momentum, required=True, help='Momentum in (0, pi); energy 2 cos k')
    scatter.add_argument('--tol', type=_positive, default=1e-10, help='Unitarity tolerance (default: 1e-10)')

    return parser


def _toolkit_config(args) -> dict:
    config = {'allow_ends': args.allow_ends}
    if args.command == 'solve':
        config.update(newton_tol=args.tol, max_iter=args.max_iter, ridge=args.ridge)
    elif args.command == 'verify':
        config.update(verify_tol=args.tol, fd_step=args.fd_step, closedness_mode=args.mode, ridge=args.ridge)
    elif args.command == 'scatter':
        config.update(scatter_tol=args.tol)
    return config


def _summarize(report: RunReport) -> None:
    for check in report.checks:
        mark = {'pass': '✓', 'fail': '✗'}.get(check.status, '-')
        value = '' if check.value is None else f" value={check.value:.3e}"
        print(f"{mark} {check.name}: {check.status}{value}", file=sys.stderr)


def _dispatch(toolkit: LagrangianGraphToolkit, args) -> RunReport:
    if args.command == 'validate':
        return toolkit.validate(args.file)
    if args.command == 'normalize':
        return toolkit.normalize(args.file, args.output)
    if args.command == 'solve':
        return toolkit.solve(args.file, args.config)
    if args.command == 'verify':
        return toolkit.verify(args.files[0], args.checks, args.config)
    if args.command == 'wronskian':
        return toolkit.wronskian(args.file, args.config)
    return toolkit.scatter(args.file, args.k)


def _write_reports(toolkit: LagrangianGraphToolkit, report: RunReport, report_dir: str, base: str) -> None:
    for format_type, file_path in toolkit.generate_reports(report, report_dir, base).items():
        print(f"{format_type.upper()}: {file_path}", file=sys.stderr)


def _verify_many(toolkit: LagrangianGraphToolkit, args) -> int:
    """One entry per file; a bad file becomes an error entry instead of aborting the run"""
    results = toolkit.batch_verify(args.files, args.checks, args.config)
    entries = []
    for idx, result in enumerate(results, 1):
        if 'report' in result:
            report = result['report']
            entries.append(toolkit.render(report))
            _summarize(report)
            if args.report_dir:
                _write_reports(toolkit, report, args.report_dir, f"{report.command}_report_{idx}")
        else:
            entries.append(json.dumps(
                {'error': result['error'], 'path': result['path'], 'status': 'error'}, indent=2, sort_keys=True
            ))
            print(f"✗ {result['path']}: {result['error']}", file=sys.stderr)
    print('[\n' + ',\n'.join(entries) + '\n]')

    if any(r.get('input_error') for r in results):
        return EXIT_INPUT_ERROR
    if any(r['status'] != 'success' for r in results):
        return EXIT_CHECK_FAILED
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns 0 when every check passes, 1 on a failed check, 2 on input errors"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT_ERROR

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_INPUT_ERROR

    root = logging.getLogger()
    root.setLevel(logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO)

    toolkit = LagrangianGraphToolkit(_toolkit_config(args))
    if args.command == 'verify' and len(args.files) > 1:
        return _verify_many(toolkit, args)

    try:
        report = _dispatch(toolkit, args)
    except (SystemInputError, ExpressionSyntaxError, OSError) as e:
        print(f"✗ Input error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except LagrangianGraphError as e:
        print(f"✗ Error: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    print(toolkit.render(report))
    _summarize(report)
    if args.report_dir:
        _write_reports(toolkit, report, args.report_dir, f"{report.command}_report")

    return EXIT_CHECK_FAILED if report.failed else EXIT_OK


def main():
    """Main function for the command line"""
    sys.exit(run())


if __name__ == "__main__":
    main()
