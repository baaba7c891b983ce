"""Exception hierarchy for the lagrangian-graphs toolkit"""

from typing import Any, Iterable, Optional, Sequence


class LagrangianGraphError(Exception):
    """Base class for every error raised by the toolkit"""


# Graph core

class InvalidGraph(LagrangianGraphError):
    """Graph data violates a structural invariant"""


class NoPath(LagrangianGraphError):
    """Two vertices lie in different components"""

    def __init__(self, source: str, target: str):
        super().__init__(f"No path between {source!r} and {target!r}")
        self.source = source
        self.target = target


class Disconnected(LagrangianGraphError):
    """An operation needing a connected (sub)graph got a disconnected one"""


class NotACycle(LagrangianGraphError):
    """A chain has a nonzero boundary"""

    def __init__(self, boundary_norm: float, tol: float):
        super().__init__(f"Chain is not a cycle: |boundary| = {boundary_norm:.3e} > {tol:.1e}")
        self.boundary_norm = boundary_norm
        self.tol = tol


class NotInSpan(LagrangianGraphError):
    """A cycle is not spanned by the supplied basis"""

    def __init__(self, residual: float, tol: float):
        super().__init__(f"Chain not in span of basis: residual {residual:.3e} > {tol:.1e}")
        self.residual = residual
        self.tol = tol


# Expressions

class ExpressionSyntaxError(LagrangianGraphError):
    """Potential text does not follow the expression grammar"""

    def __init__(self, text: str, offset: int, expected: Iterable[str] = ()):
        self.text = text
        self.offset = offset
        self.expected = sorted(set(expected))
        hint = f"; expected one of: {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"Syntax error at byte offset {offset} in {text!r}{hint}")


class UnboundVariable(LagrangianGraphError):
    """Evaluation binding misses a variable of the expression"""


class DomainError(LagrangianGraphError):
    """Evaluation left the real domain (log of non-positive, division by zero, overflow)"""


# System input

class SystemInputError(LagrangianGraphError):
    """Base class for errors in a system description; the CLI maps these to exit code 2"""


class ParseError(SystemInputError):
    """Malformed line in a system file"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class UnknownVertex(SystemInputError):
    """Reference to a vertex that was never declared"""

    def __init__(self, name: str, suggestions: Sequence[str] = (), line: Optional[int] = None):
        self.name = name
        self.suggestions = list(suggestions)
        self.line = line
        hint = f" (did you mean {', '.join(self.suggestions)}?)" if self.suggestions else ""
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}unknown vertex {name!r}{hint}")


class FiberMismatch(SystemInputError):
    """Coordinate data disagrees with a vertex fiber"""


class DegreeViolation(SystemInputError):
    """Vertices of total degree below two while ends are not allowed"""

    def __init__(self, vertices: Sequence[str]):
        self.vertices = list(vertices)
        super().__init__(
            f"Vertices with fewer than two incident edges/tails: {', '.join(self.vertices)} "
            f"(use --allow-ends to accept graphs with ends)"
        )


class InvalidTerm(SystemInputError):
    """Interaction term violates its invariants"""


# Normalization and forms

class VertexNotInTerm(LagrangianGraphError):
    """Path requested between vertices outside a normalized term"""


class NotNormalized(LagrangianGraphError):
    """A tree-like system was expected"""


class MismatchedSystem(LagrangianGraphError):
    """A form was assembled from a different system or configuration"""


# Numerics

class SingularJacobian(LagrangianGraphError):
    """Newton step cannot be taken: pivot below the relative threshold"""

    def __init__(self, pivot: float, scale: float, iteration: int):
        self.pivot = pivot
        self.scale = scale
        self.iteration = iteration
        super().__init__(
            f"Singular Hessian at iteration {iteration}: pivot {pivot:.3e} vs scale {scale:.3e} "
            f"(consider --ridge)"
        )


class NoConvergence(LagrangianGraphError):
    """Newton reached max_iter; carries the best iterate"""

    def __init__(self, best: Any, residual: float, iterations: int):
        self.best = best
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"No convergence after {iterations} iterations (best residual {residual:.3e}); "
            f"try a damped start or a better initial configuration"
        )


class NotNearestNeighbor(LagrangianGraphError):
    """A term is neither an edge nor a single vertex"""


class SingularSystem(LagrangianGraphError):
    """Scattering linear system is singular at the requested momentum"""

    def __init__(self, k: float, condition: float):
        self.k = k
        self.condition = condition
        super().__init__(f"Scattering system singular at k = {k!r} (condition number {condition:.3e})")


class SingularTailCoupling(LagrangianGraphError):
    """Tail coupling block is not invertible, the tail-site tangent is undetermined"""
